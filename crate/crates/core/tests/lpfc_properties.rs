mod common;

use lpfc::channel::sample_llr;
use lpfc::code::sample_regular;
use lpfc::decoder::build_basic_lp;
use lpfc::lpfc::{LpfcConfig, Verdict};
use lpfc::harness::brute_force_ml;

use common::{lift_word, previous_point_cut_off, traced_decode, violation, witness_is_sound, SUPPORT_EPS};

fn fractional_traces(count: usize) -> Vec<(lpfc::code::TannerGraph, common::Trace)> {
    let mut out = Vec::new();
    for seed in 0..400u64 {
        let g = sample_regular(60, 3, 4, seed).unwrap();
        let llr = sample_llr(60, 1.1, 7000 + seed).unwrap();
        let trace = traced_decode(&g, &llr, LpfcConfig::default());
        if trace.steps.len() > 1 {
            out.push((g, trace));
            if out.len() == count {
                break;
            }
        }
    }
    out
}

#[test]
fn augmentations_are_sound_tightening_and_valid() {
    let traces = fractional_traces(12);
    assert_eq!(traces.len(), 12);
    for (g, trace) in &traces {
        for w in trace.steps.windows(2) {
            assert!(w[1].objective >= w[0].objective - 1e-7);
        }
        for step in &trace.steps {
            step.beliefs.check_invariants(1e-7).unwrap();
            if let Some(cut) = &step.cut {
                witness_is_sound(&step.beliefs, &cut.cycle, SUPPORT_EPS).unwrap();
                assert!(previous_point_cut_off(&trace.program.lp, cut.first_new_var, cut.first_new_row, &cut.previous));
            }
        }
        // every codeword lifts to a feasible point of the final program
        let lp = &trace.program.lp;
        let zero = lift_word(&trace.program.layout, lp.num_vars(), &[0; 60]).unwrap();
        assert!(violation(lp, &zero) <= 1e-9);
        for word in g.parity_check_matrix().nullspace_basis().iter().take(5) {
            let x = lift_word(&trace.program.layout, lp.num_vars(), word).unwrap();
            assert!(violation(lp, &x) <= 1e-9);
        }
        assert!(matches!(trace.verdict, Verdict::Success(_) | Verdict::NoCycleFound | Verdict::IterationCap | Verdict::FractionalStall));
    }
}

#[test]
fn success_is_ml_on_small_codes() {
    let cfg = LpfcConfig::default();
    let mut rescued = 0;
    for seed in 0..300u64 {
        let g = sample_regular(20, 3, 4, seed % 7).unwrap();
        let llr = sample_llr(20, 1.3, seed).unwrap();
        let trace = traced_decode(&g, &llr, cfg);
        if let Verdict::Success(bits) = &trace.verdict {
            let ml = brute_force_ml(&g, &llr).unwrap();
            let last = trace.steps.last().unwrap().objective;
            assert!((last - ml.objective).abs() <= 1e-7, "seed {seed}");
            if !ml.tie {
                assert_eq!(bits, &ml.bits);
            }
            rescued += usize::from(trace.steps.len() > 1);
        }
    }
    assert!(rescued > 0);
}

#[test]
fn non_codewords_do_not_lift() {
    let g = sample_regular(20, 3, 4, 1).unwrap();
    let p = build_basic_lp(&g, &sample_llr(20, 1.0, 0).unwrap()).unwrap();
    let mut w = vec![0u8; 20];
    w[0] = 1;
    assert!(lift_word(&p.layout, p.lp.num_vars(), &w).is_none());
}
