//! LP-FC on noise draws where the basic LP is fractional, with the
//! per-solve trace.

use lpfc::channel::sample_llr;
use lpfc::code::sample_regular;
use lpfc::decoder::Assignment;
use lpfc::lpfc::{compare_paired, LpfcConfig};

fn main() -> lpfc::Result<()> {
    let cfg = LpfcConfig::default();
    let mut shown = 0;
    for seed in 0..100u64 {
        let g = sample_regular(60, 3, 4, seed)?;
        let llr = sample_llr(g.n(), 1.1, 1000 + seed)?;
        let p = compare_paired(&g, &llr, &cfg)?;
        if matches!(p.basic, Assignment::Integral(_)) {
            continue;
        }
        println!("seed {seed}: basic LP fractional, LP-FC {} after {} LPs (all-zero: {})", p.lpfc.verdict.name(), p.lpfc.iterations, p.lpfc.is_all_zero());
        for (i, r) in p.lpfc.per_iteration.iter().enumerate() {
            let cycle = r.cycle.map(|c| format!("{:?} cycle over {} vars", c.kind, c.length)).unwrap_or_default();
            println!("  LP {:>2}: objective {:+.6}  nnz {:>5}  {cycle}", i + 1, r.objective, r.stats.nonzeros);
        }
        shown += 1;
        if shown == 3 {
            break;
        }
    }
    Ok(())
}
