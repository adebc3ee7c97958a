use super::*;
use proptest::prelude::*;

fn tols() -> Tolerances {
    Tolerances::default()
}

fn lp_with(costs: &[f64], rows: Vec<SparseRow>) -> LinearProgram {
    let mut lp = LinearProgram::new();
    for &c in costs {
        lp.add_var(VarSpec::unit(c)).unwrap();
    }
    for r in rows {
        lp.add_row(r).unwrap();
    }
    lp
}

/// Single parity check on three bits: b_i(0), b_i(1) per bit, then the four
/// even-weight configurations 000, 011, 101, 110.
fn single_check_lp(llr: [f64; 3]) -> LinearProgram {
    let configs = [0b000u32, 0b110, 0b101, 0b011];
    let mut costs = Vec::new();
    for l in llr {
        costs.extend([0.0, l]);
    }
    costs.extend([0.0; 4]);
    let mut rows = Vec::new();
    for i in 0..3 {
        rows.push(SparseRow::new(vec![(2 * i, 1.0), (2 * i + 1, 1.0)], 1.0));
        for v in 0..2u32 {
            let mut coeffs = vec![(2 * i + v as usize, 1.0)];
            for (k, &cfg) in configs.iter().enumerate() {
                if (cfg >> i) & 1 == v {
                    coeffs.push((6 + k, -1.0));
                }
            }
            rows.push(SparseRow::new(coeffs, 0.0));
        }
    }
    lp_with(&costs, rows)
}

/// Minimum of `c·x` over the vertices of `{Ax = b, 0 <= x <= 1}`,
/// enumerated by choosing a basis and the bound of every nonbasic variable.
fn brute_force_vertex_min(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    let m = lp.num_rows();
    let mut dense = vec![vec![0.0; n]; m];
    for (i, r) in lp.rows().iter().enumerate() {
        for &(j, a) in &r.coeffs {
            dense[i][j] = a;
        }
    }
    let b: Vec<f64> = lp.rows().iter().map(|r| r.rhs).collect();
    let mut best: Option<f64> = None;
    for basis_mask in 0u32..(1 << n) {
        if basis_mask.count_ones() as usize != m {
            continue;
        }
        let basic: Vec<usize> = (0..n).filter(|&j| (basis_mask >> j) & 1 == 1).collect();
        let nonbasic: Vec<usize> = (0..n).filter(|&j| (basis_mask >> j) & 1 == 0).collect();
        for bounds in 0u32..(1 << nonbasic.len()) {
            let mut x = vec![0.0; n];
            for (k, &j) in nonbasic.iter().enumerate() {
                x[j] = ((bounds >> k) & 1) as f64;
            }
            // solve B x_B = b - N x_N by Gaussian elimination
            let mut aug: Vec<Vec<f64>> = (0..m)
                .map(|i| {
                    let mut row: Vec<f64> = basic.iter().map(|&j| dense[i][j]).collect();
                    let rhs = b[i] - nonbasic.iter().map(|&j| dense[i][j] * x[j]).sum::<f64>();
                    row.push(rhs);
                    row
                })
                .collect();
            let mut singular = false;
            for c in 0..m {
                let p = (c..m).max_by(|&a, &b| aug[a][c].abs().total_cmp(&aug[b][c].abs())).unwrap();
                if aug[p][c].abs() < 1e-9 {
                    singular = true;
                    break;
                }
                aug.swap(c, p);
                let piv = aug[c][c];
                for k in c..=m {
                    aug[c][k] /= piv;
                }
                for r in 0..m {
                    if r != c {
                        let f = aug[r][c];
                        for k in c..=m {
                            aug[r][k] -= f * aug[c][k];
                        }
                    }
                }
            }
            if singular {
                continue;
            }
            for (k, &j) in basic.iter().enumerate() {
                x[j] = aug[k][m];
            }
            if x.iter().all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v)) {
                let obj = lp.objective_value(&x);
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
    }
    best
}

#[test]
fn unconstrained_minimum_at_lower_bound() {
    let lp = lp_with(&[1.0], vec![]);
    let sol = solve(&lp, &tols());
    assert_eq!(sol.status, LpStatus::Optimal);
    assert_eq!(sol.values, vec![0.0]);
    assert_eq!(sol.objective_value, 0.0);
}

#[test]
fn simplex_vertex() {
    let lp = lp_with(
        &[-1.0, -1.0, 0.0],
        vec![SparseRow::new(vec![(0, 1.0), (1, 1.0), (2, 1.0)], 1.0)],
    );
    let sol = solve(&lp, &tols());
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective_value + 1.0).abs() < 1e-12);
}

#[test]
fn single_check_decoding_lp() {
    // local codewords 000, 011, 101, 110 with l = (-1,-1,-1): best is -2
    let lp = single_check_lp([-1.0, -1.0, -1.0]);
    let sol = solve(&lp, &tols());
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective_value + 2.0).abs() < 1e-9);
    let ones: Vec<f64> = (0..3).map(|i| sol.values[2 * i + 1]).collect();
    assert_eq!(ones.iter().filter(|&&v| (v - 1.0).abs() < 1e-9).count(), 2);
    assert_eq!(ones.iter().filter(|&&v| v.abs() < 1e-9).count(), 1);
}

#[test]
fn infeasible_detected() {
    let lp = lp_with(
        &[0.0, 0.0],
        vec![SparseRow::new(vec![(0, 1.0), (1, 1.0)], 3.0)],
    );
    assert_eq!(solve(&lp, &tols()).status, LpStatus::Infeasible);
    assert_eq!(RevisedSimplex::primal().solve(&lp, &tols()).status, LpStatus::Infeasible);
}

#[test]
fn warm_start_after_cut() {
    let mut lp = single_check_lp([-1.0, -1.0, -1.0]);
    let base = solve(&lp, &tols());
    lp.extend(&[], vec![SparseRow::new(vec![(9, 1.0)], 1.0)]).unwrap();
    let warm = solve_warm(&lp, &tols(), base.basis.as_ref().unwrap());
    assert!(warm.is_optimal());
    assert!((warm.objective_value + 2.0).abs() < 1e-9);
    assert!((warm.values[9] - 1.0).abs() < 1e-9);
}

#[test]
fn stale_basis_falls_back_to_cold_start() {
    let lp = single_check_lp([0.4, -1.0, 0.3]);
    let bogus = Basis {
        num_vars: 10,
        basic: vec![0; 9],
        at_upper: vec![false; 10],
        inverse: None,
    };
    let warm = solve_warm(&lp, &tols(), &bogus);
    let cold = solve(&lp, &tols());
    assert_eq!(warm.objective_value, cold.objective_value);
}

#[test]
fn negative_rhs_and_upper_bounds() {
    // x0 - x1 = -0.5, min x0 -> x0 = 0, x1 = 0.5
    let lp = lp_with(&[1.0, 0.0], vec![SparseRow::new(vec![(0, 1.0), (1, -1.0)], -0.5)]);
    let sol = solve(&lp, &tols());
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.values[1] - 0.5).abs() < 1e-12);
    assert!(sol.values[0].abs() < 1e-12);
}

#[test]
fn duplicate_rows_are_skipped() {
    let mut lp = lp_with(&[0.0, 0.0], vec![]);
    assert!(lp.add_row(SparseRow::new(vec![(0, 1.0), (1, -1.0)], 0.0)).unwrap());
    assert!(!lp.add_row(SparseRow::new(vec![(1, 1.0), (0, -1.0)], 0.0)).unwrap());
    assert!(!lp.add_row(SparseRow::new(vec![(1, -1.0), (0, 1.0)], 0.0)).unwrap());
    assert_eq!(lp.num_rows(), 1);
    assert_eq!(lp.nonzeros(), 2);
}

#[test]
fn extend_identity_and_growth() {
    let mut lp = single_check_lp([0.5, -1.0, 0.3]);
    let before = lp.stats();
    let s = lp.extend(&[], vec![]).unwrap();
    assert_eq!(s.vars_added + s.rows_added, 0);
    assert_eq!(lp.stats(), before);

    let s = lp
        .extend(&[VarSpec::unit(0.0)], vec![SparseRow::new(vec![(0, 1.0), (10, 1.0)], 1.0)])
        .unwrap();
    assert_eq!(s.first_new_var, 10);
    let after = lp.stats();
    assert!(after.rows >= before.rows && after.cols >= before.cols && after.nonzeros >= before.nonzeros);
}

#[test]
fn extend_rejects_dangling_reference() {
    let mut lp = single_check_lp([1.0, 1.0, 1.0]);
    let before = lp.stats();
    let err = lp.extend(&[VarSpec::unit(0.0)], vec![SparseRow::new(vec![(11, 1.0)], 0.0)]);
    assert!(err.is_err());
    assert_eq!(lp.stats(), before);
}

#[test]
fn tightening_raises_objective() {
    let mut lp = single_check_lp([-1.0, -1.0, -1.0]);
    let base = solve(&lp, &tols()).objective_value;
    // force the configuration 011 (index 6 + 3): x0 = 1, x1 = 1, x2 = 0
    lp.extend(&[], vec![SparseRow::new(vec![(9, 1.0)], 1.0)]).unwrap();
    let tight = solve(&lp, &tols()).objective_value;
    assert!(tight >= base - 1e-7);
    lp.extend(&[], vec![SparseRow::new(vec![(6, 1.0)], 1.0)]).unwrap();
    assert_eq!(solve(&lp, &tols()).status, LpStatus::Infeasible);
}

#[test]
fn dump_format() {
    let lp = lp_with(&[1.0, 0.0], vec![SparseRow::new(vec![(0, 1.0), (1, 1.0)], 1.0)]);
    let text = lp.dump();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "min +1*x0");
    assert_eq!(lines[1], "row +1*x0 +1*x1 = 1");
    assert_eq!(lines[2], "bound 0 <= x0 <= 1");
    assert_eq!(lines.len(), 4);
}

fn random_lp(n: usize, m: usize, seed: u64) -> LinearProgram {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    let costs: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut rows = Vec::new();
    for _ in 0..m {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if rng.random_bool(0.6) {
                let a = rng.random_range(-3i32..=3) as f64;
                if a != 0.0 {
                    coeffs.push((j, a));
                }
            }
        }
        let rhs = coeffs.iter().map(|&(j, a)| a * x0[j]).sum();
        rows.push(SparseRow::new(coeffs, rhs));
    }
    lp_with(&costs, rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_vertex_enumeration(seed in any::<u64>(), n in 2usize..8, m in 0usize..4) {
        let lp = random_lp(n, m.min(n - 1), seed);
        let sol = solve(&lp, &tols());
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(lp.max_residual(&sol.values) <= 1e-7);
        prop_assert!(lp.max_bound_violation(&sol.values) <= 1e-9);
        if let Some(best) = brute_force_vertex_min(&lp) {
            prop_assert!((sol.objective_value - best).abs() <= 1e-7,
                "simplex {} vs enumeration {}", sol.objective_value, best);
        }
    }

    #[test]
    fn extension_never_lowers_objective(seed in any::<u64>(), n in 3usize..9) {
        let mut lp = random_lp(n, 2.min(n - 1), seed);
        let base = solve(&lp, &tols());
        prop_assert!(base.is_optimal());
        // a valid equality through the base point's neighbor: fix one variable
        // to its value in some feasible point keeps feasibility
        let x = base.values.clone();
        let j = (seed as usize) % n;
        lp.extend(&[], vec![SparseRow::new(vec![(j, 1.0)], 1.0 - x[j])]).unwrap();
        let tight = solve(&lp, &tols());
        if tight.is_optimal() {
            prop_assert!(tight.objective_value >= base.objective_value - 1e-7);
        }
    }

    #[test]
    fn primal_and_dual_agree(seed in any::<u64>(), n in 2usize..12, m in 0usize..7) {
        let lp = random_lp(n, m.min(n - 1), seed);
        let dual = solve(&lp, &tols());
        let primal = RevisedSimplex::primal().solve(&lp, &tols());
        prop_assert_eq!(dual.status, LpStatus::Optimal);
        prop_assert_eq!(primal.status, LpStatus::Optimal);
        prop_assert!((dual.objective_value - primal.objective_value).abs() <= 1e-7);
    }

    #[test]
    fn warm_start_matches_cold(seed in any::<u64>(), n in 3usize..10) {
        let mut lp = random_lp(n, 2.min(n - 1), seed);
        let base = solve(&lp, &tols());
        prop_assert!(base.is_optimal());
        let basis = base.basis.clone().unwrap();
        // append a column and a row that stays feasible at a known point
        let j = (seed as usize) % n;
        lp.extend(
            &[VarSpec::unit(-0.5)],
            vec![SparseRow::new(vec![(j, 1.0), (n, 1.0)], 1.0)],
        )
        .unwrap();
        let cold = solve(&lp, &tols());
        let warm = solve_warm(&lp, &tols(), &basis);
        prop_assert_eq!(cold.status, warm.status);
        if cold.is_optimal() {
            prop_assert!((cold.objective_value - warm.objective_value).abs() <= 1e-7);
            prop_assert!(lp.max_residual(&warm.values) <= 1e-7);
        }
    }

    #[test]
    fn deterministic(seed in any::<u64>()) {
        let lp = random_lp(7, 3, seed);
        let a = solve(&lp, &tols());
        let b = solve(&lp, &tols());
        prop_assert_eq!(a, b);
    }
}
