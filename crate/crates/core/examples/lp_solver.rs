//! The LP engine on its own: a small box-bounded program, solved by the
//! dual and primal simplex, then tightened by a cut and re-solved warm.

use lpfc::lp::{solve, solve_warm, LinearProgram, LpSolver, RevisedSimplex, SparseRow, Tolerances, VarSpec};

fn main() -> lpfc::Result<()> {
    // min -x0 - 2x1 - 3x2  s.t.  x0 + x1 + x2 + s = 2,  0 <= x, s <= 1
    let mut lp = LinearProgram::new();
    for c in [-1.0, -2.0, -3.0, 0.0] {
        lp.add_var(VarSpec::unit(c))?;
    }
    lp.add_row(SparseRow::new(vec![(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)], 2.0))?;
    let tols = Tolerances::default();

    let dual = solve(&lp, &tols);
    let primal = RevisedSimplex::primal().solve(&lp, &tols);
    println!("dual   {:?} obj {:.6} x {:?} ({} iterations)", dual.status, dual.objective_value, dual.values, dual.iterations);
    println!("primal {:?} obj {:.6} x {:?} ({} iterations)", primal.status, primal.objective_value, primal.values, primal.iterations);

    // cut x1 + x2 + t = 1 with a new slack t
    let t = lp.add_var(VarSpec::unit(0.0))?;
    lp.add_row(SparseRow::new(vec![(1, 1.0), (2, 1.0), (t, 1.0)], 1.0))?;
    let warm = solve_warm(&lp, &tols, dual.basis.as_ref().expect("optimal basis"));
    let cold = solve(&lp, &tols);
    println!("after cut: warm obj {:.6} in {} iterations, cold obj {:.6} in {}", warm.objective_value, warm.iterations, cold.objective_value, cold.iterations);
    println!("residual {:.1e}", lp.max_residual(&warm.values));
    Ok(())
}
