//! Fan triangulation of an 8-cycle into 6 triangles and the rows it adds
//! to a decoding LP.

use lpfc::code::TannerGraph;
use lpfc::channel::LlrVector;
use lpfc::constraints::{emit_constraints, triangulate};
use lpfc::decoder::build_basic_lp;

fn main() -> lpfc::Result<()> {
    let plan = triangulate(&[1, 2, 3, 4, 5, 6, 7, 8], &[0; 8], Some(1))?;
    for t in &plan.triangles {
        println!("triangle {t:?}");
    }
    for (s, [a, b]) in plan.chords() {
        println!("chord ({a}, {b}) shared by triangles {s} and {}", s + 1);
    }

    // a ring of eight pairwise checks on nine bits, so every cycle edge has a clique
    let checks: Vec<Vec<usize>> = (1..=8).map(|i| vec![i, i % 8 + 1, 0]).collect();
    let g = TannerGraph::from_checks(9, checks)?;
    let mut program = build_basic_lp(&g, &LlrVector::new(vec![1.0; 9])?)?;
    let sources: Vec<usize> = (0..8).collect();
    let plan = triangulate(&[1, 2, 3, 4, 5, 6, 7, 8], &sources, Some(1))?;
    let before = program.lp.stats();
    let result = program.apply(emit_constraints(&plan, &program)?)?;
    let after = program.lp.stats();
    println!(
        "LP {}x{} -> {}x{}: {} columns and {} rows added, {} duplicates skipped",
        before.rows, before.cols, after.rows, after.cols, result.new_variable_count, result.new_row_count, result.rows_skipped
    );
    Ok(())
}
