//! Finds a fractional basic-LP optimum, builds the implication graph of its
//! pairwise supports and extracts the shortest frustrated cycle.

use lpfc::channel::sample_llr;
use lpfc::code::sample_regular;
use lpfc::decoder::{decode_basic, Assignment, DecodeTolerances};
use lpfc::frustration::{build_implication_graph, find_frustrated_cycle, format_literal, project_to_variables};

fn main() -> lpfc::Result<()> {
    let tols = DecodeTolerances::default();
    for seed in 0..200u64 {
        let g = sample_regular(60, 3, 4, seed)?;
        let llr = sample_llr(g.n(), 1.1, 1000 + seed)?;
        let d = decode_basic(&g, &llr, &tols)?;
        let Assignment::Fractional(at) = &d.assignment else { continue };
        let ig = build_implication_graph(&d.beliefs, 1e-6);
        let isolated = (0..g.n()).filter(|&i| ig.is_isolated(i)).count();
        println!("seed {seed}: {} fractional bits, {} implications, {isolated} isolated variables", at.len(), ig.edges().len());
        let Some(fc) = find_frustrated_cycle(&ig) else {
            println!("  no frustrated cycle");
            continue;
        };
        let path: Vec<String> = fc.literal_path.iter().map(|&l| format_literal(l)).collect();
        println!("  {:?} witness through {} ({} hops): {}", fc.kind, fc.pivot, fc.score(), path.join(" -> "));
        if let Some(v) = fc.forced_value() {
            println!("  forces x{} = {v}, but its belief is {:?}", fc.pivot, d.beliefs.var_beliefs[fc.pivot]);
        }
        let fc = project_to_variables(fc)?;
        println!("  variable cycle {:?} from cliques {:?}", fc.variable_cycle, fc.edge_sources);
        return Ok(());
    }
    println!("no fractional instance found");
    Ok(())
}
