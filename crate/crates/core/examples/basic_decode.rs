//! Basic LP decoding on a random (3,4)-regular code: the relaxation is
//! integral at low noise and the output then certifies ML.

use lpfc::channel::sample_llr;
use lpfc::code::sample_regular;
use lpfc::decoder::{decode_basic, Assignment, DecodeTolerances};
use lpfc::harness::brute_force_ml;

fn main() -> lpfc::Result<()> {
    let g = sample_regular(20, 3, 4, 11)?;
    let tols = DecodeTolerances::default();
    for (sigma, seed) in [(0.6, 1), (1.2, 4), (1.2, 5), (1.4, 9)] {
        let llr = sample_llr(g.n(), sigma, seed)?;
        let d = decode_basic(&g, &llr, &tols)?;
        let ml = brute_force_ml(&g, &llr)?;
        let s = d.stats;
        print!("sigma {sigma}: LP {}x{} nnz {}, objective {:+.4}, ML {:+.4}: ", s.rows, s.cols, s.nonzeros, d.beliefs.objective_value, ml.objective);
        match &d.assignment {
            Assignment::Integral(bits) => println!("integral, equals ML word: {}", *bits == ml.bits),
            Assignment::Fractional(at) => println!("fractional at {at:?}"),
        }
    }
    Ok(())
}
