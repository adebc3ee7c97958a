//! Exhaustive ML decoding of Hamming(7,4) against the basic LP.

use lpfc::channel::LlrVector;
use lpfc::code::TannerGraph;
use lpfc::decoder::{decode_basic, DecodeTolerances};
use lpfc::harness::brute_force_ml;

fn main() -> lpfc::Result<()> {
    let g = TannerGraph::hamming74();
    let llr = LlrVector::new(vec![1.0, 1.0, 1.0, -3.0, 1.0, 1.0, 1.0])?;
    let ml = brute_force_ml(&g, &llr)?;
    println!("ML word {:?}, objective {}, tie {}", ml.bits, ml.objective, ml.tie);
    let lp = decode_basic(&g, &llr, &DecodeTolerances::default())?;
    println!("LP objective {}, assignment {:?}", lp.beliefs.objective_value, lp.assignment);
    Ok(())
}
