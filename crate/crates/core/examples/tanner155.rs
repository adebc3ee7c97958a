//! Builds the (155, 64) Tanner code, checks its structure and that the
//! bundled alist file describes the same matrix.

use lpfc::code::{build_tanner155, load_alist, write_alist};

fn main() -> lpfc::Result<()> {
    let g = build_tanner155();
    let h = g.parity_check_matrix();
    let rank = h.rank();
    println!("n = {}, m = {}, (3,5)-regular: {}", g.n(), g.m(), g.is_regular(3, 5));
    println!("rank {rank}, dimension {}, rate {:.4}", g.n() - rank, (g.n() - rank) as f64 / g.n() as f64);

    let basis = h.nullspace_basis();
    let min_weight = basis.iter().map(|w| w.iter().filter(|&&b| b == 1).count()).min().unwrap_or(0);
    println!("{} basis codewords, lightest has weight {min_weight}", basis.len());

    let bundled = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/tanner155.alist"))?;
    let parsed = load_alist(&bundled)?;
    println!("bundled alist matches: {}", parsed == g && write_alist(&g) == bundled);
    Ok(())
}
