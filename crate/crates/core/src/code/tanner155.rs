use super::TannerGraph;

const P: usize = 31;
/// Element of order 5 in the multiplicative group mod 31.
const A: usize = 2;
/// Element of order 3 in the multiplicative group mod 31.
const B: usize = 5;

fn pow_mod(base: usize, exp: usize) -> usize {
    (0..exp).fold(1, |acc, _| acc * base % P)
}

/// The (155, 64) quasi-cyclic Tanner code: a 3×5 array of 31×31 circulant
/// permutation matrices where block `(j, k)` is the identity cyclically
/// shifted by `5^j · 2^k mod 31`.
///
/// The construction is checked on every call (regularity, dimensions,
/// GF(2) rank 91); a failure here is a programming error.
pub fn build_tanner155() -> TannerGraph {
    let mut checks = Vec::with_capacity(3 * P);
    for j in 0..3 {
        for r in 0..P {
            let members = (0..5)
                .map(|k| {
                    let shift = pow_mod(B, j) * pow_mod(A, k) % P;
                    k * P + (r + shift) % P
                })
                .collect();
            checks.push(members);
        }
    }
    let graph = TannerGraph::from_checks(5 * P, checks).expect("circulant blocks are simple");
    assert_eq!((graph.n(), graph.m()), (155, 93));
    assert!(graph.is_regular(3, 5), "tanner code must be (3,5)-regular");
    debug_assert_eq!(graph.parity_check_matrix().rank(), 91);
    graph
}
