//! Exhaustive maximum-likelihood decoding for small code dimensions.

use crate::channel::LlrVector;
use crate::code::TannerGraph;
use crate::error::{Error, Result};

/// Largest code dimension [`brute_force_ml`] will enumerate.
pub const MAX_ML_DIMENSION: usize = 28;

#[derive(Clone, Debug, PartialEq)]
pub struct MlDecision {
    pub bits: Vec<u8>,
    /// `Σ l_i x_i` of `bits`.
    pub objective: f64,
    /// Another codeword reaches the same objective (within 1e-9).
    pub tie: bool,
}

/// `Σ l_i x_i` of a word.
pub fn linear_cost(llr: &[f64], bits: &[u8]) -> f64 {
    llr.iter().zip(bits).filter(|(_, &b)| b == 1).map(|(l, _)| l).sum()
}

/// Minimizes `Σ l_i x_i` over all codewords by walking the span of a
/// nullspace basis in Gray-code order. Ties go to the lexicographically
/// smallest word.
pub fn brute_force_ml(graph: &TannerGraph, llr: &LlrVector) -> Result<MlDecision> {
    let n = graph.n();
    if llr.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: llr.len() });
    }
    let basis = graph.parity_check_matrix().nullspace_basis();
    let k = basis.len();
    if k > MAX_ML_DIMENSION {
        return Err(Error::DimensionTooLarge(k));
    }
    let supports: Vec<Vec<usize>> = basis
        .iter()
        .map(|g| (0..n).filter(|&i| g[i] == 1).collect())
        .collect();

    let tie_tol = 1e-9 * (1.0 + llr.iter().map(|l| l.abs()).sum::<f64>());
    let mut word = vec![0u8; n];
    let mut cost = 0.0;
    let mut best = word.clone();
    let mut best_cost = 0.0;
    let mut tie = false;
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        for &i in &supports[flip] {
            cost += if word[i] == 0 { llr[i] } else { -llr[i] };
            word[i] ^= 1;
        }
        if cost < best_cost - tie_tol {
            best_cost = cost;
            best.copy_from_slice(&word);
            tie = false;
        } else if cost <= best_cost + tie_tol {
            // resolve near-ties on exact sums
            let exact = linear_cost(llr, &word);
            let incumbent = linear_cost(llr, &best);
            if (exact - incumbent).abs() <= tie_tol {
                tie = true;
                if word < best {
                    best.copy_from_slice(&word);
                }
            } else if exact < incumbent {
                best.copy_from_slice(&word);
                tie = false;
            }
            best_cost = linear_cost(llr, &best);
        }
    }
    Ok(MlDecision {
        objective: linear_cost(llr, &best),
        bits: best,
        tie,
    })
}
