//! Tanner-graph representation of LDPC codes and the constructions used by
//! the decoders: alist ingestion, random regular ensembles and the
//! 155-bit quasi-cyclic Tanner code.

mod alist;
mod ensemble;
pub mod gf2;
mod tanner155;

pub use alist::{load_alist, write_alist};
pub use ensemble::{sample_regular, MAX_RESAMPLE_ATTEMPTS};
pub use gf2::Gf2Matrix;
pub use tanner155::build_tanner155;

use crate::error::{Error, Result};

/// Bipartite variable/check structure of a binary linear code.
///
/// `check_members[c]` lists the variables of check `c` in increasing order and
/// `var_checks[i]` lists the checks touching variable `i` in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    n: usize,
    check_members: Vec<Vec<usize>>,
    var_checks: Vec<Vec<usize>>,
}

impl TannerGraph {
    /// Builds a graph from per-check variable lists.
    ///
    /// Rejects out-of-range indices, repeated variables inside one check and
    /// checks with fewer than two members.
    pub fn from_checks(n: usize, checks: Vec<Vec<usize>>) -> Result<Self> {
        let mut var_checks = vec![Vec::new(); n];
        let mut check_members = Vec::with_capacity(checks.len());
        for (c, mut members) in checks.into_iter().enumerate() {
            members.sort_unstable();
            if let Some(&bad) = members.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidCode(format!(
                    "check {c} references variable {bad} but n = {n}"
                )));
            }
            if members.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidCode(format!(
                    "check {c} contains a repeated variable"
                )));
            }
            if members.len() < 2 {
                return Err(Error::InvalidCode(format!(
                    "check {c} has degree {} (< 2)",
                    members.len()
                )));
            }
            for &i in &members {
                var_checks[i].push(c);
            }
            check_members.push(members);
        }
        Ok(Self {
            n,
            check_members,
            var_checks,
        })
    }

    /// Number of variable nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of check nodes.
    pub fn m(&self) -> usize {
        self.check_members.len()
    }

    pub fn check_members(&self) -> &[Vec<usize>] {
        &self.check_members
    }

    pub fn var_checks(&self) -> &[Vec<usize>] {
        &self.var_checks
    }

    pub fn members(&self, check: usize) -> &[usize] {
        &self.check_members[check]
    }

    pub fn var_degree(&self, i: usize) -> usize {
        self.var_checks[i].len()
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_members[c].len()
    }

    pub fn num_edges(&self) -> usize {
        self.check_members.iter().map(Vec::len).sum()
    }

    /// True when every variable has degree `dl` and every check degree `dr`.
    pub fn is_regular(&self, dl: usize, dr: usize) -> bool {
        self.var_checks.iter().all(|v| v.len() == dl)
            && self.check_members.iter().all(|c| c.len() == dr)
    }

    pub fn parity_check_matrix(&self) -> Gf2Matrix {
        Gf2Matrix::from_row_supports(self.n, &self.check_members)
    }

    /// Index of the first unsatisfied check, if any.
    pub fn first_violated_check(&self, bits: &[u8]) -> Option<usize> {
        self.check_members
            .iter()
            .position(|members| members.iter().fold(0u8, |acc, &i| acc ^ (bits[i] & 1)) != 0)
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n && self.first_violated_check(bits).is_none()
    }

    /// The (7,4) Hamming code, handy as a small oracle-sized example.
    pub fn hamming74() -> Self {
        Self::from_checks(7, vec![vec![0, 1, 2, 4], vec![0, 1, 3, 5], vec![0, 2, 3, 6]])
            .expect("hamming code is well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_mutually_consistent() {
        let g = TannerGraph::hamming74();
        for (c, members) in g.check_members().iter().enumerate() {
            for &i in members {
                assert!(g.var_checks()[i].contains(&c));
            }
        }
        for (i, checks) in g.var_checks().iter().enumerate() {
            for &c in checks {
                assert!(g.members(c).contains(&i));
            }
        }
        assert_eq!(g.num_edges(), 12);
    }

    #[test]
    fn rejects_bad_checks() {
        assert!(TannerGraph::from_checks(3, vec![vec![0, 0, 1]]).is_err());
        assert!(TannerGraph::from_checks(3, vec![vec![0, 3]]).is_err());
        assert!(TannerGraph::from_checks(3, vec![vec![1]]).is_err());
    }

    #[test]
    fn codeword_membership() {
        let g = TannerGraph::hamming74();
        assert!(g.is_codeword(&[0; 7]));
        assert!(g.is_codeword(&[1, 1, 1, 0, 0, 0, 0]) == g.parity_check_matrix().annihilates(&[1, 1, 1, 0, 0, 0, 0]));
        assert_eq!(g.first_violated_check(&[0, 0, 0, 0, 1, 0, 0]), Some(0));
    }
}
