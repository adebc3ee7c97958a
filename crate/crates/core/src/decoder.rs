//! The basic LP relaxation of maximum-likelihood decoding.
//!
//! Every variable node `i` gets two beliefs `b_i(0), b_i(1)` and every
//! clique (initially the checks) gets one belief per admissible local
//! configuration. Checks only instantiate their even-parity configurations,
//! which is the same as pinning the odd ones to zero. Rows enforce
//! normalization of the variable beliefs and consistency of each clique's
//! singleton marginals with them.

use std::collections::HashMap;
use std::fmt;

use crate::channel::LlrVector;
use crate::code::TannerGraph;
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStats, SparseRow, Tolerances, VarSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CliqueKind {
    /// A parity check, by check index.
    Check(usize),
    /// A triangle added while chordalizing a frustrated cycle.
    Triangle,
    /// A two-variable clique tying two sources of the same pair together.
    Pair,
}

/// A clique of variables with its own belief table in the LP.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliqueId {
    pub kind: CliqueKind,
    members: Vec<usize>,
}

impl CliqueId {
    pub fn new(kind: CliqueKind, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { kind, members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn position(&self, var: usize) -> Option<usize> {
        self.members.binary_search(&var).ok()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.position(var).is_some()
    }
}

impl fmt::Display for CliqueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.members.iter().map(usize::to_string).collect();
        match self.kind {
            CliqueKind::Check(c) => write!(f, "check{c}:{}", members.join(",")),
            CliqueKind::Triangle => write!(f, "tri:{}", members.join(",")),
            CliqueKind::Pair => write!(f, "pair:{}", members.join(",")),
        }
    }
}

/// Bit `t` of a configuration mask is the value of `members[t]`.
pub type ConfigMask = u32;

/// A registered clique and the LP columns holding its belief table.
#[derive(Clone, Debug)]
pub struct CliqueEntry {
    pub id: CliqueId,
    pub configs: Vec<ConfigMask>,
    pub first_col: usize,
}

impl CliqueEntry {
    pub fn columns(&self) -> std::ops::Range<usize> {
        self.first_col..self.first_col + self.configs.len()
    }

    /// Columns of the configurations that assign `values[k]` to `vars[k]`.
    pub fn marginal_columns(&self, vars: &[usize], values: &[u8]) -> Vec<usize> {
        let positions: Vec<usize> = vars
            .iter()
            .map(|&v| self.id.position(v).expect("marginal over non-member"))
            .collect();
        self.configs
            .iter()
            .enumerate()
            .filter(|(_, &mask)| {
                positions
                    .iter()
                    .zip(values)
                    .all(|(&p, &val)| (mask >> p) & 1 == u32::from(val))
            })
            .map(|(k, _)| self.first_col + k)
            .collect()
    }
}

/// Registry of every clique in the LP and where its beliefs live.
///
/// Variable beliefs occupy columns `2i` (`x_i = 0`) and `2i + 1` (`x_i = 1`).
#[derive(Clone, Debug, Default)]
pub struct BeliefLayout {
    n: usize,
    cliques: Vec<CliqueEntry>,
    lookup: HashMap<CliqueId, usize>,
}

impl BeliefLayout {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn var_col(&self, i: usize, value: u8) -> usize {
        2 * i + value as usize
    }

    pub fn cliques(&self) -> &[CliqueEntry] {
        &self.cliques
    }

    pub fn clique(&self, idx: usize) -> &CliqueEntry {
        &self.cliques[idx]
    }

    pub fn find(&self, id: &CliqueId) -> Option<usize> {
        self.lookup.get(id).copied()
    }

    pub(crate) fn register(&mut self, id: CliqueId, configs: Vec<ConfigMask>, first_col: usize) -> usize {
        let idx = self.cliques.len();
        self.lookup.insert(id.clone(), idx);
        self.cliques.push(CliqueEntry {
            id,
            configs,
            first_col,
        });
        idx
    }

    /// Rows tying clique `idx`'s singleton marginal of `var` to `b_var`.
    pub(crate) fn singleton_rows(&self, idx: usize, var: usize) -> [SparseRow; 2] {
        let entry = &self.cliques[idx];
        [0u8, 1].map(|v| {
            let mut coeffs = vec![(self.var_col(var, v), 1.0)];
            coeffs.extend(entry.marginal_columns(&[var], &[v]).into_iter().map(|c| (c, -1.0)));
            SparseRow::new(coeffs, 0.0)
        })
    }
}

/// Even-weight masks over `d` bits, ascending.
pub fn even_configs(d: usize) -> Vec<ConfigMask> {
    (0..1u32 << d).filter(|m| m.count_ones() % 2 == 0).collect()
}

/// An LP together with the registry that interprets its columns.
#[derive(Clone, Debug)]
pub struct DecodingProgram {
    pub lp: LinearProgram,
    pub layout: BeliefLayout,
}

/// Builds the basic relaxation: `2n` variable beliefs, one column per even
/// configuration of every check, `n` normalization rows and one consistency
/// row per (check, member, value). The objective is `Σ l_i b_i(1)`.
pub fn build_basic_lp(graph: &TannerGraph, llr: &LlrVector) -> Result<DecodingProgram> {
    let n = graph.n();
    if llr.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: llr.len(),
        });
    }
    let mut lp = LinearProgram::new();
    let mut layout = BeliefLayout {
        n,
        ..Default::default()
    };
    for &l in llr.iter() {
        lp.add_var(VarSpec::unit(0.0))?;
        lp.add_var(VarSpec::unit(l))?;
    }
    for (c, members) in graph.check_members().iter().enumerate() {
        let configs = even_configs(members.len());
        let first = lp.num_vars();
        for _ in &configs {
            lp.add_var(VarSpec::unit(0.0))?;
        }
        layout.register(CliqueId::new(CliqueKind::Check(c), members.clone()), configs, first);
    }
    for i in 0..n {
        lp.add_row(SparseRow::new(
            vec![(layout.var_col(i, 0), 1.0), (layout.var_col(i, 1), 1.0)],
            1.0,
        ))?;
    }
    for c in 0..graph.m() {
        for &i in graph.members(c) {
            for row in layout.singleton_rows(c, i) {
                lp.add_row(row)?;
            }
        }
    }
    Ok(DecodingProgram { lp, layout })
}

/// Belief table of one clique read back from an LP solution.
#[derive(Clone, Debug)]
pub struct CliqueTable {
    pub id: CliqueId,
    pub configs: Vec<ConfigMask>,
    pub values: Vec<f64>,
}

impl CliqueTable {
    /// Marginal of member `var`: `[mass at 0, mass at 1]`.
    pub fn singleton_marginal(&self, var: usize) -> [f64; 2] {
        let p = self.id.position(var).expect("member");
        let mut out = [0.0; 2];
        for (&mask, &v) in self.configs.iter().zip(&self.values) {
            out[((mask >> p) & 1) as usize] += v;
        }
        out
    }

    /// Pairwise marginal indexed by `2·x_i + x_j`.
    pub fn pair_marginal(&self, i: usize, j: usize) -> Option<[f64; 4]> {
        let (pi, pj) = (self.id.position(i)?, self.id.position(j)?);
        let mut out = [0.0; 4];
        for (&mask, &v) in self.configs.iter().zip(&self.values) {
            let k = 2 * ((mask >> pi) & 1) + ((mask >> pj) & 1);
            out[k as usize] += v;
        }
        Some(out)
    }
}

/// Variable and clique beliefs of an LP optimum. Clique `k` here is clique
/// `k` of the [`BeliefLayout`] the solution was read with.
#[derive(Clone, Debug)]
pub struct BeliefSolution {
    pub var_beliefs: Vec<[f64; 2]>,
    pub cliques: Vec<CliqueTable>,
    pub objective_value: f64,
}

impl BeliefSolution {
    pub fn from_values(layout: &BeliefLayout, values: &[f64], objective_value: f64) -> Self {
        let var_beliefs = (0..layout.n())
            .map(|i| [values[layout.var_col(i, 0)], values[layout.var_col(i, 1)]])
            .collect();
        let cliques = layout
            .cliques()
            .iter()
            .map(|e| CliqueTable {
                id: e.id.clone(),
                configs: e.configs.clone(),
                values: values[e.columns()].to_vec(),
            })
            .collect();
        Self {
            var_beliefs,
            cliques,
            objective_value,
        }
    }

    pub fn n(&self) -> usize {
        self.var_beliefs.len()
    }

    /// Checks normalization, clique/singleton consistency and box bounds.
    pub fn check_invariants(&self, tol: f64) -> std::result::Result<(), String> {
        for (i, b) in self.var_beliefs.iter().enumerate() {
            if (b[0] + b[1] - 1.0).abs() > tol {
                return Err(format!("variable {i} beliefs sum to {}", b[0] + b[1]));
            }
            if b.iter().any(|&v| !(-1e-9..=1.0 + 1e-9).contains(&v)) {
                return Err(format!("variable {i} belief {b:?} out of [0,1]"));
            }
        }
        for t in &self.cliques {
            if t.values.iter().any(|&v| !(-1e-9..=1.0 + 1e-9).contains(&v)) {
                return Err(format!("clique {} has a belief outside [0,1]", t.id));
            }
            for &i in t.id.members() {
                let marg = t.singleton_marginal(i);
                for v in 0..2 {
                    if (marg[v] - self.var_beliefs[i][v]).abs() > tol {
                        return Err(format!(
                            "clique {} marginal of {i}={v} is {} but b_i = {}",
                            t.id, marg[v], self.var_beliefs[i][v]
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Hard decision read from the LP optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assignment {
    Integral(Vec<u8>),
    /// Variables whose `b_i(1)` is not within the integrality tolerance.
    Fractional(Vec<usize>),
}

impl Assignment {
    pub fn is_all_zero(&self) -> bool {
        matches!(self, Assignment::Integral(bits) if bits.iter().all(|&b| b == 0))
    }
}

/// An integral LP optimum is the ML codeword.
pub fn is_ml_certificate(a: &Assignment) -> bool {
    matches!(a, Assignment::Integral(_))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodeTolerances {
    pub lp: Tolerances,
    /// Distance from 0 or 1 below which `b_i(1)` counts as integral.
    pub integrality: f64,
}

impl Default for DecodeTolerances {
    fn default() -> Self {
        Self {
            lp: Tolerances::default(),
            integrality: 1e-6,
        }
    }
}

pub fn classify(graph: &TannerGraph, beliefs: &BeliefSolution, int_tol: f64) -> Result<Assignment> {
    let mut bits = Vec::with_capacity(beliefs.n());
    let mut fractional = Vec::new();
    for (i, b) in beliefs.var_beliefs.iter().enumerate() {
        let one = b[1];
        if one.abs() <= int_tol {
            bits.push(0);
        } else if (one - 1.0).abs() <= int_tol {
            bits.push(1);
        } else {
            fractional.push(i);
        }
    }
    if !fractional.is_empty() {
        return Ok(Assignment::Fractional(fractional));
    }
    if let Some(check) = graph.first_violated_check(&bits) {
        return Err(Error::ParityViolation { check });
    }
    Ok(Assignment::Integral(bits))
}

#[derive(Clone, Debug)]
pub struct BasicDecode {
    pub assignment: Assignment,
    pub beliefs: BeliefSolution,
    pub stats: LpStats,
}

/// Solves the basic relaxation once and classifies the optimum.
pub fn decode_basic(graph: &TannerGraph, llr: &LlrVector, tols: &DecodeTolerances) -> Result<BasicDecode> {
    let program = build_basic_lp(graph, llr)?;
    let sol = lp::solve(&program.lp, &tols.lp);
    if !sol.is_optimal() {
        return Err(Error::Solver {
            iteration: 1,
            detail: format!("{:?}: {}", sol.status, sol.diagnostic.unwrap_or_default()),
        });
    }
    let beliefs = BeliefSolution::from_values(&program.layout, &sol.values, sol.objective_value);
    let assignment = classify(graph, &beliefs, tols.integrality)?;
    let mut stats = program.lp.stats();
    stats.solve_iterations = sol.iterations;
    Ok(BasicDecode {
        assignment,
        beliefs,
        stats,
    })
}
