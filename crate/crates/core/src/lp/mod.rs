//! Sparse equality-constrained linear programs over box-bounded variables,
//! and a revised simplex solver for them.
//!
//! A [`LinearProgram`] only grows: variables and rows can be appended with
//! [`LinearProgram::extend`] but never removed, which is what the adaptive
//! decoder needs between solves.

mod simplex;

use std::collections::HashSet;
use std::fmt::Write as _;

pub use simplex::{Algorithm, RevisedSimplex};

use crate::error::{Error, Result};

/// Feasibility and optimality tolerances used by a solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Maximum equality residual / bound violation accepted as feasible.
    pub feasibility: f64,
    /// Reduced costs above `-optimality` count as non-improving.
    pub optimality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feasibility: 1e-7,
            optimality: 1e-9,
        }
    }
}

/// One equality row `Σ coeff·x = rhs`, coefficients sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl SparseRow {
    /// Builds a row, merging duplicate columns and dropping zero coefficients.
    pub fn new(mut coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        coeffs.sort_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        for (j, a) in coeffs {
            match merged.last_mut() {
                Some((lj, la)) if *lj == j => *la += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        Self { coeffs: merged, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    pub fn residual(&self, x: &[f64]) -> f64 {
        self.activity(x) - self.rhs
    }

    /// Sign-normalized identity used for deduplication: the same equality
    /// written with flipped sign maps to the same key.
    fn key(&self) -> Vec<u64> {
        let flip = self.coeffs.first().is_some_and(|&(_, a)| a < 0.0);
        let s = if flip { -1.0 } else { 1.0 };
        let mut key = Vec::with_capacity(2 * self.coeffs.len() + 1);
        for &(j, a) in &self.coeffs {
            key.push(j as u64);
            key.push((s * a + 0.0).to_bits());
        }
        key.push((s * self.rhs + 0.0).to_bits());
        key
    }
}

/// Cost and bounds of a variable to append.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarSpec {
    pub cost: f64,
    pub lower: f64,
    pub upper: f64,
}

impl VarSpec {
    pub fn unit(cost: f64) -> Self {
        Self {
            cost,
            lower: 0.0,
            upper: 1.0,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rows: Vec<SparseRow>,
    row_keys: HashSet<Vec<u64>>,
    nonzeros: usize,
}

/// Counts of what an [`LinearProgram::extend`] call actually appended.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtendSummary {
    pub first_new_var: usize,
    pub vars_added: usize,
    pub rows_added: usize,
    pub rows_skipped: usize,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn nonzeros(&self) -> usize {
        self.nonzeros
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn stats(&self) -> LpStats {
        LpStats {
            rows: self.num_rows(),
            cols: self.num_vars(),
            nonzeros: self.nonzeros,
            solve_iterations: 0,
        }
    }

    pub fn add_var(&mut self, spec: VarSpec) -> Result<usize> {
        if !(spec.lower.is_finite() && spec.upper.is_finite()) || spec.lower > spec.upper {
            return Err(Error::Program(format!(
                "variable bounds [{}, {}] must be finite with lo <= hi",
                spec.lower, spec.upper
            )));
        }
        if !spec.cost.is_finite() {
            return Err(Error::Program(format!("non-finite cost {}", spec.cost)));
        }
        self.cost.push(spec.cost);
        self.lower.push(spec.lower);
        self.upper.push(spec.upper);
        Ok(self.cost.len() - 1)
    }

    /// Appends a row unless an identical equality is already present.
    /// Returns whether the row was inserted.
    pub fn add_row(&mut self, row: SparseRow) -> Result<bool> {
        self.validate_row(&row, self.num_vars())?;
        Ok(self.push_row(row))
    }

    fn validate_row(&self, row: &SparseRow, num_vars: usize) -> Result<()> {
        if let Some(&(j, _)) = row.coeffs.iter().find(|&&(j, _)| j >= num_vars) {
            return Err(Error::Program(format!(
                "row references variable {j} but only {num_vars} exist"
            )));
        }
        if !row.rhs.is_finite() || row.coeffs.iter().any(|&(_, a)| !a.is_finite()) {
            return Err(Error::Program("non-finite row entry".into()));
        }
        Ok(())
    }

    fn push_row(&mut self, row: SparseRow) -> bool {
        if !self.row_keys.insert(row.key()) {
            return false;
        }
        self.nonzeros += row.coeffs.len();
        self.rows.push(row);
        true
    }

    /// Appends variables and rows. New rows may reference old or new
    /// variables; nothing is modified if any reference dangles.
    pub fn extend(&mut self, vars: &[VarSpec], rows: Vec<SparseRow>) -> Result<ExtendSummary> {
        let total = self.num_vars() + vars.len();
        for row in &rows {
            self.validate_row(row, total)?;
        }
        for v in vars {
            if !(v.lower.is_finite() && v.upper.is_finite()) || v.lower > v.upper || !v.cost.is_finite() {
                return Err(Error::Program(format!("bad variable spec {v:?}")));
            }
        }
        let mut summary = ExtendSummary {
            first_new_var: self.num_vars(),
            vars_added: vars.len(),
            ..Default::default()
        };
        for &v in vars {
            self.add_var(v)?;
        }
        for row in rows {
            if self.push_row(row) {
                summary.rows_added += 1;
            } else {
                summary.rows_skipped += 1;
            }
        }
        Ok(summary)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| r.residual(x).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_bound_violation(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&lo, &hi))| (lo - v).max(v - hi).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Plain-text standard form: `min` objective line, one `row` line per
    /// equality, then one `bound` line per variable. Terms are `coef*x<j>`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let obj: Vec<String> = self
            .cost
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(j, c)| format!("{c:+}*x{j}"))
            .collect();
        let _ = writeln!(s, "min {}", obj.join(" "));
        for row in &self.rows {
            let terms: Vec<String> = row.coeffs.iter().map(|(j, a)| format!("{a:+}*x{j}")).collect();
            let _ = writeln!(s, "row {} = {}", terms.join(" "), row.rhs);
        }
        for (j, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            let _ = writeln!(s, "bound {lo} <= x{j} <= {hi}");
        }
        s
    }
}

/// Size of a constraint matrix and the work spent solving it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LpStats {
    pub rows: usize,
    pub cols: usize,
    pub nonzeros: usize,
    pub solve_iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    /// Why a non-optimal status was returned, if any.
    pub diagnostic: Option<String>,
    /// Final basis, usable as a warm start after the LP is extended.
    pub basis: Option<Basis>,
}

/// A simplex basis. Basic entries below `num_vars` are structural columns;
/// entry `num_vars + i` is the artificial of row `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    pub num_vars: usize,
    pub basic: Vec<usize>,
    /// Nonbasic structurals sitting at their upper bound.
    pub at_upper: Vec<bool>,
    /// Row-major inverse of the basis matrix, if the solver kept it.
    pub inverse: Option<std::sync::Arc<[f64]>>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Anything that can solve a [`LinearProgram`] to a vertex optimum.
pub trait LpSolver {
    /// Solves `lp`, optionally starting from the basis of an earlier solve
    /// of a program that `lp` extends.
    fn solve_from(&self, lp: &LinearProgram, tols: &Tolerances, start: Option<&Basis>) -> LpSolution;

    fn solve(&self, lp: &LinearProgram, tols: &Tolerances) -> LpSolution {
        self.solve_from(lp, tols, None)
    }
}

/// Solves with the default revised simplex.
pub fn solve(lp: &LinearProgram, tols: &Tolerances) -> LpSolution {
    RevisedSimplex::default().solve(lp, tols)
}

/// Re-solves an extended program from the basis of the previous optimum.
pub fn solve_warm(lp: &LinearProgram, tols: &Tolerances, start: &Basis) -> LpSolution {
    RevisedSimplex::default().solve_from(lp, tols, Some(start))
}

#[cfg(test)]
mod tests;
