//! Revised simplex for `A x = b, lo <= x <= hi` with finite boxes.
//!
//! Every row carries an artificial column. The default dual algorithm pins
//! the artificials to `[0, 0]` from the start: since every structural is
//! boxed, any basis becomes dual feasible by parking each nonbasic at the
//! bound its reduced cost prefers, so the method only has to repair primal
//! infeasibilities. That also makes warm starts after appending rows and
//! columns cheap. The primal algorithm is the textbook two-phase method
//! with Dantzig pricing and a Harris ratio test.
//!
//! The basis inverse is kept as a dense matrix with sparse rank-one updates
//! and is rebuilt every `refactor_interval` updates. Before the dual method
//! declares optimality it recomputes primal and dual values from the current
//! inverse and refactors only if the row residuals have drifted. A warm
//! start after appending rows extends the old inverse instead of rebuilding
//! it. After `stall_limit` consecutive degenerate pivots both algorithms
//! fall back to least-index choices until progress resumes.

use super::{Basis, LinearProgram, LpSolution, LpSolver, LpStatus, Tolerances};

const PIVOT_TOL: f64 = 1e-9;
const DROP_TOL: f64 = 1e-14;
const DEGENERATE_STEP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Dual,
    Primal,
}

#[derive(Clone, Debug)]
pub struct RevisedSimplex {
    pub algorithm: Algorithm,
    /// Hard cap on pivots plus bound flips; `None` scales with problem size.
    pub max_iterations: Option<usize>,
    pub refactor_interval: usize,
    pub stall_limit: usize,
}

impl Default for RevisedSimplex {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Dual,
            max_iterations: None,
            refactor_interval: 100,
            stall_limit: 60,
        }
    }
}

impl RevisedSimplex {
    pub fn primal() -> Self {
        Self {
            algorithm: Algorithm::Primal,
            ..Self::default()
        }
    }
}

impl LpSolver for RevisedSimplex {
    fn solve_from(&self, lp: &LinearProgram, tols: &Tolerances, start: Option<&Basis>) -> LpSolution {
        let limit = self.max_iterations.unwrap_or(50 * (lp.num_vars() + lp.num_rows()) + 1000);
        match self.algorithm {
            Algorithm::Dual => {
                let mut st = State::new(lp, tols, self, Algorithm::Dual);
                if !start.is_some_and(|b| st.warm_start(b)) {
                    st.cold_dual_start();
                }
                let end = st.dual_optimize(limit);
                st.conclude(lp, tols, end, "dual")
            }
            Algorithm::Primal => solve_primal(lp, tols, self, limit),
        }
    }
}

fn solve_primal(lp: &LinearProgram, tols: &Tolerances, cfg: &RevisedSimplex, limit: usize) -> LpSolution {
    let (n, m) = (lp.num_vars(), lp.num_rows());
    let mut st = State::new(lp, tols, cfg, Algorithm::Primal);
    match st.primal_optimize(limit) {
        PhaseEnd::Optimal => {}
        other => return st.conclude(lp, tols, other, "phase 1"),
    }
    let infeasibility = (n..n + m).map(|j| st.x[j]).fold(0.0, f64::max);
    if infeasibility > tols.feasibility {
        return st.conclude(
            lp,
            tols,
            PhaseEnd::Infeasible(format!("phase 1 ended with artificial mass {infeasibility:.3e}")),
            "phase 1",
        );
    }
    st.enter_phase_two(lp);
    let end = st.primal_optimize(limit);
    st.conclude(lp, tols, end, "phase 2")
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum VarStatus {
    Basic(usize),
    Lower,
    Upper,
}

enum PhaseEnd {
    Optimal,
    Infeasible(String),
    IterationLimit,
    Breakdown(String),
}

enum Step {
    Flip,
    Pivot { row: usize, step: f64 },
}

struct State {
    m: usize,
    n: usize,
    feas_tol: f64,
    opt_tol: f64,
    refactor_interval: usize,
    stall_limit: usize,

    // structural columns (CSC) and rows (CSR)
    col_ptr: Vec<usize>,
    col_entries: Vec<(usize, f64)>,
    row_ptr: Vec<usize>,
    row_entries: Vec<(usize, f64)>,
    art_sign: Vec<f64>,
    rhs: Vec<f64>,

    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,

    status: Vec<VarStatus>,
    basis: Vec<usize>,
    x: Vec<f64>,
    d: Vec<f64>,
    binv: Vec<f64>,

    updates: usize,
    iterations: usize,
    degenerate_run: usize,

    // scratch
    alpha: Vec<f64>,
    beta: Vec<f64>,
    touched: Vec<usize>,
    marked: Vec<bool>,
    nz: Vec<usize>,
}

impl State {
    fn new(lp: &LinearProgram, tols: &Tolerances, cfg: &RevisedSimplex, algorithm: Algorithm) -> Self {
        let n = lp.num_vars();
        let m = lp.num_rows();
        let total = n + m;

        let mut row_ptr = Vec::with_capacity(m + 1);
        let mut row_entries = Vec::with_capacity(lp.nonzeros());
        let mut counts = vec![0usize; n];
        row_ptr.push(0);
        for row in lp.rows() {
            for &(j, a) in &row.coeffs {
                row_entries.push((j, a));
                counts[j] += 1;
            }
            row_ptr.push(row_entries.len());
        }
        let mut col_ptr = vec![0usize; n + 1];
        for j in 0..n {
            col_ptr[j + 1] = col_ptr[j] + counts[j];
        }
        let mut fill = col_ptr.clone();
        let mut col_entries = vec![(0usize, 0.0); row_entries.len()];
        for (i, row) in lp.rows().iter().enumerate() {
            for &(j, a) in &row.coeffs {
                col_entries[fill[j]] = (i, a);
                fill[j] += 1;
            }
        }

        let mut lo = lp.lower().to_vec();
        let mut hi = lp.upper().to_vec();
        lo.extend(std::iter::repeat_n(0.0, m));
        let rhs: Vec<f64> = lp.rows().iter().map(|r| r.rhs).collect();
        let mut x = lo.clone();
        let mut art_sign = vec![1.0; m];
        let mut cost;
        match algorithm {
            Algorithm::Dual => {
                hi.extend(std::iter::repeat_n(0.0, m));
                cost = lp.cost().to_vec();
                cost.extend(std::iter::repeat_n(0.0, m));
            }
            Algorithm::Primal => {
                // structurals start at their lower bound; artificials absorb the residual
                hi.extend(std::iter::repeat_n(f64::INFINITY, m));
                cost = vec![0.0; n];
                cost.extend(std::iter::repeat_n(1.0, m));
                for (i, row) in lp.rows().iter().enumerate() {
                    let r = row.rhs - row.activity(&x[..n]);
                    art_sign[i] = if r >= 0.0 { 1.0 } else { -1.0 };
                    x[n + i] = r.abs();
                }
            }
        }

        let mut status = vec![VarStatus::Lower; total];
        let mut basis = Vec::with_capacity(m);
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            status[n + i] = VarStatus::Basic(i);
            basis.push(n + i);
            binv[i * m + i] = art_sign[i];
        }

        let mut st = Self {
            m,
            n,
            feas_tol: tols.feasibility,
            opt_tol: tols.optimality,
            refactor_interval: cfg.refactor_interval.max(1),
            stall_limit: cfg.stall_limit,
            col_ptr,
            col_entries,
            row_ptr,
            row_entries,
            art_sign,
            rhs,
            lo,
            hi,
            cost,
            status,
            basis,
            x,
            d: vec![0.0; total],
            binv,
            updates: 0,
            iterations: 0,
            degenerate_run: 0,
            alpha: vec![0.0; m],
            beta: vec![0.0; total],
            touched: Vec::new(),
            marked: vec![false; total],
            nz: Vec::new(),
        };
        if algorithm == Algorithm::Primal {
            st.recompute_duals();
        }
        st
    }

    fn column(&self, j: usize) -> ColumnIter<'_> {
        if j < self.n {
            ColumnIter::Structural(self.col_entries[self.col_ptr[j]..self.col_ptr[j + 1]].iter())
        } else {
            ColumnIter::Unit(Some((j - self.n, self.art_sign[j - self.n])))
        }
    }

    fn is_basic(&self, j: usize) -> bool {
        matches!(self.status[j], VarStatus::Basic(_))
    }

    fn conclude(&self, lp: &LinearProgram, tols: &Tolerances, end: PhaseEnd, phase: &str) -> LpSolution {
        let values: Vec<f64> = (0..self.n)
            .map(|j| self.x[j].clamp(lp.lower()[j], lp.upper()[j]))
            .collect();
        let (status, diagnostic) = match end {
            PhaseEnd::Optimal => {
                let residual = lp.max_residual(&values);
                if residual > tols.feasibility {
                    (
                        LpStatus::IterationLimit,
                        Some(format!("numerical drift: equality residual {residual:.3e}")),
                    )
                } else {
                    (LpStatus::Optimal, None)
                }
            }
            PhaseEnd::Infeasible(msg) => (LpStatus::Infeasible, Some(msg)),
            PhaseEnd::IterationLimit => (LpStatus::IterationLimit, Some(format!("iteration limit in {phase}"))),
            PhaseEnd::Breakdown(msg) => (LpStatus::IterationLimit, Some(msg)),
        };
        let basis = (status == LpStatus::Optimal).then(|| Basis {
            num_vars: self.n,
            basic: self.basis.clone(),
            at_upper: (0..self.n).map(|j| self.status[j] == VarStatus::Upper).collect(),
            inverse: Some(self.binv.clone().into()),
        });
        LpSolution {
            status,
            objective_value: lp.objective_value(&values),
            values,
            iterations: self.iterations,
            diagnostic,
            basis,
        }
    }

    // ---------------------------------------------------------------- dual

    fn cold_dual_start(&mut self) {
        for j in 0..self.n {
            self.set_nonbasic(j, self.cost[j] < 0.0);
        }
        self.recompute_primal();
        self.recompute_duals();
        self.restore_dual_feasibility();
    }

    /// Adopts `start`, remapping its artificial ids and adding the
    /// artificials of rows appended since. Returns false if unusable.
    fn warm_start(&mut self, start: &Basis) -> bool {
        let (n, m) = (self.n, self.m);
        let old_n = start.num_vars;
        let old_m = start.basic.len();
        if old_n > n || old_m > m || start.at_upper.len() != old_n {
            return false;
        }
        let mut basis = Vec::with_capacity(m);
        for &id in &start.basic {
            let mapped = if id < old_n {
                id
            } else if id - old_n < old_m {
                n + (id - old_n)
            } else {
                return false;
            };
            basis.push(mapped);
        }
        basis.extend((old_m..m).map(|i| n + i));
        let saved_status = std::mem::replace(&mut self.status, vec![VarStatus::Lower; n + m]);
        let saved_basis = std::mem::replace(&mut self.basis, basis);
        for p in 0..m {
            let j = self.basis[p];
            if self.is_basic(j) {
                self.status = saved_status;
                self.basis = saved_basis;
                return false;
            }
            self.status[j] = VarStatus::Basic(p);
        }
        let extended = match &start.inverse {
            Some(inv) if inv.len() == old_m * old_m => {
                self.extend_inverse(inv, old_m);
                true
            }
            _ => false,
        };
        if !extended && self.refactor().is_err() {
            self.status = saved_status;
            self.basis = saved_basis;
            let m = self.m;
            self.binv.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..m {
                self.binv[i * m + i] = self.art_sign[i];
            }
            return false;
        }
        for j in 0..n + m {
            if !self.is_basic(j) {
                let upper = if j < old_n { start.at_upper[j] } else { j < n && self.cost[j] < 0.0 };
                self.set_nonbasic(j, upper);
            }
        }
        self.recompute_primal();
        self.recompute_duals();
        self.restore_dual_feasibility();
        true
    }

    /// Inverse of `[[B, 0], [R, I]]` from `B⁻¹`, where `R` holds the
    /// appended rows' coefficients on the old basic columns.
    fn extend_inverse(&mut self, old: &[f64], old_m: usize) {
        let m = self.m;
        self.binv.iter_mut().for_each(|v| *v = 0.0);
        for p in 0..old_m {
            self.binv[p * m..p * m + old_m].copy_from_slice(&old[p * old_m..(p + 1) * old_m]);
        }
        for i in old_m..m {
            self.binv[i * m + i] = 1.0;
            for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                let (j, a) = self.row_entries[e];
                if let VarStatus::Basic(p) = self.status[j] {
                    for k in 0..old_m {
                        let v = old[p * old_m + k];
                        if v != 0.0 {
                            self.binv[i * m + k] -= a * v;
                        }
                    }
                }
            }
        }
        self.updates = 0;
    }

    fn set_nonbasic(&mut self, j: usize, upper: bool) {
        if upper {
            self.status[j] = VarStatus::Upper;
            self.x[j] = self.hi[j];
        } else {
            self.status[j] = VarStatus::Lower;
            self.x[j] = self.lo[j];
        }
    }

    /// Moves every nonbasic whose reduced cost has the wrong sign to its
    /// other bound. Returns true if anything moved.
    fn restore_dual_feasibility(&mut self) -> bool {
        let mut moved = false;
        for j in 0..self.n + self.m {
            if self.hi[j] <= self.lo[j] {
                continue;
            }
            match self.status[j] {
                VarStatus::Lower if self.d[j] < -self.opt_tol => {
                    self.set_nonbasic(j, true);
                    moved = true;
                }
                VarStatus::Upper if self.d[j] > self.opt_tol => {
                    self.set_nonbasic(j, false);
                    moved = true;
                }
                _ => {}
            }
        }
        if moved {
            self.recompute_primal();
        }
        moved
    }

    /// Largest `|A x + s - b|` over rows, artificials included.
    fn row_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.m {
            let mut act = self.art_sign[i] * self.x[self.n + i];
            for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                let (j, a) = self.row_entries[e];
                act += a * self.x[j];
            }
            worst = worst.max((act - self.rhs[i]).abs());
        }
        worst
    }

    fn refresh(&mut self) -> Result<(), String> {
        self.refactor()?;
        self.recompute_primal();
        self.recompute_duals();
        self.restore_dual_feasibility();
        Ok(())
    }

    /// Basic position with the largest bound violation, or the least
    /// variable index among violators when stalling.
    fn leaving_row(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for p in 0..self.m {
            let j = self.basis[p];
            let viol = (self.lo[j] - self.x[j]).max(self.x[j] - self.hi[j]);
            if viol <= self.feas_tol {
                continue;
            }
            let better = match best {
                None => true,
                Some((bp, bv)) => {
                    if bland {
                        j < self.basis[bp]
                    } else {
                        viol > bv
                    }
                }
            };
            if better {
                best = Some((p, viol));
            }
        }
        best.map(|(p, _)| p)
    }

    /// Fills `beta` with row `r` of `B⁻¹ [A | I]` over the touched columns.
    fn pivot_row(&mut self, r: usize) {
        let m = self.m;
        for i in 0..m {
            let rho = self.binv[r * m + i];
            if rho == 0.0 {
                continue;
            }
            for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                let (j, a) = self.row_entries[e];
                if !self.marked[j] {
                    self.marked[j] = true;
                    self.touched.push(j);
                }
                self.beta[j] += rho * a;
            }
            let j = self.n + i;
            if !self.marked[j] {
                self.marked[j] = true;
                self.touched.push(j);
            }
            self.beta[j] += rho * self.art_sign[i];
        }
    }

    fn clear_pivot_row(&mut self) {
        for &j in &self.touched {
            self.beta[j] = 0.0;
            self.marked[j] = false;
        }
        self.touched.clear();
    }

    /// Entering column for a leaving variable that must move up (`up`) or
    /// down, by a Harris two-pass test on the reduced costs.
    fn dual_ratio_test(&self, up: bool, bland: bool) -> Option<usize> {
        let eligible = |j: usize| -> Option<(f64, f64)> {
            if self.is_basic(j) || self.hi[j] <= self.lo[j] {
                return None;
            }
            let a = self.beta[j];
            if a.abs() <= PIVOT_TOL {
                return None;
            }
            let s = if up { a } else { -a };
            match self.status[j] {
                VarStatus::Lower if s < 0.0 => Some((self.d[j].max(0.0), a.abs())),
                VarStatus::Upper if s > 0.0 => Some(((-self.d[j]).max(0.0), a.abs())),
                _ => None,
            }
        };
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for &j in &self.touched {
                if let Some((dd, mag)) = eligible(j) {
                    let ratio = dd / mag;
                    let better = match best {
                        None => true,
                        Some((bj, br)) => ratio < br - DEGENERATE_STEP || (ratio <= br + DEGENERATE_STEP && j < bj),
                    };
                    if better {
                        best = Some((j, ratio));
                    }
                }
            }
            return best.map(|(j, _)| j);
        }
        let mut theta = f64::INFINITY;
        for &j in &self.touched {
            if let Some((dd, mag)) = eligible(j) {
                theta = theta.min((dd + self.opt_tol) / mag);
            }
        }
        if !theta.is_finite() {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for &j in &self.touched {
            if let Some((dd, mag)) = eligible(j) {
                if dd / mag > theta {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bj, bmag)) => mag > bmag || (mag == bmag && j < bj),
                };
                if better {
                    best = Some((j, mag));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn dual_optimize(&mut self, limit: usize) -> PhaseEnd {
        let mut fresh = false;
        loop {
            if self.iterations >= limit {
                return PhaseEnd::IterationLimit;
            }
            if self.updates >= self.refactor_interval {
                if let Err(msg) = self.refresh() {
                    return PhaseEnd::Breakdown(msg);
                }
            }
            let bland = self.degenerate_run > self.stall_limit;
            let Some(r) = self.leaving_row(bland) else {
                if fresh {
                    return PhaseEnd::Optimal;
                }
                // trust the current inverse if recomputed values still hold up
                self.recompute_primal();
                self.recompute_duals();
                let moved = self.restore_dual_feasibility();
                if !moved && self.row_residual() <= 0.01 * self.feas_tol {
                    if self.leaving_row(false).is_none() {
                        return PhaseEnd::Optimal;
                    }
                    continue;
                }
                if let Err(msg) = self.refresh() {
                    return PhaseEnd::Breakdown(msg);
                }
                fresh = true;
                continue;
            };
            let leaving = self.basis[r];
            let up = self.x[leaving] < self.lo[leaving];
            self.pivot_row(r);
            let Some(q) = self.dual_ratio_test(up, bland) else {
                self.clear_pivot_row();
                if fresh {
                    return PhaseEnd::Infeasible(format!("row {r} has no entering candidate"));
                }
                if let Err(msg) = self.refresh() {
                    return PhaseEnd::Breakdown(msg);
                }
                fresh = true;
                continue;
            };
            self.iterations += 1;
            self.ftran(q);
            let a_rq = self.alpha[r];
            if (a_rq - self.beta[q]).abs() > 1e-7 * (1.0 + a_rq.abs()) || a_rq.abs() <= PIVOT_TOL {
                // row and column disagree: the inverse has drifted
                self.clear_pivot_row();
                if fresh {
                    return PhaseEnd::Breakdown(format!("unstable pivot {a_rq:.3e} on row {r}"));
                }
                if let Err(msg) = self.refresh() {
                    return PhaseEnd::Breakdown(msg);
                }
                fresh = true;
                continue;
            }
            fresh = false;

            // primal step: the leaving variable lands exactly on its violated bound
            let target = if up { self.lo[leaving] } else { self.hi[leaving] };
            let t = (self.x[leaving] - target) / a_rq;
            for p in 0..self.m {
                let a = self.alpha[p];
                if a != 0.0 {
                    self.x[self.basis[p]] -= t * a;
                }
            }
            self.x[q] += t;
            self.x[leaving] = target;

            // dual step along the pivot row
            let theta = self.d[q] / self.beta[q];
            if theta.abs() <= DEGENERATE_STEP {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }
            for idx in 0..self.touched.len() {
                let j = self.touched[idx];
                if !self.is_basic(j) {
                    self.d[j] -= theta * self.beta[j];
                }
            }
            self.clear_pivot_row();
            self.d[q] = 0.0;
            self.d[leaving] = -theta;

            self.update_inverse(r);
            self.basis[r] = q;
            self.status[q] = VarStatus::Basic(r);
            self.status[leaving] = if up { VarStatus::Lower } else { VarStatus::Upper };
        }
    }

    // -------------------------------------------------------------- primal

    fn enter_phase_two(&mut self, lp: &LinearProgram) {
        for j in self.n..self.n + self.m {
            self.hi[j] = 0.0;
            self.cost[j] = 0.0;
            if !self.is_basic(j) {
                self.status[j] = VarStatus::Lower;
                self.x[j] = 0.0;
            }
        }
        self.cost[..self.n].copy_from_slice(lp.cost());
        self.degenerate_run = 0;
        self.recompute_primal();
        self.recompute_duals();
    }

    fn primal_optimize(&mut self, limit: usize) -> PhaseEnd {
        let mut fresh = false;
        loop {
            if self.iterations >= limit {
                return PhaseEnd::IterationLimit;
            }
            if self.updates >= self.refactor_interval {
                if let Err(msg) = self.refactor() {
                    return PhaseEnd::Breakdown(msg);
                }
                self.recompute_primal();
                self.recompute_duals();
            }
            let bland = self.degenerate_run > self.stall_limit;
            let Some((q, dir)) = self.price(bland) else {
                if fresh {
                    return PhaseEnd::Optimal;
                }
                if let Err(msg) = self.refactor() {
                    return PhaseEnd::Breakdown(msg);
                }
                self.recompute_primal();
                self.recompute_duals();
                fresh = true;
                continue;
            };
            fresh = false;
            self.iterations += 1;
            self.ftran(q);
            match self.ratio_test(q, dir, bland) {
                Step::Flip => {
                    let range = self.hi[q] - self.lo[q];
                    for p in 0..self.m {
                        let a = self.alpha[p];
                        if a != 0.0 {
                            self.x[self.basis[p]] -= dir * range * a;
                        }
                    }
                    self.set_nonbasic(q, dir > 0.0);
                    self.degenerate_run = 0;
                }
                Step::Pivot { row, step } => {
                    if step <= DEGENERATE_STEP {
                        self.degenerate_run += 1;
                    } else {
                        self.degenerate_run = 0;
                    }
                    self.primal_pivot(q, dir, row, step);
                }
            }
        }
    }

    /// Entering variable and its direction (+1 increase, −1 decrease).
    fn price(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.n + self.m {
            let dir = match self.status[j] {
                VarStatus::Basic(_) => continue,
                _ if self.hi[j] - self.lo[j] <= 0.0 => continue,
                VarStatus::Lower if self.d[j] < -self.opt_tol => 1.0,
                VarStatus::Upper if self.d[j] > self.opt_tol => -1.0,
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            let score = self.d[j].abs();
            if score > best_score {
                best_score = score;
                best = Some((j, dir));
            }
        }
        best
    }

    fn ratio_test(&self, q: usize, dir: f64, bland: bool) -> Step {
        let range = self.hi[q] - self.lo[q];
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for p in 0..self.m {
                let a = dir * self.alpha[p];
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let Some(ratio) = self.exact_ratio(p, a) else { continue };
                let ratio = ratio.max(0.0);
                best = match best {
                    None => Some((p, ratio)),
                    Some((bp, br)) => {
                        if ratio < br - DEGENERATE_STEP
                            || (ratio <= br + DEGENERATE_STEP && self.basis[p] < self.basis[bp])
                        {
                            Some((p, ratio))
                        } else {
                            Some((bp, br))
                        }
                    }
                };
            }
            return match best {
                Some((p, ratio)) if ratio < range => Step::Pivot { row: p, step: ratio },
                _ => Step::Flip,
            };
        }

        // Harris pass 1: loosened bound on the step
        let mut theta = f64::INFINITY;
        for p in 0..self.m {
            let a = dir * self.alpha[p];
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basis[p];
            let r = if a > 0.0 {
                (self.x[j] - self.lo[j] + self.feas_tol) / a
            } else if self.hi[j].is_finite() {
                (self.hi[j] - self.x[j] + self.feas_tol) / -a
            } else {
                continue;
            };
            theta = theta.min(r);
        }
        if range <= theta {
            return Step::Flip;
        }
        // pass 2: largest pivot among rows blocking within theta
        let mut best: Option<(usize, f64, f64)> = None;
        for p in 0..self.m {
            let a = dir * self.alpha[p];
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let Some(ratio) = self.exact_ratio(p, a) else { continue };
            if ratio > theta {
                continue;
            }
            let mag = a.abs();
            let better = match best {
                None => true,
                Some((bp, _, bmag)) => mag > bmag || (mag == bmag && self.basis[p] < self.basis[bp]),
            };
            if better {
                best = Some((p, ratio, mag));
            }
        }
        match best {
            Some((p, ratio, _)) => Step::Pivot {
                row: p,
                step: ratio.max(0.0),
            },
            None => Step::Flip,
        }
    }

    fn exact_ratio(&self, p: usize, a: f64) -> Option<f64> {
        let j = self.basis[p];
        if a > 0.0 {
            Some((self.x[j] - self.lo[j]) / a)
        } else if self.hi[j].is_finite() {
            Some((self.hi[j] - self.x[j]) / -a)
        } else {
            None
        }
    }

    fn primal_pivot(&mut self, q: usize, dir: f64, r: usize, step: f64) {
        let m = self.m;
        let leaving = self.basis[r];
        let a_r = dir * self.alpha[r];

        for p in 0..m {
            let a = self.alpha[p];
            if a != 0.0 {
                self.x[self.basis[p]] -= dir * step * a;
            }
        }
        self.x[q] += dir * step;
        self.set_nonbasic(leaving, a_r <= 0.0);
        self.basis[r] = q;
        self.status[q] = VarStatus::Basic(r);
        self.update_inverse(r);

        // reduced-cost update through the new pivot row
        let dq = self.d[q];
        self.pivot_row(r);
        for idx in 0..self.touched.len() {
            let j = self.touched[idx];
            if !self.is_basic(j) {
                self.d[j] -= dq * self.beta[j];
            }
        }
        self.clear_pivot_row();
        self.d[q] = 0.0;
    }

    // ------------------------------------------------------------- shared

    fn ftran(&mut self, q: usize) {
        self.alpha.iter_mut().for_each(|a| *a = 0.0);
        let m = self.m;
        let entries: Vec<(usize, f64)> = self.column(q).collect();
        for (k, a) in entries {
            for p in 0..m {
                let v = self.binv[p * m + k];
                if v != 0.0 {
                    self.alpha[p] += v * a;
                }
            }
        }
    }

    /// Rank-one update of the inverse for a pivot on row `r` of `alpha`.
    fn update_inverse(&mut self, r: usize) {
        let m = self.m;
        let pivot = self.alpha[r];
        self.nz.clear();
        for k in 0..m {
            let v = &mut self.binv[r * m + k];
            if *v != 0.0 {
                *v /= pivot;
                if v.abs() < DROP_TOL {
                    *v = 0.0;
                } else {
                    self.nz.push(k);
                }
            }
        }
        for p in 0..m {
            let f = self.alpha[p];
            if p == r || f == 0.0 {
                continue;
            }
            let (head, tail) = self.binv.split_at_mut(r.max(p) * m);
            let (row_p, row_r) = if p < r {
                (&mut head[p * m..(p + 1) * m], &tail[..m])
            } else {
                (&mut tail[..m], &head[r * m..(r + 1) * m])
            };
            for &k in &self.nz {
                row_p[k] -= f * row_r[k];
            }
        }
        self.updates += 1;
    }

    /// Rebuilds the dense basis inverse by Gauss-Jordan elimination.
    fn refactor(&mut self) -> Result<(), String> {
        let m = self.m;
        self.updates = 0;
        if m == 0 {
            return Ok(());
        }
        let mut a = vec![0.0; m * m];
        let mut col_nnz = vec![0usize; m];
        for p in 0..m {
            for (i, v) in self.column(self.basis[p]) {
                a[i * m + p] = v;
                col_nnz[p] += 1;
            }
        }
        let mut e = vec![0.0; m * m];
        for i in 0..m {
            e[i * m + i] = 1.0;
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&c| (col_nnz[c], c));
        let mut row_used = vec![false; m];
        let mut pivot_row = vec![0usize; m];
        let mut nz_a = Vec::new();
        let mut nz_e = Vec::new();
        for &c in &order {
            let mut pr = usize::MAX;
            let mut best = 0.0;
            for r in 0..m {
                if !row_used[r] {
                    let v = a[r * m + c].abs();
                    if v > best {
                        best = v;
                        pr = r;
                    }
                }
            }
            if best < 1e-11 {
                return Err(format!("singular basis at column {c}"));
            }
            row_used[pr] = true;
            pivot_row[c] = pr;
            let inv = 1.0 / a[pr * m + c];
            nz_a.clear();
            nz_e.clear();
            for k in 0..m {
                if a[pr * m + k] != 0.0 {
                    a[pr * m + k] *= inv;
                    nz_a.push(k);
                }
                if e[pr * m + k] != 0.0 {
                    e[pr * m + k] *= inv;
                    nz_e.push(k);
                }
            }
            for r in 0..m {
                if r == pr {
                    continue;
                }
                let f = a[r * m + c];
                if f == 0.0 {
                    continue;
                }
                for &k in &nz_a {
                    a[r * m + k] -= f * a[pr * m + k];
                }
                a[r * m + c] = 0.0;
                for &k in &nz_e {
                    e[r * m + k] -= f * e[pr * m + k];
                }
            }
        }
        for c in 0..m {
            let pr = pivot_row[c];
            self.binv[c * m..(c + 1) * m].copy_from_slice(&e[pr * m..(pr + 1) * m]);
        }
        for v in self.binv.iter_mut() {
            if v.abs() < DROP_TOL {
                *v = 0.0;
            }
        }
        Ok(())
    }

    fn recompute_primal(&mut self) {
        let m = self.m;
        let mut w = self.rhs.clone();
        for j in 0..self.n + self.m {
            if self.is_basic(j) || self.x[j] == 0.0 {
                continue;
            }
            let xj = self.x[j];
            for (i, a) in self.column(j) {
                w[i] -= a * xj;
            }
        }
        for p in 0..m {
            let row = &self.binv[p * m..(p + 1) * m];
            let v: f64 = row.iter().zip(&w).map(|(b, wi)| b * wi).sum();
            self.x[self.basis[p]] = v;
        }
    }

    fn recompute_duals(&mut self) {
        let m = self.m;
        let mut y = vec![0.0; m];
        for p in 0..m {
            let c = self.cost[self.basis[p]];
            if c == 0.0 {
                continue;
            }
            for (k, yk) in y.iter_mut().enumerate() {
                *yk += c * self.binv[p * m + k];
            }
        }
        for j in 0..self.n + self.m {
            if self.is_basic(j) {
                self.d[j] = 0.0;
                continue;
            }
            let dot: f64 = self.column(j).map(|(i, a)| y[i] * a).sum();
            self.d[j] = self.cost[j] - dot;
        }
    }
}

enum ColumnIter<'a> {
    Structural(std::slice::Iter<'a, (usize, f64)>),
    Unit(Option<(usize, f64)>),
}

impl Iterator for ColumnIter<'_> {
    type Item = (usize, f64);

    fn next(&mut self) -> Option<(usize, f64)> {
        match self {
            ColumnIter::Structural(it) => it.next().copied(),
            ColumnIter::Unit(e) => e.take(),
        }
    }
}
