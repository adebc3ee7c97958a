//! Oracles shared by the integration tests. None of them go through the
//! code paths they check.

#![allow(dead_code)]

use lpfc::code::TannerGraph;
use lpfc::decoder::{BeliefLayout, BeliefSolution};
use lpfc::frustration::{CycleKind, FrustratedCycle};
use lpfc::lp::{LinearProgram, LpSolver, LpStatus, RevisedSimplex, SparseRow, Tolerances, VarSpec};

pub const SUPPORT_EPS: f64 = 1e-6;

/// Outcome of enumerating every assignment of the variables on a witness
/// under the pairwise supports of its source cliques.
#[derive(Debug, PartialEq, Eq)]
pub enum CspVerdict {
    Unsatisfiable,
    /// Every satisfying assignment gives the pivot this value.
    Forces(u8),
    /// Both pivot values are reachable.
    Free,
}

pub fn witness_csp(b: &BeliefSolution, fc: &FrustratedCycle, eps: f64) -> CspVerdict {
    let lit_var = |l: usize| l / 2;
    let mut vars: Vec<usize> = fc.literal_path.iter().map(|&l| lit_var(l)).collect();
    vars.sort_unstable();
    vars.dedup();
    assert!(vars.len() <= 24, "witness too long to enumerate");
    let pos = |v: usize| vars.binary_search(&v).unwrap();

    // allowed (x_u, x_v) pairs per hop, read straight off the clique table
    let mut constraints = Vec::new();
    for (t, &src) in fc.literal_sources.iter().enumerate() {
        let (u, v) = (lit_var(fc.literal_path[t]), lit_var(fc.literal_path[t + 1]));
        let table = &b.cliques[src];
        let pu = table.id.members().iter().position(|&m| m == u).expect("u in source clique");
        let pv = table.id.members().iter().position(|&m| m == v).expect("v in source clique");
        let mut mass = [0.0; 4];
        for (&mask, &m) in table.configs.iter().zip(&table.values) {
            mass[(2 * ((mask >> pu) & 1) + ((mask >> pv) & 1)) as usize] += m;
        }
        constraints.push((pos(u), pos(v), mass.map(|m| m > eps)));
    }

    let pivot = pos(fc.pivot);
    let mut reachable = [false; 2];
    for a in 0u32..1 << vars.len() {
        let x = |p: usize| ((a >> p) & 1) as usize;
        if constraints.iter().all(|&(pu, pv, ok)| ok[2 * x(pu) + x(pv)]) {
            reachable[x(pivot)] = true;
        }
    }
    match reachable {
        [false, false] => CspVerdict::Unsatisfiable,
        [true, false] => CspVerdict::Forces(0),
        [false, true] => CspVerdict::Forces(1),
        [true, true] => CspVerdict::Free,
    }
}

/// Whether a witness passes the CSP check for its kind.
pub fn witness_is_sound(b: &BeliefSolution, fc: &FrustratedCycle, eps: f64) -> Result<(), String> {
    let verdict = witness_csp(b, fc, eps);
    match fc.kind {
        CycleKind::True if verdict == CspVerdict::Unsatisfiable => Ok(()),
        CycleKind::Quasi => {
            let forced = fc.forced_value().unwrap();
            let ok = matches!(verdict, CspVerdict::Unsatisfiable) || verdict == CspVerdict::Forces(forced);
            let belief = b.var_beliefs[fc.pivot][forced as usize];
            if !ok {
                Err(format!("quasi witness at {} does not force {forced}: {verdict:?}", fc.pivot))
            } else if belief > 1.0 - 1e-6 {
                Err(format!("pivot {} already has b({forced}) = {belief}", fc.pivot))
            } else {
                Ok(())
            }
        }
        CycleKind::True => Err(format!("true witness at {} is satisfiable: {verdict:?}", fc.pivot)),
    }
}

/// Point mass of `word` on every belief table of `layout`, or `None` when
/// some clique has no column for the word's local configuration.
pub fn lift_word(layout: &BeliefLayout, num_vars: usize, word: &[u8]) -> Option<Vec<f64>> {
    let mut x = vec![0.0; num_vars];
    for (i, &w) in word.iter().enumerate() {
        x[2 * i + w as usize] = 1.0;
    }
    for entry in layout.cliques() {
        let mask: u32 = entry
            .id
            .members()
            .iter()
            .enumerate()
            .map(|(t, &v)| u32::from(word[v]) << t)
            .sum();
        let k = entry.configs.iter().position(|&c| c == mask)?;
        x[entry.first_col + k] = 1.0;
    }
    Some(x)
}

/// Largest equality residual and bound violation of `x`, computed row by row.
pub fn violation(lp: &LinearProgram, x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for row in lp.rows() {
        let act: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
        worst = worst.max((act - row.rhs).abs());
    }
    for j in 0..lp.num_vars() {
        worst = worst.max(lp.lower()[j] - x[j]).max(x[j] - lp.upper()[j]);
    }
    worst
}

/// True when no values of the columns from `first_new_var` on satisfy rows
/// `first_new_row..` with the older columns held at `previous`. Solved with
/// the two-phase primal simplex.
pub fn previous_point_cut_off(lp: &LinearProgram, first_new_var: usize, first_new_row: usize, previous: &[f64]) -> bool {
    assert_eq!(previous.len(), first_new_var);
    let mut sub = LinearProgram::new();
    for j in first_new_var..lp.num_vars() {
        sub.add_var(VarSpec { cost: 0.0, lower: lp.lower()[j], upper: lp.upper()[j] }).unwrap();
    }
    for row in &lp.rows()[first_new_row..] {
        let mut rhs = row.rhs;
        let mut coeffs = Vec::new();
        for &(j, a) in &row.coeffs {
            if j < first_new_var {
                rhs -= a * previous[j];
            } else {
                coeffs.push((j - first_new_var, a));
            }
        }
        if coeffs.is_empty() {
            if rhs.abs() > 1e-7 {
                return true;
            }
            continue;
        }
        sub.add_row(SparseRow::new(coeffs, rhs)).unwrap();
    }
    if sub.num_rows() == 0 {
        return false;
    }
    let sol = RevisedSimplex::primal().solve(&sub, &Tolerances::default());
    sol.status == LpStatus::Infeasible
}

/// Every codeword of a small code, by enumeration of all words.
pub fn codewords(g: &TannerGraph) -> Vec<Vec<u8>> {
    let n = g.n();
    assert!(n <= 24);
    (0u32..1 << n)
        .map(|w| (0..n).map(|i| ((w >> i) & 1) as u8).collect::<Vec<u8>>())
        .filter(|w| g.checks_ok(w))
        .collect()
}

trait ChecksOk {
    fn checks_ok(&self, w: &[u8]) -> bool;
}

impl ChecksOk for TannerGraph {
    // parity straight from the member lists
    fn checks_ok(&self, w: &[u8]) -> bool {
        self.check_members()
            .iter()
            .all(|c| c.iter().map(|&i| w[i] as usize).sum::<usize>() % 2 == 0)
    }
}

/// Minimum of `Σ l_i x_i` over an explicit codeword list.
pub fn ml_by_listing(words: &[Vec<u8>], llr: &[f64]) -> (Vec<u8>, f64) {
    let mut best: Option<(Vec<u8>, f64)> = None;
    for w in words {
        let c: f64 = w.iter().zip(llr).map(|(&b, &l)| f64::from(b) * l).sum();
        if best.as_ref().is_none_or(|(_, bc)| c < *bc) {
            best = Some((w.clone(), c));
        }
    }
    best.unwrap()
}

/// What one LP-FC solve produced, as seen from outside the session.
pub struct TracedStep {
    pub objective: f64,
    pub beliefs: BeliefSolution,
    /// Witness added after this solve, with the LP size before it.
    pub cut: Option<TracedCut>,
}

pub struct TracedCut {
    pub cycle: FrustratedCycle,
    pub first_new_var: usize,
    pub first_new_row: usize,
    pub previous: Vec<f64>,
}

pub struct Trace {
    pub steps: Vec<TracedStep>,
    pub verdict: lpfc::lpfc::Verdict,
    /// The final, fully augmented program.
    pub program: lpfc::decoder::DecodingProgram,
}

pub fn traced_decode(g: &TannerGraph, llr: &lpfc::channel::LlrVector, cfg: lpfc::lpfc::LpfcConfig) -> Trace {
    use lpfc::lpfc::{LpfcSession, Progress};
    let mut session = LpfcSession::new(g, llr, cfg).unwrap();
    let mut steps = Vec::new();
    loop {
        let (n0, m0) = (session.program().lp.num_vars(), session.program().lp.num_rows());
        let progress = session.iterate().unwrap();
        let Some(rec) = session.records().get(steps.len()) else {
            let Progress::Done(verdict) = progress else { unreachable!() };
            return Trace { steps, verdict, program: session.program().clone() };
        };
        let objective = rec.objective;
        let beliefs = session.last_beliefs().expect("beliefs after a solve").clone();
        // a stalled augmentation still grows the LP before giving up
        let grew = session.program().lp.num_rows() > m0 || session.program().lp.num_vars() > n0;
        let cut = grew.then(|| TracedCut {
            cycle: session.last_cycle().expect("cycle").clone(),
            first_new_var: n0,
            first_new_row: m0,
            previous: session.last_values().to_vec(),
        });
        steps.push(TracedStep { objective, beliefs, cut });
        if let Progress::Done(verdict) = progress {
            return Trace { steps, verdict, program: session.program().clone() };
        }
    }
}
