//! The adaptive decoder: solve the relaxation, and while the optimum is
//! fractional add the triangles of its shortest frustrated cycle and solve
//! again.

use crate::channel::LlrVector;
use crate::code::TannerGraph;
use crate::constraints::{bind_two_cycle, cuts_off, emit_constraints, triangulate};
use crate::decoder::{build_basic_lp, classify, Assignment, BeliefSolution, DecodeTolerances, DecodingProgram};
use crate::error::{Error, Result};
use crate::frustration::{build_implication_graph, find_frustrated_cycle, project_to_variables, CycleKind, FrustratedCycle};
use crate::lp::{Basis, LpSolver, LpStats, RevisedSimplex};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpfcConfig {
    /// Maximum number of LP solves.
    pub max_iterations: usize,
    /// Mass above which a pairwise configuration counts as supported.
    pub eps: f64,
    pub tolerances: DecodeTolerances,
    /// Re-solve from the previous optimal basis instead of from scratch.
    pub warm_start: bool,
}

impl Default for LpfcConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            eps: 1e-6,
            tolerances: DecodeTolerances::default(),
            warm_start: true,
        }
    }
}

impl LpfcConfig {
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.eps > 0.0 && t.integrality > 0.0 && t.lp.feasibility > 0.0 && t.lp.optimality > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Success(Vec<u8>),
    /// An augmentation did not cut off the previous optimum.
    FractionalStall,
    /// Fractional optimum without any frustrated or quasi-frustrated cycle.
    NoCycleFound,
    IterationCap,
    SolverFailure { iteration: usize, detail: String },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Success(_) => "success",
            Verdict::FractionalStall => "fractional-stall",
            Verdict::NoCycleFound => "no-cycle",
            Verdict::IterationCap => "iteration-cap",
            Verdict::SolverFailure { .. } => "solver-failure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleSummary {
    pub kind: CycleKind,
    pub pivot: usize,
    /// Implication hops of the witness.
    pub hops: usize,
    /// Distinct variables on the projected cycle.
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub stats: LpStats,
    pub objective: f64,
    /// The cycle added after this solve, if any.
    pub cycle: Option<CycleSummary>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub verdict: Verdict,
    /// Number of LP solves.
    pub iterations: usize,
    pub per_iteration: Vec<IterationRecord>,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self.verdict, Verdict::Success(_))
    }

    pub fn is_all_zero(&self) -> bool {
        matches!(&self.verdict, Verdict::Success(bits) if bits.iter().all(|&b| b == 0))
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.per_iteration.iter().filter_map(|r| r.cycle.map(|c| c.length)).collect()
    }

    pub fn final_stats(&self) -> LpStats {
        self.per_iteration.last().map(|r| r.stats).unwrap_or_default()
    }
}

/// What one call to [`LpfcSession::iterate`] did.
#[derive(Clone, Debug, PartialEq)]
pub enum Progress {
    /// The LP was tightened and should be solved again.
    Augmented,
    Done(Verdict),
}

/// One adaptive decode, advanced a solve at a time.
pub struct LpfcSession<'a> {
    graph: &'a TannerGraph,
    cfg: LpfcConfig,
    program: DecodingProgram,
    basis: Option<Basis>,
    records: Vec<IterationRecord>,
    first_assignment: Option<Assignment>,
    last_beliefs: Option<BeliefSolution>,
    last_values: Vec<f64>,
    last_cycle: Option<FrustratedCycle>,
    verdict: Option<Verdict>,
}

impl<'a> LpfcSession<'a> {
    pub fn new(graph: &'a TannerGraph, llr: &LlrVector, cfg: LpfcConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            graph,
            cfg,
            program: build_basic_lp(graph, llr)?,
            basis: None,
            records: Vec::new(),
            first_assignment: None,
            last_beliefs: None,
            last_values: Vec::new(),
            last_cycle: None,
            verdict: None,
        })
    }

    pub fn program(&self) -> &DecodingProgram {
        &self.program
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    /// Assignment read from the first (basic) solve.
    pub fn basic_assignment(&self) -> Option<&Assignment> {
        self.first_assignment.as_ref()
    }

    /// Beliefs of the most recent optimum.
    pub fn last_beliefs(&self) -> Option<&BeliefSolution> {
        self.last_beliefs.as_ref()
    }

    /// Column values of the most recent optimum.
    pub fn last_values(&self) -> &[f64] {
        &self.last_values
    }

    /// Cycle added by the most recent augmentation.
    pub fn last_cycle(&self) -> Option<&FrustratedCycle> {
        self.last_cycle.as_ref()
    }

    fn finish(&mut self, v: Verdict) -> Result<Progress> {
        self.verdict = Some(v.clone());
        Ok(Progress::Done(v))
    }

    /// Solves the current LP once and, if the optimum is fractional,
    /// augments it along the shortest frustrated cycle.
    pub fn iterate(&mut self) -> Result<Progress> {
        if let Some(v) = &self.verdict {
            return Ok(Progress::Done(v.clone()));
        }
        let tols = self.cfg.tolerances;
        let start = if self.cfg.warm_start { self.basis.as_ref() } else { None };
        let sol = RevisedSimplex::default().solve_from(&self.program.lp, &tols.lp, start);
        let iteration = self.records.len() + 1;
        if !sol.is_optimal() {
            return self.finish(Verdict::SolverFailure {
                iteration,
                detail: format!("{:?}: {}", sol.status, sol.diagnostic.unwrap_or_default()),
            });
        }
        let mut stats = self.program.lp.stats();
        stats.solve_iterations = sol.iterations;
        self.records.push(IterationRecord {
            stats,
            objective: sol.objective_value,
            cycle: None,
        });
        let beliefs = BeliefSolution::from_values(&self.program.layout, &sol.values, sol.objective_value);
        let assignment = classify(self.graph, &beliefs, tols.integrality)?;
        if self.first_assignment.is_none() {
            self.first_assignment = Some(assignment.clone());
        }
        self.last_values = sol.values;
        self.basis = sol.basis;
        if let Assignment::Integral(bits) = assignment {
            self.last_beliefs = Some(beliefs);
            return self.finish(Verdict::Success(bits));
        }
        if iteration >= self.cfg.max_iterations {
            self.last_beliefs = Some(beliefs);
            return self.finish(Verdict::IterationCap);
        }

        let g = build_implication_graph(&beliefs, self.cfg.eps);
        let cycle = find_frustrated_cycle(&g).and_then(|fc| project_to_variables(fc).ok());
        self.last_beliefs = Some(beliefs);
        let Some(fc) = cycle else {
            return self.finish(Verdict::NoCycleFound);
        };
        self.records.last_mut().unwrap().cycle = Some(CycleSummary {
            kind: fc.kind,
            pivot: fc.pivot,
            hops: fc.score(),
            length: fc.variable_cycle.len(),
        });
        let aug = if fc.variable_cycle.len() == 2 {
            let c = &fc.variable_cycle;
            match bind_two_cycle((c[0], c[1]), (fc.edge_sources[0], fc.edge_sources[1]), &self.program) {
                Ok(aug) => aug,
                Err(Error::NoProgress(_)) => return self.finish(Verdict::FractionalStall),
                Err(e) => return Err(e),
            }
        } else {
            let plan = triangulate(&fc.variable_cycle, &fc.edge_sources, Some(fc.pivot))?;
            emit_constraints(&plan, &self.program)?
        };
        self.last_cycle = Some(fc);
        let result = self.program.apply(aug)?;
        if !cuts_off(&self.program.lp, &result, &self.last_values, &tols.lp) {
            return self.finish(Verdict::FractionalStall);
        }
        Ok(Progress::Augmented)
    }

    /// Iterates to a verdict.
    pub fn run(mut self) -> Result<DecodeOutcome> {
        loop {
            if let Progress::Done(verdict) = self.iterate()? {
                return Ok(DecodeOutcome {
                    verdict,
                    iterations: self.records.len(),
                    per_iteration: self.records,
                });
            }
        }
    }
}

pub fn decode_lpfc(graph: &TannerGraph, llr: &LlrVector, cfg: &LpfcConfig) -> Result<DecodeOutcome> {
    LpfcSession::new(graph, llr, *cfg)?.run()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairedOutcome {
    pub basic: Assignment,
    pub lpfc: DecodeOutcome,
}

/// Both decoders on the same input. The first LP-FC solve is the basic LP,
/// so its classification is reported as the basic decoder's result.
pub fn compare_paired(graph: &TannerGraph, llr: &LlrVector, cfg: &LpfcConfig) -> Result<PairedOutcome> {
    let mut session = LpfcSession::new(graph, llr, *cfg)?;
    let first = session.iterate()?;
    let Some(basic) = session.basic_assignment().cloned() else {
        let detail = match first {
            Progress::Done(Verdict::SolverFailure { detail, .. }) => detail,
            _ => String::new(),
        };
        return Err(Error::Solver { iteration: 1, detail });
    };
    let lpfc = session.run()?;
    Ok(PairedOutcome { basic, lpfc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_llr;
    use crate::code::sample_regular;
    use crate::decoder::decode_basic;

    #[test]
    fn positive_llrs_succeed_at_once() {
        let g = TannerGraph::hamming74();
        let llr = LlrVector::new(vec![0.5, 1.0, 2.0, 0.3, 0.8, 1.1, 0.2]).unwrap();
        let out = decode_lpfc(&g, &llr, &LpfcConfig::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Success(vec![0; 7]));
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn invalid_config() {
        let g = TannerGraph::hamming74();
        let llr = LlrVector::new(vec![1.0; 7]).unwrap();
        let cfg = LpfcConfig {
            max_iterations: 0,
            ..Default::default()
        };
        assert!(matches!(decode_lpfc(&g, &llr, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn paired_runs_agree_with_basic_and_tighten() {
        let cfg = LpfcConfig::default();
        let mut fractional = 0;
        for t in 0..40u64 {
            let g = sample_regular(60, 3, 4, t).unwrap();
            let llr = sample_llr(60, 1.1, 500 + t).unwrap();
            let p = compare_paired(&g, &llr, &cfg).unwrap();
            let basic = decode_basic(&g, &llr, &cfg.tolerances).unwrap();
            assert_eq!(basic.assignment, p.basic);
            if let Assignment::Integral(bits) = &p.basic {
                assert_eq!(p.lpfc.verdict, Verdict::Success(bits.clone()));
                assert_eq!(p.lpfc.iterations, 1);
            } else {
                fractional += 1;
            }
            let recs = &p.lpfc.per_iteration;
            for w in recs.windows(2) {
                assert!(w[1].objective >= w[0].objective - 1e-7);
                assert!(w[1].stats.nonzeros > w[0].stats.nonzeros);
            }
            if let Verdict::Success(bits) = &p.lpfc.verdict {
                assert!(g.is_codeword(bits));
            }
        }
        assert!(fractional > 0);
    }
}
