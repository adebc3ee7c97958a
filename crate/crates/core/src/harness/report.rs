//! Complexity table over the trials the basic LP failed, i.e. the inputs
//! on which LP-FC actually does extra work.

use std::fmt;

use super::TrialRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityRow {
    pub sigma: f64,
    pub ebn0_db: f64,
    pub trials: usize,
    /// Trials whose basic LP failed; the averages below run over these.
    pub population: usize,
    pub mean_lps: f64,
    pub basic_nnz_mean: f64,
    pub basic_nnz_max: usize,
    pub lpfc_nnz_mean: f64,
    pub lpfc_nnz_max: usize,
    /// Mean `(rows, cols)`.
    pub basic_dim_mean: (f64, f64),
    pub lpfc_dim_mean: (f64, f64),
}

impl ComplexityRow {
    /// Relative growth of mean nonzeros from the basic to the final LP.
    pub fn nnz_growth(&self) -> f64 {
        if self.basic_nnz_mean > 0.0 {
            self.lpfc_nnz_mean / self.basic_nnz_mean - 1.0
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityTable {
    pub rows: Vec<ComplexityRow>,
}

pub fn complexity_report(records: &[TrialRecord]) -> ComplexityTable {
    let mut rows: Vec<ComplexityRow> = Vec::new();
    let mut sums: Vec<[f64; 7]> = Vec::new();
    for r in records {
        let idx = match rows.iter().position(|row| row.sigma.to_bits() == r.sigma.to_bits()) {
            Some(i) => i,
            None => {
                rows.push(ComplexityRow {
                    sigma: r.sigma,
                    ebn0_db: r.ebn0_db,
                    trials: 0,
                    population: 0,
                    mean_lps: 0.0,
                    basic_nnz_mean: 0.0,
                    basic_nnz_max: 0,
                    lpfc_nnz_mean: 0.0,
                    lpfc_nnz_max: 0,
                    basic_dim_mean: (0.0, 0.0),
                    lpfc_dim_mean: (0.0, 0.0),
                });
                sums.push([0.0; 7]);
                rows.len() - 1
            }
        };
        let row = &mut rows[idx];
        row.trials += 1;
        if r.basic_ok {
            continue;
        }
        row.population += 1;
        row.basic_nnz_max = row.basic_nnz_max.max(r.base.nonzeros);
        row.lpfc_nnz_max = row.lpfc_nnz_max.max(r.last.nonzeros);
        let s = &mut sums[idx];
        for (acc, v) in s.iter_mut().zip([
            r.lpfc_iters,
            r.base.nonzeros,
            r.last.nonzeros,
            r.base.rows,
            r.base.cols,
            r.last.rows,
            r.last.cols,
        ]) {
            *acc += v as f64;
        }
    }
    for (row, s) in rows.iter_mut().zip(&sums) {
        if row.population == 0 {
            continue;
        }
        let k = row.population as f64;
        row.mean_lps = s[0] / k;
        row.basic_nnz_mean = s[1] / k;
        row.lpfc_nnz_mean = s[2] / k;
        row.basic_dim_mean = (s[3] / k, s[4] / k);
        row.lpfc_dim_mean = (s[5] / k, s[6] / k);
    }
    ComplexityTable { rows }
}

impl fmt::Display for ComplexityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>6} {:>7} {:>7} {:>6} | {:>10} {:>8} {:>17} | {:>7} {:>10} {:>8} {:>17} {:>7}",
            "sigma", "Eb/N0", "trials", "fails", "LP nnz", "max", "LP dim", "LPs", "LP-FC nnz", "max", "LP-FC dim", "growth"
        )?;
        for r in &self.rows {
            if r.population == 0 {
                writeln!(f, "{:>6.3} {:>7.2} {:>7} {:>6} | no basic failures", r.sigma, r.ebn0_db, r.trials, 0)?;
                continue;
            }
            writeln!(
                f,
                "{:>6.3} {:>7.2} {:>7} {:>6} | {:>10.1} {:>8} {:>17} | {:>7.2} {:>10.1} {:>8} {:>17} {:>6.1}%",
                r.sigma,
                r.ebn0_db,
                r.trials,
                r.population,
                r.basic_nnz_mean,
                r.basic_nnz_max,
                format!("{:.1} x {:.1}", r.basic_dim_mean.0, r.basic_dim_mean.1),
                r.mean_lps,
                r.lpfc_nnz_mean,
                r.lpfc_nnz_max,
                format!("{:.1} x {:.1}", r.lpfc_dim_mean.0, r.lpfc_dim_mean.1),
                100.0 * r.nnz_growth()
            )?;
        }
        Ok(())
    }
}
