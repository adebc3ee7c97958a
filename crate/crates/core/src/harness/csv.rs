//! Plain CSV for trial records and WER summaries. Floats are written in
//! shortest round-trip form so re-reading a file loses nothing.

use std::fmt::Write;

use super::{TrialRecord, WerPoint};
use crate::error::{Error, Result};
use crate::lp::LpStats;

pub const TRIALS_HEADER: &str = "sigma,ebn0_db,trial,seed,basic_ok,lpfc_ok,lpfc_iters,base_nnz,final_nnz,base_rows,base_cols,final_rows,final_cols,cycle_lengths";
pub const WER_HEADER: &str = "sigma,ebn0_db,trials,basic_fail,lpfc_fail,basic_wer,lpfc_wer";

pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(TRIALS_HEADER);
    out.push('\n');
    for r in records {
        let cycles: Vec<String> = r.cycle_lengths.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.sigma,
            r.ebn0_db,
            r.trial,
            r.seed,
            u8::from(r.basic_ok),
            u8::from(r.lpfc_ok),
            r.lpfc_iters,
            r.base.nonzeros,
            r.last.nonzeros,
            r.base.rows,
            r.base.cols,
            r.last.rows,
            r.last.cols,
            cycles.join(";")
        )
        .unwrap();
    }
    out
}

pub fn wer_csv(points: &[WerPoint]) -> String {
    let mut out = String::from(WER_HEADER);
    out.push('\n');
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.sigma, p.ebn0_db, p.trials, p.basic_fail, p.lpfc_fail, p.basic_wer, p.lpfc_wer
        )
        .unwrap();
    }
    out
}

fn fields<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        _ => return Err(Error::Config(format!("expected CSV header {header:?}"))),
    }
    let width = header.split(',').count();
    lines
        .map(|(i, l)| {
            let f: Vec<&str> = l.trim().split(',').collect();
            if f.len() == width {
                Ok((i + 1, f))
            } else {
                Err(Error::Config(format!("line {}: expected {width} fields, found {}", i + 1, f.len())))
            }
        })
        .collect()
}

fn num<T: std::str::FromStr>(line: usize, name: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Config(format!("line {line}: bad {name} {s:?}")))
}

fn flag(line: usize, name: &str, s: &str) -> Result<bool> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(Error::Config(format!("line {line}: bad {name} {s:?}"))),
    }
}

pub fn parse_trials_csv(text: &str) -> Result<Vec<TrialRecord>> {
    fields(text, TRIALS_HEADER)?
        .into_iter()
        .map(|(line, f)| {
            let stats = |nnz: &str, rows: &str, cols: &str| -> Result<LpStats> {
                Ok(LpStats {
                    rows: num(line, "rows", rows)?,
                    cols: num(line, "cols", cols)?,
                    nonzeros: num(line, "nnz", nnz)?,
                    solve_iterations: 0,
                })
            };
            let cycle_lengths = if f[13].is_empty() {
                Vec::new()
            } else {
                f[13]
                    .split(';')
                    .map(|c| num(line, "cycle length", c))
                    .collect::<Result<_>>()?
            };
            Ok(TrialRecord {
                sigma: num(line, "sigma", f[0])?,
                ebn0_db: num(line, "ebn0_db", f[1])?,
                trial: num(line, "trial", f[2])?,
                seed: num(line, "seed", f[3])?,
                basic_ok: flag(line, "basic_ok", f[4])?,
                lpfc_ok: flag(line, "lpfc_ok", f[5])?,
                lpfc_iters: num(line, "lpfc_iters", f[6])?,
                base: stats(f[7], f[9], f[10])?,
                last: stats(f[8], f[11], f[12])?,
                cycle_lengths,
                lpfc_verdict: None,
                timing: None,
            })
        })
        .collect()
}

pub fn parse_wer_csv(text: &str) -> Result<Vec<WerPoint>> {
    fields(text, WER_HEADER)?
        .into_iter()
        .map(|(line, f)| {
            Ok(WerPoint {
                sigma: num(line, "sigma", f[0])?,
                ebn0_db: num(line, "ebn0_db", f[1])?,
                trials: num(line, "trials", f[2])?,
                basic_fail: num(line, "basic_fail", f[3])?,
                lpfc_fail: num(line, "lpfc_fail", f[4])?,
                basic_wer: num(line, "basic_wer", f[5])?,
                lpfc_wer: num(line, "lpfc_wer", f[6])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::aggregate;

    fn record(trial: usize, sigma: f64, basic_ok: bool, lpfc_ok: bool, cycles: Vec<usize>) -> TrialRecord {
        let base = LpStats { rows: 10, cols: 20, nonzeros: 30, solve_iterations: 0 };
        TrialRecord {
            sigma,
            ebn0_db: 10.0 * (1.0 / (0.5 * sigma * sigma)).log10(),
            trial,
            seed: u64::MAX - trial as u64,
            basic_ok,
            lpfc_ok,
            lpfc_iters: 1 + cycles.len(),
            base,
            last: LpStats { nonzeros: 30 + 7 * cycles.len(), ..base },
            cycle_lengths: cycles,
            lpfc_verdict: None,
            timing: None,
        }
    }

    #[test]
    fn trials_round_trip() {
        let recs = vec![
            record(0, 0.1 + 0.2, true, true, vec![]),
            record(1, 0.1 + 0.2, false, true, vec![3, 4]),
            record(0, 1.1, false, false, vec![5]),
        ];
        let text = trials_csv(&recs);
        assert!(text.starts_with(TRIALS_HEADER));
        assert!(text.contains(",3;4\n"));
        let back = parse_trials_csv(&text).unwrap();
        assert_eq!(back, recs);
        assert_eq!(aggregate(&back), aggregate(&recs));
        let points = aggregate(&recs);
        assert_eq!(parse_wer_csv(&wer_csv(&points)).unwrap(), points);
        assert_eq!(points[0].basic_wer, 0.5);
    }

    #[test]
    fn malformed_input() {
        assert!(parse_trials_csv("a,b\n").is_err());
        let short = format!("{TRIALS_HEADER}\n1,2,3\n");
        assert!(parse_trials_csv(&short).is_err());
        let bad_flag = format!("{TRIALS_HEADER}\n1,2,0,0,2,1,1,3,3,1,1,1,1,\n");
        assert!(parse_trials_csv(&bad_flag).is_err());
        assert_eq!(parse_trials_csv(&format!("{TRIALS_HEADER}\n")).unwrap(), vec![]);
    }
}
