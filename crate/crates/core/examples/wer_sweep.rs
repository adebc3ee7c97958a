//! A small paired WER sweep over fresh (3,4) codes with the complexity
//! table and CSV output.

use lpfc::harness::{complexity_report, run_sweep, trials_csv, wer_csv, CodeSpec, RunConfig};

fn main() -> lpfc::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let cfg = RunConfig::new(
        CodeSpec::Ensemble { n: 60, dl: 3, dr: 4, fixed: false },
        vec![0.8, 0.9, 1.0, 1.1],
        trials,
        2024,
    );
    let sweep = run_sweep(&cfg)?;
    print!("{}", wer_csv(&sweep.points));
    println!();
    print!("{}", complexity_report(&sweep.records));
    let csv = trials_csv(&sweep.records);
    println!("\n{} trial rows, first: {}", sweep.records.len(), csv.lines().nth(1).unwrap_or(""));
    Ok(())
}
