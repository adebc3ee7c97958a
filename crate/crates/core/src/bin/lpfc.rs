use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lpfc::channel::{sample_llr, LlrVector};
use lpfc::code::write_alist;
use lpfc::decoder::{decode_basic, Assignment};
use lpfc::harness::{
    complexity_report, parse_trials_csv, run_sweep, trials_csv, wer_csv, aggregate, CodeSpec, RunConfig, WerPoint,
};
use lpfc::lpfc::{LpfcConfig, LpfcSession, Progress, Verdict};
use lpfc::Result;

#[derive(Parser)]
#[command(version, about = "LP decoding of LDPC codes with frustrated-cycle tightening")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a parity-check matrix in alist format.
    GenCode {
        /// tanner155 or ensemble:N:DL:DR
        #[arg(long, default_value = "ensemble:60:3:4")]
        code: CodeSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode one LLR vector (one value per line).
    Decode {
        #[arg(long)]
        code: CodeSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        llr: PathBuf,
        /// basic or lpfc
        #[arg(long, default_value = "lpfc")]
        decoder: String,
        #[arg(long, default_value_t = 50)]
        max_iterations: usize,
    },
    /// Run a Monte Carlo sweep described by a key=value config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `out` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complexity and WER tables from a trial CSV.
    Report {
        #[arg(long)]
        trials: PathBuf,
    },
    /// Both decoders on one noise draw, with the LP-FC trace.
    Compare {
        #[arg(long, default_value = "ensemble:60:3:4")]
        code: CodeSpec,
        #[arg(long, default_value_t = 0)]
        code_seed: u64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        max_iterations: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::GenCode { code, seed, out } => {
            let text = write_alist(&code.build(seed)?);
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
        Cmd::Decode { code, seed, llr, decoder, max_iterations } => {
            let graph = code.build(seed)?;
            let values = std::fs::read_to_string(&llr)?
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|_| lpfc::Error::Config(format!("bad llr {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let llr = LlrVector::new(values)?;
            let cfg = LpfcConfig { max_iterations, ..Default::default() };
            match decoder.as_str() {
                "basic" => {
                    let d = decode_basic(&graph, &llr, &cfg.tolerances)?;
                    println!("objective {}", d.beliefs.objective_value);
                    match d.assignment {
                        Assignment::Integral(bits) => println!("integral {}", bitstring(&bits)),
                        Assignment::Fractional(idx) => println!("fractional at {idx:?}"),
                    }
                }
                "lpfc" => {
                    let out = LpfcSession::new(&graph, &llr, cfg)?.run()?;
                    println!("verdict {} after {} LPs", out.verdict.name(), out.iterations);
                    if let Some(last) = out.per_iteration.last() {
                        println!("objective {}", last.objective);
                    }
                    if let Verdict::Success(bits) = &out.verdict {
                        println!("integral {}", bitstring(bits));
                    }
                }
                other => return Err(lpfc::Error::Config(format!("unknown decoder {other:?}"))),
            }
        }
        Cmd::Sweep { config, out } => {
            let mut cfg = RunConfig::from_file(&config)?;
            if out.is_some() {
                cfg.out = out;
            }
            let sweep = run_sweep(&cfg)?;
            print_wer(&sweep.points);
            if let Some(path) = &cfg.out {
                std::fs::write(path, trials_csv(&sweep.records))?;
                let wer = wer_path(path);
                std::fs::write(&wer, wer_csv(&sweep.points))?;
                println!("wrote {} and {}", path.display(), wer.display());
            }
        }
        Cmd::Report { trials } => {
            let records = parse_trials_csv(&std::fs::read_to_string(trials)?)?;
            print_wer(&aggregate(&records));
            println!();
            print!("{}", complexity_report(&records));
        }
        Cmd::Compare { code, code_seed, sigma, seed, max_iterations } => {
            let graph = code.build(code_seed)?;
            let llr = sample_llr(graph.n(), sigma, seed)?;
            let cfg = LpfcConfig { max_iterations, ..Default::default() };
            let mut session = LpfcSession::new(&graph, &llr, cfg)?;
            loop {
                let progress = session.iterate()?;
                if let Some(r) = session.records().last() {
                    let s = r.stats;
                    print!(
                        "LP {:>3}: objective {:.9} rows {} cols {} nnz {} pivots {}",
                        session.records().len(), r.objective, s.rows, s.cols, s.nonzeros, s.solve_iterations
                    );
                    match r.cycle {
                        Some(c) => println!(" -> {:?} cycle of {} vars (pivot {}, {} hops)", c.kind, c.length, c.pivot, c.hops),
                        None => println!(),
                    }
                }
                if session.records().len() == 1 {
                    match session.basic_assignment() {
                        Some(Assignment::Integral(bits)) => println!("basic LP: integral, all-zero = {}", bits.iter().all(|&b| b == 0)),
                        Some(Assignment::Fractional(idx)) => println!("basic LP: fractional at {} positions", idx.len()),
                        None => println!("basic LP: no solution"),
                    }
                }
                if let Progress::Done(v) = progress {
                    let ok = matches!(&v, Verdict::Success(b) if b.iter().all(|&x| x == 0));
                    println!("LP-FC: {} ({}), all-zero = {ok}", v.name(), session.records().len());
                    break;
                }
            }
        }
    }
    Ok(())
}

fn bitstring(bits: &[u8]) -> String {
    bits.iter().map(|b| char::from(b'0' + b)).collect()
}

fn wer_path(trials: &Path) -> PathBuf {
    let stem = trials.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    trials.with_file_name(format!("{stem}.wer.csv"))
}

fn print_wer(points: &[WerPoint]) {
    println!("{:>7} {:>7} {:>7} {:>10} {:>10} {:>10} {:>10}", "sigma", "Eb/N0", "trials", "LP fail", "LP-FC fail", "LP WER", "LP-FC WER");
    for p in points {
        println!(
            "{:>7.3} {:>7.2} {:>7} {:>10} {:>10} {:>10.2e} {:>10.2e}",
            p.sigma, p.ebn0_db, p.trials, p.basic_fail, p.lpfc_fail, p.basic_wer, p.lpfc_wer
        );
    }
}
