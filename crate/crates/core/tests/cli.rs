use std::path::PathBuf;
use std::process::Command;

fn lpfc(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lpfc")).args(args).output().unwrap();
    (
        out.status.success(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lpfc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_code_then_decode() {
    let alist = scratch("code.alist");
    let (ok, _, err) = lpfc(&["gen-code", "--code", "ensemble:20:3:4", "--seed", "3", "--out", alist.to_str().unwrap()]);
    assert!(ok, "{err}");
    let text = std::fs::read_to_string(&alist).unwrap();
    assert!(text.starts_with("20 15\n"));

    let llr = scratch("llr.txt");
    let values: Vec<String> = (0..20).map(|i| format!("{}", 1.0 + i as f64 / 10.0)).collect();
    std::fs::write(&llr, values.join("\n")).unwrap();
    for decoder in ["basic", "lpfc"] {
        let (ok, out, err) = lpfc(&["decode", "--code", alist.to_str().unwrap(), "--llr", llr.to_str().unwrap(), "--decoder", decoder]);
        assert!(ok, "{err}");
        assert!(out.contains(&format!("integral {}", "0".repeat(20))), "{out}");
    }
    std::fs::write(&llr, "1.0\n2.0\n").unwrap();
    let (ok, _, err) = lpfc(&["decode", "--code", alist.to_str().unwrap(), "--llr", llr.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains("does not match"), "{err}");
}

#[test]
fn sweep_report_and_compare() {
    let csv = scratch("sweep.csv");
    let cfg = scratch("sweep.cfg");
    std::fs::write(
        &cfg,
        format!("code.kind = ensemble\ncode.n = 20\nsigma.list = 0.9, 1.2\ntrials = 6\nseed = 4\nout = {}\n", csv.display()),
    )
    .unwrap();
    let (ok, out, err) = lpfc(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(ok, "{err}");
    assert!(out.contains("LP-FC WER"));
    let trials = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(trials.lines().count(), 13);
    assert!(trials.starts_with(lpfc::harness::TRIALS_HEADER));
    let wer = std::fs::read_to_string(csv.with_file_name("sweep.wer.csv")).unwrap();
    assert!(wer.starts_with(lpfc::harness::WER_HEADER));

    let (ok, out, err) = lpfc(&["report", "--trials", csv.to_str().unwrap()]);
    assert!(ok, "{err}");
    assert!(out.contains("growth") || out.contains("no basic failures"));

    let (ok, out, err) = lpfc(&["compare", "--code", "ensemble:20:3:4", "--sigma", "1.0", "--seed", "2"]);
    assert!(ok, "{err}");
    assert!(out.contains("basic LP:") && out.contains("LP-FC:"), "{out}");

    std::fs::write(&cfg, "trials = 0\nsigma.list = 1.0\n").unwrap();
    let (ok, _, err) = lpfc(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(!ok && err.contains("trials"), "{err}");
}
