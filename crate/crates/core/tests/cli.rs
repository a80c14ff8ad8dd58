use std::process::Command;

use pcn_sim::sim::ScenarioConfig;

const BIN: &str = env!("CARGO_BIN_EXE_pcn-sim");

fn pcn(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_echoes_the_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.cfg");
    std::fs::write(
        &path,
        "# desk run\ntechnique = tb\nbandwidth_bps = 40mbps\nred_max_p=0.2\n",
    )
    .unwrap();
    let out = pcn(&[
        "validate",
        "--config",
        path.to_str().unwrap(),
        "--seed",
        "4",
        "--override",
        "red_max_p=0.3",
    ]);
    assert!(out.status.success());
    let cfg = ScenarioConfig::parse(&stdout(&out)).unwrap();
    assert_eq!(cfg.technique.key(), "tb");
    assert_eq!((cfg.bandwidth_bps, cfg.seed, cfg.meter.red_max_p), (40_000_000, 4, 0.3));
}

#[test]
fn run_prints_one_record() {
    let out = pcn(&["run", "--technique", "bm", "--duration", "3", "--output", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "technique,bandwidth_mbps,seed,throughput_mbps,loss_pct,admitted,blocked,terminated"
    );
    assert!(lines[1].starts_with("bm,50,1,"));
}

#[test]
fn bench_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = ["a.csv", "b.csv"].iter().map(|f| dir.path().join(f)).collect();
    for f in &files {
        let out = pcn(&[
            "bench",
            "--duration",
            "3",
            "--seeds",
            "1,2",
            "--output",
            "csv",
            "--out",
            f.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&files[0]).unwrap();
    assert_eq!(a, std::fs::read(&files[1]).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 5 * 3 * 2);
}

#[test]
fn single_seed_table_matches_records() {
    let out = pcn(&[
        "bench",
        "--duration",
        "3",
        "--seeds",
        "7",
        "--technique",
        "red,ab",
        "--bandwidth",
        "30mbps",
    ]);
    // An incomplete technique set cannot form the five-row table.
    assert!(!out.status.success());

    let out = pcn(&[
        "bench",
        "--duration",
        "3",
        "--seeds",
        "7",
        "--bandwidth",
        "30mbps",
        "--output",
        "both",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    for row in text.lines().filter(|l| l.starts_with("red,30,7,")) {
        let thr = row.split(',').nth(3).unwrap();
        assert!(text.contains(&format!("RED         {thr}")), "{text}");
    }
}

#[test]
fn ranking_failures_only_fail_strict_runs() {
    let args = [
        "bench",
        "--duration",
        "2",
        "--seeds",
        "1",
        "--bandwidth",
        "10mbps,20mbps",
        "--output",
        "table",
    ];
    let relaxed = pcn(&args);
    assert!(relaxed.status.success());
    let text = stdout(&relaxed);
    assert!(text.contains("Ranking claims") && text.contains("Parameters changed from the baseline ledger"));

    let mut strict = args.to_vec();
    strict.push("--strict");
    let code = pcn(&strict).status.code();
    let all_pass = !text
        .lines()
        .any(|l| l.trim_start().starts_with('T') && l.contains("FAIL"));
    assert_eq!(code, Some(if all_pass { 0 } else { 1 }));
}

#[test]
fn usage_errors_name_the_token() {
    let out = pcn(&["run", "--technique", "xyz"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("xyz"));

    let out = pcn(&["bench", "--override", "frobnicate=2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("frobnicate"));
}
