use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_reuse-lab"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("REUSE_LAB_THREADS", t);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn oracle_check_prints_rows() {
    let cfg = configs().join("oracle.json");
    let out = run(&["oracle-check", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.starts_with("experiment,K,N,"));
    assert_eq!(text.lines().count(), 1 + 12);
}

#[test]
fn overrides_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("o.csv");
    let cfg = configs().join("oracle.json");
    let out = run(
        &[
            "oracle-check",
            "--config",
            cfg.to_str().unwrap(),
            "--set",
            "k_grid=[2]",
            "--set",
            &format!("output_path={}", csv.display()),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let rows = reuse_lab::harness::parse_csv(&csv).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.k == 2 && r.error.is_none()));
}

#[test]
fn partial_failure_exits_with_two() {
    let cfg = configs().join("oracle.json");
    let out = run(
        &[
            "oracle-check",
            "--config",
            cfg.to_str().unwrap(),
            "--set",
            r#"zipf={"law":"power","a":3.0,"b":1.0,"d":60}"#,
            "--set",
            "n_grid=[1,8]",
            "--set",
            "k_grid=[1]",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(
        rows[1].contains("enumerat") || rows[1].contains("dataset"),
        "{}",
        rows[1]
    );
}

#[test]
fn fatal_errors_exit_with_one() {
    let out = run(&["reuse", "--config", "/nonexistent/config.json"], None);
    assert_eq!(out.status.code(), Some(1));
    let cfg = configs().join("zipf_power.json");
    let out = run(
        &[
            "reuse",
            "--config",
            cfg.to_str().unwrap(),
            "--set",
            "k_grid=[2,1]",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strictly increasing"));
    let out = run(&["reuse", "--bogus"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("zipf_power.json");
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "3"].iter().enumerate() {
        let csv = dir.path().join(format!("s{i}.csv"));
        let plot = dir.path().join(format!("p{i}.json"));
        let out = run(
            &[
                "sweep",
                "--config",
                cfg.to_str().unwrap(),
                "--set",
                "zipf.d=300",
                "--set",
                "k_grid=[1,2,8]",
                "--set",
                "n_grid=[100,1000,10000]",
                "--set",
                &format!("output_path={}", csv.display()),
                "--set",
                &format!("plot.path={}", plot.display()),
            ],
            Some(threads),
        );
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push((std::fs::read(&csv).unwrap(), std::fs::read(&plot).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let plot: serde_json::Value = serde_json::from_slice(&outputs[0].1).unwrap();
    assert_eq!(plot["series"].as_array().unwrap().len(), 3);
}

#[test]
fn closed_form_and_simulate_on_gaussian_problem() {
    let cfg = configs().join("strongly_convex.json");
    let common = [
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "problem.d=5",
        "--set",
        "k_grid=[1,2]",
        "--set",
        "n_grid=[100]",
        "--set",
        "replicas=20",
        "--set",
        "output_path=null",
        "--set",
        "plot=null",
    ];
    for sub in ["closed-form", "simulate"] {
        let mut args = vec![sub];
        args.extend(common);
        let out = run(&args, None);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{sub}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(stdout(&out).lines().count(), 3);
    }
}

#[test]
fn fit_reports_exponents() {
    let cfg = configs().join("zipf_power.json");
    let out = run(
        &[
            "fit",
            "--config",
            cfg.to_str().unwrap(),
            "--set",
            "zipf.d=500",
            "--set",
            "k_grid=[512]",
            "--set",
            "n_grid=[1000,3000,10000,30000]",
            "--set",
            "output_path=null",
        ],
        None,
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let fits: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(fits[0]["K"], 512);
    assert!(fits[0]["c2"].as_f64().unwrap() > 0.0);
}
