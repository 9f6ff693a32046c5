//! Run a config-driven sweep, streaming rows to CSV and writing plot data.
//!
//! Usage: `cargo run --example sweep_to_csv -- [out_dir]`

use std::path::PathBuf;

use reuse_lab::harness::{
    emit_plotdata, parse_csv, run_experiment_with, worker_threads, CsvSink, ExperimentConfig,
    Figure,
};

fn main() -> reuse_lab::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let config = ExperimentConfig::from_json(
        r#"{
            "experiment": "baseline_compare",
            "zipf": {"law": "power", "a": 4.5, "b": 1.0, "d": 10000},
            "k_grid": [1, 2, 4, 16, 64],
            "n_grid": [1000, 10000, 100000]
        }"#,
    )?;
    let csv_path = dir.join("reuse_sweep.csv");
    let mut sink = CsvSink::new(&csv_path);
    let rows = run_experiment_with(&config, worker_threads(), |chunk| {
        for r in chunk {
            eprintln!("done K={} N={}", r.k, r.n);
        }
        sink.write(chunk)
    })?;
    sink.finish()?;
    emit_plotdata(&rows, Figure::ReuseVsLogN, dir.join("reuse_vs_log_n.json"))?;
    emit_plotdata(&rows, Figure::ReuseVsK, dir.join("reuse_vs_k.json"))?;

    assert_eq!(parse_csv(&csv_path)?, rows);
    println!("wrote {} rows to {}", rows.len(), csv_path.display());
    Ok(())
}
