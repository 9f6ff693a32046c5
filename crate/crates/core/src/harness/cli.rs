//! `reuse-lab <subcommand> --config <path> [--set key=value ...]`

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::Value;

use super::{
    csv_string, emit_csv, emit_plotdata, fit_rows, run_closed_form, run_experiment_with,
    run_simulate, worker_threads, CsvSink, ExperimentConfig, ExperimentKind, ResultRow,
};
use crate::error::{Error, Result};
use crate::reuse::FitTransform;

#[derive(Debug, Parser)]
#[command(name = "reuse-lab", version, about = "Data reuse in multi-epoch SGD")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo risk at a fixed (or approximately optimal) step size.
    Simulate(ConfigArgs),
    /// Closed-form risks without simulation.
    ClosedForm(ConfigArgs),
    /// Effective reuse rate over the K x N grid.
    Reuse(ConfigArgs),
    /// Any experiment, flushing rows as cells finish and writing plot data.
    Sweep(ConfigArgs),
    /// Reuse sweep followed by a power-law fit of each K series.
    Fit(ConfigArgs),
    /// Closed-form Zipf risk against exhaustive enumeration.
    OracleCheck(ConfigArgs),
}

#[derive(Debug, clap::Args)]
pub struct ConfigArgs {
    /// JSON experiment config.
    #[arg(long)]
    pub config: PathBuf,
    /// Override a config field, e.g. `--set zipf.d=1000` or `--set k_grid=[1,2]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

/// How a command finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    /// Some cells recorded an error.
    Partial,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Complete => 0,
            Outcome::Partial => 2,
        }
    }

    fn of(rows: &[ResultRow]) -> Self {
        if rows.iter().any(ResultRow::failed) {
            Outcome::Partial
        } else {
            Outcome::Complete
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, &mut std::io::stdout().lock()) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Runs a parsed command, writing tables to `out` when no output path is set.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Simulate(args) => {
            let config = load_config(&args.config, &args.set)?;
            let rows = run_simulate(&config)?;
            finish(&config, &rows, out)
        }
        Command::ClosedForm(args) => {
            let config = load_config(&args.config, &args.set)?;
            let rows = run_closed_form(&config)?;
            finish(&config, &rows, out)
        }
        Command::Reuse(args) => {
            let config = load_config(&args.config, &args.set)?;
            if config.experiment == ExperimentKind::OracleCheck {
                return Err(Error::Config(
                    "`reuse` needs a reuse experiment; use `oracle-check`".into(),
                ));
            }
            let rows = run_experiment_with(&config, worker_threads(), |_| Ok(()))?;
            finish(&config, &rows, out)
        }
        Command::Sweep(args) => {
            let config = load_config(&args.config, &args.set)?;
            sweep(&config, out)
        }
        Command::Fit(args) => {
            let config = load_config(&args.config, &args.set)?;
            let rows = run_experiment_with(&config, worker_threads(), |_| Ok(()))?;
            if let Some(path) = &config.output_path {
                emit_csv(&rows, path)?;
            }
            let transform = match config.experiment {
                ExperimentKind::ZipfLogReuse => FitTransform::LogXPower,
                _ => FitTransform::XPower,
            };
            let fits = fit_rows(&rows, transform);
            if fits.is_empty() {
                return Err(Error::DegenerateFit(
                    "no K series with 3 or more usable rows".into(),
                ));
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&fits)?).map_err(stdout_err)?;
            Ok(Outcome::of(&rows))
        }
        Command::OracleCheck(args) => {
            let mut set = vec!["experiment=\"oracle_check\"".to_string()];
            set.extend(args.set);
            let config = load_config(&args.config, &set)?;
            let rows = run_experiment_with(&config, worker_threads(), |_| Ok(()))?;
            finish(&config, &rows, out)
        }
    }
}

fn sweep(config: &ExperimentConfig, out: &mut dyn Write) -> Result<Outcome> {
    let rows = match &config.output_path {
        Some(path) => {
            let mut sink = CsvSink::new(path);
            let rows = run_experiment_with(config, worker_threads(), |chunk| sink.write(chunk))?;
            sink.finish()?;
            rows
        }
        None => {
            let mut header = true;
            run_experiment_with(config, worker_threads(), |chunk| {
                let text = csv_string(chunk)?;
                let body = if header {
                    &text[..]
                } else {
                    text.split_once('\n').map_or("", |(_, b)| b)
                };
                header = false;
                out.write_all(body.as_bytes()).map_err(stdout_err)
            })?
        }
    };
    if let Some(plot) = &config.plot {
        emit_plotdata(&rows, plot.figure, &plot.path)?;
    }
    Ok(Outcome::of(&rows))
}

fn finish(config: &ExperimentConfig, rows: &[ResultRow], out: &mut dyn Write) -> Result<Outcome> {
    match &config.output_path {
        Some(path) => emit_csv(rows, path)?,
        None => out
            .write_all(csv_string(rows)?.as_bytes())
            .map_err(stdout_err)?,
    }
    if let Some(plot) = &config.plot {
        emit_plotdata(rows, plot.figure, &plot.path)?;
    }
    Ok(Outcome::of(rows))
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

/// Reads a config file and applies `key=value` overrides before validation.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut doc: Value = serde_json::from_str(&text)?;
    for item in overrides {
        apply_override(&mut doc, item)?;
    }
    let config: ExperimentConfig = serde_json::from_value(doc)?;
    config.validate()?;
    Ok(config)
}

/// Sets a dotted path in a JSON document. The value is parsed as JSON when
/// possible and kept as a string otherwise.
pub fn apply_override(doc: &mut Value, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{item}` is not key=value")))?;
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(Error::Config(format!("bad override key `{key}`")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if !node.is_object() {
            if node.is_null() {
                *node = Value::Object(Default::default());
            } else {
                return Err(Error::Config(format!(
                    "`{}` is not an object",
                    parts[..i].join(".")
                )));
            }
        }
        let map = node.as_object_mut().expect("checked");
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map.entry(part.to_string()).or_insert(Value::Null);
    }
    unreachable!("key has at least one part")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overrides_parse_json_or_string() {
        let mut doc = json!({"experiment": "oracle_check", "zipf": {"law": "power", "a": 3.0}});
        apply_override(&mut doc, "zipf.d=7").unwrap();
        apply_override(&mut doc, "k_grid=[1,2]").unwrap();
        apply_override(&mut doc, "output_path=out/rows.csv").unwrap();
        apply_override(&mut doc, "problem.sigma=0.5").unwrap();
        assert_eq!(doc["zipf"]["d"], json!(7));
        assert_eq!(doc["k_grid"], json!([1, 2]));
        assert_eq!(doc["output_path"], json!("out/rows.csv"));
        assert_eq!(doc["problem"]["sigma"], json!(0.5));
    }

    #[test]
    fn bad_overrides() {
        let mut doc = json!({"k_grid": [1]});
        assert!(apply_override(&mut doc, "no_equals").is_err());
        assert!(apply_override(&mut doc, "a..b=1").is_err());
        assert!(apply_override(&mut doc, "k_grid.x=1").is_err());
    }
}
