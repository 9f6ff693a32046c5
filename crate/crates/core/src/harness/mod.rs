//! Experiment configs, grid sweeps and result persistence.
//!
//! A config is one JSON document describing one experiment over a `K x N`
//! grid. [`run_experiment`] evaluates every cell (K outer, N inner) on a
//! bounded worker pool and returns rows in grid order; per-cell failures are
//! recorded in the row's `error` column instead of aborting the sweep.

pub mod cli;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{self, approx_risk, optimal_lr, zipf_risk};
use crate::error::{Error, Result};
use crate::model::{make_gaussian_isotropic, Problem, ZipfLaw, ZipfModel};
use crate::oracle::zipf_risk_enumerated;
use crate::reuse::{
    self, effective_reuse_simulated, effective_reuse_zipf_with, log_spaced_horizons,
    one_pass_curve, EtaSearch, McParams, OnePassCurve, ReusePoint, ReuseSolver,
};
use crate::sgd_sim::{monte_carlo_risk, DataSource};

pub use output::{
    csv_string, emit_csv, emit_plotdata, parse_csv, CsvSink, Figure, PlotData, Series,
};

/// Absolute tolerance between the closed-form and enumerated Zipf risk.
pub const ORACLE_TOLERANCE: f64 = 1e-12;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "REUSE_LAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    StronglyConvexReuse,
    ZipfPowerReuse,
    ZipfLogReuse,
    OracleCheck,
    BaselineCompare,
}

impl ExperimentKind {
    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::StronglyConvexReuse => "strongly_convex_reuse",
            ExperimentKind::ZipfPowerReuse => "zipf_power_reuse",
            ExperimentKind::ZipfLogReuse => "zipf_log_reuse",
            ExperimentKind::OracleCheck => "oracle_check",
            ExperimentKind::BaselineCompare => "baseline_compare",
        }
    }
}

/// Isotropic Gaussian-input problem parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussianSpec {
    pub d: usize,
    pub sigma: f64,
    pub seed: u64,
}

impl Default for GaussianSpec {
    fn default() -> Self {
        GaussianSpec {
            d: 100,
            sigma: 0.1,
            seed: 0,
        }
    }
}

impl GaussianSpec {
    pub fn build(&self) -> Result<Problem> {
        make_gaussian_isotropic(self.d, self.sigma, self.seed)
    }
}

/// Plot-data output requested alongside the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotSpec {
    pub figure: Figure,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub zipf: Option<ZipfModel>,
    #[serde(default)]
    pub problem: Option<GaussianSpec>,
    pub k_grid: Vec<usize>,
    pub n_grid: Vec<f64>,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub eta_search: EtaSearch,
    /// Multipliers `c` of `ln(T)/T` tried by simulations.
    #[serde(default)]
    pub c_grid: Option<Vec<f64>>,
    /// Horizons per decade of the simulated one-pass curve.
    #[serde(default = "default_per_decade")]
    pub curve_per_decade: usize,
    /// Fixed step size (oracle checks; optional elsewhere).
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default = "default_r_star")]
    pub r_star: f64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub plot: Option<PlotSpec>,
    /// Fill `wall_time_seconds`; off by default so reruns are byte-identical.
    #[serde(default)]
    pub record_timing: bool,
}

fn default_replicas() -> usize {
    500
}

fn default_per_decade() -> usize {
    8
}

fn default_r_star() -> f64 {
    closed_form::MUENNIGHOFF_R_STAR
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    fn simulated(&self) -> bool {
        match self.experiment {
            ExperimentKind::StronglyConvexReuse => true,
            ExperimentKind::BaselineCompare => self.zipf.is_none(),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.k_grid.is_empty() || self.n_grid.is_empty() {
            return bad("k_grid and n_grid must be non-empty".into());
        }
        if self.k_grid[0] == 0 || self.k_grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad(format!(
                "k_grid must be positive and strictly increasing: {:?}",
                self.k_grid
            ));
        }
        if self.n_grid.iter().any(|n| !(n.is_finite() && *n > 0.0))
            || self.n_grid.windows(2).any(|w| w[1] <= w[0])
        {
            return bad(format!(
                "n_grid must be positive and strictly increasing: {:?}",
                self.n_grid
            ));
        }
        let integral_n = self.simulated() || self.experiment == ExperimentKind::OracleCheck;
        if integral_n && self.n_grid.iter().any(|n| n.fract() != 0.0) {
            return bad("this experiment needs integer dataset sizes".into());
        }
        if self.simulated() {
            if self.replicas < 2 {
                return bad(format!(
                    "simulations need replicas >= 2, got {}",
                    self.replicas
                ));
            }
            if self.curve_per_decade == 0 {
                return bad("curve_per_decade must be >= 1".into());
            }
            if let Some(c) = &self.c_grid {
                if c.is_empty() || c.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                    return bad("c_grid must hold positive values".into());
                }
            }
        }
        match self.experiment {
            ExperimentKind::ZipfPowerReuse => {
                self.require_law(|l| matches!(l, ZipfLaw::PowerLaw { .. }), "power")
            }
            ExperimentKind::ZipfLogReuse => {
                self.require_law(|l| matches!(l, ZipfLaw::LogPowerLaw { .. }), "log_power")
            }
            ExperimentKind::OracleCheck => {
                self.require_law(|_| true, "any")?;
                match self.eta {
                    Some(eta) if eta.is_finite() && eta >= 0.0 => Ok(()),
                    _ => bad("oracle_check needs a non-negative `eta`".into()),
                }
            }
            ExperimentKind::StronglyConvexReuse | ExperimentKind::BaselineCompare => Ok(()),
        }
    }

    fn require_law(&self, ok: impl Fn(ZipfLaw) -> bool, name: &str) -> Result<()> {
        match &self.zipf {
            Some(model) if ok(model.law()) => Ok(()),
            Some(model) => Err(Error::Config(format!(
                "{} needs a `{name}` zipf law, got {:?}",
                self.experiment.id(),
                model.law()
            ))),
            None => Err(Error::Config(format!(
                "{} needs a `zipf` model",
                self.experiment.id()
            ))),
        }
    }

    pub fn mc_params(&self) -> McParams {
        let mut mc = McParams::new(self.replicas, self.base_seed);
        if let Some(c) = &self.c_grid {
            mc.c_grid = c.clone();
        }
        mc
    }

    pub fn gaussian_problem(&self) -> Result<Problem> {
        self.problem.unwrap_or_default().build()
    }

    fn solver(&self) -> ReuseSolver {
        ReuseSolver {
            search: self.eta_search,
            ..ReuseSolver::default()
        }
    }

    /// Grid cells in output order: `K` outer, `N` inner.
    pub fn cells(&self) -> Vec<(usize, f64)> {
        self.k_grid
            .iter()
            .flat_map(|&k| self.n_grid.iter().map(move |&n| (k, n)))
            .collect()
    }
}

/// One CSV row: a single `(K, N)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: f64,
    pub eta_star: Option<f64>,
    pub risk_star: Option<f64>,
    pub risk_std_error: Option<f64>,
    pub n_prime: Option<f64>,
    pub e_value: Option<f64>,
    /// Enumerated risk for oracle checks, Muennighoff `E` for baseline rows,
    /// the analytic risk for simulate rows.
    pub reference: Option<f64>,
    pub wall_time_seconds: Option<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    pub fn empty(experiment: &str, k: usize, n: f64) -> Self {
        ResultRow {
            experiment: experiment.to_string(),
            k,
            n,
            eta_star: None,
            risk_star: None,
            risk_std_error: None,
            n_prime: None,
            e_value: None,
            reference: None,
            wall_time_seconds: None,
            error: None,
        }
    }

    fn from_reuse(experiment: &str, p: &ReusePoint) -> Self {
        ResultRow {
            eta_star: Some(p.eta_star),
            risk_star: Some(p.risk_star),
            risk_std_error: p.risk_std_error,
            n_prime: Some(p.n_prime),
            e_value: Some(p.e_value),
            ..ResultRow::empty(experiment, p.k, p.n)
        }
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

/// Worker count from `REUSE_LAB_THREADS`, else the available parallelism.
pub fn worker_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Shared state computed once per sweep.
enum Prepared {
    Zipf(ZipfModel),
    Simulated {
        problem: Problem,
        curve: OnePassCurve,
        mc: McParams,
    },
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    if let Some(model) = &config.zipf {
        if !config.simulated() {
            return Ok(Prepared::Zipf(model.clone()));
        }
    }
    let problem = config.gaussian_problem()?;
    let mc = config.mc_params();
    let k_max = *config.k_grid.last().expect("validated");
    let n_min = config.n_grid[0];
    let n_max = *config.n_grid.last().expect("validated");
    let lo = (n_min / 2.0).max(2.0) as usize;
    let hi = (1.25 * k_max as f64 * n_max).ceil() as usize;
    let horizons = log_spaced_horizons(lo, hi, config.curve_per_decade);
    let curve = one_pass_curve(&problem, &horizons, &mc)?;
    Ok(Prepared::Simulated { problem, curve, mc })
}

fn evaluate(config: &ExperimentConfig, prepared: &Prepared, k: usize, n: f64) -> Result<ResultRow> {
    let id = config.experiment.id();
    match (config.experiment, prepared) {
        (ExperimentKind::OracleCheck, Prepared::Zipf(model)) => {
            let eta = config.eta.expect("validated");
            let closed = zipf_risk(model, k, n, eta)?;
            let enumerated = zipf_risk_enumerated(model, k, n as usize, eta)?;
            let gap = (closed - enumerated).abs();
            Ok(ResultRow {
                eta_star: Some(eta),
                risk_star: Some(closed),
                reference: Some(enumerated),
                error: (gap > ORACLE_TOLERANCE)
                    .then(|| format!("oracle mismatch: |closed - enumerated| = {gap:e}")),
                ..ResultRow::empty(id, k, n)
            })
        }
        (_, Prepared::Zipf(model)) => {
            let point = effective_reuse_zipf_with(model, k, n, &config.solver())?;
            Ok(with_baseline(config, ResultRow::from_reuse(id, &point)))
        }
        (_, Prepared::Simulated { problem, curve, mc }) => {
            let point = effective_reuse_simulated(problem, k, n as usize, curve, mc)?;
            Ok(with_baseline(config, ResultRow::from_reuse(id, &point)))
        }
    }
}

fn with_baseline(config: &ExperimentConfig, mut row: ResultRow) -> ResultRow {
    if config.experiment == ExperimentKind::BaselineCompare {
        row.reference =
            Some(closed_form::muennighoff_effective_n(row.k, row.n, config.r_star) / row.n);
    }
    row
}

/// Runs the sweep and returns one row per grid cell.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    run_experiment_with(config, worker_threads(), |_| Ok(()))
}

/// [`run_experiment`] on `threads` workers, handing each completed chunk of
/// rows to `flush` in grid order before starting the next.
pub fn run_experiment_with<F>(
    config: &ExperimentConfig,
    threads: usize,
    mut flush: F,
) -> Result<Vec<ResultRow>>
where
    F: FnMut(&[ResultRow]) -> Result<()>,
{
    config.validate()?;
    let threads = threads.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let prepared = pool.install(|| prepare(config))?;
    let cells = config.cells();
    let mut rows = Vec::with_capacity(cells.len());
    for chunk in cells.chunks(threads) {
        let done: Vec<ResultRow> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&(k, n)| run_cell(config, &prepared, k, n))
                .collect()
        });
        flush(&done)?;
        rows.extend(done);
    }
    Ok(rows)
}

fn run_cell(config: &ExperimentConfig, prepared: &Prepared, k: usize, n: f64) -> ResultRow {
    let start = Instant::now();
    let mut row = evaluate(config, prepared, k, n).unwrap_or_else(|e| ResultRow {
        error: Some(e.to_string()),
        ..ResultRow::empty(config.experiment.id(), k, n)
    });
    if config.record_timing {
        row.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    row
}

/// Monte Carlo risk at a fixed step size for every cell of a Gaussian
/// problem. The step is `eta` when set, otherwise the approximately optimal
/// one; `reference` carries the analytic risk at that step.
pub fn run_simulate(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    if config.replicas < 2 {
        return Err(Error::Config("simulate needs replicas >= 2".into()));
    }
    let problem = config.gaussian_problem()?;
    per_cell(config, "simulate", |k, n| {
        let n = as_count(n)?;
        let eta = fixed_or_optimal(config, &problem, k, n)?;
        let estimate = monte_carlo_risk(
            &problem,
            DataSource::GaussianFresh,
            k,
            n,
            eta,
            config.replicas,
            config.base_seed,
        )?;
        Ok(ResultRow {
            eta_star: Some(eta),
            risk_star: Some(estimate.mean),
            risk_std_error: Some(estimate.std_error),
            reference: approx_risk(&problem, k, n, eta).ok().map(|r| r.total),
            ..ResultRow::empty("simulate", k, n as f64)
        })
    })
}

/// Closed-form risks: the exact Zipf risk (at `eta`, or minimized over the
/// step size) when a Zipf model is given, otherwise the approximate risk of
/// the Gaussian problem at `eta` or the approximately optimal step.
pub fn run_closed_form(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    if let Some(model) = &config.zipf {
        return per_cell(config, "closed_form", |k, n| {
            let (eta, risk) = match config.eta {
                Some(eta) => (eta, zipf_risk(model, k, n, eta)?),
                None => {
                    let best = reuse::risk_star_zipf_with(
                        model,
                        k,
                        n,
                        reuse::zipf_eta_hi(model),
                        &config.eta_search,
                    )?;
                    (best.eta_star, best.risk_star)
                }
            };
            Ok(ResultRow {
                eta_star: Some(eta),
                risk_star: Some(risk),
                ..ResultRow::empty("closed_form", k, n)
            })
        });
    }
    let problem = config.gaussian_problem()?;
    per_cell(config, "closed_form", |k, n| {
        let n = as_count(n)?;
        let eta = fixed_or_optimal(config, &problem, k, n)?;
        Ok(ResultRow {
            eta_star: Some(eta),
            risk_star: Some(approx_risk(&problem, k, n, eta)?.total),
            ..ResultRow::empty("closed_form", k, n as f64)
        })
    })
}

fn fixed_or_optimal(
    config: &ExperimentConfig,
    problem: &Problem,
    k: usize,
    n: usize,
) -> Result<f64> {
    match config.eta {
        Some(eta) => Ok(eta),
        None => Ok(optimal_lr(problem, k, n)?.eta),
    }
}

fn as_count(n: f64) -> Result<usize> {
    if n.fract() == 0.0 && n >= 1.0 {
        Ok(n as usize)
    } else {
        Err(Error::InvalidParameter(format!(
            "dataset size {n} is not a positive integer"
        )))
    }
}

fn per_cell<F>(config: &ExperimentConfig, id: &str, f: F) -> Result<Vec<ResultRow>>
where
    F: Fn(usize, f64) -> Result<ResultRow> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_threads())
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let cells = config.cells();
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|&(k, n)| {
                let start = Instant::now();
                let mut row = f(k, n).unwrap_or_else(|e| ResultRow {
                    error: Some(e.to_string()),
                    ..ResultRow::empty(id, k, n)
                });
                if config.record_timing {
                    row.wall_time_seconds = Some(start.elapsed().as_secs_f64());
                }
                row
            })
            .collect()
    }))
}

/// Power-law fit of `E` against `N` for one `K`, using `ln N` for log spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    #[serde(rename = "K")]
    pub k: usize,
    pub transform: reuse::FitTransform,
    pub c1: f64,
    pub c2: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fits every `K` series with at least three successful rows.
pub fn fit_rows(rows: &[ResultRow], transform: reuse::FitTransform) -> Vec<SeriesFit> {
    let mut ks: Vec<usize> = rows.iter().map(|r| r.k).collect();
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter()
        .filter_map(|k| {
            let points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.k == k)
                .filter_map(|r| r.e_value.filter(|e| *e > 0.0).map(|e| (r.n, e)))
                .collect();
            let fit = reuse::fit_power_law(&points, transform).ok()?;
            Some(SeriesFit {
                k,
                transform,
                c1: fit.c1,
                c2: fit.c2,
                r_squared: fit.r_squared,
                points: points.len(),
            })
        })
        .collect()
}
