//! Optimal-step risks and the effective reuse rate `E(K, N) = N'/N`.
//!
//! `N'` is the smallest one-pass dataset whose optimally tuned risk matches
//! the optimally tuned risk of `K` epochs over `N` points. For the Zipf model
//! the one-pass curve is the exact closed form, continuous in `N'`, and is
//! inverted by bisection in `log N'`. For simulated problems it is a
//! tabulated Monte Carlo curve inverted by log-linear interpolation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::zipf_risk;
use crate::error::{Error, Result};
use crate::model::{Problem, ZipfModel};
use crate::rng;
use crate::sgd_sim::{self, DataSource, RiskEstimate};

/// Result of a step size search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalRisk {
    pub eta_star: f64,
    pub risk_star: f64,
    /// Every `(eta, risk)` evaluated, in evaluation order.
    pub search_trace: Vec<(f64, f64)>,
    /// The minimum sits on an end of the search interval.
    pub at_boundary: bool,
}

/// Coarse grid plus golden-section refinement settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EtaSearch {
    pub grid_points: usize,
    pub refine_iters: usize,
}

impl Default for EtaSearch {
    fn default() -> Self {
        EtaSearch {
            grid_points: 64,
            refine_iters: 60,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes `risk` over `[lo, hi]`: a log-spaced scan of `grid_points`
/// values, then golden-section search in `log eta` over the two grid cells
/// around the best point. Non-finite values count as `+inf`.
pub fn minimize_risk<F>(
    risk: F,
    lo: f64,
    hi: f64,
    grid_points: usize,
    refine_iters: usize,
) -> Result<OptimalRisk>
where
    F: Fn(f64) -> f64,
{
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "search interval must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    if grid_points < 8 {
        return Err(Error::InvalidParameter("grid_points must be >= 8".into()));
    }
    let key = |v: f64| if v.is_finite() { v } else { f64::INFINITY };
    let (log_lo, log_hi) = (lo.ln(), hi.ln());
    let step = (log_hi - log_lo) / (grid_points - 1) as f64;
    let grid: Vec<f64> = (0..grid_points)
        .map(|j| match j {
            0 => lo,
            j if j == grid_points - 1 => hi,
            j => (log_lo + j as f64 * step).exp(),
        })
        .collect();
    let mut trace: Vec<(f64, f64)> = grid.iter().map(|&eta| (eta, risk(eta))).collect();
    let best = argmin(&trace, key);
    if !trace[best].1.is_finite() {
        return Err(Error::NonFiniteRisk);
    }

    let mut a = grid[best.saturating_sub(1)].ln();
    let mut b = grid[(best + 1).min(grid_points - 1)].ln();
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = key(eval(&risk, x1, &mut trace));
    let mut f2 = key(eval(&risk, x2, &mut trace));
    for _ in 0..refine_iters {
        if b - a < 1e-13 {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = key(eval(&risk, x1, &mut trace));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = key(eval(&risk, x2, &mut trace));
        }
    }
    let best = argmin(&trace, key);
    let (eta_star, risk_star) = trace[best];
    Ok(OptimalRisk {
        eta_star,
        risk_star,
        at_boundary: eta_star == lo || eta_star == hi,
        search_trace: trace,
    })
}

fn eval<F: Fn(f64) -> f64>(risk: &F, log_eta: f64, trace: &mut Vec<(f64, f64)>) -> f64 {
    let eta = log_eta.exp();
    let value = risk(eta);
    trace.push((eta, value));
    value
}

fn argmin(trace: &[(f64, f64)], key: impl Fn(f64) -> f64) -> usize {
    let mut best = 0;
    for (i, &(_, v)) in trace.iter().enumerate() {
        if key(v) < key(trace[best].1) {
            best = i;
        }
    }
    best
}

/// Smallest step size searched for Zipf models.
pub const ZIPF_ETA_LO: f64 = 1e-6;

/// Upper end of the Zipf step size search, just inside `2/Lambda_1`.
pub fn zipf_eta_hi(model: &ZipfModel) -> f64 {
    2.0 / model.max_scale() - 1e-6
}

/// `min_eta zipf_risk(model, K, N, eta)` over `[1e-6, eta_hi]`.
pub fn risk_star_zipf(
    model: &ZipfModel,
    epochs: usize,
    n: f64,
    eta_hi: f64,
) -> Result<OptimalRisk> {
    risk_star_zipf_with(model, epochs, n, eta_hi, &EtaSearch::default())
}

pub fn risk_star_zipf_with(
    model: &ZipfModel,
    epochs: usize,
    n: f64,
    eta_hi: f64,
    search: &EtaSearch,
) -> Result<OptimalRisk> {
    let limit = 2.0 / model.max_scale();
    if !(eta_hi < limit) {
        return Err(Error::LearningRateDomain {
            eta: eta_hi,
            range: format!("(0, 2/Lambda_1) = (0, {limit})"),
        });
    }
    // Validate once so the search only sees domain-valid points.
    zipf_risk(model, epochs, n, eta_hi)?;
    minimize_risk(
        |eta| zipf_risk(model, epochs, n, eta).unwrap_or(f64::NAN),
        ZIPF_ETA_LO,
        eta_hi,
        search.grid_points,
        search.refine_iters,
    )
}

/// How a reuse point was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReuseMethod {
    ClosedFormZipf,
    SimulatedStronglyConvex,
}

/// `E(K, N)` with the matched one-pass size `N'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReusePoint {
    pub k: usize,
    pub n: f64,
    pub n_prime: f64,
    pub e_value: f64,
    pub method: ReuseMethod,
    pub eta_star: f64,
    pub risk_star: f64,
    pub risk_std_error: Option<f64>,
    /// `E` range implied by the combined Monte Carlo error (simulations only).
    pub e_interval: Option<(f64, f64)>,
}

/// Bisection settings for the closed-form one-pass inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReuseSolver {
    pub search: EtaSearch,
    /// Bracket width in `ln N'` at which bisection stops.
    pub log_tolerance: f64,
    /// `N'` is searched up to `cap_factor * K * N`.
    pub cap_factor: f64,
    /// Upper end of the step size search; `None` means just inside `2/Lambda_1`.
    pub eta_hi: Option<f64>,
}

impl Default for ReuseSolver {
    fn default() -> Self {
        ReuseSolver {
            search: EtaSearch::default(),
            log_tolerance: 1e-4,
            cap_factor: 1e6,
            eta_hi: None,
        }
    }
}

/// `E(K, N)` for the Zipf model from the exact risk.
pub fn effective_reuse_zipf(model: &ZipfModel, epochs: usize, n: f64) -> Result<ReusePoint> {
    effective_reuse_zipf_with(model, epochs, n, &ReuseSolver::default())
}

pub fn effective_reuse_zipf_with(
    model: &ZipfModel,
    epochs: usize,
    n: f64,
    solver: &ReuseSolver,
) -> Result<ReusePoint> {
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidParameter(format!("dataset size {n}")));
    }
    let eta_hi = solver.eta_hi.unwrap_or_else(|| zipf_eta_hi(model));
    let target = risk_star_zipf_with(model, epochs, n, eta_hi, &solver.search)?;
    let one_pass = |log_n: f64| -> Result<f64> {
        Ok(risk_star_zipf_with(model, 1, log_n.exp(), eta_hi, &solver.search)?.risk_star)
    };
    if epochs == 1 {
        return Ok(reuse_point_zipf(1, n, n, &target));
    }
    let goal = target.risk_star;
    let step = 4f64.ln();
    let floor = n.ln() - 12.0 * 10f64.ln();
    let cap = (solver.cap_factor * epochs as f64 * n).ln();

    // g(lo) > goal >= g(hi)
    let mut lo = n.ln() - step;
    while one_pass(lo)? <= goal {
        lo -= step;
        if lo < floor {
            return Ok(reuse_point_zipf(epochs, n, 0.0, &target));
        }
    }
    let mut hi = (epochs as f64 * n).ln() + step;
    while one_pass(hi)? > goal {
        lo = hi;
        hi += step;
        if hi > cap {
            return Err(Error::CurveExhausted {
                target: goal,
                cap: cap.exp(),
            });
        }
    }
    while hi - lo > solver.log_tolerance {
        let mid = 0.5 * (lo + hi);
        if one_pass(mid)? <= goal {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(reuse_point_zipf(epochs, n, hi.exp(), &target))
}

fn reuse_point_zipf(k: usize, n: f64, n_prime: f64, target: &OptimalRisk) -> ReusePoint {
    ReusePoint {
        k,
        n,
        n_prime,
        e_value: n_prime / n,
        method: ReuseMethod::ClosedFormZipf,
        eta_star: target.eta_star,
        risk_star: target.risk_star,
        risk_std_error: None,
        e_interval: None,
    }
}

/// Monte Carlo settings for simulated reuse. Step sizes are
/// `eta = c * ln(T) / T` for `c` in `c_grid`, kept within `eta <= 1/D^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub replicas: usize,
    pub base_seed: u64,
    pub c_grid: Vec<f64>,
}

impl McParams {
    pub fn new(replicas: usize, base_seed: u64) -> Self {
        McParams {
            replicas,
            base_seed,
            c_grid: log_grid(0.1, 4.0, 16),
        }
    }
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|j| match j {
            0 => lo,
            j if j == count - 1 => hi,
            j => (a + (b - a) * j as f64 / (count - 1) as f64).exp(),
        })
        .collect()
}

/// Step sizes `c ln(T)/T` for a run of `steps` total updates, clamped to
/// `1/D^2`. Values that clamp collapse into a single `1/D^2` entry, so every
/// horizon whose grid reaches the cap tries exactly the cap.
pub fn step_sizes(problem: &Problem, steps: usize, c_grid: &[f64]) -> Vec<f64> {
    let t = steps as f64;
    let scale = t.ln().max(1.0) / t;
    let cap = problem.max_stable_lr();
    let mut etas: Vec<f64> = c_grid.iter().map(|c| (c * scale).min(cap)).collect();
    etas.sort_by(f64::total_cmp);
    etas.dedup();
    etas
}

/// Best Monte Carlo risk over the step size grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedOptimum {
    pub eta_star: f64,
    pub estimate: RiskEstimate,
    pub trace: Vec<(f64, RiskEstimate)>,
}

fn best_of(etas: &[f64], estimates: Vec<Result<RiskEstimate>>) -> Result<SimulatedOptimum> {
    let trace: Vec<(f64, RiskEstimate)> = etas
        .iter()
        .zip(estimates)
        .filter_map(|(&eta, est)| est.ok().map(|e| (eta, e)))
        .collect();
    let best = trace
        .iter()
        .filter(|(_, e)| e.mean.is_finite())
        .min_by(|a, b| a.1.mean.total_cmp(&b.1.mean))
        .copied()
        .ok_or(Error::NonFiniteRisk)?;
    Ok(SimulatedOptimum {
        eta_star: best.0,
        estimate: best.1,
        trace,
    })
}

/// Simulated `min_eta R(K, N; eta)` over the `c` grid with Gaussian inputs.
pub fn optimal_risk_simulated(
    problem: &Problem,
    epochs: usize,
    n: usize,
    mc: &McParams,
) -> Result<SimulatedOptimum> {
    let etas = step_sizes(problem, epochs * n, &mc.c_grid);
    let estimates = sgd_sim::monte_carlo_risk_grid(
        problem,
        DataSource::GaussianFresh,
        epochs,
        n,
        &etas,
        mc.replicas,
        mc.base_seed,
    )?;
    best_of(&etas, estimates)
}

/// One tabulated point of the one-pass curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub steps: f64,
    pub estimate: RiskEstimate,
    /// Risk after the non-increasing isotonic fit.
    pub regularized: f64,
}

/// Optimal one-pass risk as a function of the number of fresh samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnePassCurve {
    points: Vec<CurvePoint>,
}

impl OnePassCurve {
    /// Builds a curve from `(T, risk)` pairs sorted by increasing `T`.
    pub fn from_points(points: Vec<(f64, RiskEstimate)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter(
                "curve needs at least 2 points".into(),
            ));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) || points[0].0 <= 0.0 {
            return Err(Error::InvalidParameter(
                "curve sample sizes must be positive and strictly increasing".into(),
            ));
        }
        if points
            .iter()
            .any(|(_, e)| !(e.mean.is_finite() && e.mean > 0.0))
        {
            return Err(Error::InvalidParameter(
                "curve risks must be positive".into(),
            ));
        }
        let means: Vec<f64> = points.iter().map(|(_, e)| e.mean).collect();
        let regularized = isotonic_non_increasing(&means);
        Ok(OnePassCurve {
            points: points
                .into_iter()
                .zip(regularized)
                .map(|((steps, estimate), regularized)| CurvePoint {
                    steps,
                    estimate,
                    regularized,
                })
                .collect(),
        })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    /// Smallest `T` with curve value `<= target`, log-linear between points.
    pub fn invert(&self, target: f64) -> Result<f64> {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        let out_of_range = || Error::OutsideCurve {
            target,
            lo: last.regularized,
            hi: first.regularized,
        };
        let j = self
            .points
            .iter()
            .position(|p| p.regularized <= target)
            .ok_or_else(out_of_range)?;
        if j == 0 {
            return if target == first.regularized {
                Ok(first.steps)
            } else {
                Err(out_of_range())
            };
        }
        let (a, b) = (self.points[j - 1], self.points[j]);
        let frac = (target.ln() - a.regularized.ln()) / (b.regularized.ln() - a.regularized.ln());
        Ok((a.steps.ln() + frac * (b.steps.ln() - a.steps.ln())).exp())
    }

    /// Standard error of the curve interpolated at `steps` (log-linear in `T`).
    pub fn std_error_at(&self, steps: f64) -> f64 {
        let pts = &self.points;
        let j = pts
            .iter()
            .position(|p| p.steps >= steps)
            .unwrap_or(pts.len() - 1);
        if j == 0 {
            return pts[0].estimate.std_error;
        }
        let (a, b) = (pts[j - 1], pts[j]);
        let frac = ((steps.ln() - a.steps.ln()) / (b.steps.ln() - a.steps.ln())).clamp(0.0, 1.0);
        a.estimate.std_error + frac * (b.estimate.std_error - a.estimate.std_error)
    }

    fn range(&self) -> (f64, f64) {
        (
            self.points[0].steps,
            self.points[self.points.len() - 1].steps,
        )
    }
}

/// Pool-adjacent-violators fit of a non-increasing sequence (equal weights).
pub fn isotonic_non_increasing(values: &[f64]) -> Vec<f64> {
    // Blocks of (sum, count), each with mean >= the next.
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() >= 2 {
            let (s2, c2) = blocks[blocks.len() - 1];
            let (s1, c1) = blocks[blocks.len() - 2];
            if s1 / c1 as f64 >= s2 / c2 as f64 {
                break;
            }
            blocks.pop();
            *blocks.last_mut().expect("two blocks") = (s1 + s2, c1 + c2);
        }
    }
    blocks
        .into_iter()
        .flat_map(|(s, c)| {
            let mean = if c == 1 { s } else { s / c as f64 };
            std::iter::repeat(mean).take(c)
        })
        .collect()
}

/// `per_decade` log-spaced integer sample sizes covering `[lo, hi]`, aligned so
/// that powers of ten are on the grid.
pub fn log_spaced_horizons(lo: usize, hi: usize, per_decade: usize) -> Vec<usize> {
    let lo = lo.max(1) as f64;
    let hi = hi.max(1) as f64;
    let start = (lo.log10() * per_decade as f64).floor() as i64;
    let end = (hi.log10() * per_decade as f64).ceil() as i64;
    let mut out: Vec<usize> = (start..=end)
        .map(|j| 10f64.powf(j as f64 / per_decade as f64).round() as usize)
        .filter(|&t| t >= 1)
        .collect();
    out.dedup();
    out
}

/// Tabulates the optimal one-pass risk at every horizon. Replica `r` draws one
/// stream of fresh Gaussian points shared by every horizon and step size.
pub fn one_pass_curve(
    problem: &Problem,
    horizons: &[usize],
    mc: &McParams,
) -> Result<OnePassCurve> {
    if mc.replicas < 2 {
        return Err(Error::InvalidParameter("need at least 2 replicas".into()));
    }
    let etas: Vec<Vec<f64>> = horizons
        .iter()
        .map(|&t| step_sizes(problem, t, &mc.c_grid))
        .collect();
    let per_replica: Vec<Vec<Vec<Result<f64>>>> = (0..mc.replicas as u64)
        .into_par_iter()
        .map(|r| {
            let seed = rng::derive_seed(mc.base_seed, r);
            sgd_sim::one_pass_risks(problem, DataSource::GaussianFresh, horizons, &etas, seed)
        })
        .collect::<Result<_>>()?;
    // Regroup as horizon -> replica -> step size.
    let mut by_horizon: Vec<Vec<Vec<Result<f64>>>> = horizons.iter().map(|_| Vec::new()).collect();
    for replica in per_replica {
        for (h, row) in replica.into_iter().enumerate() {
            by_horizon[h].push(row);
        }
    }
    let points = horizons
        .iter()
        .zip(by_horizon)
        .zip(&etas)
        .map(|((&t, rows), es)| {
            let best = best_of(es, sgd_sim::reduce_replicas(es.len(), rows))?;
            Ok((t as f64, best.estimate))
        })
        .collect::<Result<Vec<_>>>()?;
    OnePassCurve::from_points(points)
}

/// `E(K, N)` for a Gaussian-input problem: the `K`-epoch optimum is simulated
/// and matched against a tabulated one-pass curve built with the same `mc`.
pub fn effective_reuse_simulated(
    problem: &Problem,
    epochs: usize,
    n: usize,
    curve: &OnePassCurve,
    mc: &McParams,
) -> Result<ReusePoint> {
    let optimum = optimal_risk_simulated(problem, epochs, n, mc)?;
    let target = optimum.estimate;
    let n_prime = curve.invert(target.mean)?;
    let spread = target.std_error.hypot(curve.std_error_at(n_prime));
    let (t_lo, t_hi) = curve.range();
    let bound = |risk: f64, fallback: f64| {
        if risk > 0.0 {
            curve.invert(risk).unwrap_or(fallback)
        } else {
            fallback
        }
    };
    // Higher risk means a smaller matched one-pass set.
    let lower = bound(target.mean + spread, t_lo);
    let upper = bound(target.mean - spread, t_hi);
    let nf = n as f64;
    Ok(ReusePoint {
        k: epochs,
        n: nf,
        n_prime,
        e_value: n_prime / nf,
        method: ReuseMethod::SimulatedStronglyConvex,
        eta_star: optimum.eta_star,
        risk_star: target.mean,
        risk_std_error: Some(target.std_error),
        e_interval: Some((lower / nf, upper / nf)),
    })
}

/// Functional form of a power-law fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitTransform {
    /// `y = c1 x^c2`
    XPower,
    /// `y = c1 (ln x)^c2`
    LogXPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub c1: f64,
    pub c2: f64,
    pub r_squared: f64,
}

/// Least squares of `ln y` on `ln x` (or `ln ln x`).
pub fn fit_power_law(points: &[(f64, f64)], transform: FitTransform) -> Result<PowerFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit("need at least 3 points".into()));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::DegenerateFit(format!(
                "non-positive point ({x}, {y})"
            )));
        }
        let u = match transform {
            FitTransform::XPower => x.ln(),
            FitTransform::LogXPower => {
                if x.ln() <= 0.0 {
                    return Err(Error::DegenerateFit(format!("ln x <= 0 at x = {x}")));
                }
                x.ln().ln()
            }
        };
        xs.push(u);
        ys.push(y.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-300 {
        return Err(Error::DegenerateFit("all x values are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(PowerFit {
        c1: intercept.exp(),
        c2: slope,
        r_squared,
    })
}

/// Which large-`K` plateau law to evaluate.
#[derive(Debug, Clone, Copy)]
pub enum PlateauCase<'a> {
    /// `tr(H) / (4 lambda_d d) * ln N`
    StronglyConvex(&'a Problem),
    /// `N^(b/(a-b))`, up to a constant
    PowerLaw { a: f64, b: f64 },
    /// `(ln N)^b`, up to a constant
    LogPowerLaw { a: f64, b: f64 },
}

/// Plateau of `E(K, N)` for `K` far beyond the transition.
pub fn predicted_plateau(case: PlateauCase<'_>, n: f64) -> f64 {
    match case {
        PlateauCase::StronglyConvex(problem) => {
            let s = problem.spectrum();
            s.trace() / (4.0 * s.lambda_min() * s.dim() as f64) * n.ln()
        }
        PlateauCase::PowerLaw { a, b } => n.powf(b / (a - b)),
        PlateauCase::LogPowerLaw { b, .. } => n.ln().powf(b),
    }
}

/// Exponent of the plateau law (of `N` for the power case, of `ln N` otherwise).
pub fn plateau_exponent(case: PlateauCase<'_>) -> f64 {
    match case {
        PlateauCase::StronglyConvex(_) => 1.0,
        PlateauCase::PowerLaw { a, b } => b / (a - b),
        PlateauCase::LogPowerLaw { b, .. } => b,
    }
}
