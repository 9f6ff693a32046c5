//! Multi-epoch SGD with random reshuffling, and Monte Carlo risk estimation.
//!
//! A dataset of `N` points is drawn once per run. The first epoch visits the
//! points in sampling order (the points are i.i.d., so this is a uniform
//! random order in distribution) and every later epoch visits them in a fresh
//! Fisher–Yates permutation. Each step applies
//!
//! ```text
//! w <- w - eta * (<x, w> - y) * x
//! ```
//!
//! with `y = <x, w*> + xi` fixed per data point.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Problem, SgdRun, ZipfModel};
use crate::rng;

/// Runs abort once `||w||` exceeds this multiple of `1 + ||w*||`.
pub const DIVERGENCE_FACTOR: f64 = 1e8;

const DIVERGENCE_CHECK_EVERY: u64 = 256;

/// Where training inputs come from.
#[derive(Debug, Clone, Copy)]
pub enum DataSource<'a> {
    /// `x ~ N(0, H)` with `H` the problem spectrum.
    GaussianFresh,
    /// One-hot `x = mu_i e_i` drawn from the Zipf model.
    ZipfFresh(&'a ZipfModel),
}

enum Sampler {
    Gaussian {
        sqrt_lambda: Vec<f64>,
    },
    Zipf {
        index: WeightedIndex<f64>,
        mu: Vec<f64>,
    },
}

/// Draws labelled points one at a time from the data and noise streams.
struct PointStream<'a> {
    sampler: Sampler,
    data_rng: ChaCha8Rng,
    noise_rng: ChaCha8Rng,
    noise_std: f64,
    ground_truth: &'a [f64],
}

impl<'a> PointStream<'a> {
    fn new(problem: &'a Problem, source: DataSource<'_>, seed: u64) -> Result<Self> {
        let sampler = match source {
            DataSource::GaussianFresh => Sampler::Gaussian {
                sqrt_lambda: problem
                    .spectrum()
                    .eigenvalues()
                    .iter()
                    .map(|l| l.sqrt())
                    .collect(),
            },
            DataSource::ZipfFresh(model) => {
                if model.dim() != problem.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: problem.dim(),
                        found: model.dim(),
                    });
                }
                let index = WeightedIndex::new(model.probabilities())
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                Sampler::Zipf {
                    index,
                    mu: model.scales().iter().map(|s| s.sqrt()).collect(),
                }
            }
        };
        Ok(PointStream {
            sampler,
            data_rng: rng::stream(seed, rng::STREAM_DATA),
            noise_rng: rng::stream(seed, rng::STREAM_NOISE),
            noise_std: problem.noise_std(),
            ground_truth: problem.ground_truth(),
        })
    }

    fn is_dense(&self) -> bool {
        matches!(self.sampler, Sampler::Gaussian { .. })
    }

    /// Writes the next input into `row` (dense) or returns its index (one-hot),
    /// and returns `(label, noise)`.
    fn next_dense(&mut self, row: &mut [f64]) -> (f64, f64) {
        let Sampler::Gaussian { sqrt_lambda } = &self.sampler else {
            unreachable!("dense draw from a one-hot source")
        };
        for (x, s) in row.iter_mut().zip(sqrt_lambda) {
            let z: f64 = StandardNormal.sample(&mut self.data_rng);
            *x = s * z;
        }
        let xi = self.draw_noise();
        (dot(row, self.ground_truth) + xi, xi)
    }

    fn next_one_hot(&mut self) -> (usize, f64, f64, f64) {
        let Sampler::Zipf { index, mu } = &self.sampler else {
            unreachable!("one-hot draw from a dense source")
        };
        let i = index.sample(&mut self.data_rng);
        let scale = mu[i];
        let xi = self.draw_noise();
        (i, scale, scale * self.ground_truth[i] + xi, xi)
    }

    fn draw_noise(&mut self) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.noise_rng);
        self.noise_std * z
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Inputs {
    /// Row-major `N x d` matrix.
    Dense { dim: usize, values: Vec<f64> },
    /// Coordinate index and scale `mu_i` of each one-hot input.
    OneHot {
        indices: Vec<usize>,
        scales: Vec<f64>,
    },
}

/// A realized training set: inputs, labels and the label noise behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: Inputs,
    labels: Vec<f64>,
    noise: Vec<f64>,
}

#[derive(Clone, Copy)]
enum Point<'a> {
    Dense(&'a [f64]),
    OneHot { index: usize, scale: f64 },
}

impl Point<'_> {
    #[inline]
    fn inner(&self, w: &[f64]) -> f64 {
        match *self {
            Point::Dense(x) => dot(x, w),
            Point::OneHot { index, scale } => scale * w[index],
        }
    }

    /// `w -= coeff * x`
    #[inline]
    fn sub_scaled(&self, w: &mut [f64], coeff: f64) {
        match *self {
            Point::Dense(x) => {
                for (wk, xk) in w.iter_mut().zip(x) {
                    *wk -= coeff * xk;
                }
            }
            Point::OneHot { index, scale } => w[index] -= coeff * scale,
        }
    }
}

impl Dataset {
    /// Draws `n` i.i.d. labelled points for `problem` from `source` under `seed`.
    pub fn generate(
        problem: &Problem,
        source: DataSource<'_>,
        n: usize,
        seed: u64,
    ) -> Result<Self> {
        let mut stream = PointStream::new(problem, source, seed)?;
        let mut labels = Vec::with_capacity(n);
        let mut noise = Vec::with_capacity(n);
        let inputs = if stream.is_dense() {
            let dim = problem.dim();
            let mut values = vec![0.0; n * dim];
            for row in values.chunks_exact_mut(dim) {
                let (y, xi) = stream.next_dense(row);
                labels.push(y);
                noise.push(xi);
            }
            Inputs::Dense { dim, values }
        } else {
            let mut indices = Vec::with_capacity(n);
            let mut scales = Vec::with_capacity(n);
            for _ in 0..n {
                let (i, s, y, xi) = stream.next_one_hot();
                indices.push(i);
                scales.push(s);
                labels.push(y);
                noise.push(xi);
            }
            Inputs::OneHot { indices, scales }
        };
        Ok(Dataset {
            inputs,
            labels,
            noise,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn noise(&self) -> &[f64] {
        &self.noise
    }

    /// Coordinate indices of a one-hot dataset.
    pub fn one_hot_indices(&self) -> Option<&[usize]> {
        match &self.inputs {
            Inputs::OneHot { indices, .. } => Some(indices),
            Inputs::Dense { .. } => None,
        }
    }

    /// Same inputs with every noise draw `xi` replaced by `-xi`.
    pub fn with_negated_noise(&self) -> Dataset {
        let labels = self
            .labels
            .iter()
            .zip(&self.noise)
            .map(|(y, xi)| (y - xi) - xi)
            .collect();
        Dataset {
            inputs: self.inputs.clone(),
            labels,
            noise: self.noise.iter().map(|xi| -xi).collect(),
        }
    }

    /// Same points stored in the order given by `order`.
    pub fn reordered(&self, order: &[usize]) -> Result<Dataset> {
        let mut check = order.to_vec();
        check.sort_unstable();
        if check.iter().enumerate().any(|(i, j)| i != *j) || order.len() != self.len() {
            return Err(Error::InvalidParameter(
                "order must be a permutation".into(),
            ));
        }
        let inputs = match &self.inputs {
            Inputs::Dense { dim, values } => Inputs::Dense {
                dim: *dim,
                values: order
                    .iter()
                    .flat_map(|&j| values[j * dim..(j + 1) * dim].iter().copied())
                    .collect(),
            },
            Inputs::OneHot { indices, scales } => Inputs::OneHot {
                indices: order.iter().map(|&j| indices[j]).collect(),
                scales: order.iter().map(|&j| scales[j]).collect(),
            },
        };
        Ok(Dataset {
            inputs,
            labels: order.iter().map(|&j| self.labels[j]).collect(),
            noise: order.iter().map(|&j| self.noise[j]).collect(),
        })
    }

    fn dim(&self) -> Option<usize> {
        match &self.inputs {
            Inputs::Dense { dim, .. } => Some(*dim),
            Inputs::OneHot { .. } => None,
        }
    }

    #[inline]
    fn point(&self, j: usize) -> Point<'_> {
        match &self.inputs {
            Inputs::Dense { dim, values } => Point::Dense(&values[j * dim..(j + 1) * dim]),
            Inputs::OneHot { indices, scales } => Point::OneHot {
                index: indices[j],
                scale: scales[j],
            },
        }
    }
}

/// Weights after a run, optionally with the bias and variance processes
/// `theta^bias` (noise-free, started at `w_0 - w*`) and `theta^var` (started
/// at zero), whose sum is `w - w*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub final_weight: Vec<f64>,
    pub final_bias: Option<Vec<f64>>,
    pub final_var: Option<Vec<f64>>,
    pub steps_taken: u64,
}

/// Draws a dataset for `run` and trains on it.
pub fn run_sgd(
    problem: &Problem,
    run: &SgdRun,
    source: DataSource<'_>,
    track_decomposition: bool,
) -> Result<Trajectory> {
    let data = Dataset::generate(problem, source, run.dataset_size, run.seed)?;
    run_on_dataset(
        problem,
        &data,
        run.epochs,
        run.learning_rate,
        run.seed,
        track_decomposition,
    )
}

fn check_dataset(problem: &Problem, data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::InvalidParameter("dataset is empty".into()));
    }
    match data.dim() {
        Some(d) if d != problem.dim() => Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: d,
        }),
        None if data
            .one_hot_indices()
            .is_some_and(|ix| ix.iter().any(|&i| i >= problem.dim())) =>
        {
            Err(Error::InvalidParameter("one-hot index out of range".into()))
        }
        _ => Ok(()),
    }
}

/// Visiting order of every epoch: sampling order first, then independent shuffles.
fn epoch_orders(n: usize, epochs: usize, seed: u64) -> impl Iterator<Item = Vec<usize>> {
    (0..epochs).map(move |k| {
        let mut order: Vec<usize> = (0..n).collect();
        if k > 0 {
            order.shuffle(&mut rng::permutation_stream(seed, k));
        }
        order
    })
}

/// Trains `epochs` passes over `data` with step `eta`; permutations come from `seed`.
pub fn run_on_dataset(
    problem: &Problem,
    data: &Dataset,
    epochs: usize,
    eta: f64,
    seed: u64,
    track_decomposition: bool,
) -> Result<Trajectory> {
    check_dataset(problem, data)?;
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(Error::InvalidParameter(format!("learning rate {eta}")));
    }
    let limit = divergence_limit(problem);
    let mut w = problem.init().to_vec();
    let mut tracked =
        track_decomposition.then(|| (problem.initial_error(), vec![0.0; problem.dim()]));
    let mut step: u64 = 0;
    for order in epoch_orders(data.len(), epochs, seed) {
        for j in order {
            let x = data.point(j);
            let g = x.inner(&w) - data.labels[j];
            x.sub_scaled(&mut w, eta * g);
            if let Some((bias, var)) = tracked.as_mut() {
                let gb = x.inner(bias);
                x.sub_scaled(bias, eta * gb);
                let gv = x.inner(var) - data.noise[j];
                x.sub_scaled(var, eta * gv);
            }
            step += 1;
            if !g.is_finite() || (step % DIVERGENCE_CHECK_EVERY == 0 && norm_sq(&w) > limit) {
                return Err(Error::Diverged { step, seed });
            }
        }
    }
    if norm_sq(&w) > limit || w.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged { step, seed });
    }
    let (final_bias, final_var) = match tracked {
        Some((b, v)) => (Some(b), Some(v)),
        None => (None, None),
    };
    Ok(Trajectory {
        final_weight: w,
        final_bias,
        final_var,
        steps_taken: step,
    })
}

/// Trains one copy of the weights per step size in `etas` over the same data
/// and permutations, returning the final excess risk of each.
pub fn risks_on_dataset(
    problem: &Problem,
    data: &Dataset,
    epochs: usize,
    etas: &[f64],
    seed: u64,
) -> Result<Vec<Result<f64>>> {
    check_dataset(problem, data)?;
    let limit = divergence_limit(problem);
    let mut runs: Vec<RunState> = etas
        .iter()
        .map(|&eta| RunState::new(problem, eta))
        .collect();
    let mut step: u64 = 0;
    for order in epoch_orders(data.len(), epochs, seed) {
        for j in order {
            let x = data.point(j);
            let y = data.labels[j];
            step += 1;
            let check = step % DIVERGENCE_CHECK_EVERY == 0;
            for run in runs.iter_mut() {
                run.step(x, y, step, check, limit);
            }
        }
    }
    Ok(runs
        .into_iter()
        .map(|r| r.finish(problem, step, seed, limit))
        .collect())
}

struct RunState {
    w: Vec<f64>,
    eta: f64,
    failed: Option<u64>,
}

impl RunState {
    fn new(problem: &Problem, eta: f64) -> Self {
        RunState {
            w: problem.init().to_vec(),
            eta,
            failed: None,
        }
    }

    #[inline]
    fn step(&mut self, x: Point<'_>, y: f64, step: u64, check: bool, limit: f64) {
        if self.failed.is_some() {
            return;
        }
        let g = x.inner(&self.w) - y;
        x.sub_scaled(&mut self.w, self.eta * g);
        if !g.is_finite() || (check && norm_sq(&self.w) > limit) {
            self.failed = Some(step);
        }
    }

    fn finish(self, problem: &Problem, step: u64, seed: u64, limit: f64) -> Result<f64> {
        if let Some(step) = self.failed {
            return Err(Error::Diverged { step, seed });
        }
        if norm_sq(&self.w) > limit || self.w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { step, seed });
        }
        excess_risk(problem, &self.w)
    }
}

/// One-pass SGD risks for every horizon in `horizons`, each with its own step
/// sizes, all driven by a single stream of fresh points under `seed`.
///
/// `horizons[h]` steps at `etas[h][g]` produce `out[h][g]`. The values are
/// bitwise identical to single-epoch [`risks_on_dataset`] runs on the dataset
/// prefix of the same length.
pub fn one_pass_risks(
    problem: &Problem,
    source: DataSource<'_>,
    horizons: &[usize],
    etas: &[Vec<f64>],
    seed: u64,
) -> Result<Vec<Vec<Result<f64>>>> {
    if horizons.len() != etas.len() {
        return Err(Error::DimensionMismatch {
            expected: horizons.len(),
            found: etas.len(),
        });
    }
    let limit = divergence_limit(problem);
    let mut stream = PointStream::new(problem, source, seed)?;
    let mut runs: Vec<(usize, Vec<RunState>)> = horizons
        .iter()
        .zip(etas)
        .map(|(&t, es)| (t, es.iter().map(|&e| RunState::new(problem, e)).collect()))
        .collect();
    let mut out: Vec<Option<Vec<Result<f64>>>> = horizons.iter().map(|_| None).collect();
    let max_t = horizons.iter().copied().max().unwrap_or(0);
    let mut row = vec![0.0; problem.dim()];
    for t in 0..max_t {
        let step = t as u64 + 1;
        let check = step % DIVERGENCE_CHECK_EVERY == 0;
        if stream.is_dense() {
            let (y, _) = stream.next_dense(&mut row);
            let x = Point::Dense(&row);
            for (horizon, states) in runs.iter_mut() {
                if t < *horizon {
                    states
                        .iter_mut()
                        .for_each(|s| s.step(x, y, step, check, limit));
                }
            }
        } else {
            let (index, scale, y, _) = stream.next_one_hot();
            let x = Point::OneHot { index, scale };
            for (horizon, states) in runs.iter_mut() {
                if t < *horizon {
                    states
                        .iter_mut()
                        .for_each(|s| s.step(x, y, step, check, limit));
                }
            }
        }
        for (h, (horizon, states)) in runs.iter_mut().enumerate() {
            if step as usize == *horizon {
                let done = std::mem::take(states);
                out[h] = Some(
                    done.into_iter()
                        .map(|s| s.finish(problem, step, seed, limit))
                        .collect(),
                );
            }
        }
    }
    Ok(out.into_iter().map(|o| o.unwrap_or_default()).collect())
}

fn divergence_limit(problem: &Problem) -> f64 {
    let bound = DIVERGENCE_FACTOR * (1.0 + norm_sq(problem.ground_truth()).sqrt());
    bound * bound
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let (ca, ra) = a.split_at(a.len() - a.len() % 4);
    let (cb, rb) = b.split_at(ca.len());
    for (x, y) in ca.chunks_exact(4).zip(cb.chunks_exact(4)) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Excess risk `1/2 (w - w*)^T H (w - w*)`.
pub fn excess_risk(problem: &Problem, w: &[f64]) -> Result<f64> {
    if w.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: w.len(),
        });
    }
    Ok(0.5
        * problem
            .spectrum()
            .eigenvalues()
            .iter()
            .zip(w.iter().zip(problem.ground_truth()))
            .map(|(l, (wi, ws))| l * (wi - ws) * (wi - ws))
            .sum::<f64>())
}

/// Monte Carlo estimate of an expected risk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub replicas: usize,
}

impl RiskEstimate {
    /// Mean and standard error of `samples`, shifted by the first sample so a
    /// constant sample reproduces its value exactly with zero error.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::InvalidParameter("need at least 2 replicas".into()));
        }
        let shift = samples[0];
        let mean_offset = samples.iter().map(|x| x - shift).sum::<f64>() / n as f64;
        let mean = shift + mean_offset;
        let var = samples
            .iter()
            .map(|x| (x - shift - mean_offset).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        Ok(RiskEstimate {
            mean,
            std_error: (var / n as f64).sqrt(),
            replicas: n,
        })
    }
}

/// Estimates `E[R(w)]` after `epochs` passes over `n` points at step `eta`,
/// over datasets, noise and shuffles. Replica `r` uses seed
/// `derive_seed(base_seed, r)`.
pub fn monte_carlo_risk(
    problem: &Problem,
    source: DataSource<'_>,
    epochs: usize,
    n: usize,
    eta: f64,
    replicas: usize,
    base_seed: u64,
) -> Result<RiskEstimate> {
    monte_carlo_risk_grid(problem, source, epochs, n, &[eta], replicas, base_seed)?
        .pop()
        .expect("one step size")
}

/// [`monte_carlo_risk`] for several step sizes sharing datasets and shuffles.
pub fn monte_carlo_risk_grid(
    problem: &Problem,
    source: DataSource<'_>,
    epochs: usize,
    n: usize,
    etas: &[f64],
    replicas: usize,
    base_seed: u64,
) -> Result<Vec<Result<RiskEstimate>>> {
    if replicas < 2 {
        return Err(Error::InvalidParameter("need at least 2 replicas".into()));
    }
    if epochs == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "epochs and dataset size must be >= 1".into(),
        ));
    }
    let per_replica: Vec<Vec<Result<f64>>> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let seed = rng::derive_seed(base_seed, r);
            let data = Dataset::generate(problem, source, n, seed)?;
            risks_on_dataset(problem, &data, epochs, etas, seed)
        })
        .collect::<Result<_>>()?;
    Ok(reduce_replicas(etas.len(), per_replica))
}

/// Column-wise estimates over replicas, in replica order; the first failing
/// replica of a column becomes that column's error.
pub(crate) fn reduce_replicas(
    columns: usize,
    per_replica: Vec<Vec<Result<f64>>>,
) -> Vec<Result<RiskEstimate>> {
    let mut samples: Vec<Result<Vec<f64>>> = (0..columns)
        .map(|_| Ok(Vec::with_capacity(per_replica.len())))
        .collect();
    for row in per_replica {
        for (col, value) in samples.iter_mut().zip(row) {
            if let Ok(s) = col {
                match value {
                    Ok(v) => s.push(v),
                    Err(e) => *col = Err(e),
                }
            }
        }
    }
    samples
        .into_iter()
        .map(|s| s.and_then(|s| RiskEstimate::from_samples(&s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_gaussian_isotropic, Spectrum};

    fn two_coord_zipf() -> ZipfModel {
        ZipfModel::explicit(vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0, 0.5]).unwrap()
    }

    #[test]
    fn zero_step_is_identity() {
        let mut p = make_gaussian_isotropic(5, 0.3, 1).unwrap();
        p = Problem::new(
            p.spectrum().clone(),
            p.ground_truth().to_vec(),
            0.3,
            Some(vec![0.5, -1.0, 2.0, 0.0, 1.5]),
            None,
        )
        .unwrap();
        let run = SgdRun::new(3, 20, 0.0, 9).unwrap();
        let t = run_sgd(&p, &run, DataSource::GaussianFresh, false).unwrap();
        assert_eq!(t.final_weight, p.init());
        assert_eq!(t.steps_taken, 60);
    }

    #[test]
    fn zipf_noiseless_matches_hand_recursion() {
        let model = two_coord_zipf();
        let problem = model.problem(0.0, 5).unwrap();
        let eta = 0.5;
        for seed in 0..20 {
            let run = SgdRun::new(3, 7, eta, seed).unwrap();
            let data = Dataset::generate(&problem, DataSource::ZipfFresh(&model), 7, seed).unwrap();
            let t = run_sgd(&problem, &run, DataSource::ZipfFresh(&model), false).unwrap();
            let counts = data
                .one_hot_indices()
                .unwrap()
                .iter()
                .fold([0i32; 2], |mut c, &i| {
                    c[i] += 1;
                    c
                });
            for i in 0..2 {
                let theta0 = -problem.ground_truth()[i];
                let expected = theta0 * (1.0 - eta * model.scales()[i]).powi(3 * counts[i]);
                let got = t.final_weight[i] - problem.ground_truth()[i];
                assert!(
                    (got - expected).abs() <= 1e-14 * (1.0 + theta0.abs()),
                    "{got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn fixed_seed_is_bitwise_deterministic() {
        let p = make_gaussian_isotropic(4, 0.2, 3).unwrap();
        let run = SgdRun::new(2, 3, 0.01, 77).unwrap();
        let a = run_sgd(&p, &run, DataSource::GaussianFresh, true).unwrap();
        let b = run_sgd(&p, &run, DataSource::GaussianFresh, true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn excess_risk_cases() {
        let p = make_gaussian_isotropic(3, 0.1, 0).unwrap();
        assert_eq!(excess_risk(&p, p.ground_truth()).unwrap(), 0.0);
        let s = Problem::new(
            Spectrum::new(vec![2.0]).unwrap(),
            vec![1.0],
            0.0,
            None,
            Some(2.0),
        )
        .unwrap();
        assert_eq!(excess_risk(&s, &[4.0]).unwrap(), 9.0);
        assert!(matches!(
            excess_risk(&p, &[0.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 1
            })
        ));
    }

    #[test]
    fn divergence_reports_step() {
        let p = make_gaussian_isotropic(10, 0.1, 0).unwrap();
        let run = SgdRun::new(50, 100, 5.0, 1).unwrap();
        match run_sgd(&p, &run, DataSource::GaussianFresh, false) {
            Err(Error::Diverged { step, seed }) => {
                assert!(step > 0 && step <= 5000);
                assert_eq!(seed, 1);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn zero_step_monte_carlo_is_exact() {
        let p = make_gaussian_isotropic(6, 0.1, 2).unwrap();
        let est = monte_carlo_risk(&p, DataSource::GaussianFresh, 2, 10, 0.0, 8, 1).unwrap();
        assert_eq!(est.mean, excess_risk(&p, p.init()).unwrap());
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.replicas, 8);
        assert!(monte_carlo_risk(&p, DataSource::GaussianFresh, 2, 10, 0.0, 1, 1).is_err());
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let p = make_gaussian_isotropic(6, 0.1, 2).unwrap();
        let a = monte_carlo_risk(&p, DataSource::GaussianFresh, 2, 30, 0.02, 16, 5).unwrap();
        let b = monte_carlo_risk(&p, DataSource::GaussianFresh, 2, 30, 0.02, 16, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.std_error > 0.0);
    }

    #[test]
    fn grid_matches_single_rate_runs() {
        let p = make_gaussian_isotropic(5, 0.2, 2).unwrap();
        let etas = [0.01, 0.05];
        let grid =
            monte_carlo_risk_grid(&p, DataSource::GaussianFresh, 3, 20, &etas, 4, 11).unwrap();
        for (eta, est) in etas.iter().zip(grid) {
            let single =
                monte_carlo_risk(&p, DataSource::GaussianFresh, 3, 20, *eta, 4, 11).unwrap();
            assert_eq!(est.unwrap(), single);
        }
    }

    #[test]
    fn one_pass_stream_matches_stored_dataset() {
        let p = make_gaussian_isotropic(7, 0.3, 4).unwrap();
        let horizons = [5, 13, 40];
        let etas: Vec<Vec<f64>> = vec![vec![0.01, 0.02], vec![0.03], vec![0.004, 0.02]];
        let streamed = one_pass_risks(&p, DataSource::GaussianFresh, &horizons, &etas, 99).unwrap();
        for (h, t) in horizons.iter().enumerate() {
            let data = Dataset::generate(&p, DataSource::GaussianFresh, *t, 99).unwrap();
            let stored = risks_on_dataset(&p, &data, 1, &etas[h], 99).unwrap();
            for (a, b) in streamed[h].iter().zip(stored) {
                assert_eq!(a.as_ref().unwrap().to_bits(), b.unwrap().to_bits());
            }
        }
    }

    #[test]
    fn risk_estimate_standard_error() {
        let e = RiskEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(e.mean, 2.5);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((e.std_error - sd / 2.0).abs() < 1e-15);
    }

    #[test]
    fn reorder_rejects_non_permutations() {
        let model = two_coord_zipf();
        let p = model.problem(0.0, 1).unwrap();
        let d = Dataset::generate(&p, DataSource::ZipfFresh(&model), 3, 1).unwrap();
        assert!(d.reordered(&[0, 0, 1]).is_err());
        assert!(d.reordered(&[2, 0, 1]).is_ok());
    }
}
