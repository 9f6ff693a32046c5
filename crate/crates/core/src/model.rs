//! Regression problems and the Zipf one-hot data model.
//!
//! Everything works in the eigenbasis of the input covariance, so a problem
//! is described by the diagonal of `H`, the ground truth `w*`, the label
//! noise level and the starting point of SGD.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Relative tolerance deciding which eigenvalues belong to the bottom eigenspace.
pub const BOTTOM_EIGENSPACE_RTOL: f64 = 1e-9;

/// Number of norm standard deviations used for the Gaussian input bound `D`.
const GAUSSIAN_BOUND_SIGMAS: f64 = 6.0;

/// Eigenvalues of a diagonal covariance, sorted non-increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumDoc")]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

#[derive(Deserialize)]
struct SpectrumDoc {
    eigenvalues: Vec<f64>,
}

impl TryFrom<SpectrumDoc> for Spectrum {
    type Error = Error;

    fn try_from(doc: SpectrumDoc) -> Result<Self> {
        Spectrum::new(doc.eigenvalues)
    }
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidParameter("spectrum must have d >= 1".into()));
        }
        if let Some(bad) = eigenvalues.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "eigenvalues must be finite and strictly positive, found {bad}"
            )));
        }
        if eigenvalues.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "eigenvalues must be sorted non-increasing".into(),
            ));
        }
        Ok(Spectrum { eigenvalues })
    }

    /// The all-ones spectrum of an isotropic problem.
    pub fn isotropic(d: usize) -> Result<Self> {
        Spectrum::new(vec![1.0; d])
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn trace_sq(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }

    /// Indices whose eigenvalue is within `BOTTOM_EIGENSPACE_RTOL` of the minimum.
    pub fn bottom_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let cutoff = self.lambda_min() * (1.0 + BOTTOM_EIGENSPACE_RTOL);
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(move |(_, l)| **l <= cutoff)
            .map(|(i, _)| i)
    }
}

/// A linear regression problem `y = <w*, x> + xi` with diagonal covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemDoc")]
pub struct Problem {
    spectrum: Spectrum,
    ground_truth: Vec<f64>,
    noise_std: f64,
    init: Vec<f64>,
    data_bound: f64,
}

#[derive(Deserialize)]
struct ProblemDoc {
    spectrum: Spectrum,
    ground_truth: Vec<f64>,
    noise_std: f64,
    #[serde(default)]
    init: Option<Vec<f64>>,
    #[serde(default)]
    data_bound: Option<f64>,
}

impl TryFrom<ProblemDoc> for Problem {
    type Error = Error;

    fn try_from(doc: ProblemDoc) -> Result<Self> {
        Problem::new(
            doc.spectrum,
            doc.ground_truth,
            doc.noise_std,
            doc.init,
            doc.data_bound,
        )
    }
}

impl Problem {
    /// Builds a problem. `init` defaults to zero; `data_bound` defaults to the
    /// Gaussian norm bound `sqrt(tr H) + 6 sqrt(lambda_1)`.
    pub fn new(
        spectrum: Spectrum,
        ground_truth: Vec<f64>,
        noise_std: f64,
        init: Option<Vec<f64>>,
        data_bound: Option<f64>,
    ) -> Result<Self> {
        let d = spectrum.dim();
        if ground_truth.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: ground_truth.len(),
            });
        }
        if ground_truth.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "ground truth must be finite".into(),
            ));
        }
        if !(noise_std.is_finite() && noise_std >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise std must be finite and non-negative, got {noise_std}"
            )));
        }
        let init = init.unwrap_or_else(|| vec![0.0; d]);
        if init.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: init.len(),
            });
        }
        let data_bound = data_bound.unwrap_or_else(|| {
            spectrum.trace().sqrt() + GAUSSIAN_BOUND_SIGMAS * spectrum.lambda_max().sqrt()
        });
        if !(data_bound.is_finite() && data_bound > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "data bound must be positive, got {data_bound}"
            )));
        }
        if spectrum.lambda_max() > data_bound * data_bound * (1.0 + 1e-12) {
            return Err(Error::Assumption {
                assumption: "bounded inputs (lambda_1 <= D^2)",
                detail: format!(
                    "lambda_1 = {} exceeds D^2 = {}",
                    spectrum.lambda_max(),
                    data_bound * data_bound
                ),
            });
        }
        Ok(Problem {
            spectrum,
            ground_truth,
            noise_std,
            init,
            data_bound,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn ground_truth(&self) -> &[f64] {
        &self.ground_truth
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }

    pub fn init(&self) -> &[f64] {
        &self.init
    }

    pub fn data_bound(&self) -> f64 {
        self.data_bound
    }

    /// Largest step size of the stability condition `eta <= 1/D^2`.
    pub fn max_stable_lr(&self) -> f64 {
        1.0 / (self.data_bound * self.data_bound)
    }

    /// Initial error `theta_0 = w_0 - w*`.
    pub fn initial_error(&self) -> Vec<f64> {
        self.init
            .iter()
            .zip(&self.ground_truth)
            .map(|(w0, ws)| w0 - ws)
            .collect()
    }

    /// Squared mass of the initial error inside the bottom eigenspace.
    pub fn bottom_error_sq(&self) -> f64 {
        let theta0 = self.initial_error();
        self.spectrum
            .bottom_indices()
            .map(|i| theta0[i] * theta0[i])
            .sum()
    }
}

/// Isotropic Gaussian-input problem: `H = I_d`, `w*` standard normal under
/// `seed`, `w_0 = 0` and `D = sqrt(d) + 6`.
///
/// Inputs are simulated from the untruncated normal; `D` only serves the
/// step size stability check.
pub fn make_gaussian_isotropic(d: usize, sigma: f64, seed: u64) -> Result<Problem> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let mut rng = rng::stream(seed, rng::STREAM_GROUND_TRUTH);
    let ground_truth: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
    Problem::new(
        Spectrum::isotropic(d)?,
        ground_truth,
        sigma,
        None,
        Some((d as f64).sqrt() + GAUSSIAN_BOUND_SIGMAS),
    )
}

/// Law generating the Zipf probabilities and scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZipfLaw {
    /// `p_i ∝ i^-(a-b)`, `Lambda_i = i^-b`.
    PowerLaw { a: f64, b: f64 },
    /// `p_i ∝ i^-a log^b(i+1)`, `Lambda_i = log^-b(i+1)`.
    LogPowerLaw { a: f64, b: f64 },
    /// Probabilities and scales given directly.
    Explicit,
}

impl ZipfLaw {
    fn validate(&self) -> Result<()> {
        match *self {
            ZipfLaw::PowerLaw { a, b } => {
                if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0 && a - b > 1.0) {
                    return Err(Error::Assumption {
                        assumption: "power-law spectrum (a, b > 0, a - b > 1)",
                        detail: format!("a = {a}, b = {b}"),
                    });
                }
            }
            ZipfLaw::LogPowerLaw { a, b } => {
                if !(a.is_finite() && b.is_finite() && a > 1.0 && b > 0.0) {
                    return Err(Error::Assumption {
                        assumption: "logarithmic power-law spectrum (a > 1, b > 0)",
                        detail: format!("a = {a}, b = {b}"),
                    });
                }
            }
            ZipfLaw::Explicit => {}
        }
        Ok(())
    }
}

/// One-hot data model: `x = mu_i e_i` with probability `p_i`, `Lambda_i = mu_i^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZipfModel {
    probabilities: Vec<f64>,
    scales: Vec<f64>,
    law: ZipfLaw,
}

/// Builds the Zipf model of `law` in dimension `d`. The normalizing constant is
/// a direct finite sum.
pub fn make_zipf(law: ZipfLaw, d: usize) -> Result<ZipfModel> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    law.validate()?;
    let (weights, scales): (Vec<f64>, Vec<f64>) = match law {
        ZipfLaw::PowerLaw { a, b } => (1..=d)
            .map(|i| {
                let i = i as f64;
                (i.powf(-(a - b)), i.powf(-b))
            })
            .unzip(),
        ZipfLaw::LogPowerLaw { a, b } => (1..=d)
            .map(|i| {
                let i = i as f64;
                let log_b = (i + 1.0).ln().powf(b);
                (i.powf(-a) * log_b, 1.0 / log_b)
            })
            .unzip(),
        ZipfLaw::Explicit => {
            return Err(Error::InvalidParameter(
                "explicit Zipf models are built with ZipfModel::explicit".into(),
            ))
        }
    };
    let total: f64 = weights.iter().sum();
    let probabilities = weights.into_iter().map(|w| w / total).collect();
    ZipfModel::checked(probabilities, scales, law)
}

impl ZipfModel {
    /// A model with given probabilities (summing to one) and non-increasing scales.
    pub fn explicit(probabilities: Vec<f64>, scales: Vec<f64>) -> Result<Self> {
        ZipfModel::checked(probabilities, scales, ZipfLaw::Explicit)
    }

    fn checked(probabilities: Vec<f64>, scales: Vec<f64>, law: ZipfLaw) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if probabilities.len() != scales.len() {
            return Err(Error::DimensionMismatch {
                expected: probabilities.len(),
                found: scales.len(),
            });
        }
        if probabilities.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidParameter(
                "probabilities must be strictly positive".into(),
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidParameter(
                "scales must be strictly positive".into(),
            ));
        }
        if scales.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "scales must be non-increasing".into(),
            ));
        }
        Ok(ZipfModel {
            probabilities,
            scales,
            law,
        })
    }

    pub fn dim(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `Lambda_i`, the squared input scales.
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn law(&self) -> ZipfLaw {
        self.law
    }

    /// `Lambda_1`, the largest scale.
    pub fn max_scale(&self) -> f64 {
        self.scales[0]
    }

    /// Diagonal of the Hessian, `p_i Lambda_i`.
    pub fn hessian_diagonal(&self) -> Vec<f64> {
        self.probabilities
            .iter()
            .zip(&self.scales)
            .map(|(p, l)| p * l)
            .collect()
    }

    /// Ground truth with i.i.d. standard normal coordinates (isotropic prior).
    pub fn sample_ground_truth(&self, seed: u64) -> Vec<f64> {
        let mut rng = rng::stream(seed, rng::STREAM_GROUND_TRUTH);
        (0..self.dim())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect()
    }

    /// Regression problem for simulating this model: `H = diag(p_i Lambda_i)`,
    /// `w*` drawn from the isotropic prior, `w_0 = 0`, `D = sqrt(Lambda_1)`.
    pub fn problem(&self, noise_std: f64, seed: u64) -> Result<Problem> {
        let spectrum = Spectrum::new(self.hessian_diagonal()).map_err(|_| {
            Error::InvalidParameter("Zipf Hessian p_i Lambda_i must be non-increasing".into())
        })?;
        Problem::new(
            spectrum,
            self.sample_ground_truth(seed),
            noise_std,
            None,
            Some(self.max_scale().sqrt()),
        )
    }
}

/// Dimension used when a Zipf config omits `d`.
pub const DEFAULT_ZIPF_DIM: usize = 10_000;

fn default_zipf_dim() -> usize {
    DEFAULT_ZIPF_DIM
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
enum ZipfDoc {
    Power {
        a: f64,
        b: f64,
        #[serde(default = "default_zipf_dim")]
        d: usize,
    },
    LogPower {
        a: f64,
        b: f64,
        #[serde(default = "default_zipf_dim")]
        d: usize,
    },
    Explicit {
        probabilities: Vec<f64>,
        scales: Vec<f64>,
    },
}

impl Serialize for ZipfModel {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let doc = match self.law {
            ZipfLaw::PowerLaw { a, b } => ZipfDoc::Power { a, b, d },
            ZipfLaw::LogPowerLaw { a, b } => ZipfDoc::LogPower { a, b, d },
            ZipfLaw::Explicit => ZipfDoc::Explicit {
                probabilities: self.probabilities.clone(),
                scales: self.scales.clone(),
            },
        };
        doc.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ZipfModel {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let model = match ZipfDoc::deserialize(deserializer)? {
            ZipfDoc::Power { a, b, d } => make_zipf(ZipfLaw::PowerLaw { a, b }, d),
            ZipfDoc::LogPower { a, b, d } => make_zipf(ZipfLaw::LogPowerLaw { a, b }, d),
            ZipfDoc::Explicit {
                probabilities,
                scales,
            } => ZipfModel::explicit(probabilities, scales),
        };
        model.map_err(serde::de::Error::custom)
    }
}

/// One training configuration: `K` epochs over `N` points at constant step `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgdRun {
    pub epochs: usize,
    pub dataset_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl SgdRun {
    pub fn new(epochs: usize, dataset_size: usize, learning_rate: f64, seed: u64) -> Result<Self> {
        if epochs == 0 || dataset_size == 0 {
            return Err(Error::InvalidParameter(
                "epochs and dataset size must be >= 1".into(),
            ));
        }
        if !(learning_rate.is_finite() && learning_rate >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "learning rate must be finite and non-negative, got {learning_rate}"
            )));
        }
        Ok(SgdRun {
            epochs,
            dataset_size,
            learning_rate,
            seed,
        })
    }

    pub fn steps(&self) -> u64 {
        self.epochs as u64 * self.dataset_size as u64
    }

    /// Whether `eta <= 1/D^2` for `problem`.
    pub fn is_stable_for(&self, problem: &Problem) -> bool {
        self.learning_rate <= problem.max_stable_lr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_problem_matches_experiment_setup() {
        let p = make_gaussian_isotropic(100, 0.1, 0).unwrap();
        assert_eq!(p.spectrum().lambda_min(), 1.0);
        assert_eq!(p.spectrum().trace(), 100.0);
        assert_eq!(p.data_bound(), 16.0);
        assert!(p.init().iter().all(|w| *w == 0.0));
        assert_eq!(p.spectrum().bottom_indices().count(), 100);
    }

    #[test]
    fn isotropic_problem_is_deterministic() {
        let a = make_gaussian_isotropic(3, 0.5, 7).unwrap();
        let b = make_gaussian_isotropic(3, 0.5, 7).unwrap();
        let c = make_gaussian_isotropic(3, 0.5, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.ground_truth(), c.ground_truth());
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(make_gaussian_isotropic(0, 0.1, 0).is_err());
        assert!(make_zipf(ZipfLaw::PowerLaw { a: 3.0, b: 1.0 }, 0).is_err());
    }

    #[test]
    fn scalar_problem_initial_error() {
        let p = make_gaussian_isotropic(1, 0.0, 3).unwrap();
        let e = p.initial_error();
        assert_eq!(e, vec![-p.ground_truth()[0]]);
        assert_eq!(p.bottom_error_sq(), p.ground_truth()[0].powi(2));
    }

    #[test]
    fn spectrum_validation() {
        assert!(Spectrum::new(vec![]).is_err());
        assert!(Spectrum::new(vec![1.0, 2.0]).is_err());
        assert!(Spectrum::new(vec![1.0, 0.0]).is_err());
        assert!(Spectrum::new(vec![2.0, 1.0, 1.0]).is_ok());
    }

    #[test]
    fn bottom_eigenspace_uses_relative_tolerance() {
        let s = Spectrum::new(vec![3.0, 1.0 + 5e-10, 1.0, 1.0]).unwrap();
        assert_eq!(s.bottom_indices().collect::<Vec<_>>(), vec![1, 2, 3]);
        let s = Spectrum::new(vec![3.0, 1.0 + 1e-6, 1.0]).unwrap();
        assert_eq!(s.bottom_indices().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn problem_rejects_bad_shapes() {
        let s = Spectrum::isotropic(2).unwrap();
        assert!(matches!(
            Problem::new(s.clone(), vec![1.0], 0.1, None, None),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Problem::new(s.clone(), vec![1.0, 1.0], 0.1, Some(vec![0.0]), None).is_err());
        assert!(Problem::new(s.clone(), vec![1.0, 1.0], -1.0, None, None).is_err());
        assert!(matches!(
            Problem::new(s, vec![1.0, 1.0], 0.1, None, Some(0.5)),
            Err(Error::Assumption { .. })
        ));
    }

    #[test]
    fn power_law_experiment_configuration() {
        let m = make_zipf(ZipfLaw::PowerLaw { a: 4.5, b: 1.0 }, 100_000).unwrap();
        let total: f64 = m.probabilities().iter().sum();
        assert!((total - 1.0).abs() <= 1e-12);
        assert_eq!(m.scales()[1], 0.5);
    }

    #[test]
    fn log_power_law_experiment_configuration() {
        let m = make_zipf(ZipfLaw::LogPowerLaw { a: 1.5, b: 2.0 }, 100_000).unwrap();
        let total: f64 = m.probabilities().iter().sum();
        assert!((total - 1.0).abs() <= 1e-12);
        assert!((m.max_scale() - 1.0 / 2f64.ln().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn single_atom_normalization() {
        let m = make_zipf(ZipfLaw::PowerLaw { a: 3.0, b: 1.0 }, 1).unwrap();
        assert_eq!(m.probabilities(), &[1.0]);
        assert_eq!(m.scales(), &[1.0]);
    }

    #[test]
    fn assumption_violations_are_named() {
        let err = make_zipf(ZipfLaw::PowerLaw { a: 2.0, b: 1.5 }, 10).unwrap_err();
        assert!(err.to_string().contains("power-law spectrum"));
        let err = make_zipf(ZipfLaw::LogPowerLaw { a: 1.0, b: 2.0 }, 10).unwrap_err();
        assert!(err.to_string().contains("logarithmic power-law"));
        let err = make_zipf(ZipfLaw::LogPowerLaw { a: 1.5, b: 0.0 }, 10).unwrap_err();
        assert!(err.to_string().contains("logarithmic power-law"));
    }

    #[test]
    fn explicit_model_validation() {
        assert!(ZipfModel::explicit(vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0, 0.5]).is_ok());
        assert!(ZipfModel::explicit(vec![0.5, 0.4], vec![1.0, 0.5]).is_err());
        assert!(ZipfModel::explicit(vec![0.5, 0.5], vec![0.5, 1.0]).is_err());
        assert!(ZipfModel::explicit(vec![1.0, 0.0], vec![1.0, 0.5]).is_err());
    }

    #[test]
    fn zipf_json_is_tagged_by_law() {
        let m = make_zipf(ZipfLaw::PowerLaw { a: 4.5, b: 1.0 }, 1000).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"law": "power", "a": 4.5, "b": 1.0, "d": 1000})
        );
        let back: ZipfModel = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);

        let bad = serde_json::json!({"law": "power", "a": 1.5, "b": 1.0, "d": 10});
        assert!(serde_json::from_value::<ZipfModel>(bad).is_err());
    }

    #[test]
    fn problem_json_round_trip_validates() {
        let p = make_gaussian_isotropic(4, 0.1, 1).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: Problem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);

        let unsorted =
            r#"{"spectrum":{"eigenvalues":[1.0,2.0]},"ground_truth":[0,0],"noise_std":0.1}"#;
        assert!(serde_json::from_str::<Problem>(unsorted).is_err());
        let minimal =
            r#"{"spectrum":{"eigenvalues":[2.0,1.0]},"ground_truth":[1,0],"noise_std":0.1}"#;
        let p: Problem = serde_json::from_str(minimal).unwrap();
        assert_eq!(p.init(), &[0.0, 0.0]);
    }

    #[test]
    fn zipf_problem_uses_hessian_diagonal() {
        let m = ZipfModel::explicit(vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0, 0.5]).unwrap();
        let p = m.problem(0.0, 3).unwrap();
        assert_eq!(p.spectrum().eigenvalues(), &[2.0 / 3.0, 1.0 / 6.0]);
        assert_eq!(p.data_bound(), 1.0);
    }

    #[test]
    fn stability_check() {
        let p = make_gaussian_isotropic(100, 0.1, 0).unwrap();
        assert!(SgdRun::new(1, 10, 1.0 / 256.0, 0)
            .unwrap()
            .is_stable_for(&p));
        assert!(!SgdRun::new(1, 10, 0.01, 0).unwrap().is_stable_for(&p));
        assert!(SgdRun::new(0, 10, 0.01, 0).is_err());
    }
}
