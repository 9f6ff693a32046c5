//! Analytic risk formulas.
//!
//! Because `H` is diagonal every matrix expression reduces to a sum over
//! eigenvalues. Powers `(1 - eta*lambda)^m` with `m` up to `2KN ~ 1e8` are
//! evaluated in log space through `ln_1p`/`exp_m1`, which keeps `1 - q^m`
//! accurate when `q^m` is close to one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Problem, ZipfModel};

/// The three-term risk approximation: bias, across-epoch variance and
/// within-epoch variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskBreakdown {
    pub bias: f64,
    pub var_across_epochs: f64,
    pub var_within_epoch: f64,
    pub total: f64,
}

/// Approximate expected excess risk of `epochs` passes over `n` points at step `eta`.
///
/// ```text
/// bias   = 1/2 sum_i lambda_i theta0_i^2 q_i^(2KN)
/// across = sigma^2/N sum_i (1 - q_i^(KN)) (q_i^N - q_i^(KN)) / (1 + q_i^N)
/// within = eta sigma^2/2 sum_i lambda_i (1 - q_i^(2KN)) / (2 - eta lambda_i)
/// ```
///
/// with `q_i = 1 - eta lambda_i`. Requires `0 < eta < 1/lambda_1`.
pub fn approx_risk(problem: &Problem, epochs: usize, n: usize, eta: f64) -> Result<RiskBreakdown> {
    check_counts(epochs, n)?;
    let lambda_max = problem.spectrum().lambda_max();
    if !(eta > 0.0 && eta < 1.0 / lambda_max) {
        return Err(Error::LearningRateDomain {
            eta,
            range: format!("(0, 1/lambda_1) = (0, {})", 1.0 / lambda_max),
        });
    }
    let sigma2 = problem.noise_std().powi(2);
    let n_f = n as f64;
    let kn = epochs as f64 * n_f;
    let theta0 = problem.initial_error();

    let (mut bias, mut across, mut within) = (0.0, 0.0, 0.0);
    for (&lambda, t0) in problem.spectrum().eigenvalues().iter().zip(&theta0) {
        let log_q = (-eta * lambda).ln_1p();
        let q_n = (n_f * log_q).exp();
        let q_2kn = (2.0 * kn * log_q).exp();
        // 1 - q^(KN) and q^N - q^(KN) = q^N (1 - q^((K-1)N)), exactly zero for K = 1.
        let one_minus_q_kn = -(kn * log_q).exp_m1();
        let q_n_minus_q_kn = q_n * -((kn - n_f) * log_q).exp_m1();
        let one_minus_q_2kn = -(2.0 * kn * log_q).exp_m1();

        bias += lambda * t0 * t0 * q_2kn;
        across += one_minus_q_kn * q_n_minus_q_kn / (1.0 + q_n);
        within += lambda * one_minus_q_2kn / (2.0 - eta * lambda);
    }
    let bias = 0.5 * bias;
    let var_across_epochs = sigma2 / n_f * across;
    let var_within_epoch = 0.5 * eta * sigma2 * within;
    Ok(RiskBreakdown {
        bias,
        var_across_epochs,
        var_within_epoch,
        total: bias + var_across_epochs + var_within_epoch,
    })
}

/// Which simplified risk to evaluate; the large-`K` form adds the `sigma^2 d/(2N)` floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SmallK,
    LargeK,
}

/// Simplified risk `M(K, N; eta)`:
/// `1/2 theta_d^2 lambda_d exp(-2 lambda_d eta K N) + eta tr(H) sigma^2 / 4`,
/// plus `sigma^2 d / (2N)` in the large-`K` regime.
pub fn simplified_risk(
    problem: &Problem,
    epochs: usize,
    n: usize,
    eta: f64,
    regime: Regime,
) -> Result<f64> {
    check_counts(epochs, n)?;
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(Error::LearningRateDomain {
            eta,
            range: "[0, inf)".into(),
        });
    }
    let spectrum = problem.spectrum();
    let lambda_d = spectrum.lambda_min();
    let sigma2 = problem.noise_std().powi(2);
    let kn = epochs as f64 * n as f64;
    let mut m = 0.5 * problem.bottom_error_sq() * lambda_d * (-2.0 * lambda_d * eta * kn).exp()
        + eta * spectrum.trace() * sigma2 / 4.0;
    if regime == Regime::LargeK {
        m += sigma2 * problem.dim() as f64 / (2.0 * n as f64);
    }
    Ok(m)
}

/// Approximately optimal constant step size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalLr {
    pub eta: f64,
    /// `rho = 4 theta_d^2 lambda_d / (tr(H) sigma^2)`.
    pub rho: f64,
    /// Set when `eta > 1/D^2`, outside the stability range.
    pub exceeds_stability: bool,
}

/// `eta' = log(rho K N) / (2 lambda_d K N)`.
pub fn optimal_lr(problem: &Problem, epochs: usize, n: usize) -> Result<OptimalLr> {
    check_counts(epochs, n)?;
    optimal_lr_for_steps(problem, epochs as f64 * n as f64)
}

/// [`optimal_lr`] as a function of the step count `T = KN` alone.
pub fn optimal_lr_for_steps(problem: &Problem, steps: f64) -> Result<OptimalLr> {
    let sigma = problem.noise_std();
    if sigma == 0.0 {
        return Err(Error::Noiseless);
    }
    let spectrum = problem.spectrum();
    let lambda_d = spectrum.lambda_min();
    let rho = 4.0 * problem.bottom_error_sq() * lambda_d / (spectrum.trace() * sigma * sigma);
    if !(rho * steps > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rho*K*N = {} <= 1 gives a non-positive step size",
            rho * steps
        )));
    }
    let eta = (rho * steps).ln() / (2.0 * lambda_d * steps);
    Ok(OptimalLr {
        eta,
        rho,
        exceeds_stability: eta > problem.max_stable_lr(),
    })
}

/// Exact expected excess risk of the Zipf one-hot model under the isotropic prior:
///
/// ```text
/// 1/2 sum_i p_i Lambda_i (1 - p_i + p_i (1 - eta Lambda_i)^(2K))^N
/// ```
///
/// `n` may be fractional. Requires `0 <= eta < 2/Lambda_1`.
pub fn zipf_risk(model: &ZipfModel, epochs: usize, n: f64, eta: f64) -> Result<f64> {
    if epochs == 0 {
        return Err(Error::InvalidParameter("epochs must be >= 1".into()));
    }
    if !(n.is_finite() && n >= 0.0) {
        return Err(Error::InvalidParameter(format!("dataset size {n}")));
    }
    let eta_max = 2.0 / model.max_scale();
    if !(eta >= 0.0 && eta < eta_max) {
        return Err(Error::LearningRateDomain {
            eta,
            range: format!("[0, 2/Lambda_1) = [0, {eta_max})"),
        });
    }
    let two_k = 2.0 * epochs as f64;
    let risk: f64 = model
        .probabilities()
        .iter()
        .zip(model.scales())
        .map(|(&p, &scale)| {
            let q = 1.0 - eta * scale;
            // 1 - q^(2K)
            let forgotten = if q == 0.0 {
                1.0
            } else {
                -(two_k * q.abs().ln()).exp_m1()
            };
            let shrink = p * forgotten;
            let factor = if shrink >= 1.0 {
                if n > 0.0 {
                    0.0
                } else {
                    1.0
                }
            } else {
                (n * (-shrink).ln_1p()).exp()
            };
            p * scale * factor
        })
        .sum();
    Ok(0.5 * risk)
}

/// Empirical effective dataset size `(1 + R*(1 - exp(-(K-1)/R*))) N` of
/// Muennighoff et al.
pub fn muennighoff_effective_n(epochs: usize, n: f64, r_star: f64) -> f64 {
    debug_assert!(epochs >= 1 && r_star > 0.0);
    let repeats = epochs.saturating_sub(1) as f64;
    (1.0 - r_star * (-repeats / r_star).exp_m1()) * n
}

/// `R*` fitted by Muennighoff et al.
pub const MUENNIGHOFF_R_STAR: f64 = 15.39;

fn check_counts(epochs: usize, n: usize) -> Result<()> {
    if epochs == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "epochs and dataset size must be >= 1".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_gaussian_isotropic, make_zipf, Spectrum, ZipfLaw};

    fn scalar_problem(sigma: f64, theta_sq: f64) -> Problem {
        Problem::new(
            Spectrum::new(vec![1.0]).unwrap(),
            vec![theta_sq.sqrt()],
            sigma,
            None,
            Some(1.0),
        )
        .unwrap()
    }

    #[test]
    fn tiny_step_keeps_initial_risk() {
        let p = make_gaussian_isotropic(10, 0.3, 1).unwrap();
        let r = approx_risk(&p, 3, 100, 1e-13).unwrap();
        let initial = 0.5 * p.ground_truth().iter().map(|w| w * w).sum::<f64>();
        assert!((r.bias - initial).abs() < 1e-9 * initial);
        assert!(r.var_across_epochs < 1e-20);
        assert!(r.var_within_epoch < 1e-20);
    }

    #[test]
    fn single_epoch_has_no_across_epoch_variance() {
        let p = make_gaussian_isotropic(20, 0.1, 2).unwrap();
        for eta in [1e-4, 1e-3, 0.05] {
            let r = approx_risk(&p, 1, 500, eta).unwrap();
            assert_eq!(r.var_across_epochs, 0.0);
            assert_eq!(r.total, r.bias + r.var_within_epoch);
        }
    }

    #[test]
    fn approx_risk_domain() {
        let p = make_gaussian_isotropic(3, 0.1, 2).unwrap();
        assert!(approx_risk(&p, 1, 10, 1.0).is_err());
        assert!(approx_risk(&p, 1, 10, 0.0).is_err());
        assert!(approx_risk(&p, 0, 10, 0.1).is_err());
    }

    #[test]
    fn noiseless_simplified_risk_decreases_in_step() {
        let p = make_gaussian_isotropic(5, 0.0, 3).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..50 {
            let m = simplified_risk(&p, 2, 100, i as f64 * 1e-3, Regime::SmallK).unwrap();
            let expected = 0.5 * p.bottom_error_sq() * (-2.0 * i as f64 * 1e-3 * 200.0).exp();
            assert!((m - expected).abs() <= 1e-15 * expected);
            assert!(m < prev);
            prev = m;
        }
    }

    #[test]
    fn regime_delta_is_noise_floor() {
        let p = make_gaussian_isotropic(50, 0.2, 3).unwrap();
        let small = simplified_risk(&p, 8, 1000, 1e-3, Regime::SmallK).unwrap();
        let large = simplified_risk(&p, 8, 1000, 1e-3, Regime::LargeK).unwrap();
        let floor = 0.04 * 50.0 / 2000.0;
        assert!(((large - small) - floor).abs() < 1e-15);
    }

    #[test]
    fn unit_parameter_optimal_lr() {
        // rho = 4 * (1/4) * 1 / (1 * 1) = 1 and K N = e^2 give eta' = 2 / (2 e^2).
        let p = scalar_problem(1.0, 0.25);
        let steps = std::f64::consts::E.powi(2);
        let lr = optimal_lr_for_steps(&p, steps).unwrap();
        assert_eq!(lr.rho, 1.0);
        assert!((lr.eta - (-2.0f64).exp()).abs() < 1e-16);
        assert!(!lr.exceeds_stability);
        let lr = optimal_lr(&p, 1, 7).unwrap();
        assert!((lr.eta - 7f64.ln() / 14.0).abs() < 1e-16);
    }

    #[test]
    fn optimal_lr_depends_only_on_total_steps() {
        let p = make_gaussian_isotropic(100, 0.1, 0).unwrap();
        let a = optimal_lr(&p, 2, 10_000).unwrap();
        let b = optimal_lr(&p, 4, 5_000).unwrap();
        let c = optimal_lr(&p, 1, 20_000).unwrap();
        assert_eq!(a.eta, b.eta);
        assert_eq!(a.eta, c.eta);
    }

    #[test]
    fn optimal_lr_needs_noise() {
        let p = make_gaussian_isotropic(4, 0.0, 0).unwrap();
        assert!(matches!(optimal_lr(&p, 1, 100), Err(Error::Noiseless)));
    }

    #[test]
    fn zipf_no_learning_value() {
        let m = make_zipf(ZipfLaw::PowerLaw { a: 3.0, b: 1.0 }, 50).unwrap();
        let trace: f64 = m.hessian_diagonal().iter().sum();
        for k in [1, 4] {
            let r = zipf_risk(&m, k, 123.0, 0.0).unwrap();
            assert!((r - 0.5 * trace).abs() < 1e-15);
        }
    }

    #[test]
    fn zipf_complete_memorization() {
        let m = make_zipf(ZipfLaw::PowerLaw { a: 3.0, b: 1.0 }, 1).unwrap();
        for (k, n) in [(1, 1.0), (3, 10.0), (7, 2.5)] {
            assert_eq!(zipf_risk(&m, k, n, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn zipf_domain() {
        let m = make_zipf(ZipfLaw::PowerLaw { a: 3.0, b: 1.0 }, 5).unwrap();
        assert!(zipf_risk(&m, 1, 10.0, 2.0).is_err());
        assert!(zipf_risk(&m, 1, 10.0, -0.1).is_err());
        assert!(zipf_risk(&m, 1, -1.0, 0.5).is_err());
        assert!(zipf_risk(&m, 1, 10.0, 1.999).is_ok());
    }

    #[test]
    fn zipf_single_atom_exponent_bookkeeping() {
        // d = 1: (1 - eta')^2 = (1 - eta)^(2K) with 1 - eta' = (1 - eta)^K.
        let m = make_zipf(ZipfLaw::PowerLaw { a: 3.0, b: 1.0 }, 1).unwrap();
        for (k, eta) in [(2usize, 0.3), (5, 0.1), (3, 1.6)] {
            let eta_one = 1.0 - (1.0f64 - eta).powi(k as i32);
            let multi = zipf_risk(&m, k, 4.0, eta).unwrap();
            let single = zipf_risk(&m, 1, 4.0, eta_one).unwrap();
            assert!(
                (multi - single).abs() <= 1e-14 * multi.max(1e-300),
                "{multi} {single}"
            );
        }
    }

    #[test]
    fn muennighoff_cases() {
        assert_eq!(
            muennighoff_effective_n(1, 1234.0, MUENNIGHOFF_R_STAR),
            1234.0
        );
        let far = muennighoff_effective_n(100_000, 1.0, MUENNIGHOFF_R_STAR);
        assert!((far - 16.39).abs() < 1e-9);
        let two = muennighoff_effective_n(2, 1.0, 15.39);
        assert!((two - (1.0 + 15.39 * (1.0 - (-1.0f64 / 15.39).exp()))).abs() < 1e-14);
    }
}
