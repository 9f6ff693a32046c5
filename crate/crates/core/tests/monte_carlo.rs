use reuse_lab::closed_form::{approx_risk, optimal_lr};
use reuse_lab::model::{make_gaussian_isotropic, make_zipf, ZipfLaw};
use reuse_lab::sgd_sim::{excess_risk, monte_carlo_risk, run_on_dataset, DataSource, Dataset};

/// Exact expected one-pass risk for isotropic Gaussian inputs, from the
/// second-moment recursion E[(I - eta x x^T) A (I - eta x x^T)] with
/// E[x x^T A x x^T] = 2A + tr(A) I.
fn one_pass_exact(d: usize, sigma: f64, w_norm_sq: f64, eta: f64, steps: usize) -> f64 {
    let d = d as f64;
    let mut s = w_norm_sq;
    for _ in 0..steps {
        s = s * (1.0 - 2.0 * eta + eta * eta * (d + 2.0)) + eta * eta * sigma * sigma * d;
    }
    0.5 * s
}

#[test]
fn one_pass_monte_carlo_matches_exact_recursion() {
    for (d, n, eta) in [(5, 200, 0.02), (20, 2000, 0.0035), (10, 500, 0.01)] {
        let problem = make_gaussian_isotropic(d, 0.1, d as u64).unwrap();
        let w2: f64 = problem.ground_truth().iter().map(|x| x * x).sum();
        let exact = one_pass_exact(d, 0.1, w2, eta, n);
        let est =
            monte_carlo_risk(&problem, DataSource::GaussianFresh, 1, n, eta, 2000, 5).unwrap();
        let z = (est.mean - exact) / est.std_error;
        assert!(
            z.abs() < 4.0,
            "d={d}: MC {} +- {} vs exact {exact} (z {z})",
            est.mean,
            est.std_error
        );
    }
}

#[test]
fn approx_risk_tracks_monte_carlo_deep_in_its_regime() {
    // Small eta * d keeps the dropped fourth-moment terms below the MC error.
    let problem = make_gaussian_isotropic(4, 0.5, 1).unwrap();
    let n = 4000;
    for k in [1, 2, 4] {
        let eta = optimal_lr(&problem, k, n).unwrap().eta;
        let analytic = approx_risk(&problem, k, n, eta).unwrap().total;
        let est = monte_carlo_risk(
            &problem,
            DataSource::GaussianFresh,
            k,
            n,
            eta,
            1000,
            40 + k as u64,
        )
        .unwrap();
        let rel = (est.mean - analytic).abs() / analytic;
        assert!(rel < 0.05, "K={k}: MC {} vs approx {analytic}", est.mean);
    }
}

#[test]
fn noiseless_gaussian_runs_improve_with_epochs() {
    let problem = make_gaussian_isotropic(10, 0.0, 3).unwrap();
    let eta = problem.max_stable_lr();
    for seed in 0..10 {
        let data = Dataset::generate(&problem, DataSource::GaussianFresh, 50, seed).unwrap();
        let risks: Vec<f64> = (1..=6)
            .map(|k| {
                let t = run_on_dataset(&problem, &data, k, eta, seed, false).unwrap();
                excess_risk(&problem, &t.final_weight).unwrap()
            })
            .collect();
        assert!(risks.windows(2).all(|w| w[1] <= w[0]), "{risks:?}");
    }
}

#[test]
fn noiseless_one_hot_runs_improve_with_epochs() {
    let zipf = make_zipf(ZipfLaw::PowerLaw { a: 3.0, b: 1.0 }, 100).unwrap();
    let problem = zipf.problem(0.0, 2).unwrap();
    for seed in 0..10 {
        let data = Dataset::generate(&problem, DataSource::ZipfFresh(&zipf), 80, seed).unwrap();
        let risks: Vec<f64> = (1..=6)
            .map(|k| {
                let t = run_on_dataset(&problem, &data, k, 0.9, seed, false).unwrap();
                excess_risk(&problem, &t.final_weight).unwrap()
            })
            .collect();
        assert!(risks.windows(2).all(|w| w[1] <= w[0]), "{risks:?}");
    }
}
