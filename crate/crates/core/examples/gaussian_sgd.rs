//! Multi-epoch SGD on an isotropic Gaussian problem, with the bias/variance split.

use reuse_lab::model::{make_gaussian_isotropic, SgdRun};
use reuse_lab::sgd_sim::{excess_risk, monte_carlo_risk, run_sgd, DataSource};

fn main() -> reuse_lab::Result<()> {
    let problem = make_gaussian_isotropic(50, 0.1, 1)?;
    let run = SgdRun::new(4, 2_000, 0.004, 7)?;
    let t = run_sgd(&problem, &run, DataSource::GaussianFresh, true)?;

    let risk = excess_risk(&problem, &t.final_weight)?;
    let bias = t.final_bias.expect("tracked");
    let var = t.final_var.expect("tracked");
    let gap = (0..problem.dim())
        .map(|i| (t.final_weight[i] - problem.ground_truth()[i] - bias[i] - var[i]).abs())
        .fold(0.0, f64::max);
    println!("steps {}, excess risk {risk:.4e}", t.steps_taken);
    println!("max |w - w* - (bias + var)| = {gap:.1e}");

    for k in [1, 2, 4, 8] {
        let est = monte_carlo_risk(&problem, DataSource::GaussianFresh, k, 2_000, 0.004, 200, 3)?;
        println!(
            "K = {k}: E[risk] = {:.4e} +- {:.1e}",
            est.mean, est.std_error
        );
    }
    Ok(())
}
