//! Analytic risk of multi-epoch SGD for a strongly convex problem.

use reuse_lab::closed_form::{approx_risk, optimal_lr, simplified_risk, Regime};
use reuse_lab::model::make_gaussian_isotropic;

fn main() -> reuse_lab::Result<()> {
    let problem = make_gaussian_isotropic(100, 0.1, 0)?;
    let n = 10_000;
    println!("  K      eta'       bias     across     within      total   M(small K)");
    for k in [1, 2, 4, 8, 16, 64] {
        let lr = optimal_lr(&problem, k, n)?;
        let r = approx_risk(&problem, k, n, lr.eta)?;
        let m = simplified_risk(&problem, k, n, lr.eta, Regime::SmallK)?;
        println!(
            "{k:>3} {:>9.3e} {:>10.3e} {:>10.3e} {:>10.3e} {:>10.3e} {:>12.3e}",
            lr.eta, r.bias, r.var_across_epochs, r.var_within_epoch, r.total, m
        );
    }
    Ok(())
}
