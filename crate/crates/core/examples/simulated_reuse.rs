//! Effective reuse for a Gaussian problem from Monte Carlo risk curves.
//!
//! Small settings so it finishes in seconds; raise `replicas` for tighter bars.

use reuse_lab::model::make_gaussian_isotropic;
use reuse_lab::reuse::{
    effective_reuse_simulated, log_spaced_horizons, one_pass_curve, predicted_plateau, McParams,
    PlateauCase,
};

fn main() -> reuse_lab::Result<()> {
    let problem = make_gaussian_isotropic(20, 0.1, 4)?;
    let mc = McParams::new(64, 17);
    let n = 500;
    let ks = [1, 2, 4, 16];
    let horizons = log_spaced_horizons(n / 2, 20 * n, 8);
    let curve = one_pass_curve(&problem, &horizons, &mc)?;
    for k in ks {
        let p = effective_reuse_simulated(&problem, k, n, &curve, &mc)?;
        let (lo, hi) = p.e_interval.expect("simulated points carry an interval");
        println!(
            "K = {k:>2}: E = {:.3} in [{lo:.3}, {hi:.3}], eta* = {:.2e}",
            p.e_value, p.eta_star
        );
    }
    println!(
        "large-K plateau prediction at N = {n}: {:.3}",
        predicted_plateau(PlateauCase::StronglyConvex(&problem), n as f64)
    );
    Ok(())
}
