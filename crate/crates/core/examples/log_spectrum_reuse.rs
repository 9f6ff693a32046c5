//! Reuse plateau under a logarithmic power-law spectrum: E grows like (ln N)^b.

use reuse_lab::model::{make_zipf, ZipfLaw};
use reuse_lab::reuse::{effective_reuse_zipf, fit_power_law, log_grid, FitTransform};

fn main() -> reuse_lab::Result<()> {
    let model = make_zipf(ZipfLaw::LogPowerLaw { a: 1.5, b: 2.0 }, 10_000)?;
    let mut points = Vec::new();
    for n in log_grid(1e3, 1e6, 8) {
        let p = effective_reuse_zipf(&model, 2048, n)?;
        println!("N = {n:>9.0}  ln N = {:>6.3}  E = {:.3}", n.ln(), p.e_value);
        points.push((n, p.e_value));
    }
    let fit = fit_power_law(&points, FitTransform::LogXPower)?;
    println!(
        "E ~ {:.3} (ln N)^{:.3}, r^2 {:.4}",
        fit.c1, fit.c2, fit.r_squared
    );
    Ok(())
}
