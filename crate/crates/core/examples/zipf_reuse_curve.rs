//! Effective reuse rate E(K, N) for the power-law Zipf model and its plateau exponent.

use reuse_lab::model::{make_zipf, ZipfLaw};
use reuse_lab::reuse::{
    effective_reuse_zipf, fit_power_law, log_grid, plateau_exponent, FitTransform, PlateauCase,
};

fn main() -> reuse_lab::Result<()> {
    let (a, b) = (4.5, 1.0);
    let model = make_zipf(ZipfLaw::PowerLaw { a, b }, 10_000)?;
    let ns = log_grid(1e3, 1e6, 4);
    print!("{:>6}", "K \\ N");
    for n in &ns {
        print!("{n:>10.0}");
    }
    println!();
    for k in [1, 2, 4, 16, 256, 2048] {
        print!("{k:>6}");
        for &n in &ns {
            print!("{:>10.3}", effective_reuse_zipf(&model, k, n)?.e_value);
        }
        println!();
    }

    let points: Vec<(f64, f64)> = log_grid(1e3, 1e6, 8)
        .into_iter()
        .map(|n| Ok((n, effective_reuse_zipf(&model, 2048, n)?.e_value)))
        .collect::<reuse_lab::Result<_>>()?;
    let fit = fit_power_law(&points, FitTransform::XPower)?;
    println!(
        "K = 2048: E ~ {:.3} N^{:.3} (r^2 {:.4}), theory exponent {:.3}",
        fit.c1,
        fit.c2,
        fit.r_squared,
        plateau_exponent(PlateauCase::PowerLaw { a, b })
    );
    Ok(())
}
