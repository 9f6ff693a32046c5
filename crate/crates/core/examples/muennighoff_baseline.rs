//! Closed-form reuse rate against the empirical Muennighoff fit, which ignores N.

use reuse_lab::closed_form::{muennighoff_effective_n, MUENNIGHOFF_R_STAR};
use reuse_lab::model::{make_zipf, ZipfLaw};
use reuse_lab::reuse::effective_reuse_zipf;

fn main() -> reuse_lab::Result<()> {
    let model = make_zipf(ZipfLaw::PowerLaw { a: 4.5, b: 1.0 }, 10_000)?;
    println!(
        "{:>5} {:>12} {:>12} {:>12}",
        "K", "E(N=1e4)", "E(N=1e6)", "baseline"
    );
    for k in [1, 2, 4, 8, 16, 64, 256] {
        let small = effective_reuse_zipf(&model, k, 1e4)?.e_value;
        let large = effective_reuse_zipf(&model, k, 1e6)?.e_value;
        let base = muennighoff_effective_n(k, 1.0, MUENNIGHOFF_R_STAR);
        println!("{k:>5} {small:>12.3} {large:>12.3} {base:>12.3}");
    }
    Ok(())
}
