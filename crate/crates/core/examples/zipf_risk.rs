//! Exact risk for one-hot Zipf data, checked against brute-force enumeration.

use reuse_lab::closed_form::zipf_risk;
use reuse_lab::model::{make_zipf, ZipfLaw, ZipfModel};
use reuse_lab::oracle::zipf_risk_enumerated;

fn main() -> reuse_lab::Result<()> {
    let small = ZipfModel::explicit(vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0, 0.5])?;
    let closed = zipf_risk(&small, 2, 3.0, 0.5)?;
    let brute = zipf_risk_enumerated(&small, 2, 3, 0.5)?;
    println!("d=2, N=3, K=2: closed form {closed:.15}, enumeration {brute:.15}");

    let model = make_zipf(ZipfLaw::PowerLaw { a: 4.5, b: 1.0 }, 10_000)?;
    println!("power law a=4.5 b=1, N=1e4, eta=1");
    for k in [1, 2, 4, 16, 256] {
        println!("  K = {k:>3}: risk {:.4e}", zipf_risk(&model, k, 1e4, 1.0)?);
    }
    Ok(())
}
