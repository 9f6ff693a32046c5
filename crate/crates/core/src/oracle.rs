//! Brute-force reference values for small Zipf problems.
//!
//! Enumerates every dataset realization and replays the squared per-step
//! contraction of each coordinate literally, without any of the algebra used
//! by [`crate::closed_form::zipf_risk`].

use crate::error::{Error, Result};
use crate::model::ZipfModel;

/// Largest number of datasets the enumeration will visit.
pub const MAX_DATASETS: u64 = 10_000_000;

/// Expected excess risk of `epochs`-epoch SGD on `n` one-hot points under the
/// isotropic prior, averaged over all `d^n` datasets.
///
/// With `E[theta_0 theta_0^T] = I` each coordinate contributes
/// `1/2 p_i Lambda_i` times the product of `(1 - eta Lambda_i)^2` over its visits.
pub fn zipf_risk_enumerated(model: &ZipfModel, epochs: usize, n: usize, eta: f64) -> Result<f64> {
    let d = model.dim();
    let count = (d as u64)
        .checked_pow(n as u32)
        .filter(|c| *c <= MAX_DATASETS);
    let Some(count) = count else {
        return Err(Error::InvalidParameter(format!(
            "{d}^{n} datasets exceed the enumeration limit {MAX_DATASETS}"
        )));
    };
    let p = model.probabilities();
    let scales = model.scales();
    let mut sequence = vec![0usize; n];
    let mut total = 0.0;
    for code in 0..count {
        let mut c = code;
        for slot in sequence.iter_mut() {
            *slot = (c % d as u64) as usize;
            c /= d as u64;
        }
        let probability: f64 = sequence.iter().map(|&i| p[i]).product();
        let mut contraction = vec![1.0f64; d];
        for _ in 0..epochs {
            for &i in &sequence {
                let q = 1.0 - eta * scales[i];
                contraction[i] *= q * q;
            }
        }
        let risk: f64 = (0..d)
            .map(|i| 0.5 * p[i] * scales[i] * contraction[i])
            .sum();
        total += probability * risk;
    }
    Ok(total)
}
