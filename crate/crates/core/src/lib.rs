//! Multi-epoch SGD on linear regression.
//!
//! * [`model`]: diagonal regression problems and the Zipf one-hot data model.
//! * [`sgd_sim`]: SGD with random reshuffling and Monte Carlo risk estimates.
//! * [`closed_form`]: analytic risk approximations, the approximately optimal
//!   step size, the exact Zipf risk and the Muennighoff baseline.
//! * [`reuse`]: optimal-step risks, the effective reuse rate `E(K, N)` and
//!   power-law fits of reuse curves.
//! * [`harness`]: experiment configs, sweeps, CSV and plot-data output.

pub mod closed_form;
pub mod error;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod reuse;
pub mod rng;
pub mod sgd_sim;

pub use error::{Error, Result};
