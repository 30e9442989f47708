//! Statistical verification tools.
//!
//! Everything stochastic in this crate draws from [`RngStream`], a
//! counter-based generator chosen so that any `(seed, label)` pair yields a
//! bitwise-identical sequence on every platform and under any thread
//! schedule. The goodness-of-fit tests ([`chi_square_gof`], [`ks_test`],
//! [`poisson_count_test`]) back the equivariance and collapse-sampler checks
//! and are reported as [`GofReport`] values embedded in run manifests.

mod gof;
mod rng;
pub mod special;

pub use gof::{
    chi_square_gof, equal_bin_edges, histogram, ks_test, poisson_count_test, sign_test_positive,
    GofReport, Histogram,
};
pub use rng::RngStream;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("bin edges must be strictly increasing and at least two")]
    BadEdges,
    #[error("expected probabilities must be non-negative and sum to 1 (got sum {0})")]
    BadProbs(f64),
    #[error("counts ({counts}) and expected probabilities ({probs}) differ in length")]
    LengthMismatch { counts: usize, probs: usize },
    #[error("pooling cannot reach an expected count of 5 per bin (total expected {0:.3})")]
    InsufficientExpected(f64),
}
