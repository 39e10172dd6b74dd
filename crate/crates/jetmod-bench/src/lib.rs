//! Shared fixtures for the benchmarks.

use jetmod_core::category::{CategoryJModule, WeightCoset};
use jetmod_core::matrix::RatMatrix;
use jetmod_core::rep::{gln_natural, tensor_module_truncated};
use jetmod_core::scalar::rat;

/// The dimension-12 jet-type module over the natural gl₂ fiber.
pub fn mid_size_module() -> CategoryJModule {
    let rep = tensor_module_truncated(&gln_natural(2), 2).unwrap();
    CategoryJModule::from_wnplus_rep(WeightCoset::zero(2), rep).unwrap()
}

/// A dense rational matrix with varied denominators.
pub fn dense_matrix(n: usize) -> RatMatrix {
    RatMatrix::from_fn(n, n, |r, c| {
        rat((r * n + c) as i64 % 17 - 8, 1 + ((r + 2 * c) as i64 % 5))
    })
}
