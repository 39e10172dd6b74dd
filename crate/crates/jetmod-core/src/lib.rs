//! Exact-arithmetic constructions for modules over the Lie algebra of vector
//! fields on the n-torus.
//!
//! Everything is computed over the rationals: vector-field brackets, jet and
//! tensor modules, the correspondence between weight modules that are free of
//! finite rank over functions and finite-dimensional representations of the
//! positive derivation algebra, and the difference-derivative machinery that
//! detects polynomial dependence of operator families on Fourier degrees.
//!
//! There is no floating point anywhere; every identity check is pass/fail.

pub mod category;
pub mod error;
pub mod jets;
pub mod lie;
pub mod loop_ext;
pub mod matpoly;
pub mod matrix;
pub mod multiindex;
pub mod polyfit;
pub mod rep;
pub mod report;
pub mod scalar;
pub mod unipoly;

pub use category::{CategoryJModule, WeightCoset, WeightVector};
pub use error::{Error, Result};
pub use jets::JetModuleSpec;
pub use lie::{BasisSymbol, BracketContext, FiniteLieAlgebra, LieElement};
pub use loop_ext::{GModule, GPlusRep};
pub use matpoly::MatrixPoly;
pub use matrix::{matrix_kernel, RatMatrix};
pub use multiindex::{
    enumerate_multiindices, lattice_window, multiindex_binomial, LatticeVector, MultiIndex,
};
pub use polyfit::{DetectionReport, OperatorFamilyWindow};
pub use rep::{AlgebraTag, FiniteRep, GdotRep, Indecomposability};
pub use report::{CheckReport, Violation};
pub use scalar::Rat;
