//! Uniform decompositions of probability measures into `n` pieces of equal
//! mass supported in small cubes, and what they give: deterministic
//! empirical quantizers with explicit Wasserstein error bounds, balanced
//! classification of point clouds, and an exact discrete transport solver
//! to measure the actual error.
//!
//! Distances are in the max norm throughout.

// `!(x >= 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classification;
pub mod decomposition;
pub mod error;
pub mod experiments;
pub mod measure;
#[cfg(any(test, feature = "oracles"))]
pub mod oracles;
pub mod quantization;
pub mod transport;

pub use classification::{classify, BalancedClassification, ClassificationReport};
pub use decomposition::{decompose, UniformDecomposition};
pub use error::{Error, Result};
pub use measure::{Atom, Cube, DiscreteMeasure, GeneratorSpec, MeasureFormat, Point};
pub use quantization::{quantize, quantize_unbounded, rate_bound, zeta, Quantizer, QuantizerReport};
pub use transport::{coupling_cost, exact_wasserstein, Wasserstein};
