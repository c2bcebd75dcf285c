//! q-Gaussian distributions for `q` in `[-1, 1]`.
//!
//! The family runs from the two-point law at `q = -1`, through the Wigner
//! semicircle at `q = 0`, to the standard normal at `q = 1`. For `|q| < 1`
//! the density is available both as an infinite product and as a rapidly
//! converging Chebyshev-U series, which also gives the distribution function
//! in closed form up to a controlled truncation error.
//!
//! ```
//! use qgauss::QGaussian;
//!
//! let law = QGaussian::new(0.5).unwrap();
//! let x = law.quantile(0.9).unwrap();
//! assert!((law.cdf(x) - 0.9).abs() < 1e-12);
//! ```

// NaN must fall into the rejecting branch of range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distribution;
pub mod error;
pub mod polynomials;
pub mod qseries;
mod roots;
pub mod sampler;
pub mod validation;

pub use distribution::{DensityEvaluation, DensityForm, QGaussian, Support, TruncationPolicy};
pub use error::{QGaussError, Result};
pub use qseries::{QKind, QParameter};
pub use sampler::{sample, SampleStream, SamplerReport, SamplingMethod};
