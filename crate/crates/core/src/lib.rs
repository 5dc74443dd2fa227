//! Moments of a positive random variable given by the completed Dedekind
//! zeta functions of Q, Q(sqrt(-1)) and Q(sqrt(-2)).
//!
//! For each of these fields there is a random variable X with
//! `E[X^s] = |D|^{-s/2} xi_K(s)` for every complex s. This crate evaluates
//! `xi_K`, the density of X, checks the identities behind the construction
//! numerically, computes the first Li coefficients both analytically and
//! from the cumulants of `-log X`, and samples from X.

// argument guards are written as !(x > 0.0) so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod analytic;
pub mod density;
pub mod error;
pub mod field_data;
pub mod li;
pub mod quad;
pub mod report;
pub mod sampler;
pub mod verify;

pub use analytic::{completed_z, dedekind_zeta, xi, ComplexPoint};
pub use density::{density, density_cdf, mellin, DensityModel, RepCountTable};
pub use error::{Error, Result};
pub use field_data::{field_spec, kernel_eval, ArchimedeanKernel, FieldId, FieldSpec};
pub use li::{check_proposition, cumulants, li_lambda_contour, CumulantPair, LiReport};
pub use quad::QuadratureConfig;
pub use report::VerificationReport;
pub use sampler::{build_sampler, sample, validate_samples, SamplerState};
pub use verify::{check_lattice_selfdual, check_local_zeta, check_positivity_mechanism, check_theta_selfdual};
