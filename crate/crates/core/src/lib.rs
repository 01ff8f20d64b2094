//! Restarted averaged primal-dual methods for linear programming.
//!
//! The library covers standard-form LP data and KKT residuals, MPS
//! ingestion, single steps of PDHG, extragradient, ADMM and the proximal
//! point method, the normalized duality gap, restart schemes, and a small
//! laboratory for the diagonal bilinear problem.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gap;
pub mod ingest;
pub mod kkt;
pub mod lab;
pub mod linalg;
pub mod norm;
pub mod power;
pub mod problem;
pub mod restart;
pub mod sparse;
pub mod steps;

pub use error::{Error, Result};
pub use kkt::{kkt_error, residuals, KktSystem, Residuals};
pub use norm::{norm_value, NormKind, NormSpec};
pub use power::{power_method_sigma_max, PowerEstimate};
pub use problem::{gradient_field, lagrangian, PrimalDomain, SaddlePoint, StandardFormLp};
pub use sparse::SparseMatrix;
