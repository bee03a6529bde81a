//! Chebotarev densities as Möbius-weighted partial sums over ideals of a
//! monogenic number field.

// Negated float comparisons reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod finitefield;
pub mod galois;
pub mod moebius;
pub mod numberfield;
pub mod report;
pub mod summation;

pub use error::{Error, Result};
