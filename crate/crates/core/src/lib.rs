//! High-precision verification toolkit for regulators of superelliptic curves.
//!
//! Numerical code is generic over [`Real`]; the aliases below fix the MPFR
//! backend used by the command-line driver.

// `!(x > 0.0)` is used on purpose so that NaN lands in the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curvespec;
pub mod error;
pub mod hiprec;
pub mod lauricella;
pub mod lfunc;
pub mod poly;
pub mod ratapprox;
pub mod regulator;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{PrecisionContext, Real};

/// Arbitrary-precision real backed by MPFR.
pub type BigFloat = rug::Float;
pub type BigComplex = hiprec::Complex<BigFloat>;
pub type Curve = curvespec::CurveSpec<BigFloat>;
