//! Elliptic interpolation and biorthogonal functions of BC_n type, their
//! binomial and connection coefficients, and the full family of p → 0
//! degenerations down to Macdonald and Pastro polynomials.
//!
//! Numeric routines are generic over a real field `T: Real` (`f32` or
//! `f64`) and operate on `Complex<T>`. Exponent bookkeeping for
//! degenerations is exact, using `Rational64`.

pub mod biorthogonal;
pub mod csymbols;
pub mod degenerations;
pub mod interpolation;
pub mod error;
pub mod kernels;
pub mod partitions;
pub mod pastro;
pub mod scalar;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::EllipticParams;
pub use partitions::Partition;
pub use scalar::{Cx, Real};

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex scalar.
pub type C32 = num_complex::Complex<f32>;
/// Double-precision bases.
pub type Params64 = EllipticParams<f64>;
