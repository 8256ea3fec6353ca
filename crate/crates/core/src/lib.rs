//! Exact umbral discretization of ODEs with analytic coefficients.
//!
//! A power series `y = sum b_k x^k` is carried to the lattice `x_n = n h` by
//! replacing `x^k` with the lower factorial `p_k(x) = x (x-h) ... (x-(k-1)h)`.
//! Derivatives become forward differences and pointwise products become the
//! star product `p_n * p_m = p_(n+m)`, so every analytic solution of the ODE
//! maps to an exact solution of the resulting difference equation. The
//! [`discretize`] module evaluates those difference equations and
//! [`catalog`] collects worked instances.
//!
//! All routines are generic over [`Scalar`]; the certified path uses
//! [`Rational`], for which a residual of zero is a proof rather than a
//! rounding accident.

pub mod catalog;
pub mod discretize;
pub mod error;
pub mod exactnum;
pub mod galois;
pub mod json;
pub mod scalar;
pub mod series;
pub mod umbral;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the scalar of every certificate.
pub type Rational = num_rational::BigRational;

pub type Series = series::TaylorSeries<Rational>;
pub type Lattice = umbral::LatticeSequence<Rational>;
pub type LinearOde = series::LinearOde<Rational>;
pub type NonlinearOde = series::NonlinearOde<Rational>;
pub type DeltaOperator = umbral::DeltaOperator<Rational>;

pub type SeriesF64 = series::TaylorSeries<f64>;
pub type LatticeF64 = umbral::LatticeSequence<f64>;
