//! Lacunary spherical polynomials: Gegenbauer special functions, Gauss–Jacobi
//! and S² quadrature, the reproducing operator of a lacunary spectrum, and
//! numerical Nikolskii ratio experiments.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exponent;
pub mod operator;
pub mod polyspace;
pub mod quadrature;
pub mod search;
pub mod specfun;

pub use error::{Error, Result};
pub use exponent::{conjugate_exponent, Exponent};
pub use polyspace::{LacunarySpectrum, NormOptions, Polynomial, S2Polynomial, ZonalPolynomial};
pub use specfun::DimensionParams;
