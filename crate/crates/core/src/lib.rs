//! Weighted Bergman orthonormal polynomials on the unit disk.

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod faber;
pub mod kernel;
pub mod orthosystem;
pub mod poly;
pub mod quadrature;
pub mod representation;
pub mod scalar;
pub mod series;
pub mod weight;

pub use error::{Error, Result};
pub use poly::{Poly, PolynomialC};
pub use scalar::{Hp, Real, C64};
pub use weight::{BlaschkeSingularity, CriticalRadii, OuterPart, WeightSpec};

#[cfg(doctest)]
mod readme {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/basis.md")]
    mod basis {}
    #[doc = include_str!("../../../book/src/representation.md")]
    mod representation {}
    #[doc = include_str!("../../../book/src/kernel.md")]
    mod kernel {}
    #[doc = include_str!("../../../book/src/validators.md")]
    mod validators {}
}
