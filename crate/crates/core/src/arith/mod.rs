//! Exact scalar arithmetic.
//!
//! Two scalar kinds are used throughout the crate: [`Rational`], an
//! arbitrary-precision rational number, and [`RegulatedScalar`], an exact
//! rational function of a single regulator variable `ε`. Both implement
//! [`Scalar`], so the intertwiner and matrix code is written once.

mod comb;
mod eps_poly;
mod rational;
mod regulated;
mod scalar;

pub use comb::{binomial, factorial, pochhammer, pochhammer_rational};
pub use eps_poly::EpsPoly;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use regulated::{Limit, RegulatedScalar};
pub use scalar::{Dim, Scalar};
