//! Exponential sums, Diophantine approximation and uniformity seminorms for
//! weighted and twisted ergodic averages.
//!
//! The crate is organised by subject:
//!
//! - [`phase_sums`]: polynomial exponential sums with exact mod-1 phase
//!   tracking, certified suprema over a frequency, van der Corput's
//!   inequality and the Euler-summation decay majorant.
//! - [`diophantine`]: continued fractions, Dirichlet approximants,
//!   badly-approximable constants, continued-fraction Cantor sets and their
//!   box dimension, and `N`-`θ` rational approximates.
//! - [`hardy`]: a small closed calculus of functions `Σ c·s^α·(log s)^k`
//!   with class-membership certificates and weight sequences `e(p(n))`.
//! - [`uniformity`]: Gowers norms on cyclic groups and truncated
//!   Gowers-Host-Kra seminorm estimators for concrete systems.
//! - [`dynamics`]: rotations, the doubling map and a skew product on the
//!   2-torus, with weighted, twisted and Wiener-Wintner experiments.
//! - [`circle_method`]: major boxes, complete rational sums, oscillatory
//!   pseudo-projections and the approximate multiplier for twisted means.
//! - [`variation`]: exact `r`-variation and the twisted convolution operator.
//! - [`harness`]: the experiment runner behind the `wwlab` binary.
//!
//! Throughout, `e(t) = exp(2πit)` and averages are `(1/N) Σ_{n=1}^{N}`.

pub mod circle_method;
pub mod diophantine;
pub mod dynamics;
pub mod error;
pub mod hardy;
pub mod harness;
pub mod numerics;
pub mod phase_sums;
pub mod quadrature;
pub mod selftest;
pub mod uniformity;
pub mod variation;

pub use error::{Error, Result};
pub use numerics::Turns;

/// Complex numbers used throughout the crate.
pub type Complex = num_complex::Complex64;
