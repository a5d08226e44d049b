//! Exact analysis of covering functions of finite systems of residue
//! classes.
//!
//! For a system `{aₛ(nₛ)}` with optional integer weights `λₛ`, the covering
//! function is `w(x) = Σ λₛ` over the classes containing `x`. This crate
//! evaluates `w`, studies its range and periods, computes the associated
//! exponential sums exactly in cyclotomic rings, and mechanically checks
//! the known theorems about which ranges are possible.

pub mod analysis;
pub mod arith;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod fuzz;
pub mod polynomial;
pub mod residue;
mod ser;
pub mod verify;

pub use analysis::{
    analyze, constancy_window_size, is_cover, maximal_moduli, mean_value, minimal_period, profile,
    range_and_spread, Analysis, ExactRational, MaximalModuli, Profile, RangeSpread, DEFAULT_CAP,
};
pub use cyclotomic::{
    cyclotomic_poly, divisible_by_integer, exp_sum, fourier_identity_check, CyclotomicElement,
    Frequency,
};
pub use error::{Error, Result};
pub use polynomial::IntPolynomial;
pub use residue::{ResidueClass, ResidueSystem};
