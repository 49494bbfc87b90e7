//! Overflow-safe special functions used by the oracle and the bound formulas.
//!
//! All functions are pure and thread-safe.

mod bessel;
mod erf;

pub use bessel::{
    bessel_i0, bessel_i0_scaled, bessel_i1, bessel_i1_scaled, PLAIN_OVERFLOW_THRESHOLD,
    SERIES_LIMIT,
};
pub use erf::{erf, erfc, erfc_diff, erfcx, ERFCX_NEG_LIMIT};

pub(crate) use bessel::{i0e, i1e, ln_i0};
pub(crate) use erf::{erfcx_unchecked, ln_erfc};
