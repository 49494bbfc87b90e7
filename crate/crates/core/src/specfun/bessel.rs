//! Modified Bessel functions of the first kind, orders 0 and 1.
//!
//! For `|x| <= SERIES_LIMIT` the ascending power series is summed directly;
//! every term is positive, so the sum is accurate to a few ulps. Beyond the
//! seam the exponentially scaled functions `e^-x I_n(x)` come from the
//! Hankel asymptotic expansion truncated at its smallest term, which at
//! `x = 15` is already below 5e-15 relative.

use crate::error::{Error, Result};

/// Switchover between the power series and the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 15.0;

/// Largest `|x|` for which the plain `I_0`/`I_1` are evaluated: `ln(f64::MAX)`.
/// Past this point `e^x` is not representable and callers must use the
/// scaled variants.
pub const PLAIN_OVERFLOW_THRESHOLD: f64 = 709.782_712_893_384;

const MAX_TERMS: usize = 500;

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term < f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    sum
}

/// `I_0(x) - 1`, without the cancellation of forming `I_0` first.
fn i0m1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = q;
    let mut sum = q;
    for k in 2..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term < f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    sum
}

fn i1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel expansion of `e^-x I_nu(x)` for integer `nu` in {0, 1}, `x > 0` large.
fn scaled_asymptotic(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(nu * nu);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = term * (odd * odd - mu) / (8.0 * k as f64 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// `e^-x I_0(x)` for `x >= 0`; no argument checks.
pub(crate) fn i0e(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        i0_series(x) * (-x).exp()
    } else {
        scaled_asymptotic(0, x)
    }
}

/// `e^-x I_1(x)` for `x >= 0`; no argument checks.
pub(crate) fn i1e(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        i1_series(x) * (-x).exp()
    } else {
        scaled_asymptotic(1, x)
    }
}

/// `ln I_0(x)` for `x >= 0`, accurate both as `x -> 0` (where it behaves like
/// `x^2/4`) and for arguments far beyond the plain overflow point.
pub(crate) fn ln_i0(x: f64) -> f64 {
    if x < 1.0 {
        i0m1_series(x).ln_1p()
    } else if x <= SERIES_LIMIT {
        i0_series(x).ln()
    } else {
        x + scaled_asymptotic(0, x).ln()
    }
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("argument must be finite, got {x}")))
    }
}

/// Modified Bessel function `I_0(x)`. Even in `x`.
///
/// Returns `Error::Overflow` for `|x| > PLAIN_OVERFLOW_THRESHOLD`.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check_finite(x)?;
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        Ok(i0_series(ax))
    } else if ax > PLAIN_OVERFLOW_THRESHOLD {
        Err(Error::Overflow {
            what: "bessel_i0",
            x,
        })
    } else {
        Ok(scaled_asymptotic(0, ax) * ax.exp())
    }
}

/// Exponentially scaled `e^-x I_0(x)` for `x >= 0`. Decreasing, in (0, 1].
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    check_finite(x)?;
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "bessel_i0_scaled requires x >= 0, got {x}"
        )));
    }
    Ok(i0e(x))
}

/// Modified Bessel function `I_1(x)`. Odd in `x`.
pub fn bessel_i1(x: f64) -> Result<f64> {
    check_finite(x)?;
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        i1_series(ax)
    } else if ax > PLAIN_OVERFLOW_THRESHOLD {
        return Err(Error::Overflow {
            what: "bessel_i1",
            x,
        });
    } else {
        scaled_asymptotic(1, ax) * ax.exp()
    };
    Ok(if x < 0.0 { -v } else { v })
}

/// Exponentially scaled `e^-x I_1(x)` for `x >= 0`.
pub fn bessel_i1_scaled(x: f64) -> Result<f64> {
    check_finite(x)?;
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "bessel_i1_scaled requires x >= 0, got {x}"
        )));
    }
    Ok(i1e(x))
}
