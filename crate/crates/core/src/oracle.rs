//! Reference evaluation of the first-order Marcum Q-function.
//!
//! Two independent routes are provided and cross-checked:
//!
//! * [`q1_quadrature`] integrates the Rice density with adaptive
//!   Gauss-Kronrod, over `[b, max(a, b) + 40]` when `b >= a` and over the
//!   complement `[0, b]` (as `1 - ...`) when `b < a`;
//! * [`q1_series`] uses no Bessel function at all. With `N ~ Poisson(a^2/2)`
//!   and `K ~ Poisson(b^2/2)` independent, `Q1(a, b) = P(N >= K)`, which is
//!   summed over error-bounded windows around the two modes.
//!
//! [`q1_reference`] runs both and refuses to answer if they disagree.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::i0e;

/// Half-width, in units of the Rice density's standard deviation, beyond
/// which the integrand is below `exp(-800)` of its peak.
pub const TRUNCATION_WIDTH: f64 = 40.0;

/// Internal tolerance of the reference evaluation.
pub const REFERENCE_TOL: f64 = 1e-12;

/// Largest acceptable disagreement between the two methods.
pub const CROSS_CHECK_GATE: f64 = 1e-10;

const MAX_SEGMENTS: usize = 4000;
const PANEL_WIDTH: f64 = 4.0;
const MAX_POISSON_TERMS: usize = 50_000_000;

/// Argument pair `(a, b)` of `Q1`, both finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QArgs {
    a: f64,
    b: f64,
}

impl QArgs {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!(
                "a and b must be finite, got a = {a}, b = {b}"
            )));
        }
        if a < 0.0 || b < 0.0 {
            return Err(Error::Domain(format!(
                "a and b must be nonnegative, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    /// Mean of the two methods, clamped to `[0, 1]`.
    pub value: f64,
    /// Quadrature of the integral definition.
    pub method_a_value: f64,
    /// Poisson-mixture series.
    pub method_b_value: f64,
    pub agreement_gap: f64,
}

/// Rice density `x exp(-(x^2 + a^2)/2) I0(a x)` for `x, a >= 0`, evaluated as
/// `x exp(-(x - a)^2 / 2) e^{-ax} I0(ax)` so it never overflows.
pub fn rice_pdf(x: f64, a: f64) -> Result<f64> {
    if !(x.is_finite() && a.is_finite()) || x < 0.0 || a < 0.0 {
        return Err(Error::Domain(format!(
            "rice_pdf requires finite x >= 0 and a >= 0, got x = {x}, a = {a}"
        )));
    }
    Ok(rice_density(x, a))
}

pub(crate) fn rice_density(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let d = x - a;
    x * (-0.5 * d * d).exp() * i0e(a * x)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol <= 1e-6 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "tolerance must lie in (0, 1e-6], got {tol}"
        )))
    }
}

fn integrate_density(a: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let panels = ((hi - lo) / PANEL_WIDTH).ceil().max(1.0) as usize;
    let r = quad::integrate(|x| rice_density(x, a), lo, hi, tol, panels, MAX_SEGMENTS)?;
    Ok(r.value)
}

/// `Q1(a, b)` as the tail integral over `[b, max(a, b) + 40]`, for any `b`.
pub fn q1_tail_quadrature(args: QArgs, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let (a, b) = (args.a, args.b);
    let hi = a.max(b) + TRUNCATION_WIDTH;
    integrate_density(a, b, hi, tol)
}

/// `Q1(a, b)` as `1 - ` the integral over `[0, b]`, for any `b`.
///
/// Below `a - 40` the density is under `exp(-800)` and that stretch is skipped.
pub fn q1_complement_quadrature(args: QArgs, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let (a, b) = (args.a, args.b);
    let lo = (a - TRUNCATION_WIDTH).max(0.0);
    Ok(1.0 - integrate_density(a, lo.min(b), b, tol)?)
}

/// `Q1(a, b)` by quadrature: tail form for `b >= a`, complement form otherwise.
pub fn q1_quadrature(args: QArgs, tol: f64) -> Result<f64> {
    if args.b >= args.a {
        q1_tail_quadrature(args, tol)
    } else {
        q1_complement_quadrature(args, tol)
    }
}

/// Poisson probabilities over a window `[start, start + pmf.len())` whose
/// excluded mass on each side is below `cutoff`.
#[derive(Debug)]
struct PoissonWindow {
    start: usize,
    pmf: Vec<f64>,
}

/// `ln k! - [(k + 1/2) ln k - k + ln(2 pi)/2]`, valid for `k >= 20`.
fn stirling_error(k: f64) -> f64 {
    let k2 = k * k;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * k2)) / k2) / k2) / k
}

/// Poisson probability at its mode `floor(lambda)`.
fn poisson_mode_pmf(lambda: f64) -> (usize, f64) {
    let mode = lambda.floor();
    if mode < 20.0 {
        let mut p = (-lambda).exp();
        for k in 1..=mode as usize {
            p *= lambda / k as f64;
        }
        return (mode as usize, p);
    }
    // ln p = -ln(2 pi k)/2 - stirling_error(k) - [k ln(k/lambda) + lambda - k]
    let d = mode - lambda;
    let bd0 = mode * (d / lambda).ln_1p() - d;
    let ln_p = -0.5 * (2.0 * std::f64::consts::PI * mode).ln() - stirling_error(mode) - bd0;
    (mode as usize, ln_p.exp())
}

fn poisson_window(lambda: f64, cutoff: f64) -> Result<PoissonWindow> {
    if lambda == 0.0 {
        return Ok(PoissonWindow {
            start: 0,
            pmf: vec![1.0],
        });
    }
    let (mode, p_mode) = poisson_mode_pmf(lambda);

    // Upward: p(k+1) = p(k) lambda / (k+1). Past the mode the ratios shrink,
    // so the remaining tail is at most p / (1 - ratio).
    let mut upper = Vec::new();
    let mut p = p_mode;
    let mut k = mode;
    loop {
        let ratio = lambda / (k + 1) as f64;
        p *= ratio;
        k += 1;
        upper.push(p);
        let next_ratio = lambda / (k + 1) as f64;
        if next_ratio < 1.0 && p * next_ratio / (1.0 - next_ratio) < cutoff {
            break;
        }
        if upper.len() > MAX_POISSON_TERMS {
            return Err(Error::NonConvergence {
                method: "Poisson series",
                detail: format!("upper window for lambda = {lambda} exceeded the term budget"),
            });
        }
    }

    // Downward: p(k-1) = p(k) k / lambda.
    let mut lower = Vec::new();
    let mut p = p_mode;
    let mut k = mode;
    while k > 0 {
        p *= k as f64 / lambda;
        k -= 1;
        lower.push(p);
        let next_ratio = k as f64 / lambda;
        if k == 0 || (next_ratio < 1.0 && p * next_ratio / (1.0 - next_ratio) < cutoff) {
            break;
        }
        if lower.len() > MAX_POISSON_TERMS {
            return Err(Error::NonConvergence {
                method: "Poisson series",
                detail: format!("lower window for lambda = {lambda} exceeded the term budget"),
            });
        }
    }

    let start = mode - lower.len();
    let mut pmf: Vec<f64> = lower.into_iter().rev().collect();
    pmf.push(p_mode);
    pmf.extend(upper);
    Ok(PoissonWindow { start, pmf })
}

/// `Q1(a, b) = sum_k P(K = k) P(N >= k)` with `N ~ Poisson(a^2/2)`,
/// `K ~ Poisson(b^2/2)`.
///
/// Each window drops at most `tol / 8` of probability per side, so the
/// truncation error is below `tol / 2`; the recurrences add rounding of order
/// `sqrt(terms) * eps`.
pub fn q1_series(args: QArgs, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let cutoff = tol / 8.0;
    let n_win = poisson_window(0.5 * args.a * args.a, cutoff)?;
    let k_win = poisson_window(0.5 * args.b * args.b, cutoff)?;

    // suffix[i] = P(N >= n_win.start + i) within the window.
    let mut suffix = vec![0.0; n_win.pmf.len() + 1];
    for i in (0..n_win.pmf.len()).rev() {
        suffix[i] = suffix[i + 1] + n_win.pmf[i];
    }
    let n_end = n_win.start + n_win.pmf.len();

    let mut sum = 0.0;
    for (j, &pk) in k_win.pmf.iter().enumerate() {
        let k = k_win.start + j;
        let tail = if k <= n_win.start {
            1.0
        } else if k >= n_end {
            break;
        } else {
            suffix[k - n_win.start]
        };
        sum += pk * tail;
    }
    Ok(sum.clamp(0.0, 1.0))
}

/// Cross-validated reference value at `tol = 1e-12`.
///
/// Returns `Error::CrossValidation` if the methods differ by more than
/// [`CROSS_CHECK_GATE`]; that always indicates a defect, never a tolerable
/// numerical outcome.
pub fn q1_reference(args: QArgs) -> Result<OracleResult> {
    let quadrature = q1_quadrature(args, REFERENCE_TOL)?;
    let series = q1_series(args, REFERENCE_TOL)?;
    let gap = (quadrature - series).abs();
    if gap > CROSS_CHECK_GATE || !gap.is_finite() {
        return Err(Error::CrossValidation {
            a: args.a,
            b: args.b,
            quadrature,
            series,
            gap,
        });
    }
    Ok(OracleResult {
        value: (0.5 * (quadrature + series)).clamp(0.0, 1.0),
        method_a_value: quadrature,
        method_b_value: series,
        agreement_gap: gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(a: f64, b: f64) -> QArgs {
        QArgs::new(a, b).unwrap()
    }

    #[test]
    fn qargs_validation() {
        assert!(QArgs::new(-1.0, 1.0).is_err());
        assert!(QArgs::new(1.0, f64::INFINITY).is_err());
        assert!(QArgs::new(f64::NAN, 1.0).is_err());
        assert!(QArgs::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn tolerance_validation() {
        assert!(q1_series(args(1.0, 1.0), 1e-5).is_err());
        assert!(q1_quadrature(args(1.0, 1.0), 0.0).is_err());
        assert!(q1_quadrature(args(1.0, 1.0), 1e-6).is_ok());
    }

    #[test]
    fn poisson_mode_matches_direct_product() {
        // lambda = 30.5: direct product is still safe in f64.
        let lambda: f64 = 30.5;
        let (mode, p) = poisson_mode_pmf(lambda);
        assert_eq!(mode, 30);
        let mut direct = (-lambda).exp();
        for k in 1..=30 {
            direct *= lambda / k as f64;
        }
        assert!(((p - direct) / direct).abs() < 1e-14);
    }

    #[test]
    fn poisson_window_mass() {
        for lambda in [0.005, 0.5, 3.0, 50.0, 180_000.0] {
            let w = poisson_window(lambda, 1e-14).unwrap();
            let mass: f64 = w.pmf.iter().sum();
            assert!((mass - 1.0).abs() < 1e-12, "lambda {lambda}: mass {mass}");
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(q1_series(args(0.0, 0.0), 1e-12).unwrap(), 1.0);
        assert_eq!(q1_quadrature(args(3.0, 0.0), 1e-12).unwrap(), 1.0);
        let v = q1_quadrature(args(0.0, 1.5), 1e-12).unwrap();
        assert!((v - (-1.125f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn rice_pdf_basics() {
        assert_eq!(rice_pdf(0.0, 3.0).unwrap(), 0.0);
        assert!((rice_pdf(1.0, 0.0).unwrap() - (-0.5f64).exp()).abs() < 1e-16);
        assert!(rice_pdf(-1.0, 0.0).is_err());
        assert!(rice_pdf(600.0, 600.0).unwrap().is_finite());
    }
}
