//! Error function family after W. J. Cody's rational Chebyshev
//! approximations (CALERF), plus a cancellation-safe `erfc` difference.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::quad::gk15;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_95;
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Below this `|x|` erf is evaluated directly.
const THRESH: f64 = 0.468_75;
/// `erfc(x)` underflows to zero past this point.
const XBIG: f64 = 26.543;
/// `erfcx(x)` overflows for `x` below this value.
pub const ERFCX_NEG_LIMIT: f64 = -26.628_735_713_751_4;

const A: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_16,
    377.485_237_685_302_02,
    3_209.377_589_138_469_5,
    0.185_777_706_184_603_15,
];
const B: [f64; 4] = [
    23.601_290_952_344_122,
    244.024_637_934_444_17,
    1_282.616_526_077_372_3,
    2_844.236_833_439_170_6,
];
const C: [f64; 9] = [
    0.564_188_496_988_670_09,
    8.883_149_794_388_376,
    66.119_190_637_141_63,
    298.635_138_197_400_13,
    881.952_221_241_769_09,
    1_712.047_612_634_070_6,
    2_051.078_377_826_071_5,
    1_230.339_354_797_997_3,
    2.153_115_354_744_038_5e-8,
];
const D: [f64; 8] = [
    15.744_926_110_709_835,
    117.693_950_891_312_5,
    537.181_101_862_009_86,
    1_621.389_574_566_690_2,
    3_290.799_235_733_459_6,
    4_362.619_090_143_247,
    3_439.367_674_143_721_6,
    1_230.339_354_803_749_4,
];
const P: [f64; 6] = [
    0.305_326_634_961_232_34,
    0.360_344_899_949_804_44,
    0.125_781_726_111_229_25,
    0.016_083_785_148_742_277,
    6.587_491_615_298_378e-4,
    0.016_315_387_137_302_098,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822_4,
    1.872_952_849_923_460_5,
    0.527_905_102_951_428_41,
    0.060_518_341_312_441_319,
    0.002_335_204_976_268_691_9,
];

/// `erf(x) / x` for `|x| <= THRESH`, as a rational function of `x^2`.
fn erf_small_ratio(z: f64) -> f64 {
    let num = (((A[4] * z + A[0]) * z + A[1]) * z + A[2]) * z + A[3];
    let den = (((z + B[0]) * z + B[1]) * z + B[2]) * z + B[3];
    num / den
}

/// `erfcx(y)` for `y > THRESH`.
fn erfcx_tail(y: f64) -> f64 {
    if y <= 4.0 {
        let mut num = C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + C[i]) * y;
            den = (den + D[i]) * y;
        }
        (num + C[7]) / (den + D[7])
    } else {
        let z = 1.0 / (y * y);
        let mut num = P[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + P[i]) * z;
            den = (den + Q[i]) * z;
        }
        let r = z * (num + P[4]) / (den + Q[4]);
        (FRAC_1_SQRT_PI - r) / y
    }
}

/// `exp(-y^2)` split as `exp(-t^2) exp(-(y-t)(y+t))` with `t = trunc(16y)/16`
/// so the rounding of `y^2` does not leak into the result.
fn exp_neg_square(y: f64) -> f64 {
    let t = (y * 16.0).trunc() / 16.0;
    (-t * t).exp() * (-(y - t) * (y + t)).exp()
}

fn exp_pos_square(y: f64) -> f64 {
    let t = (y * 16.0).trunc() / 16.0;
    (t * t).exp() * ((y - t) * (y + t)).exp()
}

/// `erfc(y)` for `y >= THRESH`.
fn erfc_tail(y: f64) -> f64 {
    if y >= XBIG {
        0.0
    } else {
        erfcx_tail(y) * exp_neg_square(y)
    }
}

/// Complementary error function. Total on finite input; `NaN` propagates.
pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESH {
        return 1.0 - x * erf_small_ratio(y * y);
    }
    let r = erfc_tail(y);
    if x < 0.0 {
        2.0 - r
    } else {
        r
    }
}

/// Error function; odd.
pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESH {
        return x * erf_small_ratio(y * y);
    }
    let r = 1.0 - erfc_tail(y);
    if x < 0.0 {
        -r
    } else {
        r
    }
}

/// Scaled complementary error function `e^{x^2} erfc(x)`.
///
/// Overflows (and returns `Error::Overflow`) for `x < ERFCX_NEG_LIMIT`.
pub fn erfcx(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("erfcx of NaN".into()));
    }
    if x < ERFCX_NEG_LIMIT {
        return Err(Error::Overflow { what: "erfcx", x });
    }
    Ok(erfcx_unchecked(x))
}

/// `erfcx` for `x >= ERFCX_NEG_LIMIT`.
pub(crate) fn erfcx_unchecked(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESH {
        let z = y * y;
        return z.exp() * (1.0 - x * erf_small_ratio(z));
    }
    let r = erfcx_tail(y);
    if x < 0.0 {
        2.0 * exp_pos_square(y) - r
    } else {
        r
    }
}

/// `ln erfc(x)`, finite far beyond the point where `erfc` underflows.
pub(crate) fn ln_erfc(x: f64) -> f64 {
    if x > THRESH {
        erfcx_tail(x).ln() - x * x
    } else {
        erfc(x).ln()
    }
}

/// Above this lower argument both values are factored through `erfcx`.
const SCALED_DIFF_FROM: f64 = 5.0;
/// Arguments closer than this are integrated directly.
const CLOSE_WIDTH: f64 = 0.5;
const CLOSE_PANEL: f64 = 0.125;

/// `erfc(x) - erfc(y)` for `x <= y`, accurate to ~1e-14 relative even when the
/// two values nearly coincide.
///
/// * both arguments negative: reflected to `erfc(-y) - erfc(-x)`;
/// * `x > 5`: `e^{-x^2} [ (erfcx(x) - erfcx(y)) - expm1(-(y-x)(y+x)) erfcx(y) ]`,
///   both brackets nonnegative;
/// * `y - x <= 0.5`: `2/sqrt(pi)` times the Gaussian integral over `[x, y]` by
///   Kronrod panels of width at most 0.125;
/// * otherwise plain subtraction, which loses under one digit there.
///
/// Swapped arguments return the negated difference.
pub fn erfc_diff(x: f64, y: f64) -> f64 {
    if x.is_nan() || y.is_nan() {
        return f64::NAN;
    }
    if x == y {
        return 0.0;
    }
    if x > y {
        return -erfc_diff(y, x);
    }
    if y <= 0.0 {
        return erfc_diff(-y, -x);
    }
    if x > SCALED_DIFF_FROM {
        let gap = (y - x) * (y + x);
        let ex = erfcx_unchecked(x);
        let ey = erfcx_unchecked(y);
        return exp_neg_square(x) * ((ex - ey) - (-gap).exp_m1() * ey);
    }
    if y - x <= CLOSE_WIDTH {
        let panels = ((y - x) / CLOSE_PANEL).ceil().max(1.0) as usize;
        let h = (y - x) / panels as f64;
        let gauss = |t: f64| (-t * t).exp();
        let mut sum = 0.0;
        for i in 0..panels {
            let lo = x + h * i as f64;
            let hi = if i + 1 == panels { y } else { lo + h };
            sum += gk15(&gauss, lo, hi).value;
        }
        return FRAC_2_SQRT_PI * sum;
    }
    erfc(x) - erfc(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points() {
        assert_eq!(erfc(0.0), 1.0);
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erfcx(0.0).unwrap(), 1.0);
        assert!(erfc(40.0) < 1e-300);
        assert!(erfc(40.0) >= 0.0);
        assert_eq!(erfc(-40.0), 2.0);
    }

    #[test]
    fn reflection() {
        for x in [0.1, 0.46875, 0.5, 1.0, 3.7, 4.0, 4.5, 9.0, 27.0] {
            assert!((erfc(-x) - (2.0 - erfc(x))).abs() <= 2.0 * f64::EPSILON);
            assert_eq!(erf(-x), -erf(x));
        }
    }

    #[test]
    fn erfcx_overflow_threshold() {
        assert!(matches!(erfcx(-27.0), Err(Error::Overflow { .. })));
        assert!(erfcx(-26.0).unwrap().is_finite());
        assert!(erfcx(f64::NAN).is_err());
    }

    #[test]
    fn diff_identical_and_swapped() {
        for c in [-30.0, -1.0, 0.0, 0.3, 7.0, 100.0] {
            assert_eq!(erfc_diff(c, c), 0.0);
        }
        let d = erfc_diff(0.2, 1.7);
        assert_eq!(erfc_diff(1.7, 0.2), -d);
    }

    #[test]
    fn diff_against_wide_tail() {
        assert!((erfc_diff(0.0, 40.0) - 1.0).abs() < 1e-13);
        assert!((erfc_diff(-40.0, 0.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn diff_branches_meet() {
        // Close-argument quadrature vs plain subtraction just past the width cutoff.
        let x = 1.0;
        let quad = erfc_diff(x, x + CLOSE_WIDTH);
        let plain = erfc(x) - erfc(x + CLOSE_WIDTH);
        assert!(((quad - plain) / plain).abs() < 1e-14);
        // Scaled branch vs quadrature branch near x = 5.
        let a = erfc_diff(5.0, 5.3);
        let b = erfc_diff(5.0 + 1e-12, 5.3);
        assert!(((a - b) / a).abs() < 1e-10);
    }
}
