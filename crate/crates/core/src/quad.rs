//! Gauss-Kronrod quadrature: the fixed 7/15-point rule and a globally adaptive
//! driver that bisects the interval with the largest error estimate.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleResult {
    pub value: f64,
    pub abs_error: f64,
}

/// One application of the 15-point Kronrod rule with the QUADPACK error estimate.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> RuleResult {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);

    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    RuleResult {
        value,
        abs_error: err,
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integration {
    pub value: f64,
    pub abs_error: f64,
    pub segments: usize,
}

/// Globally adaptive integration of `f` over `[lo, hi]`.
///
/// The interval is first cut into `initial_panels` equal pieces so that narrow
/// peaks are not missed by the first rule application. Fails with
/// `NonConvergence` once `max_segments` is reached without meeting `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    initial_panels: usize,
    max_segments: usize,
) -> Result<Integration> {
    if lo == hi {
        return Ok(Integration {
            value: 0.0,
            abs_error: 0.0,
            segments: 0,
        });
    }
    let panels = initial_panels.max(1);
    let width = (hi - lo) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels * 4);
    for i in 0..panels {
        let a = lo + width * i as f64;
        let b = if i + 1 == panels { hi } else { a + width };
        let r = gk15(&f, a, b);
        heap.push(Segment {
            lo: a,
            hi: b,
            value: r.value,
            err: r.abs_error,
        });
    }

    loop {
        let total_err: f64 = heap.iter().map(|s| s.err).sum();
        if total_err <= abs_tol {
            break;
        }
        if heap.len() >= max_segments {
            return Err(Error::NonConvergence {
                method: "adaptive Gauss-Kronrod",
                detail: format!(
                    "{} segments on [{lo}, {hi}], error estimate {total_err:e} > {abs_tol:e}",
                    heap.len()
                ),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval cannot be split further in f64.
            return Err(Error::NonConvergence {
                method: "adaptive Gauss-Kronrod",
                detail: format!("interval [{}, {}] exhausted", worst.lo, worst.hi),
            });
        }
        for (a, b) in [(worst.lo, mid), (mid, worst.hi)] {
            let r = gk15(&f, a, b);
            heap.push(Segment {
                lo: a,
                hi: b,
                value: r.value,
                err: r.abs_error,
            });
        }
    }

    let mut segs: Vec<Segment> = heap.into_vec();
    // Sum in position order so the result does not depend on heap layout.
    segs.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    Ok(Integration {
        value: segs.iter().map(|s| s.value).sum(),
        abs_error: segs.iter().map(|s| s.err).sum(),
        segments: segs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_for_low_degree_polynomials() {
        // 15-point Kronrod integrates degree 22 exactly.
        let r = gk15(&|x: f64| x.powi(22), -1.0, 1.0);
        assert!((r.value - 2.0 / 23.0).abs() < 1e-15);
        let r = gk15(&|x: f64| 3.0 * x * x + 1.0, 0.0, 2.0);
        assert!((r.value - 10.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_weights_sum_to_two() {
        let sum = 2.0 * (WG[0] + WG[1] + WG[2]) + WG[3];
        assert!((sum - 2.0).abs() < 1e-15);
        let sum: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((sum - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_narrow_peak() {
        let f = |x: f64| (-(x - 37.3) * (x - 37.3) * 50.0).exp();
        let exact = (std::f64::consts::PI / 50.0).sqrt();
        let r = integrate(f, 0.0, 80.0, 1e-13, 20, 2000).unwrap();
        assert!((r.value - exact).abs() < 1e-12, "{} vs {}", r.value, exact);
    }

    #[test]
    fn reports_non_convergence_when_budget_is_tiny() {
        let f = |x: f64| x.sqrt().sin() / x.sqrt().max(1e-300);
        let err = integrate(f, 0.0, 1000.0, 1e-14, 1, 2).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn empty_interval_is_zero() {
        let r = integrate(|x| x, 3.0, 3.0, 1e-12, 4, 10).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
