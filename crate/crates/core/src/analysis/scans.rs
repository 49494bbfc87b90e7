//! Grid certification of the inequalities the bound derivations rely on.
//!
//! Each scan evaluates a signed violation at every grid point (negative or
//! zero means the property holds there) and reports the worst one together
//! with the arguments where it occurred.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{eval_all, evaluate, lb1jp, ub1jp, ub2jp, BoundId, Side};
use crate::error::{Error, Result};
use crate::oracle::{q1_reference, rice_density, QArgs};
use crate::specfun::{erfc_diff, erfcx_unchecked, i0e, i1e, ln_erfc, ln_i0};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_HALF_PI: f64 = 1.253_314_137_315_500_3;

/// Absolute slack allowed by the sandwich scan.
pub const SANDWICH_MARGIN: f64 = 1e-9;
/// Relative slack for the envelope ordering: all three curves meet at `x = b`.
pub const ENVELOPE_REL_MARGIN: f64 = 1e-12;
/// Relative slack for the non-strict JP dominance comparison of raw values.
pub const DOMINANCE_REL_MARGIN: f64 = 1e-14;
/// Required share of grid points where JP dominance is strict.
pub const DOMINANCE_STRICT_SHARE: f64 = 0.99;

/// `a` values of the default sandwich / oracle grid.
pub const GRID_A_VALUES: [f64; 6] = [0.0, 0.1, 1.0, 2.0, 10.0, 20.0];
/// `a` values of the default dominance grid; at `a = 0` every pair coincides.
pub const DOMINANCE_A_VALUES: [f64; 5] = [0.1, 1.0, 2.0, 10.0, 20.0];
/// `b` points per `a` on the default grid.
pub const GRID_B_PER_A: usize = 50;
/// Extent of the `b >= a` half of the grid.
pub const GRID_B_SPAN_ABOVE: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "margin", rename_all = "snake_case")]
pub enum Criterion {
    /// Every violation must be strictly negative.
    Strict,
    /// Every violation must be at most the margin.
    AtMost(f64),
}

impl Criterion {
    fn accepts(self, worst: f64) -> bool {
        match self {
            Criterion::Strict => worst < 0.0,
            Criterion::AtMost(m) => worst <= m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub property: String,
    pub grid: String,
    pub points: usize,
    pub worst_violation: f64,
    pub witness: Vec<(String, f64)>,
    pub criterion: Criterion,
    pub passed: bool,
    pub detail: Option<String>,
}

/// Running maximum of the violation with its witness.
struct Worst {
    value: f64,
    witness: Vec<(String, f64)>,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            witness: Vec::new(),
        }
    }

    fn offer(&mut self, v: f64, witness: &[(&str, f64)]) {
        // NaN counts as a violation.
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v > self.value || self.witness.is_empty() {
            self.value = v;
            self.witness = witness.iter().map(|(k, x)| (k.to_string(), *x)).collect();
        }
    }

    fn merge(mut self, other: Worst) -> Worst {
        if other.value > self.value || self.witness.is_empty() {
            self = other;
        }
        self
    }

    fn report(
        self,
        property: &str,
        grid: String,
        points: usize,
        criterion: Criterion,
    ) -> ScanReport {
        ScanReport {
            property: property.to_string(),
            grid,
            points,
            passed: points > 0 && criterion.accepts(self.value),
            worst_violation: self.value,
            witness: self.witness,
            criterion,
            detail: None,
        }
    }
}

fn check_range(lo: f64, hi: f64, n: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo || n < 2 {
        return Err(Error::Domain(format!(
            "scan needs 0 < lo < hi and n >= 2, got lo = {lo}, hi = {hi}, n = {n}"
        )));
    }
    Ok(())
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// `g(x) e^{-2x}` where `g(x) = e^x [I1(x) - I0(x)] + 3 I1(x)`; same sign as `g`.
pub fn g_scaled(x: f64) -> f64 {
    (i1e(x) - i0e(x)) + 3.0 * (-x).exp() * i1e(x)
}

/// `g(x) = e^x [I1(x) - I0(x)] + 3 I1(x)`; overflows to `-inf` past `x ~ 354`.
pub fn g_function(x: f64) -> f64 {
    g_scaled(x) * (2.0 * x).exp()
}

/// `I0(x) / (e^x + 3)`.
pub fn f_dec_eq2(x: f64) -> f64 {
    i0e(x) / (1.0 + 3.0 * (-x).exp())
}

/// `x I0(x) / (e^x - e^{-x})`, with its limit `1/2` at `x = 0`.
pub fn f_inc_sinh(x: f64) -> f64 {
    if x == 0.0 {
        0.5
    } else {
        x * i0e(x) / -(-2.0 * x).exp_m1()
    }
}

pub fn scan_g_negative(lo: f64, hi: f64, n: usize) -> Result<ScanReport> {
    check_range(lo, hi, n)?;
    let mut worst = Worst::new();
    for x in log_grid(lo, hi, n) {
        worst.offer(g_scaled(x), &[("x", x)]);
    }
    Ok(worst.report(
        "g_negative",
        format!("{n} log-spaced points on [{lo}, {hi}]; violation = g(x) e^(-2x)"),
        n,
        Criterion::Strict,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioKind {
    /// `I0(x) / (e^x + 3)`, expected strictly decreasing.
    FDecEq2,
    /// `x I0(x) / (e^x - e^{-x})`, expected strictly increasing.
    FIncSinh,
}

impl RatioKind {
    pub fn name(self) -> &'static str {
        match self {
            RatioKind::FDecEq2 => "f_dec_eq2",
            RatioKind::FIncSinh => "f_inc_sinh",
        }
    }
}

pub fn scan_f_ratio_monotone(kind: RatioKind, lo: f64, hi: f64, n: usize) -> Result<ScanReport> {
    check_range(lo, hi, n)?;
    let xs = log_grid(lo, hi, n);
    let f: fn(f64) -> f64 = match kind {
        RatioKind::FDecEq2 => f_dec_eq2,
        RatioKind::FIncSinh => f_inc_sinh,
    };
    let mut worst = Worst::new();
    let mut prev = f(xs[0]);
    for w in xs.windows(2) {
        let next = f(w[1]);
        let step = match kind {
            RatioKind::FDecEq2 => next - prev,
            RatioKind::FIncSinh => prev - next,
        };
        worst.offer(step, &[("x0", w[0]), ("x1", w[1])]);
        prev = next;
    }
    let direction = match kind {
        RatioKind::FDecEq2 => "f(x1) - f(x0)",
        RatioKind::FIncSinh => "f(x0) - f(x1)",
    };
    Ok(worst.report(
        kind.name(),
        format!("{n} log-spaced points on [{lo}, {hi}]; violation = {direction}"),
        n - 1,
        Criterion::Strict,
    ))
}

/// The three consecutive gaps of
/// `e^x/e^b > cosh x / cosh b > (e^x + 1)/(e^b + 1) > (e^x + m)/(e^b + m)`,
/// each divided by `e^{x-b}` and written without cancellation.
pub fn chain_eq6_gaps(b: f64, m: f64, x: f64) -> [f64; 3] {
    let u = x - b;
    let one_minus_eu = -(-u).exp_m1();
    let eb = (-b).exp();
    // (A - B)/A = (1 - e^{-2u}) e^{-2b} / (1 + e^{-2b})
    let g1 = -(-2.0 * u).exp_m1() * (-2.0 * b).exp() / (1.0 + (-2.0 * b).exp());
    // (B - C)/A = (1 - e^{-u}) [(1 - e^{-b}) - (1 + e^{-b}) e^{-x}] / [(e^b + e^{-b})(1 + e^{-b})]
    let g2 =
        one_minus_eu * (-(-b).exp_m1() - (1.0 + eb) * (-x).exp()) / ((b.exp() + eb) * (1.0 + eb));
    // (C - D)/A = (m - 1)(1 - e^{-u}) / [(1 + e^{-b})(e^b + m)]
    let g3 = (m - 1.0) * one_minus_eu / ((1.0 + eb) * (b.exp() + m));
    [g1, g2, g3]
}

pub fn scan_chain_eq6(b: f64, m: f64, xs: &[f64]) -> Result<ScanReport> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::Domain(format!(
            "chain scan needs m > 1, got m = {m}"
        )));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Domain(format!(
            "chain scan needs b > 0, got b = {b}"
        )));
    }
    if xs.is_empty() || xs.iter().any(|&x| !(x > b && x.is_finite())) {
        return Err(Error::Domain(format!(
            "chain scan needs a nonempty set of finite x > b = {b}"
        )));
    }
    let mut worst = Worst::new();
    for &x in xs {
        for (i, g) in chain_eq6_gaps(b, m, x).into_iter().enumerate() {
            worst.offer(-g, &[("x", x), ("link", (i + 1) as f64)]);
        }
    }
    Ok(worst.report(
        "chain_eq6",
        format!(
            "b = {b}, m = {m}, {} x values in [{}, {}]; violation = -(gap)/(e^x/e^b)",
            xs.len(),
            xs.iter().cloned().fold(f64::INFINITY, f64::min),
            xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        ),
        xs.len(),
        Criterion::Strict,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopePoint {
    pub x: f64,
    /// Rice density at `x`.
    pub rice: f64,
    /// `b I0(ab)/(e^{ab} - e^{-ab}) [e^{-(x-a)^2/2} - e^{-(x+a)^2/2}]`.
    pub sinh_envelope: f64,
    /// `x exp(-(x^2 + a^2)/2 + zeta x)`, `zeta = ln I0(ab)/b`.
    pub exp_envelope: f64,
}

fn check_envelope_args(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || b <= 0.0 || b >= a {
        return Err(Error::Domain(format!(
            "envelope comparison needs 0 < b < a, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// The density and both upper envelopes at `x` in `[0, b]`, requiring `0 < b < a`.
pub fn envelope_point(a: f64, b: f64, x: f64) -> Result<EnvelopePoint> {
    check_envelope_args(a, b)?;
    Ok(envelope_point_unchecked(a, b, x))
}

fn envelope_point_unchecked(a: f64, b: f64, x: f64) -> EnvelopePoint {
    let s = a * b;
    let zeta = ln_i0(s) / b;
    let d = x - a;
    let sinh_envelope =
        b * i0e(s) / -(-2.0 * s).exp_m1() * (-0.5 * d * d).exp() * -(-2.0 * a * x).exp_m1();
    let exp_envelope = if x == 0.0 {
        0.0
    } else {
        x * (-0.5 * (x * x + a * a) + zeta * x).exp()
    };
    EnvelopePoint {
        x,
        rice: rice_density(x, a),
        sinh_envelope,
        exp_envelope,
    }
}

pub fn envelope_curves(a: f64, b: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<EnvelopePoint>> {
    check_envelope_args(a, b)?;
    if !(0.0 <= lo && lo < hi && hi <= b) || n < 2 {
        return Err(Error::Domain(format!(
            "envelope grid needs 0 <= lo < hi <= b and n >= 2, got [{lo}, {hi}], n = {n}"
        )));
    }
    Ok(uniform_grid(lo, hi, n)
        .into_iter()
        .map(|x| envelope_point_unchecked(a, b, x))
        .collect())
}

/// Checks `rice <= sinh envelope <= exp envelope` on `n` uniform points of
/// `[lo, hi]`, with violations measured relative to the largest of the three.
pub fn scan_envelope(a: f64, b: f64, lo: f64, hi: f64, n: usize) -> Result<ScanReport> {
    let curves = envelope_curves(a, b, lo, hi, n)?;
    let mut worst = Worst::new();
    let mut first_bad: Option<f64> = None;
    let mut last_bad: Option<f64> = None;
    let mut bad = 0usize;
    for p in &curves {
        let scale = p.rice.max(p.sinh_envelope).max(p.exp_envelope);
        let v = if scale > 0.0 {
            (p.rice - p.sinh_envelope).max(p.sinh_envelope - p.exp_envelope) / scale
        } else {
            0.0
        };
        if v > ENVELOPE_REL_MARGIN {
            bad += 1;
            first_bad.get_or_insert(p.x);
            last_bad = Some(p.x);
        }
        worst.offer(v, &[("x", p.x)]);
    }
    let mut report = worst.report(
        "envelope",
        format!(
            "a = {a}, b = {b}, {n} uniform points on [{lo}, {hi}]; violation relative to max curve"
        ),
        n,
        Criterion::AtMost(ENVELOPE_REL_MARGIN),
    );
    if let (Some(f), Some(l)) = (first_bad, last_bad) {
        report.detail = Some(format!(
            "ordering fails at {bad} of {n} points, x in [{f}, {l}]"
        ));
    }
    Ok(report)
}

/// The `b` values paired with `a` on the certification grid: `n/2` midpoints
/// of `(0, a)` and the rest evenly spaced on `[a, a + 8]`; for `a = 0` all
/// `n` points are evenly spaced on `[0, 8]`.
pub fn certification_b_grid(a: f64, n: usize) -> Vec<f64> {
    if a == 0.0 {
        return uniform_grid(0.0, GRID_B_SPAN_ABOVE, n.max(2));
    }
    let below = n / 2;
    let above = n - below;
    let mut bs: Vec<f64> = (0..below)
        .map(|k| a * (k as f64 + 0.5) / below as f64)
        .collect();
    bs.extend(
        uniform_grid(a, a + GRID_B_SPAN_ABOVE, above.max(2))
            .into_iter()
            .take(above),
    );
    bs
}

fn grid_points(a_values: &[f64], b_per_a: usize) -> Vec<(f64, f64)> {
    a_values
        .iter()
        .flat_map(|&a| {
            certification_b_grid(a, b_per_a)
                .into_iter()
                .map(move |b| (a, b))
        })
        .collect()
}

/// Lower bounds below and upper bounds above the reference value, for every
/// bound applicable at each grid point.
pub fn scan_sandwich(a_values: &[f64], b_per_a: usize) -> Result<ScanReport> {
    let points = grid_points(a_values, b_per_a);
    let partials: Vec<Result<(Worst, usize)>> = points
        .par_iter()
        .map(|&(a, b)| {
            let args = QArgs::new(a, b)?;
            let exact = q1_reference(args)?.value;
            let mut worst = Worst::new();
            let mut checked = 0;
            for outcome in eval_all(args) {
                let Some(e) = outcome.eval() else { continue };
                let v = match e.side {
                    Side::Lower => e.clamped - exact,
                    Side::Upper => exact - e.clamped,
                };
                worst.offer(v, &[("a", a), ("b", b), ("bound", e.id as usize as f64)]);
                checked += 1;
            }
            Ok((worst, checked))
        })
        .collect();
    let mut worst = Worst::new();
    let mut checked = 0;
    for p in partials {
        let (w, c) = p?;
        worst = worst.merge(w);
        checked += c;
    }
    let mut report = worst.report(
        "sandwich",
        format!("a in {a_values:?}, {b_per_a} b values each; violation = lower - exact or exact - upper"),
        checked,
        Criterion::AtMost(SANDWICH_MARGIN),
    );
    if let Some((_, idx)) = report.witness.iter().find(|(k, _)| k == "bound") {
        report.detail = Some(format!("worst bound: {}", BoundId::ALL[*idx as usize]));
    }
    Ok(report)
}

/// Natural logarithms of the dominance gaps `UB1A - UB1JP`, `LB1JP - LB1A`
/// and `UB2A - UB2JP`, from their closed forms:
///
/// * `UB1A - UB1JP = 3 a sqrt(pi/2) erfc((b-a)/sqrt2) I0(ab) e^{-2ab} / (1 + 3 e^{-ab})`
/// * `LB1JP - LB1A = sqrt(pi/2) b I0(ab) e^{-ab} e^{-y^2} [erfcx(x) - erfcx(y)] / (1 - e^{-2ab})`
///   with `x = (b-a)/sqrt2`, `y = (b+a)/sqrt2`
/// * `UB2A - UB2JP = 3 i0e(ab) [e^{-a^2/2}(1 - e^{-ab}) - e^{-ab} a sqrt(pi/2) (erfc(-a/sqrt2) - erfc((b-a)/sqrt2))] / (1 + 3 e^{-ab})`
///
/// A finite logarithm certifies a strictly positive gap even where the two
/// bounds round to the same `f64`. `-inf` means the gap is zero (or
/// unresolvable); `None` means the pair does not apply at `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceGaps {
    pub ub1: Option<f64>,
    pub lb1: Option<f64>,
    pub ub2: Option<f64>,
}

pub fn dominance_log_gaps(args: QArgs) -> DominanceGaps {
    let (a, b) = (args.a(), args.b());
    let s = a * b;
    let ln_pos = |v: f64| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY };
    let mut gaps = DominanceGaps {
        ub1: None,
        lb1: None,
        ub2: None,
    };
    if b >= a {
        gaps.ub1 = Some(if a == 0.0 {
            f64::NEG_INFINITY
        } else {
            (3.0 * a * SQRT_HALF_PI).ln() + ln_erfc((b - a) / SQRT_2) + i0e(s).ln()
                - s
                - (3.0 * (-s).exp()).ln_1p()
        });
        gaps.lb1 = Some(if s == 0.0 {
            f64::NEG_INFINITY
        } else {
            let x = (b - a) / SQRT_2;
            let y = (b + a) / SQRT_2;
            (SQRT_HALF_PI * b).ln() + i0e(s).ln() - y * y
                + ln_pos(erfcx_unchecked(x) - erfcx_unchecked(y))
                - (-(-2.0 * s).exp_m1()).ln()
        });
    }
    if b <= a {
        let bracket = (-0.5 * a * a).exp() * -(-s).exp_m1()
            - (-s).exp() * a * SQRT_HALF_PI * erfc_diff(-a / SQRT_2, (b - a) / SQRT_2);
        gaps.ub2 = Some(3f64.ln() + i0e(s).ln() - (3.0 * (-s).exp()).ln_1p() + ln_pos(bracket));
    }
    gaps
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub report: ScanReport,
    pub comparisons: usize,
    pub strict: usize,
}

impl DominanceReport {
    pub fn strict_share(&self) -> f64 {
        if self.comparisons == 0 {
            0.0
        } else {
            self.strict as f64 / self.comparisons as f64
        }
    }
}

/// UB1JP <= UB1A and LB1JP >= LB1A for `b >= a`, UB2JP <= UB2A for `b < a`.
///
/// The non-strict comparison uses the raw values (relative slack
/// [`DOMINANCE_REL_MARGIN`]); strictness is read off [`dominance_log_gaps`].
/// Passes when every comparison holds and at least 99% are strict.
pub fn scan_jp_dominance(a_values: &[f64], b_per_a: usize) -> Result<DominanceReport> {
    let points = grid_points(a_values, b_per_a);
    let mut worst = Worst::new();
    let mut comparisons = 0;
    let mut strict = 0;
    for (a, b) in points {
        let args = QArgs::new(a, b)?;
        let gaps = dominance_log_gaps(args);
        let rel = |hi: f64, lo: f64| (lo - hi) / hi.abs().max(f64::MIN_POSITIVE);
        let mut pairs: Vec<(f64, Option<f64>, &str)> = Vec::new();
        if b >= a {
            let jp = ub1jp(args)?.raw;
            let base = evaluate(BoundId::Ub1A, args)?.raw;
            pairs.push((rel(base, jp), gaps.ub1, "UB1"));
            let jp = lb1jp(args)?.raw;
            let base = evaluate(BoundId::Lb1A, args)?.raw;
            pairs.push((rel(jp, base), gaps.lb1, "LB1"));
        } else {
            let jp = ub2jp(args)?.raw;
            let base = evaluate(BoundId::Ub2A, args)?.raw;
            pairs.push((rel(base, jp), gaps.ub2, "UB2"));
        }
        for (violation, gap, family) in pairs {
            comparisons += 1;
            if gap.is_some_and(f64::is_finite) {
                strict += 1;
            }
            let tag = match family {
                "UB1" => 1.0,
                "LB1" => 2.0,
                _ => 3.0,
            };
            worst.offer(violation, &[("a", a), ("b", b), ("pair", tag)]);
        }
    }
    let mut report = worst.report(
        "jp_dominance",
        format!(
            "a in {a_values:?}, {b_per_a} b values each; violation = (JP - A)/A for upper, (A - JP)/JP for lower"
        ),
        comparisons,
        Criterion::AtMost(DOMINANCE_REL_MARGIN),
    );
    let share = if comparisons == 0 {
        0.0
    } else {
        strict as f64 / comparisons as f64
    };
    report.passed = report.passed && share >= DOMINANCE_STRICT_SHARE;
    report.detail = Some(format!(
        "strict at {strict} of {comparisons} comparisons ({:.2}%; pair 1 = UB1, 2 = LB1, 3 = UB2)",
        100.0 * share
    ));
    Ok(DominanceReport {
        report,
        comparisons,
        strict,
    })
}
