//! Closed-form upper and lower bounds on `Q1(a, b)`.
//!
//! Ids ending in `JP` are the refined bounds built from the approximations
//! `I0(x) <= I0(b) (e^x + 3)/(e^b + 3)` and
//! `I0(x) >= b I0(b) sinh(x) / (x sinh(b))`. The `A`..`D` ids are the
//! literature baselines they are compared against.
//!
//! Every formula is evaluated in exponentially scaled form: `I0(ab)` only
//! appears as `i0e(ab) = e^{-ab} I0(ab)`, and `e^{ab}` is folded into it, so
//! the bounds stay finite for `ab` far past the `f64` overflow of `e^{ab}`.

use std::f64::consts::{FRAC_1_PI, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::oracle::QArgs;
use crate::quad::gk15;
use crate::specfun::{erfc, erfc_diff, i0e, ln_i0};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
/// `sqrt(pi / 2)`
const SQRT_HALF_PI: f64 = 1.253_314_137_315_500_3;
/// `sqrt(2 pi)`
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Below this `ab` the LB1JP prefactor `b / (e^{ab} - e^{-ab})` is replaced
/// by its removable-singularity form.
pub const LB1JP_LIMIT_BELOW: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `b >= a`: the integrand is monotone on `[b, inf)`.
    BGeqA,
    /// `b < a`: bounds are built on the complement `1 - Q1`.
    BLtA,
}

pub fn regime_of(args: QArgs) -> Regime {
    if args.b() >= args.a() {
        Regime::BGeqA
    } else {
        Regime::BLtA
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    Ub1Jp,
    Ub1A,
    Ub1B,
    Ub1C,
    Ub1D,
    Lb1Jp,
    Lb1A,
    Lb1B,
    Lb1C,
    Lb1D,
    Ub2Jp,
    Ub2A,
    Ub2D,
    Lb2Jp,
    Lb2A,
    Lb2B,
    Lb2C,
    Lb2D,
}

impl BoundId {
    pub const ALL: [BoundId; 18] = [
        BoundId::Ub1Jp,
        BoundId::Ub1A,
        BoundId::Ub1B,
        BoundId::Ub1C,
        BoundId::Ub1D,
        BoundId::Lb1Jp,
        BoundId::Lb1A,
        BoundId::Lb1B,
        BoundId::Lb1C,
        BoundId::Lb1D,
        BoundId::Ub2Jp,
        BoundId::Ub2A,
        BoundId::Ub2D,
        BoundId::Lb2Jp,
        BoundId::Lb2A,
        BoundId::Lb2B,
        BoundId::Lb2C,
        BoundId::Lb2D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::Ub1Jp => "UB1JP",
            BoundId::Ub1A => "UB1A",
            BoundId::Ub1B => "UB1B",
            BoundId::Ub1C => "UB1C",
            BoundId::Ub1D => "UB1D",
            BoundId::Lb1Jp => "LB1JP",
            BoundId::Lb1A => "LB1A",
            BoundId::Lb1B => "LB1B",
            BoundId::Lb1C => "LB1C",
            BoundId::Lb1D => "LB1D",
            BoundId::Ub2Jp => "UB2JP",
            BoundId::Ub2A => "UB2A",
            BoundId::Ub2D => "UB2D",
            BoundId::Lb2Jp => "LB2JP",
            BoundId::Lb2A => "LB2A",
            BoundId::Lb2B => "LB2B",
            BoundId::Lb2C => "LB2C",
            BoundId::Lb2D => "LB2D",
        }
    }

    pub fn side(self) -> Side {
        if self.name().starts_with("UB") {
            Side::Upper
        } else {
            Side::Lower
        }
    }

    /// The regime the formula was derived for.
    pub fn regime(self) -> Regime {
        if self.name().as_bytes()[2] == b'1' {
            Regime::BGeqA
        } else {
            Regime::BLtA
        }
    }

    pub fn is_jp(self) -> bool {
        self.name().ends_with("JP")
    }

    /// Whether `args` satisfies the id's regime requirement.
    ///
    /// The `*1*` family needs `b >= a`. The `*2*` family is defined on the
    /// closed side `b <= a`, so it can be evaluated at the tie too, although
    /// [`regime_of`] assigns the tie to `BGeqA`.
    pub fn accepts(self, args: QArgs) -> bool {
        match self.regime() {
            Regime::BGeqA => args.b() >= args.a(),
            Regime::BLtA => args.b() <= args.a(),
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        BoundId::ALL
            .into_iter()
            .find(|id| id.name() == upper)
            .ok_or_else(|| Error::Domain(format!("unknown bound id {s:?}")))
    }
}

/// A bound value before and after clipping to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundEval {
    pub id: BoundId,
    pub raw: f64,
    pub clamped: f64,
    pub side: Side,
}

impl BoundEval {
    fn new(id: BoundId, args: QArgs, raw: f64) -> Result<Self> {
        if !raw.is_finite() {
            return Err(Error::NonFinite {
                id,
                a: args.a(),
                b: args.b(),
            });
        }
        let side = id.side();
        let clamped = match side {
            Side::Upper => raw.min(1.0),
            Side::Lower => raw.max(0.0),
        };
        Ok(Self {
            id,
            raw,
            clamped,
            side,
        })
    }
}

/// `zeta = ln I0(ab) / b`, the exponential rate of the LB2A envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Zeta(pub f64);

pub fn compute_zeta(args: QArgs) -> Result<Zeta> {
    let s = args.a() * args.b();
    if s == 0.0 {
        return Err(Error::Domain(format!(
            "zeta requires a, b > 0, got a = {}, b = {}",
            args.a(),
            args.b()
        )));
    }
    Ok(Zeta(ln_i0(s) / args.b()))
}

/// Which transcription of LB2A to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Lb2aForm {
    /// The `sqrt(pi/2)` term carries a factor `zeta`, as the integral of
    /// `x exp(-(x - zeta)^2 / 2)` requires.
    #[default]
    ZetaCorrected,
    /// The table entry exactly as typeset, without the factor `zeta`.
    AsPrinted,
}

pub(crate) fn require(id: BoundId, args: QArgs) -> Result<()> {
    if id.accepts(args) {
        Ok(())
    } else {
        Err(Error::Regime {
            id,
            required: match id.regime() {
                Regime::BGeqA => "b >= a",
                Regime::BLtA => "b <= a",
            },
            a: args.a(),
            b: args.b(),
        })
    }
}

fn singular(id: BoundId, args: QArgs, reason: &'static str) -> Error {
    Error::Singularity {
        id,
        reason,
        a: args.a(),
        b: args.b(),
    }
}

fn gauss(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

/// `i0e(ab) / (1 + 3 e^{-ab})`, i.e. `I0(ab) / (e^{ab} + 3)`.
fn plus3_factor(s: f64) -> f64 {
    i0e(s) / (1.0 + 3.0 * (-s).exp())
}

/// `b i0e(ab) / (1 - e^{-2ab})`, i.e. `b I0(ab) / (e^{ab} - e^{-ab})`, for `ab > 0`.
fn sinh_factor(b: f64, s: f64) -> f64 {
    b * i0e(s) / -(-2.0 * s).exp_m1()
}

/// `arctan(b / a)` with the `a = 0` limit `pi / 2`.
fn angle(a: f64, b: f64) -> f64 {
    b.atan2(a)
}

pub fn ub1jp(args: QArgs) -> Result<BoundEval> {
    let id = BoundId::Ub1Jp;
    require(id, args)?;
    let (a, b) = (args.a(), args.b());
    let s = a * b;
    let braces = gauss(b - a)
        + a * SQRT_HALF_PI * erfc((b - a) / SQRT_2)
        + 3.0 * (-0.5 * (a * a + b * b)).exp();
    BoundEval::new(id, args, plus3_factor(s) * braces)
}

/// LB1JP straight from its closed form. Needs `ab > 0`.
pub fn lb1jp_direct(args: QArgs) -> Result<f64> {
    let (a, b) = (args.a(), args.b());
    let s = a * b;
    if s == 0.0 {
        return Err(singular(
            BoundId::Lb1Jp,
            args,
            "direct form is 0/0 at ab = 0",
        ));
    }
    let diff = erfc_diff((b - a) / SQRT_2, (b + a) / SQRT_2);
    Ok(SQRT_HALF_PI * sinh_factor(b, s) * diff)
}

/// LB1JP with the `1/a` singularity removed.
///
/// Substituting `t = (b + a u)/sqrt(2)` in the erfc difference gives
/// `LB1JP = I0(ab) (ab / sinh ab) / 2 * int_{-1}^{1} exp(-(b + a u)^2 / 2) du`,
/// which tends to `exp(-b^2/2)` as `a -> 0`. A single Kronrod rule resolves
/// the integral to rounding while `a (a + b)` stays small.
pub fn lb1jp_limit_branch(args: QArgs) -> f64 {
    let (a, b) = (args.a(), args.b());
    let s = a * b;
    // I0(s) s / sinh(s), scaled.
    let factor = if s == 0.0 {
        1.0
    } else {
        2.0 * s * i0e(s) / -(-2.0 * s).exp_m1()
    };
    let integral = gk15(&|u: f64| gauss(b + a * u), -1.0, 1.0).value;
    0.5 * factor * integral
}

pub fn lb1jp(args: QArgs) -> Result<BoundEval> {
    let id = BoundId::Lb1Jp;
    require(id, args)?;
    let raw = if args.a() * args.b() < LB1JP_LIMIT_BELOW {
        lb1jp_limit_branch(args)
    } else {
        lb1jp_direct(args)?
    };
    BoundEval::new(id, args, raw)
}

/// `int_0^b x exp(-(x^2 + a^2)/2) e^{ax} dx`, the part shared by UB2JP and UB2A.
fn complement_moment(a: f64, b: f64) -> f64 {
    gauss(a) - gauss(b - a) + a * SQRT_HALF_PI * erfc_diff(-a / SQRT_2, (b - a) / SQRT_2)
}

pub fn ub2jp(args: QArgs) -> Result<BoundEval> {
    let id = BoundId::Ub2Jp;
    require(id, args)?;
    let (a, b) = (args.a(), args.b());
    let s = a * b;
    let braces = 4.0 * gauss(a) - gauss(b - a) - 3.0 * (-0.5 * (a * a + b * b)).exp()
        + a * SQRT_HALF_PI * erfc_diff(-a / SQRT_2, (b - a) / SQRT_2);
    BoundEval::new(id, args, 1.0 - plus3_factor(s) * braces)
}

pub fn lb2jp(args: QArgs) -> Result<BoundEval> {
    let id = BoundId::Lb2Jp;
    require(id, args)?;
    let (a, b) = (args.a(), args.b());
    if b == 0.0 {
        // Empty complement integral.
        return BoundEval::new(id, args, 1.0);
    }
    let s = a * b;
    // erf(a/r2) - erf((a-b)/r2)/2 - erf((a+b)/r2)/2, as two nonnegative erfc differences.
    let below = erfc_diff((a - b) / SQRT_2, a / SQRT_2);
    let above = erfc_diff(a / SQRT_2, (a + b) / SQRT_2);
    let bracket = 0.5 * (below - above);
    BoundEval::new(id, args, 1.0 - SQRT_2PI * sinh_factor(b, s) * bracket)
}

fn ub1a(args: QArgs) -> f64 {
    let (a, b) = (args.a(), args.b());
    i0e(a * b) * (gauss(b - a) + a * SQRT_HALF_PI * erfc((b - a) / SQRT_2))
}

fn ub1b(args: QArgs) -> Result<f64> {
    let (a, b) = (args.a(), args.b());
    if b == a {
        return Err(singular(BoundId::Ub1B, args, "division by b - a"));
    }
    Ok(b / (b - a) * gauss(b - a))
}

fn ub1c(args: QArgs) -> f64 {
    let (a, b) = (args.a(), args.b());
    gauss(b - a) * i0e(a * b) + a * (PI / 8.0).sqrt() * erfc((b - a) / SQRT_2)
}

fn ub1d(args: QArgs) -> f64 {
    let (a, b) = (args.a(), args.b());
    let w = angle(a, b) * FRAC_1_PI;
    (1.0 - w) * gauss(b - a) + w * (-0.5 * (a * a + b * b)).exp()
}

fn lb1a(args: QArgs) -> f64 {
    let (a, b) = (args.a(), args.b());
    SQRT_HALF_PI * b * i0e(a * b) * erfc((b - a) / SQRT_2)
}

fn lb1b(args: QArgs) -> Result<f64> {
    let (a, b) = (args.a(), args.b());
    if a + b == 0.0 {
        return Err(singular(BoundId::Lb1B, args, "b / (b + a) is 0/0"));
    }
    Ok(b / (b + a) * gauss(b + a))
}

/// `exp(-(a^2 + b^2)/2) I0(ab)`; used as LB1C and LB2C.
fn rice_envelope_c(args: QArgs) -> f64 {
    let (a, b) = (args.a(), args.b());
    gauss(b - a) * i0e(a * b)
}

fn lb1d(args: QArgs) -> f64 {
    let (a, b) = (args.a(), args.b());
    let w = angle(a, b) * FRAC_1_PI;
    (1.0 - w) * (-0.5 * (a * a + b * b)).exp() + w * gauss(a + b)
}

fn ub2a(args: QArgs) -> f64 {
    let (a, b) = (args.a(), args.b());
    1.0 - i0e(a * b) * complement_moment(a, b)
}

fn ub2d(args: QArgs) -> Result<f64> {
    let (a, b) = (args.a(), args.b());
    if a == 0.0 {
        return Err(singular(BoundId::Ub2D, args, "undefined at a = b = 0"));
    }
    let sum_sq = a * a + b * b;
    let diff_sq = a * a - b * b;
    let w = angle(a, b) * FRAC_1_PI;
    Ok(1.0 - w * ((-diff_sq * diff_sq / (2.0 * sum_sq)).exp() - (-0.5 * sum_sq).exp()))
}

/// LB2A in either transcription.
pub fn lb2a_with_form(args: QArgs, form: Lb2aForm) -> Result<BoundEval> {
    let id = BoundId::Lb2A;
    require(id, args)?;
    let (a, b) = (args.a(), args.b());
    if b == 0.0 {
        return BoundEval::new(id, args, 1.0);
    }
    if a == 0.0 {
        return Err(singular(id, args, "zeta is undefined at a = 0"));
    }
    let zeta = compute_zeta(args)?.0;
    let scale = match form {
        Lb2aForm::ZetaCorrected => zeta,
        Lb2aForm::AsPrinted => 1.0,
    };
    // exp(-(a^2 - zeta^2)/2) times each brace term, exponents combined first.
    let head = -0.5 * (a - zeta) * (a + zeta);
    let t1 = gauss(a);
    let t2 = (head - 0.5 * (b - zeta) * (b - zeta)).exp();
    let t3 = scale * SQRT_HALF_PI * head.exp() * erfc_diff(-zeta / SQRT_2, (b - zeta) / SQRT_2);
    BoundEval::new(id, args, 1.0 - (t1 - t2 + t3))
}

fn lb2b(args: QArgs) -> Result<f64> {
    let (a, b) = (args.a(), args.b());
    if a == b {
        return Err(singular(BoundId::Lb2B, args, "division by a - b"));
    }
    Ok(1.0 - a / (a - b) * gauss(a - b))
}

fn lb2d(args: QArgs) -> Result<f64> {
    let (a, b) = (args.a(), args.b());
    if a == 0.0 {
        return Err(singular(BoundId::Lb2D, args, "undefined at a = b = 0"));
    }
    let w = (b / a).asin() * FRAC_1_PI;
    Ok(1.0 - w * (gauss(b - a) - gauss(a + b)))
}

/// Evaluates one of the fourteen literature baselines.
///
/// JP ids are rejected here; use [`evaluate`] to dispatch any id.
pub fn literature_bound(id: BoundId, args: QArgs) -> Result<BoundEval> {
    if id.is_jp() {
        return Err(Error::Domain(format!(
            "{id} is not a literature bound; use evaluate()"
        )));
    }
    // Singularities take precedence over the regime so that the tie b = a
    // reports the real reason LB2B is unavailable there.
    if id == BoundId::Lb2B && args.a() == args.b() {
        return Err(singular(id, args, "division by a - b"));
    }
    require(id, args)?;
    let raw = match id {
        BoundId::Ub1A => ub1a(args),
        BoundId::Ub1B => ub1b(args)?,
        BoundId::Ub1C => ub1c(args),
        BoundId::Ub1D => ub1d(args),
        BoundId::Lb1A => lb1a(args),
        BoundId::Lb1B => lb1b(args)?,
        BoundId::Lb1C | BoundId::Lb2C => rice_envelope_c(args),
        BoundId::Lb1D => lb1d(args),
        BoundId::Ub2A => ub2a(args),
        BoundId::Ub2D => ub2d(args)?,
        BoundId::Lb2A => return lb2a_with_form(args, Lb2aForm::ZetaCorrected),
        BoundId::Lb2B => lb2b(args)?,
        BoundId::Lb2D => lb2d(args)?,
        BoundId::Ub1Jp | BoundId::Lb1Jp | BoundId::Ub2Jp | BoundId::Lb2Jp => unreachable!(),
    };
    BoundEval::new(id, args, raw)
}

/// Evaluates any of the eighteen bounds.
pub fn evaluate(id: BoundId, args: QArgs) -> Result<BoundEval> {
    match id {
        BoundId::Ub1Jp => ub1jp(args),
        BoundId::Lb1Jp => lb1jp(args),
        BoundId::Ub2Jp => ub2jp(args),
        BoundId::Lb2Jp => lb2jp(args),
        _ => literature_bound(id, args),
    }
}

/// Result of attempting one bound in [`eval_all`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundOutcome {
    Evaluated(BoundEval),
    Skipped { id: BoundId, reason: String },
}

impl BoundOutcome {
    pub fn id(&self) -> BoundId {
        match self {
            BoundOutcome::Evaluated(e) => e.id,
            BoundOutcome::Skipped { id, .. } => *id,
        }
    }

    pub fn eval(&self) -> Option<&BoundEval> {
        match self {
            BoundOutcome::Evaluated(e) => Some(e),
            BoundOutcome::Skipped { .. } => None,
        }
    }
}

/// Every bound belonging to `regime_of(args)`, in catalog order. Bounds whose
/// own preconditions fail are reported as skipped.
pub fn eval_all(args: QArgs) -> Vec<BoundOutcome> {
    let regime = regime_of(args);
    BoundId::ALL
        .into_iter()
        .filter(|id| id.regime() == regime)
        .map(|id| match evaluate(id, args) {
            Ok(e) => BoundOutcome::Evaluated(e),
            Err(err) => BoundOutcome::Skipped {
                id,
                reason: err.to_string(),
            },
        })
        .collect()
}
