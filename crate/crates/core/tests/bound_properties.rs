use marcum_core::analysis::dominance_log_gaps;
use marcum_core::{
    compute_zeta, eval_all, evaluate, lb1jp, lb1jp_direct, lb1jp_limit_branch, lb2a_with_form,
    lb2jp, literature_bound, q1_reference, regime_of, ub1jp, ub2jp, BoundId, Error, Lb2aForm,
    QArgs, Regime, Side,
};
use proptest::prelude::*;

fn args(a: f64, b: f64) -> QArgs {
    QArgs::new(a, b).unwrap()
}

fn exact(a: f64, b: f64) -> f64 {
    q1_reference(args(a, b)).unwrap().value
}

#[test]
fn ids_round_trip() {
    for id in BoundId::ALL {
        assert_eq!(id.name().parse::<BoundId>().unwrap(), id);
        assert_eq!(id.name().to_lowercase().parse::<BoundId>().unwrap(), id);
        assert_eq!(id.to_string(), id.name());
    }
    assert!("UB3JP".parse::<BoundId>().is_err());
    assert_eq!(BoundId::ALL.iter().filter(|id| id.is_jp()).count(), 4);
}

#[test]
fn regimes_are_enforced() {
    assert_eq!(regime_of(args(1.0, 1.0)), Regime::BGeqA);
    assert_eq!(regime_of(args(1.0, 0.5)), Regime::BLtA);
    assert!(matches!(ub1jp(args(2.0, 1.0)), Err(Error::Regime { .. })));
    assert!(matches!(lb2jp(args(1.0, 2.0)), Err(Error::Regime { .. })));
    assert!(matches!(
        literature_bound(BoundId::Ub1Jp, args(1.0, 2.0)),
        Err(Error::Domain(_))
    ));
    // The tie belongs to both families.
    for id in [
        BoundId::Ub1Jp,
        BoundId::Lb1Jp,
        BoundId::Ub2Jp,
        BoundId::Lb2Jp,
    ] {
        assert!(evaluate(id, args(2.0, 2.0)).is_ok(), "{id} at the tie");
    }
}

#[test]
fn singular_points_are_reported() {
    assert!(matches!(
        evaluate(BoundId::Ub1B, args(1.0, 1.0)),
        Err(Error::Singularity { .. })
    ));
    assert!(matches!(
        evaluate(BoundId::Lb2B, args(1.0, 1.0)),
        Err(Error::Singularity { .. })
    ));
    assert!(matches!(
        evaluate(BoundId::Ub2D, args(0.0, 0.0)),
        Err(Error::Singularity { .. })
    ));
    assert!(lb1jp_direct(args(0.0, 1.0)).is_err());
}

#[test]
fn every_skip_carries_a_reason() {
    for outcome in eval_all(args(1.0, 1.0)) {
        if outcome.eval().is_none() {
            assert_eq!(outcome.id(), BoundId::Ub1B);
        }
    }
    let outcomes = eval_all(args(3.0, 1.0));
    assert!(outcomes.iter().all(|o| o.id().regime() == Regime::BLtA));
    assert_eq!(outcomes.len(), 8);
}

#[test]
fn a_zero_collapse() {
    for b in [0.1f64, 1.0, 3.0] {
        let e = (-0.5 * b * b).exp();
        assert!((ub1jp(args(0.0, b)).unwrap().raw - e).abs() < 1e-8);
        assert!((lb1jp(args(0.0, b)).unwrap().raw - e).abs() < 1e-8);
    }
}

#[test]
fn limit_branch_is_continuous_at_switch() {
    for b in [0.5, 2.0, 6.0] {
        for a in [1e-6, 1e-5 / b, 2e-4 / b] {
            let direct = lb1jp_direct(args(a, b)).unwrap();
            let limit = lb1jp_limit_branch(args(a, b));
            assert!(((limit - direct) / direct).abs() < 1e-8, "a = {a}, b = {b}");
        }
    }
}

#[test]
fn zeta_values() {
    assert!(compute_zeta(args(0.0, 1.0)).is_err());
    let z = compute_zeta(args(20.0, 19.5)).unwrap().0;
    // ln I0(390) / 19.5 with I0 from its asymptotic expansion.
    let s: f64 = 390.0;
    let ln_i0 = s - 0.5 * (2.0 * std::f64::consts::PI * s).ln()
        + (1.0 + 1.0 / (8.0 * s) + 9.0 / (128.0 * s * s)).ln();
    assert!((z - ln_i0 / 19.5).abs() < 1e-10);
}

#[test]
fn printed_lb2a_is_not_a_lower_bound() {
    let a = args(20.0, 19.5);
    let corrected = lb2a_with_form(a, Lb2aForm::ZetaCorrected).unwrap();
    let printed = lb2a_with_form(a, Lb2aForm::AsPrinted).unwrap();
    assert_eq!(corrected, evaluate(BoundId::Lb2A, a).unwrap());
    assert!(corrected.raw < exact(20.0, 19.5));
    assert!(printed.raw > exact(20.0, 19.5));
}

#[test]
fn upper_bounds_disagree_at_the_tie() {
    // The two upper bounds meet b = a from opposite sides with a visible gap.
    let below = ub2jp(args(2.0, 2.0)).unwrap().raw;
    let above = ub1jp(args(2.0, 2.0)).unwrap().raw;
    assert!((below - 0.63131).abs() < 1e-5);
    assert!((above - 0.69885).abs() < 1e-5);
}

#[test]
fn log_gaps_match_direct_differences() {
    for a in [0.5, 1.0, 2.0, 3.0] {
        for k in 0..=20 {
            let b = a + 0.2 * k as f64;
            let g = dominance_log_gaps(args(a, b));
            let ub =
                evaluate(BoundId::Ub1A, args(a, b)).unwrap().raw - ub1jp(args(a, b)).unwrap().raw;
            let lb =
                lb1jp(args(a, b)).unwrap().raw - evaluate(BoundId::Lb1A, args(a, b)).unwrap().raw;
            assert!(
                (g.ub1.unwrap().exp() - ub).abs() <= 1e-12 + 1e-9 * ub,
                "UB1 ({a}, {b})"
            );
            assert!(
                (g.lb1.unwrap().exp() - lb).abs() <= 1e-12 + 1e-9 * lb,
                "LB1 ({a}, {b})"
            );
            assert!(g.ub2.is_none() || b == a);
        }
        for k in 1..20 {
            let b = a * k as f64 / 20.0;
            let g = dominance_log_gaps(args(a, b));
            let ub =
                evaluate(BoundId::Ub2A, args(a, b)).unwrap().raw - ub2jp(args(a, b)).unwrap().raw;
            assert!(
                (g.ub2.unwrap().exp() - ub).abs() <= 1e-12 + 1e-9 * ub,
                "UB2 ({a}, {b})"
            );
            assert!(g.ub1.is_none() && g.lb1.is_none());
        }
    }
}

#[test]
fn log_gaps_resolve_ties_in_double_precision() {
    // UB1JP and UB1A round to the same double here, but the gap is positive.
    let g = dominance_log_gaps(args(20.0, 22.0));
    assert!(g.ub1.unwrap().is_finite());
    assert!(g.lb1.unwrap().is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sandwich(a in 0.0f64..30.0, b in 0.0f64..40.0) {
        let q = exact(a, b);
        for outcome in eval_all(args(a, b)) {
            if let Some(e) = outcome.eval() {
                prop_assert!((0.0..=1.0).contains(&e.clamped));
                match e.side {
                    Side::Lower => prop_assert!(e.clamped <= q + 1e-9, "{} at ({}, {})", e.id, a, b),
                    Side::Upper => prop_assert!(e.clamped >= q - 1e-9, "{} at ({}, {})", e.id, a, b),
                }
            }
        }
    }

    #[test]
    fn jp_bounds_never_looser_than_a(a in 0.01f64..30.0, t in 0.0f64..1.0, d in 0.0f64..8.0) {
        let above = args(a, a + d);
        prop_assert!(ub1jp(above).unwrap().raw <= evaluate(BoundId::Ub1A, above).unwrap().raw * (1.0 + 1e-14));
        prop_assert!(lb1jp(above).unwrap().raw >= evaluate(BoundId::Lb1A, above).unwrap().raw * (1.0 - 1e-14));
        let below = args(a, a * t);
        prop_assert!(ub2jp(below).unwrap().raw <= evaluate(BoundId::Ub2A, below).unwrap().raw * (1.0 + 1e-14));
    }

    #[test]
    fn jp_lower_below_jp_upper(a in 0.0f64..50.0, b in 0.0f64..60.0) {
        // Far enough into the tail both bounds are subnormal and carry no digits.
        prop_assume!((b - a).abs() < 36.0);
        let p = args(a, b);
        if b >= a {
            prop_assert!(lb1jp(p).unwrap().raw <= ub1jp(p).unwrap().raw);
        } else {
            prop_assert!(lb2jp(p).unwrap().raw <= ub2jp(p).unwrap().raw);
        }
    }
}
