use std::f64::consts::PI;

use marcum_core::analysis::{
    chain_eq6_gaps, envelope_point, figure_data, g_function, scan_chain_eq6, scan_envelope,
    scan_jp_dominance, scan_sandwich, Criterion, TablePreset, FIGURE_POINTS,
};
use marcum_core::{q1_reference, QArgs};

/// `I0(x)` by the trapezoid rule on `(1/pi) int_0^pi e^{x cos t} dt`.
fn i0_oracle(x: f64) -> f64 {
    let n = 4000;
    let h = PI / n as f64;
    let f = |t: f64| (x * t.cos()).exp();
    ((1..n).map(|k| f(k as f64 * h)).sum::<f64>() + 0.5 * (f(0.0) + f(PI))) / n as f64
}

fn i1_oracle(x: f64) -> f64 {
    let n = 4000;
    let h = PI / n as f64;
    let f = |t: f64| (x * t.cos()).exp() * t.cos();
    ((1..n).map(|k| f(k as f64 * h)).sum::<f64>() + 0.5 * (f(0.0) + f(PI))) / n as f64
}

#[test]
fn g_on_the_unit_interval() {
    let fig = figure_data(1).unwrap();
    assert_eq!(fig.columns, vec!["x", "g"]);
    for row in &fig.rows {
        let x = row[0];
        let direct = x.exp() * (i1_oracle(x) - i0_oracle(x)) + 3.0 * i1_oracle(x);
        assert!((row[1] - direct).abs() < 1e-12);
        assert!(row[1] < 0.0);
    }
    assert!((g_function(1.0) + 0.2098).abs() < 1e-4);
    assert!((g_function(2.0) + 0.3190).abs() < 1e-3);
}

#[test]
fn chain_examples() {
    let r = scan_chain_eq6(1.0, 3.0, &[1.5, 2.0, 5.0, 10.0]).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.worst_violation < 0.0);
    let r = scan_chain_eq6(50.0, 3.0, &[51.0, 100.0]).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.criterion, Criterion::Strict);
}

#[test]
fn chain_gaps_match_plain_evaluation() {
    for (b, m, x) in [(1.0f64, 3.0, 2.0f64), (2.0, 1.5, 4.5), (0.5, 10.0, 3.0)] {
        let a = (x - b).exp();
        let bb = x.cosh() / b.cosh();
        let c = (x.exp() + 1.0) / (b.exp() + 1.0);
        let d = (x.exp() + m) / (b.exp() + m);
        let g = chain_eq6_gaps(b, m, x);
        assert!((g[0] - (a - bb) / a).abs() < 1e-14);
        assert!((g[1] - (bb - c) / a).abs() < 1e-14);
        assert!((g[2] - (c - d) / a).abs() < 1e-14);
    }
}

#[test]
fn chain_middle_link_needs_large_x_for_small_b() {
    // cosh x / cosh b > (e^x + 1)/(e^b + 1) holds only once e^x > coth(b/2).
    let b: f64 = 0.1;
    let threshold = (1.0 / (b / 2.0).tanh()).ln();
    let x = 0.5 * (b + threshold);
    assert!(x.cosh() / b.cosh() < (x.exp() + 1.0) / (b.exp() + 1.0));
    let r = scan_chain_eq6(b, 1.0001, &[x]).unwrap();
    assert!(!r.passed);
    let above: Vec<f64> = (1..=20).map(|k| threshold + 0.5 * k as f64).collect();
    assert!(scan_chain_eq6(b, 1.0001, &above).unwrap().passed);
}

#[test]
fn envelopes_near_the_anchor() {
    let r = scan_envelope(10.0, 8.0, 7.0, 8.0, 500).unwrap();
    assert!(r.passed, "{r:?}");
    let p = envelope_point(10.0, 8.0, 8.0).unwrap();
    assert!(p.sinh_envelope >= p.rice * (1.0 - 1e-12));
    // zeta is chosen so that the exp envelope meets the density at x = b.
    assert!((p.exp_envelope - p.rice).abs() < 1e-12 * p.rice);
    assert!((p.sinh_envelope - p.rice).abs() < 1e-12 * p.rice);
}

#[test]
fn sinh_envelope_exceeds_exp_envelope_near_zero() {
    // As x -> 0 their ratio tends to ab I0(ab) / sinh(ab), above 1 for ab = 12.
    let (a, b) = (4.0, 3.0);
    let p = envelope_point(a, b, 1e-6).unwrap();
    let s: f64 = a * b;
    let limit = s * i0_oracle(s) / s.sinh();
    assert!(limit > 1.0);
    assert!((p.sinh_envelope / p.exp_envelope - limit).abs() < 1e-5);
    let r = scan_envelope(a, b, 0.0, b, 500).unwrap();
    assert!(!r.passed);
    assert!(r.detail.unwrap().contains("ordering fails"));
}

#[test]
fn envelope_rejects_wrong_regime() {
    assert!(envelope_point(3.0, 3.0, 1.0).is_err());
    assert!(scan_envelope(3.0, 4.0, 0.0, 3.0, 10).is_err());
}

#[test]
fn small_grids_pass() {
    let r = scan_sandwich(&[0.0, 0.5, 5.0], 20).unwrap();
    assert!(r.passed, "{r:?}");
    let d = scan_jp_dominance(&[0.5, 5.0], 20).unwrap();
    assert!(d.report.passed, "{d:?}");
    assert_eq!(d.strict, d.comparisons);
}

#[test]
fn loose_lower_bound_is_still_below() {
    let rows = TablePreset::VI.run().unwrap();
    let lb1a = rows[0]
        .cell(marcum_core::BoundId::Lb1A)
        .unwrap()
        .raw
        .unwrap();
    assert!((lb1a - 0.12408).abs() < 1e-5);
    assert!(lb1a < rows[0].exact);
}

#[test]
fn custom_grid_is_monotone() {
    let bs: Vec<f64> = (0..=8).map(|k| 1.0 + 0.5 * k as f64).collect();
    let rows = marcum_core::analysis::error_table(
        1.0,
        &bs,
        &[marcum_core::BoundId::Ub1Jp, marcum_core::BoundId::Ub1A],
    )
    .unwrap();
    assert!(rows.windows(2).all(|w| w[1].exact < w[0].exact));
}

#[test]
fn figure_shapes() {
    for f in 1..=10 {
        let d = figure_data(f).unwrap();
        assert_eq!(d.rows.len(), FIGURE_POINTS, "figure {f}");
        assert!(d.rows.iter().all(|r| r.len() == d.columns.len()));
    }
    assert_eq!(figure_data(2).unwrap().columns.len(), 2);
    assert_eq!(
        figure_data(3).unwrap().columns,
        vec!["x", "rice", "sinh_envelope", "exp_envelope"]
    );
    assert!(figure_data(11).is_err());
}

#[test]
fn figure_data_is_deterministic() {
    for f in [1, 3, 5, 9] {
        let a = figure_data(f).unwrap();
        let b = figure_data(f).unwrap();
        let bits = |d: &marcum_core::analysis::FigureData| -> Vec<u64> {
            d.rows.iter().flatten().map(|v| v.to_bits()).collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }
}

#[test]
fn a_bounds_blow_up_at_small_arguments() {
    let d = figure_data(8).unwrap();
    let col = |name: &str| d.columns.iter().position(|c| c == name).unwrap();
    let first = &d.rows[0];
    assert_eq!(first[0], 0.1);
    assert!(first[col("UB1A")] > 1.0);
    let rel = (first[col("UB1JP")] - first[col("exact")]) / first[col("exact")];
    assert!(rel < 0.03);
}

#[test]
fn jp_curves_hug_the_exact_value() {
    let d = figure_data(4).unwrap();
    let col = |name: &str| d.columns.iter().position(|c| c == name).unwrap();
    let gap = d
        .rows
        .iter()
        .map(|r| (r[col("UB1JP")] - r[col("exact")]).max(r[col("exact")] - r[col("LB1JP")]))
        .fold(0.0f64, f64::max);
    // Largest at b = a = 1, where LB1JP is 0.0885 below.
    assert!(gap < 0.1, "max JP gap {gap}");
    let exact = q1_reference(QArgs::new(1.0, 1.0).unwrap()).unwrap().value;
    assert!((d.rows[0][col("exact")] - exact).abs() < 1e-15);
}
