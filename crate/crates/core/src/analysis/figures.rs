use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{evaluate, BoundId};
use crate::error::{Error, Result};
use crate::oracle::{q1_reference, QArgs};

use super::scans::{envelope_curves, f_inc_sinh, g_function, uniform_grid};

/// Points per curve.
pub const FIGURE_POINTS: usize = 200;

/// Curve table for one figure: the first column is the abscissa.
/// Unavailable bound values are `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureData {
    pub figure: u32,
    pub description: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

use BoundId::*;

const B_TO_D_ABOVE: [BoundId; 8] = [Ub1Jp, Ub1B, Ub1C, Ub1D, Lb1Jp, Lb1B, Lb1C, Lb1D];
const B_TO_D_BELOW: [BoundId; 6] = [Ub2Jp, Ub2D, Lb2Jp, Lb2B, Lb2C, Lb2D];
const A_ABOVE: [BoundId; 4] = [Ub1Jp, Ub1A, Lb1Jp, Lb1A];
const A_BELOW: [BoundId; 4] = [Ub2Jp, Ub2A, Lb2Jp, Lb2A];

/// `n` points from `lo` to `hi`, `hi` excluded.
fn half_open(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect()
}

fn bound_figure(
    figure: u32,
    a: f64,
    bs: Vec<f64>,
    ids: &[BoundId],
    what: &str,
) -> Result<FigureData> {
    let rows: Result<Vec<Vec<f64>>> = bs
        .par_iter()
        .map(|&b| {
            let args = QArgs::new(a, b)?;
            let mut row = vec![b, q1_reference(args)?.value];
            row.extend(
                ids.iter()
                    .map(|&id| evaluate(id, args).map_or(f64::NAN, |e| e.raw)),
            );
            Ok(row)
        })
        .collect();
    let mut columns = vec!["b".to_string(), "exact".to_string()];
    columns.extend(ids.iter().map(|id| id.name().to_string()));
    Ok(FigureData {
        figure,
        description: format!("Q1({a}, b) and raw {what} bounds, {} points", bs.len()),
        columns,
        rows: rows?,
    })
}

/// Curve data for figures 1 to 10.
pub fn figure_data(figure: u32) -> Result<FigureData> {
    let n = FIGURE_POINTS;
    match figure {
        1 => Ok(FigureData {
            figure,
            description: format!("g(x) = e^x [I1(x) - I0(x)] + 3 I1(x), {n} points on [1, 2]"),
            columns: vec!["x".into(), "g".into()],
            rows: uniform_grid(1.0, 2.0, n)
                .into_iter()
                .map(|x| vec![x, g_function(x)])
                .collect(),
        }),
        2 => Ok(FigureData {
            figure,
            description: format!("f(x) = x I0(x) / (e^x - e^-x), {n} points on [0, 10]"),
            columns: vec!["x".into(), "f".into()],
            rows: uniform_grid(0.0, 10.0, n)
                .into_iter()
                .map(|x| vec![x, f_inc_sinh(x)])
                .collect(),
        }),
        3 => {
            let pts = envelope_curves(10.0, 8.0, 7.0, 8.0, n)?;
            Ok(FigureData {
                figure,
                description: format!(
                    "Rice density and its two upper envelopes at a = 10, b = 8, {n} points on [7, 8]"
                ),
                columns: vec![
                    "x".into(),
                    "rice".into(),
                    "sinh_envelope".into(),
                    "exp_envelope".into(),
                ],
                rows: pts
                    .into_iter()
                    .map(|p| vec![p.x, p.rice, p.sinh_envelope, p.exp_envelope])
                    .collect(),
            })
        }
        4 => bound_figure(4, 1.0, uniform_grid(1.0, 6.0, n), &B_TO_D_ABOVE, "JP/B/C/D"),
        5 => bound_figure(
            5,
            10.0,
            uniform_grid(10.0, 15.0, n),
            &B_TO_D_ABOVE,
            "JP/B/C/D",
        ),
        6 => bound_figure(6, 1.0, half_open(0.0, 1.0, n), &B_TO_D_BELOW, "JP/B/C/D"),
        7 => bound_figure(7, 10.0, half_open(0.0, 10.0, n), &B_TO_D_BELOW, "JP/B/C/D"),
        8 => bound_figure(8, 0.1, uniform_grid(0.1, 3.0, n), &A_ABOVE, "JP/A"),
        9 => bound_figure(9, 4.0, half_open(0.0, 4.0, n), &A_BELOW, "JP/A"),
        10 => bound_figure(10, 2.0, half_open(0.0, 2.0, n), &A_BELOW, "JP/A"),
        other => Err(Error::UnknownFigure(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_figures() {
        assert!(matches!(figure_data(0), Err(Error::UnknownFigure(0))));
        assert!(matches!(figure_data(11), Err(Error::UnknownFigure(11))));
    }

    #[test]
    fn shapes() {
        let f = figure_data(2).unwrap();
        assert_eq!(f.columns, vec!["x", "f"]);
        assert_eq!(f.rows.len(), FIGURE_POINTS);
        assert_eq!(f.rows[0], vec![0.0, 0.5]);
        assert_eq!(f.rows[FIGURE_POINTS - 1][0], 10.0);
        let f = figure_data(3).unwrap();
        assert_eq!(f.columns.len(), 4);
    }

    #[test]
    fn half_open_excludes_end() {
        let g = half_open(0.0, 1.0, 4);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75]);
    }
}
