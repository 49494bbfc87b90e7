use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{evaluate, BoundId};
use crate::error::{Error, Result};
use crate::oracle::{q1_reference, QArgs};

/// One bound's entry in an [`ErrorRow`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCell {
    pub id: BoundId,
    pub raw: Option<f64>,
    pub clamped: Option<f64>,
    /// `100 |raw - exact| / exact`. The raw value is used so that upper
    /// bounds above 1 keep their actual distance from the exact value.
    pub epsilon_pct: Option<f64>,
    /// Why the bound is unavailable at this `b`, if it is.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub a: f64,
    pub b: f64,
    pub exact: f64,
    pub cells: Vec<ErrorCell>,
}

impl ErrorRow {
    pub fn cell(&self, id: BoundId) -> Option<&ErrorCell> {
        self.cells.iter().find(|c| c.id == id)
    }
}

/// Relative deviation in percent.
pub fn epsilon_pct(bound: f64, exact: f64) -> f64 {
    100.0 * (bound - exact).abs() / exact
}

fn row(a: f64, b: f64, ids: &[BoundId]) -> Result<ErrorRow> {
    let args = QArgs::new(a, b)?;
    let exact = q1_reference(args)?.value;
    if exact <= 0.0 {
        return Err(Error::Domain(format!(
            "exact Q1({a}, {b}) underflows to zero; relative errors are undefined"
        )));
    }
    let cells = ids
        .iter()
        .map(|&id| match evaluate(id, args) {
            Ok(e) => ErrorCell {
                id,
                raw: Some(e.raw),
                clamped: Some(e.clamped),
                epsilon_pct: Some(epsilon_pct(e.raw, exact)),
                error: None,
            },
            Err(err) => ErrorCell {
                id,
                raw: None,
                clamped: None,
                epsilon_pct: None,
                error: Some(err.to_string()),
            },
        })
        .collect();
    Ok(ErrorRow { a, b, exact, cells })
}

/// Comparison table of the given bounds against the reference value, one row
/// per `b`, sorted by `b`. Per-bound failures are recorded in the cell; oracle
/// failures abort.
pub fn error_table(a: f64, b_values: &[f64], ids: &[BoundId]) -> Result<Vec<ErrorRow>> {
    let mut bs = b_values.to_vec();
    bs.sort_by(f64::total_cmp);
    bs.par_iter().map(|&b| row(a, b, ids)).collect()
}

/// `start, start + step, ..., <= end`, with each point rounded to 12 decimals
/// so that decimal grids like 0.1, 0.2, ... come out as the literals.
pub fn linear_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && end.is_finite() && step.is_finite()) || step <= 0.0 || end < start {
        return Err(Error::Domain(format!(
            "invalid grid start = {start}, end = {end}, step = {step}"
        )));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|i| ((start + step * i as f64) * 1e12).round() / 1e12)
        .collect())
}

/// The four published comparison tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TablePreset {
    V,
    VI,
    VII,
    VIII,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec {
    pub a: f64,
    pub b_values: Vec<f64>,
    pub ids: Vec<BoundId>,
}

impl TablePreset {
    pub const ALL: [TablePreset; 4] = [
        TablePreset::V,
        TablePreset::VI,
        TablePreset::VII,
        TablePreset::VIII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TablePreset::V => "V",
            TablePreset::VI => "VI",
            TablePreset::VII => "VII",
            TablePreset::VIII => "VIII",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        TablePreset::ALL
            .into_iter()
            .find(|p| p.name() == up)
            .ok_or_else(|| Error::Domain(format!("unknown table preset {s:?}")))
    }

    pub fn spec(self) -> TableSpec {
        let (a, start, end, ids) = match self {
            TablePreset::V => (0.1, 0.1, 1.0, vec![BoundId::Ub1Jp, BoundId::Ub1A]),
            TablePreset::VI => (0.1, 0.1, 1.0, vec![BoundId::Lb1Jp, BoundId::Lb1A]),
            TablePreset::VII => (2.0, 1.0, 2.0, vec![BoundId::Ub2Jp, BoundId::Ub2A]),
            TablePreset::VIII => (20.0, 19.1, 20.0, vec![BoundId::Lb2Jp, BoundId::Lb2A]),
        };
        TableSpec {
            a,
            b_values: linear_grid(start, end, 0.1).expect("preset grids are valid"),
            ids,
        }
    }

    pub fn run(self) -> Result<Vec<ErrorRow>> {
        let spec = self.spec();
        error_table(spec.a, &spec.b_values, &spec.ids)
    }
}
