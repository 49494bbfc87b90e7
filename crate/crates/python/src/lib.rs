//! Python bindings for `marcum-core`.

use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use marcum_core::analysis::{self, ScanReport as CoreScanReport, TablePreset};
use marcum_core::{BoundId, Error, QArgs};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Overflow { .. } => PyOverflowError::new_err(err.to_string()),
        Error::NonConvergence { .. } | Error::CrossValidation { .. } => {
            PyRuntimeError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn qargs(a: f64, b: f64) -> PyResult<QArgs> {
    QArgs::new(a, b).map_err(to_py)
}

fn bound_id(name: &str) -> PyResult<BoundId> {
    name.parse::<BoundId>().map_err(to_py)
}

#[pyclass(frozen, get_all, module = "marcumq")]
struct BoundEval {
    id: String,
    raw: f64,
    clamped: f64,
    side: String,
}

impl From<marcum_core::BoundEval> for BoundEval {
    fn from(e: marcum_core::BoundEval) -> Self {
        Self {
            id: e.id.name().to_string(),
            raw: e.raw,
            clamped: e.clamped,
            side: match e.side {
                marcum_core::Side::Upper => "upper",
                marcum_core::Side::Lower => "lower",
            }
            .to_string(),
        }
    }
}

#[pymethods]
impl BoundEval {
    fn __repr__(&self) -> String {
        format!(
            "BoundEval(id='{}', raw={}, clamped={}, side='{}')",
            self.id, self.raw, self.clamped, self.side
        )
    }
}

#[pyclass(frozen, get_all, module = "marcumq")]
struct OracleResult {
    value: f64,
    method_a_value: f64,
    method_b_value: f64,
    agreement_gap: f64,
}

#[pymethods]
impl OracleResult {
    fn __repr__(&self) -> String {
        format!(
            "OracleResult(value={}, agreement_gap={:e})",
            self.value, self.agreement_gap
        )
    }
}

#[pyclass(frozen, get_all, module = "marcumq")]
struct ScanReport {
    property: String,
    grid: String,
    points: usize,
    worst_violation: f64,
    witness: Vec<(String, f64)>,
    passed: bool,
    detail: Option<String>,
}

impl From<CoreScanReport> for ScanReport {
    fn from(r: CoreScanReport) -> Self {
        Self {
            property: r.property,
            grid: r.grid,
            points: r.points,
            worst_violation: r.worst_violation,
            witness: r.witness,
            passed: r.passed,
            detail: r.detail,
        }
    }
}

#[pymethods]
impl ScanReport {
    fn __repr__(&self) -> String {
        format!(
            "ScanReport(property='{}', passed={}, worst_violation={:e})",
            self.property,
            if self.passed { "True" } else { "False" },
            self.worst_violation
        )
    }
}

/// One row of an error table: `cells` holds `(id, raw, epsilon_pct)` with
/// `None` where the bound is unavailable.
#[pyclass(frozen, get_all, module = "marcumq")]
struct TableRow {
    a: f64,
    b: f64,
    exact: f64,
    cells: Vec<(String, Option<f64>, Option<f64>)>,
}

fn table_rows(rows: Vec<analysis::ErrorRow>) -> Vec<TableRow> {
    rows.into_iter()
        .map(|r| TableRow {
            a: r.a,
            b: r.b,
            exact: r.exact,
            cells: r
                .cells
                .into_iter()
                .map(|c| (c.id.name().to_string(), c.raw, c.epsilon_pct))
                .collect(),
        })
        .collect()
}

/// Q1(a, b) from the cross-checked reference evaluator.
#[pyfunction]
fn q1(a: f64, b: f64) -> PyResult<f64> {
    Ok(marcum_core::q1_reference(qargs(a, b)?)
        .map_err(to_py)?
        .value)
}

#[pyfunction]
fn q1_reference(a: f64, b: f64) -> PyResult<OracleResult> {
    let r = marcum_core::q1_reference(qargs(a, b)?).map_err(to_py)?;
    Ok(OracleResult {
        value: r.value,
        method_a_value: r.method_a_value,
        method_b_value: r.method_b_value,
        agreement_gap: r.agreement_gap,
    })
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = 1e-12))]
fn q1_quadrature(a: f64, b: f64, tol: f64) -> PyResult<f64> {
    marcum_core::q1_quadrature(qargs(a, b)?, tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = 1e-12))]
fn q1_series(a: f64, b: f64, tol: f64) -> PyResult<f64> {
    marcum_core::q1_series(qargs(a, b)?, tol).map_err(to_py)
}

/// Evaluates one bound by name, e.g. `evaluate("UB1JP", 0.1, 0.5)`.
#[pyfunction]
fn evaluate(id: &str, a: f64, b: f64) -> PyResult<BoundEval> {
    marcum_core::evaluate(bound_id(id)?, qargs(a, b)?)
        .map(BoundEval::from)
        .map_err(to_py)
}

/// Every bound of the regime of `(a, b)` that can be evaluated there.
#[pyfunction]
fn eval_all(a: f64, b: f64) -> PyResult<Vec<BoundEval>> {
    Ok(marcum_core::eval_all(qargs(a, b)?)
        .into_iter()
        .filter_map(|o| o.eval().copied().map(BoundEval::from))
        .collect())
}

#[pyfunction]
fn bound_ids() -> Vec<&'static str> {
    BoundId::ALL.iter().map(|id| id.name()).collect()
}

#[pyfunction]
fn rice_pdf(x: f64, a: f64) -> PyResult<f64> {
    marcum_core::rice_pdf(x, a).map_err(to_py)
}

#[pyfunction]
fn bessel_i0(x: f64) -> PyResult<f64> {
    marcum_core::specfun::bessel_i0(x).map_err(to_py)
}

#[pyfunction]
fn bessel_i0_scaled(x: f64) -> PyResult<f64> {
    marcum_core::specfun::bessel_i0_scaled(x).map_err(to_py)
}

#[pyfunction]
fn bessel_i1(x: f64) -> PyResult<f64> {
    marcum_core::specfun::bessel_i1(x).map_err(to_py)
}

#[pyfunction]
fn bessel_i1_scaled(x: f64) -> PyResult<f64> {
    marcum_core::specfun::bessel_i1_scaled(x).map_err(to_py)
}

#[pyfunction]
fn erfc(x: f64) -> f64 {
    marcum_core::specfun::erfc(x)
}

#[pyfunction]
fn erfcx(x: f64) -> PyResult<f64> {
    marcum_core::specfun::erfcx(x).map_err(to_py)
}

#[pyfunction]
fn erfc_diff(x: f64, y: f64) -> f64 {
    marcum_core::specfun::erfc_diff(x, y)
}

/// Error table for a preset name ("V" to "VIII").
#[pyfunction]
fn table(preset: &str) -> PyResult<Vec<TableRow>> {
    let p = TablePreset::parse(preset).map_err(to_py)?;
    p.run().map(table_rows).map_err(to_py)
}

#[pyfunction]
fn error_table(a: f64, b_values: Vec<f64>, ids: Vec<String>) -> PyResult<Vec<TableRow>> {
    let ids = ids
        .iter()
        .map(|s| bound_id(s))
        .collect::<PyResult<Vec<_>>>()?;
    analysis::error_table(a, &b_values, &ids)
        .map(table_rows)
        .map_err(to_py)
}

/// Curve data for a figure as `(columns, rows)`.
#[pyfunction]
fn figure_data(figure: u32) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let d = analysis::figure_data(figure).map_err(to_py)?;
    Ok((d.columns, d.rows))
}

#[pyfunction]
#[pyo3(signature = (a_values = None, b_per_a = 50))]
fn scan_sandwich(a_values: Option<Vec<f64>>, b_per_a: usize) -> PyResult<ScanReport> {
    let a_values = a_values.unwrap_or_else(|| analysis::GRID_A_VALUES.to_vec());
    analysis::scan_sandwich(&a_values, b_per_a)
        .map(ScanReport::from)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a_values = None, b_per_a = 50))]
fn scan_jp_dominance(a_values: Option<Vec<f64>>, b_per_a: usize) -> PyResult<ScanReport> {
    let a_values = a_values.unwrap_or_else(|| analysis::DOMINANCE_A_VALUES.to_vec());
    analysis::scan_jp_dominance(&a_values, b_per_a)
        .map(|d| ScanReport::from(d.report))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, b, lo, hi, n = 500))]
fn scan_envelope(a: f64, b: f64, lo: f64, hi: f64, n: usize) -> PyResult<ScanReport> {
    analysis::scan_envelope(a, b, lo, hi, n)
        .map(ScanReport::from)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (lo = 1e-3, hi = 700.0, n = 10_000))]
fn scan_g_negative(lo: f64, hi: f64, n: usize) -> PyResult<ScanReport> {
    analysis::scan_g_negative(lo, hi, n)
        .map(ScanReport::from)
        .map_err(to_py)
}

#[pymodule]
fn marcumq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<BoundEval>()?;
    m.add_class::<OracleResult>()?;
    m.add_class::<ScanReport>()?;
    m.add_class::<TableRow>()?;
    m.add_function(wrap_pyfunction!(q1, m)?)?;
    m.add_function(wrap_pyfunction!(q1_reference, m)?)?;
    m.add_function(wrap_pyfunction!(q1_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(q1_series, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(eval_all, m)?)?;
    m.add_function(wrap_pyfunction!(bound_ids, m)?)?;
    m.add_function(wrap_pyfunction!(rice_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_i0, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_i0_scaled, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_i1, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_i1_scaled, m)?)?;
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    m.add_function(wrap_pyfunction!(erfcx, m)?)?;
    m.add_function(wrap_pyfunction!(erfc_diff, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(error_table, m)?)?;
    m.add_function(wrap_pyfunction!(figure_data, m)?)?;
    m.add_function(wrap_pyfunction!(scan_sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(scan_jp_dominance, m)?)?;
    m.add_function(wrap_pyfunction!(scan_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(scan_g_negative, m)?)?;
    Ok(())
}
