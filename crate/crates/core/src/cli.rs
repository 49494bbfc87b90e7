//! The `marcumq` command line: `eval`, `table`, `scan` and `figdata`.
//!
//! Exit status is 0 on success or a passing scan, 1 on a failing scan and 2 on
//! usage or domain errors.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::analysis::{
    error_table, figure_data, linear_grid, log_grid, scan_chain_eq6, scan_envelope,
    scan_f_ratio_monotone, scan_g_negative, scan_jp_dominance, scan_sandwich, ErrorRow, RatioKind,
    ScanReport, TablePreset, DOMINANCE_A_VALUES, GRID_A_VALUES, GRID_B_PER_A,
};
use crate::bounds::{eval_all, regime_of, BoundId, BoundOutcome, Regime};
use crate::error::Error;
use crate::oracle::{q1_reference, QArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCAN_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "marcumq",
    version,
    about = "First-order Marcum Q-function bounds and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    #[value(name = "g_negative")]
    GNegative,
    #[value(name = "f_dec_eq2")]
    FDecEq2,
    #[value(name = "f_inc_sinh")]
    FIncSinh,
    #[value(name = "chain_eq6")]
    ChainEq6,
    #[value(name = "envelope")]
    Envelope,
    #[value(name = "sandwich")]
    Sandwich,
    #[value(name = "jp_dominance")]
    JpDominance,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reference value and every bound applicable at (a, b).
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Error table from a preset or a custom grid.
    Table {
        #[arg(long, conflicts_with_all = ["a", "b_start", "b_end", "b_step", "ids"])]
        preset: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        b_start: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        b_end: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        b_step: Option<f64>,
        /// Comma-separated bound ids, e.g. UB1JP,UB1A.
        #[arg(long, value_delimiter = ',')]
        ids: Option<Vec<String>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Grid certification of one property.
    Scan {
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        lo: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        hi: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Curve data for figures 1 to 10.
    Figdata {
        #[arg(long)]
        figure: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// A value in an output record.
#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    /// Fixed-point with the given number of decimals.
    Fixed(f64, usize),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format!("{v:.12e}"),
            Cell::Num(v) => format!("{v}"),
            Cell::Fixed(v, d) => format!("{v:.d$}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) | Cell::Fixed(v, _) => {
                serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number)
            }
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

struct Records {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Records {
    fn render(&self, format: OutputFormat) -> Result<Vec<u8>, Error> {
        match format {
            OutputFormat::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(Vec::new());
                let io_err = |e: csv::Error| Error::Domain(format!("csv output: {e}"));
                w.write_record(&self.header).map_err(io_err)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(io_err)?;
                }
                w.into_inner()
                    .map_err(|e| Error::Domain(format!("csv output: {e}")))
            }
            OutputFormat::Json => {
                let array: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut bytes = serde_json::to_vec_pretty(&array)
                    .map_err(|e| Error::Domain(format!("json output: {e}")))?;
                bytes.push(b'\n');
                Ok(bytes)
            }
        }
    }
}

fn emit(records: &Records, output: &OutputArgs, stdout: &mut dyn Write) -> Result<(), Error> {
    let bytes = records.render(output.format)?;
    match &output.out {
        Some(path) => {
            let unwritable =
                |e: io::Error| Error::Domain(format!("cannot write {}: {e}", path.display()));
            File::create(path)
                .and_then(|mut f| f.write_all(&bytes))
                .map_err(unwritable)?;
            writeln!(stdout, "{}", path.display()).map_err(|e| Error::Domain(e.to_string()))
        }
        None => stdout
            .write_all(&bytes)
            .map_err(|e| Error::Domain(e.to_string())),
    }
}

fn round_to(v: f64, decimals: i32) -> f64 {
    let p = 10f64.powi(decimals);
    (v * p).round() / p
}

fn eval_records(a: f64, b: f64) -> Result<Records, Error> {
    let args = QArgs::new(a, b)?;
    let exact = q1_reference(args)?;
    let regime = match regime_of(args) {
        Regime::BGeqA => "b>=a",
        Regime::BLtA => "b<a",
    };
    let header = [
        "a",
        "b",
        "regime",
        "exact",
        "id",
        "raw",
        "clamped",
        "epsilon_pct",
        "note",
    ];
    let rows = eval_all(args)
        .into_iter()
        .map(|o| {
            let mut row = vec![
                Cell::Num(a),
                Cell::Num(b),
                Cell::Text(regime.into()),
                Cell::Num(exact.value),
                Cell::Text(o.id().name().into()),
            ];
            match o {
                BoundOutcome::Evaluated(e) => row.extend([
                    Cell::Num(e.raw),
                    Cell::Num(e.clamped),
                    if exact.value > 0.0 {
                        Cell::Num(crate::analysis::epsilon_pct(e.raw, exact.value))
                    } else {
                        Cell::Empty
                    },
                    Cell::Empty,
                ]),
                BoundOutcome::Skipped { reason, .. } => {
                    row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Text(reason)])
                }
            }
            row
        })
        .collect();
    Ok(Records {
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

fn table_records(rows: &[ErrorRow], ids: &[BoundId], rounded: bool) -> Records {
    let mut header = vec!["a".to_string(), "b".to_string(), "exact".to_string()];
    if rounded {
        header.push("exact_r5".into());
    }
    for id in ids {
        header.push(id.name().into());
        header.push(format!("{}_clamped", id.name()));
        header.push(format!("{}_epsilon_pct", id.name()));
        if rounded {
            header.push(format!("{}_r5", id.name()));
            header.push(format!("{}_epsilon_pct_r4", id.name()));
        }
        header.push(format!("{}_error", id.name()));
    }
    let rows = rows
        .iter()
        .map(|r| {
            let mut row = vec![Cell::Num(r.a), Cell::Num(r.b), Cell::Num(r.exact)];
            if rounded {
                row.push(Cell::Fixed(round_to(r.exact, 5), 5));
            }
            for &id in ids {
                let c = r.cell(id).expect("row holds every requested id");
                row.push(Cell::opt(c.raw));
                row.push(Cell::opt(c.clamped));
                row.push(Cell::opt(c.epsilon_pct));
                if rounded {
                    row.push(
                        c.raw
                            .map_or(Cell::Empty, |v| Cell::Fixed(round_to(v, 5), 5)),
                    );
                    row.push(
                        c.epsilon_pct
                            .map_or(Cell::Empty, |v| Cell::Fixed(round_to(v, 4), 4)),
                    );
                }
                row.push(c.error.clone().map_or(Cell::Empty, Cell::Text));
            }
            row
        })
        .collect();
    Records { header, rows }
}

struct CustomTable {
    a: Option<f64>,
    b_start: Option<f64>,
    b_end: Option<f64>,
    b_step: Option<f64>,
    ids: Option<Vec<String>>,
}

fn custom_table(spec: CustomTable) -> Result<Records, Error> {
    let missing = |flag: &str| Error::Domain(format!("custom table needs --{flag}"));
    let a = spec.a.ok_or_else(|| missing("a"))?;
    let start = spec.b_start.ok_or_else(|| missing("b-start"))?;
    let end = spec.b_end.ok_or_else(|| missing("b-end"))?;
    let step = spec.b_step.ok_or_else(|| missing("b-step"))?;
    let names = spec.ids.ok_or_else(|| missing("ids"))?;
    let ids = names
        .iter()
        .map(|s| s.parse::<BoundId>())
        .collect::<Result<Vec<_>, _>>()?;
    if ids.is_empty() {
        return Err(missing("ids"));
    }
    let bs = linear_grid(start, end, step)?;
    for &b in &bs {
        let args = QArgs::new(a, b)?;
        for &id in &ids {
            crate::bounds::require(id, args)?;
        }
    }
    let rows = error_table(a, &bs, &ids)?;
    Ok(table_records(&rows, &ids, false))
}

fn report_records(report: &ScanReport) -> Records {
    let witness = report
        .witness
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";");
    let (criterion, margin) = match report.criterion {
        crate::analysis::Criterion::Strict => ("strict", Cell::Empty),
        crate::analysis::Criterion::AtMost(m) => ("at_most", Cell::Num(m)),
    };
    let header = [
        "property",
        "grid",
        "points",
        "worst_violation",
        "criterion",
        "margin",
        "passed",
        "witness",
        "detail",
    ];
    Records {
        header: header.iter().map(|s| s.to_string()).collect(),
        rows: vec![vec![
            Cell::Text(report.property.clone()),
            Cell::Text(report.grid.clone()),
            Cell::Text(report.points.to_string()),
            Cell::Num(report.worst_violation),
            Cell::Text(criterion.into()),
            margin,
            Cell::Bool(report.passed),
            Cell::Text(witness),
            report.detail.clone().map_or(Cell::Empty, Cell::Text),
        ]],
    }
}

struct ScanFlags {
    a: Option<f64>,
    b: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    n: Option<usize>,
    m: Option<f64>,
}

fn run_scan(property: Property, f: ScanFlags) -> Result<ScanReport, Error> {
    let monotone = |kind| {
        scan_f_ratio_monotone(
            kind,
            f.lo.unwrap_or(1e-3),
            f.hi.unwrap_or(700.0),
            f.n.unwrap_or(10_000),
        )
    };
    match property {
        Property::GNegative => scan_g_negative(
            f.lo.unwrap_or(1e-3),
            f.hi.unwrap_or(700.0),
            f.n.unwrap_or(10_000),
        ),
        Property::FDecEq2 => monotone(RatioKind::FDecEq2),
        Property::FIncSinh => monotone(RatioKind::FIncSinh),
        Property::ChainEq6 => {
            let b = f.b.unwrap_or(1.0);
            let m = f.m.unwrap_or(3.0);
            let lo = f.lo.unwrap_or(b + 0.5);
            let hi = f.hi.unwrap_or(b + 10.0);
            if !(lo > b && hi >= lo) {
                return Err(Error::Domain(format!(
                    "chain scan needs b < lo <= hi, got b = {b}, lo = {lo}, hi = {hi}"
                )));
            }
            let xs = if hi == lo {
                vec![lo]
            } else {
                log_grid(lo, hi, f.n.unwrap_or(100).max(2))
            };
            scan_chain_eq6(b, m, &xs)
        }
        Property::Envelope => {
            let a = f.a.unwrap_or(10.0);
            let b = f.b.unwrap_or(8.0);
            scan_envelope(
                a,
                b,
                f.lo.unwrap_or(0.0),
                f.hi.unwrap_or(b),
                f.n.unwrap_or(500),
            )
        }
        Property::Sandwich => {
            let a_values = f.a.map_or(GRID_A_VALUES.to_vec(), |a| vec![a]);
            scan_sandwich(&a_values, f.n.unwrap_or(GRID_B_PER_A))
        }
        Property::JpDominance => {
            let a_values = f.a.map_or(DOMINANCE_A_VALUES.to_vec(), |a| vec![a]);
            scan_jp_dominance(&a_values, f.n.unwrap_or(GRID_B_PER_A)).map(|d| d.report)
        }
    }
}

/// Runs the command line with `argv` (program name first), writing results
/// to `stdout` and diagnostics to `stderr`. Returns the exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Eval { a, b, output } => {
            eval_records(a, b).and_then(|r| emit(&r, &output, stdout).map(|_| EXIT_OK))
        }
        Command::Table {
            preset,
            a,
            b_start,
            b_end,
            b_step,
            ids,
            output,
        } => {
            let records = match preset {
                Some(p) => TablePreset::parse(&p).and_then(|p| {
                    let spec = p.spec();
                    p.run().map(|rows| table_records(&rows, &spec.ids, true))
                }),
                None => custom_table(CustomTable {
                    a,
                    b_start,
                    b_end,
                    b_step,
                    ids,
                }),
            };
            records.and_then(|r| emit(&r, &output, stdout).map(|_| EXIT_OK))
        }
        Command::Scan {
            property,
            a,
            b,
            lo,
            hi,
            n,
            m,
            output,
        } => run_scan(property, ScanFlags { a, b, lo, hi, n, m }).and_then(|report| {
            emit(&report_records(&report), &output, stdout)?;
            Ok(if report.passed {
                EXIT_OK
            } else {
                EXIT_SCAN_FAILED
            })
        }),
        Command::Figdata { figure, output } => figure_data(figure).and_then(|data| {
            let records = Records {
                header: data.columns.clone(),
                rows: data
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|&v| Cell::Num(v)).collect())
                    .collect(),
            };
            emit(&records, &output, stdout).map(|_| EXIT_OK)
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}
