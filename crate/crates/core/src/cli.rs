//! Command-line front end: argument grammar, command dispatch and output formatting.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::band::solve_band_endpoint;
use crate::error::{Error, Result};
use crate::highprec::{find_min_poly, refine_endpoint, DEFAULT_PRECISION_BITS};
use crate::mourre::{
    solve_coefficients, validate_sigma_with, SigmaPlan, ValidationGrid, XRange, DEFAULT_E_GRID, DEFAULT_X_GRID,
};
use crate::plot::{emit_plot, render_svg, PlotData};
use crate::rate::{index_range, rate_fit};
use crate::real::Real;
use crate::refdata::{self, check_integrity, load_dataset, DatasetSource, ThresholdRecord};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "THRESHOLD_LAB_THREADS";

/// Significant digits in text output.
pub const TEXT_DIGITS: usize = 12;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    ComputationError = 1,
    ValidationFailure = 2,
    Usage = 64,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "threshold-lab", version, about = "Threshold energies and Mourre-symbol positivity for Chebyshev chain systems")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; defaults to svg for `plot` and text otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Band endpoints E_0 … E_{n_max} with their chains.
    Bands(BandsArgs),
    /// Minimal polynomial of E_n.
    Minpoly(MinpolyArgs),
    /// Solve Mρ = 0 for an index set.
    Interp(SigmaArgs),
    /// Positivity verdict for an index set.
    Validate(ValidateArgs),
    /// Log-log fit of E_{2n} − 2cos(π/κ) against n.
    Rate(RateArgs),
    /// Embedded reference tables.
    Refdata(RefdataArgs),
    /// SVG figures.
    Plot(PlotArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bands(_) => "bands",
            Self::Minpoly(_) => "minpoly",
            Self::Interp(_) => "interp",
            Self::Validate(_) => "validate",
            Self::Rate(_) => "rate",
            Self::Refdata(_) => "refdata",
            Self::Plot(_) => "plot",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BandsArgs {
    #[arg(long)]
    pub kappa: u32,
    #[arg(long)]
    pub n_max: u32,
    /// Bisection tolerance on E.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Working precision in bits; above 53 each energy is also refined and printed in decimal.
    #[arg(long, default_value_t = 53)]
    pub precision: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MinpolyArgs {
    #[arg(long)]
    pub kappa: u32,
    #[arg(long)]
    pub n: u32,
    /// Working precision of the refined endpoint, in bits.
    #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision: usize,
    /// Lattice scaling bits; defaults to half the precision.
    #[arg(long)]
    pub bits: Option<usize>,
    #[arg(long, default_value_t = 12)]
    pub max_degree: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SigmaArgs {
    #[arg(long)]
    pub kappa: u32,
    #[arg(long)]
    pub band: u32,
    /// Comma-separated indices, each a multiple of kappa.
    #[arg(long, value_parser = parse_sigma)]
    pub sigma: Sigma,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sigma: SigmaArgs,
    #[arg(long, default_value_t = DEFAULT_E_GRID)]
    pub e_grid: usize,
    #[arg(long, default_value_t = DEFAULT_X_GRID)]
    pub x_grid: usize,
    /// Samples must exceed this value.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub margin: f64,
    /// Sample only x ∈ [E − 1, E/2].
    #[arg(long)]
    pub half: bool,
    /// Exit with status 2 when the verdict is "invalid".
    #[arg(long)]
    pub expect_valid: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RateArgs {
    #[arg(long)]
    pub kappa: u32,
    /// Sweep `a:b:step` over n; band 2n is solved for each.
    #[arg(long, value_parser = parse_indices)]
    pub indices: IndexSweep,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RefdataArgs {
    /// `all`, `table1`, `table2`, `table4` or `section8`.
    #[arg(long, default_value = "all")]
    pub source: String,
    /// Cross-check the tables against the solvers instead of listing them.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKindArg {
    GCurve,
    RateLoglog,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub kind: PlotKindArg,
    #[arg(long)]
    pub kappa: u32,
    /// Band of the index set (g-curve).
    #[arg(long)]
    pub band: Option<u32>,
    #[arg(long, value_parser = parse_sigma)]
    pub sigma: Option<Sigma>,
    /// `lower`, `upper` or a number (g-curve).
    #[arg(long, value_parser = parse_energy)]
    pub energy: Option<EnergySpec>,
    #[arg(long, default_value_t = 801)]
    pub samples: usize,
    /// Sweep `a:b:step` (rate-loglog).
    #[arg(long, value_parser = parse_indices)]
    pub indices: Option<IndexSweep>,
}

/// A parsed `--sigma` list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Sigma(pub Vec<u32>);

/// A parsed `a:b:step` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexSweep {
    pub start: u32,
    pub end: u32,
    pub step: u32,
}

impl IndexSweep {
    pub fn values(&self) -> Result<Vec<u32>> {
        index_range(self.start, self.end, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergySpec {
    Lower,
    Upper,
    #[serde(untagged)]
    Value(f64),
}

pub fn parse_sigma(s: &str) -> std::result::Result<Sigma, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("bad sigma entry '{t}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("sigma must be nonempty".into());
    }
    Ok(Sigma(v))
}

pub fn parse_indices(s: &str) -> std::result::Result<IndexSweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad index '{t}': {e}"));
    let (start, end, step) = match parts.as_slice() {
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        [a, b] => (num(a)?, num(b)?, 1),
        _ => return Err(format!("expected a:b:step, got '{s}'")),
    };
    index_range(start, end, step).map_err(|e| e.to_string())?;
    Ok(IndexSweep { start, end, step })
}

pub fn parse_energy(s: &str) -> std::result::Result<EnergySpec, String> {
    match s {
        "lower" => Ok(EnergySpec::Lower),
        "upper" => Ok(EnergySpec::Upper),
        _ => f64::from_str(s)
            .ok()
            .filter(|v| v.is_finite())
            .map(EnergySpec::Value)
            .ok_or_else(|| format!("expected lower, upper or a number, got '{s}'")),
    }
}

/// Caps the global rayon pool from [`THREADS_ENV`]. Call once, before any work.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    // A pool that already exists (tests, embedding) is left as is.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// `v` with `digits` significant digits.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), v);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if exp < -5 || exp >= digits as i32 {
        sci
    } else {
        format!("{:.*}", (digits as i32 - 1 - exp).max(0) as usize, v)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self, text: bool) -> String {
        match self {
            Self::Int(v) => v.to_string(),
            Self::Float(v) if text => format_sig(*v, TEXT_DIGITS),
            Self::Float(v) => format!("{v:?}"),
            Self::Text(s) => s.clone(),
            Self::Bool(b) => b.to_string(),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Self::Int(v.into())
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Self::Int(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Self::Int(v as i64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Self::Text(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Self::Text(v.into())
    }
}

#[derive(Debug, Default)]
struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io {
            path: "<csv>".into(),
            message: e.to_string(),
        };
        w.write_record(&self.headers).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| c.render(false))).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| Error::Io {
            path: "<csv>".into(),
            message: e.to_string(),
        })
    }

    fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| c.render(true)).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain(std::iter::once(self.headers[i].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, row: Vec<&str>| {
            let padded: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, self.headers.clone());
        for r in &cells {
            line(&mut out, r.iter().map(String::as_str).collect());
        }
        out
    }
}

/// Everything a command produces, before formatting.
struct Report {
    summary: Vec<(&'static str, Cell)>,
    table: Table,
    results: Value,
    svg: Option<PlotData>,
    /// Replaces the table in CSV mode.
    csv: Option<Vec<u8>>,
    status: ExitStatus,
}

impl Report {
    fn new(table: Table, results: Value) -> Self {
        Self {
            summary: Vec::new(),
            table,
            results,
            svg: None,
            csv: None,
            status: ExitStatus::Success,
        }
    }
}

fn join_floats(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(";")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn bands(a: &BandsArgs) -> Result<Report> {
    if !(a.tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    if a.precision < 53 {
        return Err(Error::InvalidArgument("precision must be >= 53".into()));
    }
    let extended = a.precision > 53;
    let digits = (a.precision as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let mut headers = vec!["kappa", "n", "energy", "symmetry_defect", "points"];
    if extended {
        headers.push("decimal");
    }
    let mut table = Table::new(&headers);
    let mut results = Vec::new();
    for n in 0..=a.n_max {
        let c = solve_band_endpoint(a.kappa, n, a.tol)?;
        let mut row: Vec<Cell> = vec![
            a.kappa.into(),
            n.into(),
            c.energy.into(),
            c.symmetry_defect().into(),
            join_floats(&c.points).into(),
        ];
        let mut obj = json!({
            "kappa": a.kappa,
            "n": n,
            "energy": c.energy,
            "symmetry_defect": c.symmetry_defect(),
            "points": c.points,
        });
        if extended {
            let d = refine_endpoint(a.kappa, n, a.precision)?.to_decimal(digits);
            row.push(d.clone().into());
            obj["decimal"] = Value::String(d);
        }
        table.push(row);
        results.push(obj);
    }
    Ok(Report::new(table, Value::Array(results)))
}

fn minpoly(a: &MinpolyArgs) -> Result<Report> {
    let bits = a.bits.unwrap_or(a.precision / 2);
    if bits == 0 || a.max_degree == 0 {
        return Err(Error::InvalidArgument("bits and max-degree must be positive".into()));
    }
    let value = refine_endpoint(a.kappa, a.n, a.precision)?;
    let mp = find_min_poly(&value, a.max_degree, bits)?;
    let decimal = value.to_decimal(40);
    let mut table = Table::new(&["power", "coefficient"]);
    for (i, c) in mp.coefficients.iter().enumerate() {
        table.push(vec![i.into(), (*c).into()]);
    }
    let roots: Vec<String> = mp.rational_roots.iter().map(|(p, q)| format!("{p}/{q}")).collect();
    let mut report = Report::new(
        table,
        json!({
            "kappa": a.kappa,
            "n": a.n,
            "energy": value.to_f64(),
            "energy_decimal": decimal,
            "polynomial": to_value(&mp),
        }),
    );
    report.summary = vec![
        ("kappa", a.kappa.into()),
        ("n", a.n.into()),
        ("energy", decimal.into()),
        ("degree", mp.degree.into()),
        (
            "residual_log2",
            mp.residual_log2.map_or_else(|| Cell::from("exact zero"), Cell::from),
        ),
        ("rational_roots", roots.join(" ").into()),
    ];
    Ok(report)
}

fn plan_of(a: &SigmaArgs) -> Result<SigmaPlan> {
    SigmaPlan::new(a.kappa, a.band, a.sigma.0.clone())
}

fn interp(a: &SigmaArgs) -> Result<Report> {
    let s = solve_coefficients(&plan_of(a)?)?;
    let mut table = Table::new(&["index", "rho"]);
    for (i, r) in s.indices.iter().zip(&s.rho) {
        table.push(vec![(*i).into(), (*r).into()]);
    }
    let mut report = Report::new(table, to_value(&s));
    report.summary = vec![
        ("kappa", s.kappa.into()),
        ("band", s.band.into()),
        ("lower_energy", s.lower_energy.into()),
        ("upper_energy", s.upper_energy.into()),
        ("nullity", s.nullity.into()),
        ("trivial_rows", s.trivial_rows.into()),
        (
            "smallest_singular_values",
            s.singular_values
                .iter()
                .rev()
                .take(2)
                .map(|v| format_sig(*v, 4))
                .collect::<Vec<_>>()
                .join(" ")
                .into(),
        ),
    ];
    Ok(report)
}

fn validate(a: &ValidateArgs) -> Result<Report> {
    let grid = ValidationGrid {
        e_grid: a.e_grid,
        x_grid: a.x_grid,
        margin: a.margin,
        x_range: if a.half { XRange::LowerHalf } else { XRange::Full },
    };
    let v = validate_sigma_with(&plan_of(&a.sigma)?, &grid)?;
    let mut table = Table::new(&["kappa", "band", "valid", "min_value", "witness_energy", "witness_x"]);
    table.push(vec![
        v.solution.kappa.into(),
        v.solution.band.into(),
        v.valid.into(),
        v.min_value.into(),
        v.witness.energy.into(),
        v.witness.x.into(),
    ]);
    let mut report = Report::new(table, to_value(&v));
    report.summary = vec![
        ("verdict", if v.valid { "valid" } else { "invalid" }.into()),
        ("rho", join_floats(&v.solution.rho).into()),
    ];
    if a.expect_valid && !v.valid {
        report.status = ExitStatus::ValidationFailure;
    }
    Ok(report)
}

fn rate(a: &RateArgs) -> Result<Report> {
    let fit = rate_fit(a.kappa, &a.indices.values()?)?;
    let mut table = Table::new(&["n", "band", "energy", "gap", "extended"]);
    for p in &fit.points {
        table.push(vec![p.n.into(), (2 * p.n).into(), p.energy.into(), p.gap.into(), p.extended.into()]);
    }
    let mut report = Report::new(table, to_value(&fit));
    report.summary = vec![
        ("kappa", fit.kappa.into()),
        ("slope", fit.slope.into()),
        ("intercept", fit.intercept.into()),
        ("residual_norm", fit.residual_norm.into()),
    ];
    report.svg = Some(PlotData::rate(&fit));
    Ok(report)
}

fn refdata_cmd(a: &RefdataArgs) -> Result<Report> {
    let sources: Vec<DatasetSource> = if a.source == "all" {
        DatasetSource::ALL.to_vec()
    } else {
        vec![a.source.parse()?]
    };
    if a.check {
        let report = check_integrity();
        let mut table = Table::new(&[
            "source",
            "kappa",
            "label",
            "kind",
            "expected",
            "actual",
            "tolerance",
            "passed",
            "truncation_consistent",
        ]);
        let checks: Vec<_> = report.checks.iter().filter(|c| sources.contains(&c.source)).collect();
        for c in &checks {
            table.push(vec![
                c.source.as_str().into(),
                c.kappa.into(),
                c.label.clone().into(),
                to_value(&c.kind).as_str().unwrap_or_default().into(),
                c.expected.into(),
                c.actual.into(),
                c.tolerance.into(),
                c.passed.into(),
                c.truncation_consistent.map_or_else(|| "".into(), |b| b.to_string()).into(),
            ]);
        }
        let failures = checks.iter().filter(|c| !c.passed).count();
        let mut out = Report::new(table, to_value(&checks));
        out.summary = vec![("checks", checks.len().into()), ("failures", failures.into())];
        if failures > 0 {
            out.status = ExitStatus::ValidationFailure;
        }
        return Ok(out);
    }
    let records: Vec<ThresholdRecord> = sources.into_iter().flat_map(load_dataset).collect();
    let mut table = Table::new(&["source", "kappa", "label", "value", "closed_form"]);
    for r in &records {
        table.push(vec![
            r.source.as_str().into(),
            r.kappa.into(),
            r.label.clone().into(),
            r.value.map_or_else(|| Cell::from(""), Cell::from),
            r.closed_form.clone().unwrap_or_default().into(),
        ]);
    }
    // Canonical layout, readable by `refdata::read_csv`.
    let mut csv = Vec::new();
    refdata::write_csv(&records, &mut csv)?;
    let mut report = Report::new(table, to_value(&records));
    report.csv = Some(csv);
    Ok(report)
}

fn plot(a: &PlotArgs) -> Result<Report> {
    let data = match a.kind {
        PlotKindArg::GCurve => {
            let (Some(band), Some(sigma), Some(energy)) = (a.band, &a.sigma, a.energy) else {
                return Err(Error::InvalidArgument("g-curve needs --band, --sigma and --energy".into()));
            };
            if a.samples < 2 {
                return Err(Error::InvalidArgument("samples must be >= 2".into()));
            }
            let s = solve_coefficients(&SigmaPlan::new(a.kappa, band, sigma.0.clone())?)?;
            let (e, markers) = match energy {
                EnergySpec::Lower => (s.lower_energy, solve_band_endpoint(a.kappa, band, 1e-12)?.points),
                EnergySpec::Upper => (s.upper_energy, solve_band_endpoint(a.kappa, band - 1, 1e-12)?.points),
                EnergySpec::Value(v) => (v, Vec::new()),
            };
            PlotData::g_curve(&s, e, a.samples, markers)
        }
        PlotKindArg::RateLoglog => {
            let Some(sweep) = a.indices else {
                return Err(Error::InvalidArgument("rate-loglog needs --indices".into()));
            };
            PlotData::rate(&rate_fit(a.kappa, &sweep.values()?)?)
        }
    };
    let mut table = Table::new(&["x", "y"]);
    match &data {
        PlotData::GCurve { samples: pts, .. } | PlotData::RateLogLog { points: pts, .. } => {
            for (x, y) in pts {
                table.push(vec![(*x).into(), (*y).into()]);
            }
        }
    }
    let mut report = Report::new(table, to_value(&data));
    report.svg = Some(data);
    Ok(report)
}

fn check_format(command: &Command, format: Format) -> std::result::Result<(), String> {
    let name = command.name();
    match (command, format) {
        (Command::Plot(_), Format::Text) => Err("plot supports svg, csv and json".into()),
        (Command::Plot(_) | Command::Rate(_), _) => Ok(()),
        (_, Format::Svg) => Err(format!("format svg is only available for plot and rate, not {name}")),
        _ => Ok(()),
    }
}

fn render(config: &RunConfig, format: Format, report: &Report) -> Result<Vec<u8>> {
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            for (k, v) in &report.summary {
                let _ = writeln!(s, "{k}: {}", v.render(true));
            }
            if !report.summary.is_empty() {
                s.push('\n');
            }
            s.push_str(&report.table.to_text());
            s.into_bytes()
        }
        Format::Csv => match &report.csv {
            Some(bytes) => bytes.clone(),
            None => report.table.to_csv()?,
        },
        Format::Json => {
            let doc = json!({
                "command": config.command.name(),
                "config": config_value(config, format),
                "results": report.results,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s.into_bytes()
        }
        Format::Svg => {
            let data = report
                .svg
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("no figure for this command".into()))?;
            render_svg(data)?.into_bytes()
        }
    })
}

fn config_value(config: &RunConfig, format: Format) -> Value {
    let mut v = to_value(&config.command);
    if let Value::Object(m) = &mut v {
        m.insert("format".into(), to_value(&format));
        if let Some(p) = &config.output {
            m.insert("output".into(), Value::String(p.display().to_string()));
        }
    }
    v
}

fn status_of(err: &Error) -> ExitStatus {
    match err {
        Error::InvalidArgument(_) | Error::UnknownSource(_) => ExitStatus::Usage,
        _ => ExitStatus::ComputationError,
    }
}

/// Runs one command, writing data to `out` (or the configured file) and diagnostics to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus {
    let format = config.format.unwrap_or(match config.command {
        Command::Plot(_) => Format::Svg,
        _ => Format::Text,
    });
    if let Err(msg) = check_format(&config.command, format) {
        let _ = writeln!(err, "error: {msg}");
        return ExitStatus::Usage;
    }
    let report = match &config.command {
        Command::Bands(a) => bands(a),
        Command::Minpoly(a) => minpoly(a),
        Command::Interp(a) => interp(a),
        Command::Validate(a) => validate(a),
        Command::Rate(a) => rate(a),
        Command::Refdata(a) => refdata_cmd(a),
        Command::Plot(a) => plot(a),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return status_of(&e);
        }
    };
    let written = match (&config.output, format, &report.svg) {
        (Some(path), Format::Svg, Some(data)) => emit_plot(data, path),
        (Some(path), _, _) => render(config, format, &report).and_then(|bytes| {
            std::fs::write(path, bytes).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        }),
        (None, _, _) => render(config, format, &report).and_then(|bytes| {
            out.write_all(&bytes).map_err(|e| Error::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            })
        }),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return ExitStatus::ComputationError;
    }
    if report.status == ExitStatus::ValidationFailure {
        let _ = writeln!(err, "{}: validation failed", config.command.name());
    }
    report.status
}

/// Parses `args` (including the program name) and runs them.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config, out, err),
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            ExitStatus::Usage
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            ExitStatus::Success
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (ExitStatus, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["threshold-lab"];
        full.extend_from_slice(args);
        let status = main_with_args(full, &mut out, &mut err);
        (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(8.0 / 5.0, 12), "1.60000000000");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(-2.5e-9, 3), "-2.50e-9");
        assert_eq!(format_sig(9.9999999999999, 3), "10.0");
    }

    #[test]
    fn flag_grammar() {
        assert_eq!(parse_sigma("4, 8,12").unwrap().0, vec![4, 8, 12]);
        assert!(parse_sigma("4,x").is_err());
        assert_eq!(
            parse_indices("400:4800:400").unwrap(),
            IndexSweep {
                start: 400,
                end: 4800,
                step: 400
            }
        );
        assert!(parse_indices("10:5:1").is_err());
        assert!(parse_indices("1:2:3:4").is_err());
        assert_eq!(parse_energy("lower").unwrap(), EnergySpec::Lower);
        assert_eq!(parse_energy("1.65").unwrap(), EnergySpec::Value(1.65));
        assert!(parse_energy("nan").is_err());
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_args(&["bands"]).0, ExitStatus::Usage);
        assert_eq!(run_args(&["frobnicate"]).0, ExitStatus::Usage);
        let (s, _, e) = run_args(&["bands", "--kappa", "4", "--n-max", "2", "--format", "svg"]);
        assert_eq!(s, ExitStatus::Usage);
        assert!(e.contains("svg"));
        let (s, _, e) = run_args(&["interp", "--kappa", "4", "--band", "1", "--sigma", "4,6"]);
        assert_eq!(s, ExitStatus::Usage);
        assert!(e.contains("multiple"));
        assert_eq!(run_args(&["refdata", "--source", "table9"]).0, ExitStatus::Usage);
        assert_eq!(run_args(&["--help"]).0, ExitStatus::Success);
    }

    #[test]
    fn computation_error_exits_1() {
        let (s, _, e) = run_args(&["interp", "--kappa", "4", "--band", "1", "--sigma", "4,8,12,16,20,24,28,32,36"]);
        assert_eq!(s, ExitStatus::ComputationError);
        assert!(e.contains("nullspace"));
    }

    #[test]
    fn bands_csv_shape() {
        let (s, out, _) = run_args(&["bands", "--kappa", "2", "--n-max", "3", "--format", "csv"]);
        assert_eq!(s, ExitStatus::Success);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "kappa,n,energy,symmetry_defect,points");
        let e: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
        assert!((e - 2.0 / 3.0).abs() < 1e-12);
        assert!(!out.contains('\r'));
    }

    #[test]
    fn validate_expectation() {
        let base = ["validate", "--kappa", "4", "--band", "2", "--e-grid", "21", "--x-grid", "401"];
        let mut bad = base.to_vec();
        bad.extend(["--sigma", "4,8,12,16", "--expect-valid"]);
        assert_eq!(run_args(&bad).0, ExitStatus::ValidationFailure);
        let mut good = base.to_vec();
        good.extend(["--sigma", "4,8,12,24", "--expect-valid"]);
        let (s, out, _) = run_args(&good);
        assert_eq!(s, ExitStatus::Success);
        assert!(out.starts_with("verdict: valid"));
    }

    #[test]
    fn json_envelope() {
        let (s, out, _) = run_args(&["interp", "--kappa", "2", "--band", "1", "--sigma", "2,4", "--format", "json"]);
        assert_eq!(s, ExitStatus::Success);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], "interp");
        assert_eq!(v["config"]["sigma"], json!([2, 4]));
        assert_eq!(v["config"]["format"], "json");
        let rho = v["results"]["rho"].as_array().unwrap();
        assert!((rho[1].as_f64().unwrap() - 9.0 / 14.0).abs() < 1e-12);
    }
}
