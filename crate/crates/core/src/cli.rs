//! Command-line front end. JSON in, JSON or CSV out.
//!
//! Exit codes: 0 success, 1 a verification ran but missed its tolerance,
//! 2 bad arguments or input schema, 3 mathematical failure, 4 I/O.
//! Errors are written to stderr as `{"error": {...}}`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::area::{self, log_grid};
use crate::classify::{self, ClassifyOutput, NormalForm};
use crate::devmap::{density_of, flatness_residual, AnnulusGrid, DevelopingMap, MetricDensity};
use crate::error::Error;
use crate::sampling::Sampler;
use crate::series::LaurentSeries;
use crate::symmetry::{self, Family, SymmetryElement};

/// Residual threshold used by `flatness` when `--tol` is not given.
pub const FLATNESS_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "flatsing", version, about = "Flat metrics near an isolated singularity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Truncation order of every series.
    #[arg(long, global = true, default_value_t = 32)]
    pub order: i32,
    /// Pass/fail threshold for residuals (flatness defaults to 1e-6).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed of the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Selects h(0) among the n admissible values in the log-pole case.
    #[arg(long, global = true, default_value_t = 0, allow_negative_numbers = true)]
    pub root_index: i64,
    /// Smallest r of the area scan; annuli are 1/r < |z| < R.
    #[arg(long, global = true, default_value_t = area::DEFAULT_R_MIN)]
    pub r_min: f64,
    /// Largest r of the area scan.
    #[arg(long, global = true, default_value_t = area::DEFAULT_R_MAX)]
    pub r_max: f64,
    /// Number of log-spaced values of r.
    #[arg(long, global = true, default_value_t = area::DEFAULT_R_COUNT)]
    pub r_count: usize,
    /// Outer radius R of the scanned annuli.
    #[arg(long, global = true, default_value_t = area::DEFAULT_OUTER_RADIUS)]
    pub outer_radius: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form, invariants and normalizing change of a developing map.
    Classify { input: PathBuf },
    /// Normal form with the change, its inverse and the model map and density.
    Normalize { input: PathBuf },
    /// Area growth scan: CSV of samples plus a JSON summary.
    AreaScan { input: PathBuf },
    /// Composes two symmetry elements and checks the group law on series.
    SymmetryCompose { input: PathBuf },
    /// Checks that symmetry elements preserve their normal form.
    SymmetryVerify { input: PathBuf },
    /// Largest curvature residual on the standard annulus grid.
    Flatness { input: PathBuf },
    /// Classifies and checks the coordinate change against the input.
    Roundtrip { input: PathBuf },
}

impl Command {
    fn input(&self) -> &Path {
        match self {
            Command::Classify { input }
            | Command::Normalize { input }
            | Command::AreaScan { input }
            | Command::SymmetryCompose { input }
            | Command::SymmetryVerify { input }
            | Command::Flatness { input }
            | Command::Roundtrip { input } => input,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Schema { path: String, message: String },
    Math(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema { .. } => 2,
            CliError::Math(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            CliError::Usage(m) => serde_json::json!({"kind": "usage", "message": m}),
            CliError::Schema { path, message } => {
                serde_json::json!({"kind": "schema", "path": path, "message": message})
            }
            CliError::Math(e) => serde_json::json!({"kind": "math", "message": e.to_string()}),
            CliError::Io(m) => serde_json::json!({"kind": "io", "message": m}),
        };
        serde_json::json!({ "error": body })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

/// A file to write (or print when `path` is `None`).
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub content: String,
}

/// Result of a command: what to emit and whether its checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub passed: bool,
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.render().to_string();
            return report(&CliError::Usage(msg.trim_end().to_string()));
        }
    };
    match execute(&cli).and_then(|outcome| emit(&outcome).map(|_| outcome)) {
        Ok(outcome) => {
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> i32 {
    let text = serde_json::to_string(&e.to_json()).expect("error objects serialize");
    let _ = writeln!(std::io::stderr(), "{text}");
    e.exit_code()
}

fn emit(outcome: &Outcome) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    for a in &outcome.artifacts {
        match &a.path {
            Some(p) => write_atomic(p, &a.content)?,
            None => stdout
                .write_all(a.content.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
        }
    }
    Ok(())
}

/// Writes to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, content).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

fn validate(opts: &Options) -> Result<(), CliError> {
    if opts.order < classify::MIN_ORDER {
        return Err(CliError::Usage(format!(
            "--order must be at least {}, got {}",
            classify::MIN_ORDER,
            opts.order
        )));
    }
    if let Some(tol) = opts.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
        }
    }
    Ok(())
}

/// Runs the command without touching stdout or the output path.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = &cli.opts;
    validate(opts)?;
    let text = fs::read_to_string(cli.command.input())
        .map_err(|e| CliError::Io(format!("{}: {e}", cli.command.input().display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: String::from("."),
        message: e.to_string(),
    })?;
    match &cli.command {
        Command::Classify { .. } => cmd_classify(opts, &value),
        Command::Normalize { .. } => cmd_normalize(opts, &value),
        Command::AreaScan { .. } => cmd_area_scan(opts, &value),
        Command::SymmetryCompose { .. } => cmd_symmetry_compose(opts, &value),
        Command::SymmetryVerify { .. } => cmd_symmetry_verify(opts, &value),
        Command::Flatness { .. } => cmd_flatness(opts, &value),
        Command::Roundtrip { .. } => cmd_roundtrip(opts, &value),
    }
}

/// Deserializes with the failing field path in the error.
pub fn parse<T: DeserializeOwned>(value: &Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Any of the three inputs a metric can be given by.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricSource {
    Map(DevelopingMap),
    Density(MetricDensity),
    Form(NormalForm),
}

impl MetricSource {
    pub fn from_value(value: &Value) -> Result<Self, CliError> {
        let has = |k: &str| value.get(k).is_some();
        if has("psi") {
            Ok(MetricSource::Map(parse(value)?))
        } else if has("G") {
            Ok(MetricSource::Density(parse(value)?))
        } else if has("form") {
            Ok(MetricSource::Form(parse(value)?))
        } else {
            Err(CliError::Schema {
                path: String::from("."),
                message: "expected a developing map (psi), a density (G) or a normal form (form)"
                    .into(),
            })
        }
    }

    pub fn density(&self, order: i32) -> Result<MetricDensity, CliError> {
        Ok(match self {
            MetricSource::Map(m) => density_of(m)?,
            MetricSource::Density(d) => d.clone(),
            MetricSource::Form(f) => f.density(order),
        })
    }
}

fn map_input(value: &Value) -> Result<DevelopingMap, CliError> {
    match MetricSource::from_value(value)? {
        MetricSource::Map(m) => Ok(m),
        _ => Err(CliError::Schema {
            path: String::from("."),
            message: "this command needs a developing map {alpha, c, psi}".into(),
        }),
    }
}

/// Indented JSON that keeps arrays of scalars (coefficient pairs, short
/// lists) on one line.
pub fn to_json_text<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("outputs serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push_str(&serde_json::to_string(v).expect("scalars serialize"));
        }
        Value::Array(items) if items.iter().all(|x| {
            x.as_array().is_some_and(|a| a.iter().all(|y| !y.is_array() && !y.is_object()))
        }) && !items.is_empty() =>
        {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(x).expect("scalars serialize"));
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) if !items.is_empty() => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("scalars serialize")),
    }
}

fn single(opts: &Options, content: String, passed: bool) -> Outcome {
    Outcome {
        artifacts: vec![Artifact {
            path: opts.output.clone(),
            content,
        }],
        passed,
    }
}

fn tol(opts: &Options) -> f64 {
    opts.tol.unwrap_or(crate::series::Tolerance::default().rel)
}

fn cmd_classify(opts: &Options, value: &Value) -> Result<Outcome, CliError> {
    let map = map_input(value)?;
    let (form, change) = classify::classify_with_root(&map, opts.order, opts.root_index)?;
    Ok(single(opts, to_json_text(&ClassifyOutput::new(form, &change)), true))
}

#[derive(Serialize)]
struct NormalizeOutput {
    #[serde(flatten)]
    classified: ClassifyOutput,
    inverse_change: LaurentSeries,
    normal_map: DevelopingMap,
    normal_density: MetricDensity,
}

fn cmd_normalize(opts: &Options, value: &Value) -> Result<Outcome, CliError> {
    let map = map_input(value)?;
    let (form, change) = classify::classify_with_root(&map, opts.order, opts.root_index)?;
    let out = NormalizeOutput {
        classified: ClassifyOutput::new(form, &change),
        inverse_change: change.inverse()?.h().clone(),
        normal_map: form.developing_map(opts.order),
        normal_density: form.density(opts.order),
    };
    Ok(single(opts, to_json_text(&out), true))
}

#[derive(Serialize)]
struct RoundtripOutput {
    #[serde(flatten)]
    classified: ClassifyOutput,
    residual: f64,
    tol: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    equation_residual: Option<f64>,
}

fn cmd_roundtrip(opts: &Options, value: &Value) -> Result<Outcome, CliError> {
    let map = map_input(value)?;
    let (form, change) = classify::classify_with_root(&map, opts.order, opts.root_index)?;
    let residual = classify::roundtrip_residual(&map, &form, &change, opts.order)?;
    let equation_residual = match form {
        NormalForm::LogPole { .. } => {
            let tf = classify::third_form_change(&map, opts.order, opts.root_index)?;
            Some(classify::third_form_residual(&map, &tf)?)
        }
        _ => None,
    };
    let tol = tol(opts);
    let pass = residual < tol && equation_residual.is_none_or(|r| r < tol);
    let out = RoundtripOutput {
        classified: ClassifyOutput::new(form, &change),
        residual,
        tol,
        pass,
        equation_residual,
    };
    Ok(single(opts, to_json_text(&out), pass))
}

#[derive(Serialize)]
struct FlatnessOutput {
    residual: f64,
    tol: f64,
    pass: bool,
    grid: AnnulusGrid,
}

fn cmd_flatness(opts: &Options, value: &Value) -> Result<Outcome, CliError> {
    let d = MetricSource::from_value(value)?.density(opts.order)?;
    let grid = AnnulusGrid::default();
    let residual = flatness_residual(&d, &grid)?;
    let tol = opts.tol.unwrap_or(FLATNESS_TOL);
    let pass = residual < tol;
    Ok(single(opts, to_json_text(&FlatnessOutput { residual, tol, pass, grid }), pass))
}

/// Path of the JSON summary written next to a CSV output.
pub fn summary_path(csv: &Path) -> PathBuf {
    if csv.extension().is_some_and(|e| e == "csv") {
        csv.with_extension("json")
    } else {
        let mut name = csv.as_os_str().to_owned();
        name.push(".json");
        PathBuf::from(name)
    }
}

fn cmd_area_scan(opts: &Options, value: &Value) -> Result<Outcome, CliError> {
    let d = MetricSource::from_value(value)?.density(opts.order)?;
    let usage = |e: Error| CliError::Usage(e.to_string());
    let r = log_grid(opts.r_min, opts.r_max, opts.r_count).map_err(usage)?;
    area::validate_scan(opts.outer_radius, &r).map_err(usage)?;
    let scan = area::growth_scan(&d, opts.outer_radius, &r)?;
    let csv = scan.to_csv();
    let summary = to_json_text(&scan.summary());
    let artifacts = match &opts.output {
        Some(p) => vec![
            Artifact {
                path: Some(p.clone()),
                content: csv,
            },
            Artifact {
                path: Some(summary_path(p)),
                content: summary,
            },
        ],
        None => vec![Artifact {
            path: None,
            content: format!("{csv}\n{summary}"),
        }],
    };
    Ok(Outcome {
        artifacts,
        passed: true,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComposeInput {
    normal_form: NormalForm,
    g1: SymmetryElement,
    g2: SymmetryElement,
}

#[derive(Serialize)]
struct ComposeOutput {
    product: SymmetryElement,
    residual: f64,
    full_residual: f64,
    tol: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    h0: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hn: Option<Complex64>,
}

fn cmd_symmetry_compose(opts: &Options, value: &Value) -> Result<Outcome, CliError> {
    let input: ComposeInput = parse(value)?;
    let product = symmetry::compose_elements(&input.g1, &input.g2, &input.normal_form)?;
    let report = symmetry::verify_composition(&input.g1, &input.g2, &input.normal_form, opts.order)?;
    let coords = product.m3_coordinates(&input.normal_form);
    let tol = tol(opts);
    let pass = report.residual < tol;
    let out = ComposeOutput {
        product,
        residual: report.residual,
        full_residual: report.full_residual,
        tol,
        pass,
        h0: coords.map(|c| c.0),
        hn: coords.map(|c| c.1),
    };
    Ok(single(opts, to_json_text(&out), pass))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyInput {
    normal_form: NormalForm,
    #[serde(default)]
    element: Option<SymmetryElement>,
    /// Random elements of this family, drawn from `--seed`.
    #[serde(default)]
    family: Option<Family>,
    #[serde(default = "default_count")]
    count: usize,
}

fn default_count() -> usize {
    100
}

#[derive(Serialize)]
struct ElementReport {
    element: SymmetryElement,
    residual: f64,
    h: LaurentSeries,
    #[serde(skip_serializing_if = "Option::is_none")]
    h0: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hn: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta0: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equation_residual: Option<f64>,
}

#[derive(Serialize)]
struct VerifyOutput {
    normal_form: NormalForm,
    max_residual: f64,
    tol: f64,
    pass: bool,
    elements: Vec<ElementReport>,
}

fn element_report(
    form: &NormalForm,
    g: &SymmetryElement,
    order: i32,
) -> Result<ElementReport, CliError> {
    let residual = symmetry::verify_invariance(form, g, order)?;
    let h = symmetry::element_to_change(g, form, order)?.h().clone();
    let coords = g.m3_coordinates(form);
    let (zeta0, equation_residual) = match (*g, *form) {
        (SymmetryElement::M3 { ek_index, a }, NormalForm::LogPole { nu, n }) => {
            let s = symmetry::m3_series(nu, n, ek_index, a, order)?;
            let r = symmetry::m3_residual(nu, n, ek_index, &s.h, s.zeta0)?;
            (Some(s.zeta0), Some(r))
        }
        _ => (None, None),
    };
    Ok(ElementReport {
        element: *g,
        residual,
        h,
        h0: coords.map(|c| c.0),
        hn: coords.map(|c| c.1),
        zeta0,
        equation_residual,
    })
}

fn cmd_symmetry_verify(opts: &Options, value: &Value) -> Result<Outcome, CliError> {
    let input: VerifyInput = parse(value)?;
    let form = input.normal_form;
    let elements: Vec<SymmetryElement> = match (input.element, input.family) {
        (Some(g), None) => vec![g],
        (None, Some(family)) => {
            let mut sampler = Sampler::new(opts.seed);
            (0..input.count).map(|_| sampler.element(family, &form)).collect()
        }
        _ => {
            return Err(CliError::Schema {
                path: String::from("."),
                message: "give exactly one of `element` or `family`".into(),
            })
        }
    };
    let reports = elements
        .iter()
        .map(|g| element_report(&form, g, opts.order))
        .collect::<Result<Vec<_>, _>>()?;
    let max_residual = reports
        .iter()
        .flat_map(|r| std::iter::once(r.residual).chain(r.equation_residual))
        .fold(0.0, f64::max);
    let tol = tol(opts);
    let pass = max_residual < tol;
    let out = VerifyOutput {
        normal_form: form,
        max_residual,
        tol,
        pass,
        elements: reports,
    };
    Ok(single(opts, to_json_text(&out), pass))
}
