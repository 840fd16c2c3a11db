//! Scenario files, sweeps, plots and fire checks behind the `jamcord` binary.
//!
//! Everything here writes deterministic bytes: no clocks, no locale, sweep
//! cells sorted by id before aggregation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bead::{validate_bead_spec, BeadSpec, ValidationReport};
use crate::grasp::{config_hash, grasp, with_trials, GraspError, ObjectShape, Protocol};
use crate::gripper::GripperConfig;
use crate::thermal::{check_fire_exposure, BillOfMaterials, Failure, MaterialCatalog};
use crate::trace::{fmt_g6, max_holding_force, GraspTrace, Phase, TraceError};

pub const CONFIG_DIR_VAR: &str = "JAMCORD_CONFIG_DIR";
pub const DEFAULT_SWEEP_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {reason}")]
    Read { path: PathBuf, reason: String },
    #[error("cannot write {path}: {reason}")]
    Write { path: PathBuf, reason: String },
    #[error("{path}: {reason}")]
    Parse { path: PathBuf, reason: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("scenario `{id}`: {source}")]
    Grasp { id: String, source: GraspError },
    #[error("sweep has {cells} cells, cap is {cap}")]
    CapExceeded { cells: usize, cap: usize },
    #[error("plot: {0}")]
    Plot(String),
}

impl HarnessError {
    /// 2 bad input, 3 solver failure, 4 sweep too large, 5 plot input.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Grasp {
                source: GraspError::Solve { .. },
                ..
            } => 3,
            HarnessError::CapExceeded { .. } => 4,
            HarnessError::Plot(_) => 5,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Read {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, HarnessError> {
    serde_json::from_str(text).map_err(|e| HarnessError::Parse {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|e| HarnessError::Write {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Finds `name` next to `base_dir` first, then under `$JAMCORD_CONFIG_DIR`.
/// Falls back to the `base_dir` candidate so the read error names it.
pub fn resolve_path(name: &str, base_dir: Option<&Path>) -> PathBuf {
    let p = Path::new(name);
    if p.is_absolute() {
        return p.to_path_buf();
    }
    let local = base_dir.map_or_else(|| p.to_path_buf(), |d| d.join(p));
    if local.exists() {
        return local;
    }
    if let Some(dir) = std::env::var_os(CONFIG_DIR_VAR) {
        let candidate = Path::new(&dir).join(p);
        if candidate.exists() {
            return candidate;
        }
    }
    local
}

/// `"table1"` names the built-in config; any other string is a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GripperSource {
    File(String),
    Inline(Box<GripperConfig>),
}

impl Default for GripperSource {
    fn default() -> Self {
        GripperSource::File("table1".into())
    }
}

impl GripperSource {
    pub fn load(&self, base_dir: Option<&Path>) -> Result<GripperConfig, HarnessError> {
        match self {
            GripperSource::Inline(c) => Ok((**c).clone()),
            GripperSource::File(name) if name == "table1" => Ok(GripperConfig::table1()),
            GripperSource::File(name) => {
                let path = resolve_path(name, base_dir);
                parse(&path, &read(&path)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    #[serde(default)]
    pub gripper: GripperSource,
    pub object: ObjectShape,
    pub protocol: Protocol,
    /// Output directory when `--out` is not given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let s: Self = parse(path, &read(path)?)?;
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), HarnessError> {
        let ok = !self.id.is_empty()
            && self
                .id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
        if ok {
            Ok(())
        } else {
            Err(HarnessError::Invalid(format!(
                "scenario id `{}` must be non-empty ASCII letters, digits, `-`, `_` or `.`",
                self.id
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSpan {
    pub phase: Phase,
    pub first_mm: f64,
    pub last_mm: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub id: String,
    pub config_hash: String,
    pub max_holding_force: f64,
    pub max_press_force: f64,
    pub escaped: bool,
    pub phases: Vec<PhaseSpan>,
    /// Peak holding force per trial; one entry without noise.
    pub trial_max_holding_force: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub trace: GraspTrace,
    /// Noisy copies of `trace`, or just `trace`.
    pub trials: Vec<GraspTrace>,
    pub summary: RunSummary,
}

fn phase_spans(trace: &GraspTrace) -> Vec<PhaseSpan> {
    [Phase::Press, Phase::Jam, Phase::Lift]
        .into_iter()
        .filter_map(|phase| {
            let d: Vec<f64> = trace.phase(phase).map(|s| s.displacement).collect();
            Some(PhaseSpan {
                phase,
                first_mm: *d.first()?,
                last_mm: *d.last()?,
                samples: d.len(),
            })
        })
        .collect()
}

/// Press, jam and lift for one scenario. `seed` replaces the noise seed
/// when the protocol asks for noise and is ignored otherwise.
pub fn run_scenario(scenario: &Scenario, base_dir: Option<&Path>, seed: Option<u64>) -> Result<RunOutput, HarnessError> {
    scenario.check()?;
    let config = scenario.gripper.load(base_dir)?;
    let mut protocol = scenario.protocol.clone();
    if let (Some(noise), Some(seed)) = (protocol.noise.as_mut(), seed) {
        noise.seed = seed;
    }
    let wrap = |source: GraspError| HarnessError::Grasp {
        id: scenario.id.clone(),
        source,
    };
    let mut trace = grasp(&config, &scenario.object, &protocol).map_err(wrap)?;
    trace.meta.label = scenario.id.clone();
    let trials = with_trials(&trace, &protocol).map_err(wrap)?;
    let hold = |t: &GraspTrace| max_holding_force(t).map_err(|e| wrap(e.into()));
    let summary = RunSummary {
        id: scenario.id.clone(),
        config_hash: config_hash(&config, &scenario.object, &protocol),
        max_holding_force: hold(&trace)?,
        max_press_force: trace.phase(Phase::Press).map(|s| s.force).fold(0.0, f64::max),
        escaped: trace.meta.escaped,
        phases: phase_spans(&trace),
        trial_max_holding_force: trials.iter().map(hold).collect::<Result<_, _>>()?,
    };
    Ok(RunOutput { trace, trials, summary })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Writes `<id>.csv`, `<id>.summary.json`, and `<id>.trial<k>.csv` for each
/// noisy trial. Returns the paths written.
pub fn write_run(out_dir: &Path, run: &RunOutput) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::Write {
        path: out_dir.to_path_buf(),
        reason: e.to_string(),
    })?;
    let id = &run.summary.id;
    let mut files = vec![
        (out_dir.join(format!("{id}.csv")), run.trace.to_csv()),
        (out_dir.join(format!("{id}.summary.json")), to_json(&run.summary)),
    ];
    if run.trials.len() > 1 || run.trials.first() != Some(&run.trace) {
        for (k, t) in run.trials.iter().enumerate() {
            files.push((out_dir.join(format!("{id}.trial{k}.csv")), t.to_csv()));
        }
    }
    for (path, text) in &files {
        write(path, text)?;
    }
    Ok(files.into_iter().map(|f| f.0).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Diagnostic<'a> {
    id: &'a str,
    exit_code: i32,
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    displacement_mm: Option<f64>,
}

/// Records a failed run as `<id>.diagnostic.json` when the error belongs
/// to a scenario. Returns the path written.
pub fn write_diagnostic(out_dir: &Path, err: &HarnessError) -> Option<PathBuf> {
    let HarnessError::Grasp { id, source } = err else {
        return None;
    };
    let displacement_mm = match source {
        GraspError::Solve { displacement, .. } => Some(*displacement),
        _ => None,
    };
    let d = Diagnostic {
        id,
        exit_code: err.exit_code(),
        error: err.to_string(),
        displacement_mm,
    };
    std::fs::create_dir_all(out_dir).ok()?;
    let path = out_dir.join(format!("{id}.diagnostic.json"));
    write(&path, &to_json(&d)).ok()?;
    Some(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    /// Dotted path into the scenario JSON, e.g. `protocol.pressure_b`.
    pub path: String,
    pub values: Vec<Value>,
}

fn default_parallelism() -> usize {
    1
}

fn default_cap() -> usize {
    DEFAULT_SWEEP_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: Scenario,
    pub axes: Vec<Axis>,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

impl SweepSpec {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        parse(path, &read(path)?)
    }
}

/// One sweep cell: the scenario plus the axis values that made it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub scenario: Scenario,
    pub values: Vec<Value>,
}

fn set_path(root: &mut Value, path: &str, value: Value) -> Result<(), HarnessError> {
    let mut node = root;
    let keys: Vec<&str> = path.split('.').collect();
    for (i, key) in keys.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| HarnessError::Invalid(format!("axis `{path}`: `{}` is not an object", keys[..i].join("."))))?;
        if i + 1 == keys.len() {
            obj.insert(key.to_string(), value);
            return Ok(());
        }
        node = obj
            .entry(key.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    Err(HarnessError::Invalid("empty axis path".into()))
}

/// Cartesian product of the axes, last axis fastest. Ids are the base id
/// plus a zero-padded cell index.
pub fn sweep_cells(spec: &SweepSpec) -> Result<Vec<Cell>, HarnessError> {
    if spec.axes.is_empty() {
        return Err(HarnessError::Invalid("sweep needs at least one axis".into()));
    }
    if let Some(a) = spec.axes.iter().find(|a| a.values.is_empty()) {
        return Err(HarnessError::Invalid(format!("axis `{}` has no values", a.path)));
    }
    let total = spec
        .axes
        .iter()
        .try_fold(1usize, |n, a| n.checked_mul(a.values.len()))
        .unwrap_or(usize::MAX);
    if total > spec.cap {
        return Err(HarnessError::CapExceeded {
            cells: total,
            cap: spec.cap,
        });
    }
    let width = total.to_string().len();
    let base = serde_json::to_value(&spec.base).expect("plain data serializes");
    (0..total)
        .map(|i| {
            let mut rest = i;
            let mut values = vec![Value::Null; spec.axes.len()];
            for (k, axis) in spec.axes.iter().enumerate().rev() {
                values[k] = axis.values[rest % axis.values.len()].clone();
                rest /= axis.values.len();
            }
            let mut v = base.clone();
            for (axis, value) in spec.axes.iter().zip(&values) {
                set_path(&mut v, &axis.path, value.clone())?;
            }
            set_path(&mut v, "id", Value::String(format!("{}-{:0width$}", spec.base.id, i)))?;
            let scenario: Scenario = serde_json::from_value(v)
                .map_err(|e| HarnessError::Invalid(format!("sweep cell {i}: {e}")))?;
            Ok(Cell { scenario, values })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<String>,
    pub cells: Vec<(Cell, RunOutput)>,
}

/// Runs every cell on a pool of `parallelism` threads. Results come back in
/// id order whatever the pool size; the first failing cell by id is
/// reported.
pub fn run_sweep(
    spec: &SweepSpec,
    base_dir: Option<&Path>,
    seed: Option<u64>,
    parallelism: usize,
) -> Result<SweepResult, HarnessError> {
    let cells = sweep_cells(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| HarnessError::Invalid(format!("thread pool: {e}")))?;
    let runs: Vec<Result<RunOutput, HarnessError>> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| run_scenario(&c.scenario, base_dir, seed))
            .collect()
    });
    let mut done: Vec<(Cell, RunOutput)> = Vec::with_capacity(cells.len());
    for (cell, run) in cells.into_iter().zip(runs) {
        done.push((cell, run?));
    }
    done.sort_by(|a, b| a.0.scenario.id.cmp(&b.0.scenario.id));
    Ok(SweepResult {
        axes: spec.axes.iter().map(|a| a.path.clone()).collect(),
        cells: done,
    })
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn value_field(v: &Value) -> String {
    match v {
        Value::String(s) => csv_field(s),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), fmt_g6),
        other => csv_field(&other.to_string()),
    }
}

/// One row per cell: id, axis values, peak holding force, escape flag.
pub fn aggregate_csv(result: &SweepResult) -> String {
    let mut out = String::from("id");
    for a in &result.axes {
        out.push(',');
        out.push_str(&csv_field(a));
    }
    out.push_str(",max_holding_force_N,max_press_force_N,escaped\n");
    for (cell, run) in &result.cells {
        out.push_str(&csv_field(&cell.scenario.id));
        for v in &cell.values {
            out.push(',');
            out.push_str(&value_field(v));
        }
        let s = &run.summary;
        let _ = writeln!(
            out,
            ",{},{},{}",
            fmt_g6(s.max_holding_force),
            fmt_g6(s.max_press_force),
            s.escaped
        );
    }
    out
}

/// Writes every cell's run plus `aggregate.csv`.
pub fn write_sweep(out_dir: &Path, result: &SweepResult) -> Result<PathBuf, HarnessError> {
    for (_, run) in &result.cells {
        write_run(out_dir, run)?;
    }
    let path = out_dir.join("aggregate.csv");
    write(&path, &aggregate_csv(result))?;
    Ok(path)
}

const PLOT_W: f64 = 640.0;
const PLOT_H: f64 = 400.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 16.0;
const MARGIN_B: f64 = 48.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

/// Overlays traces as polylines on shared axes. Same input, same bytes.
pub fn render_svg(traces: &[(String, GraspTrace)]) -> Result<String, HarnessError> {
    if traces.is_empty() {
        return Err(HarnessError::Plot("no traces to plot".into()));
    }
    if let Some((name, _)) = traces.iter().find(|(_, t)| t.samples.is_empty()) {
        return Err(HarnessError::Plot(format!("trace `{name}` has no samples")));
    }
    let all = traces.iter().flat_map(|(_, t)| &t.samples);
    let (x0, x1) = span(
        all.clone().map(|s| s.displacement).fold(f64::INFINITY, f64::min),
        all.clone().map(|s| s.displacement).fold(f64::NEG_INFINITY, f64::max),
    );
    let (y0, y1) = span(
        all.clone().map(|s| s.force).fold(0.0, f64::min),
        all.map(|s| s.force).fold(0.0, f64::max),
    );
    let (pw, ph) = (PLOT_W - MARGIN_L - MARGIN_R, PLOT_H - MARGIN_T - MARGIN_B);
    let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| MARGIN_T + (y1 - y) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_W}" height="{PLOT_H}" viewBox="0 0 {PLOT_W} {PLOT_H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{PLOT_W}" height="{PLOT_H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{tx:.2}" y1="{:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/><text x="{tx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_T + ph,
            MARGIN_T + ph + 4.0,
            MARGIN_T + ph + 16.0,
            fmt_g6(xv)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{MARGIN_L}" y2="{ty:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_L - 4.0,
            MARGIN_L - 6.0,
            ty + 4.0,
            fmt_g6(yv)
        );
    }
    if y0 < 0.0 && y1 > 0.0 {
        let z = py(0.0);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_L}" y1="{z:.2}" x2="{:.2}" y2="{z:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            MARGIN_L + pw
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">displacement [mm]</text>"#,
        MARGIN_L + pw / 2.0,
        PLOT_H - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">force [N]</text>"#,
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0
    );
    for (k, (name, trace)) in traces.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = trace
            .samples
            .iter()
            .map(|s| format!("{:.2},{:.2}", px(s.displacement), py(s.force)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = MARGIN_T + 14.0 * (k as f64 + 1.0);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" fill="{colour}" text-anchor="end">{}</text>"#,
            MARGIN_L + pw - 6.0,
            xml_escape(name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Reads trace CSVs and renders them, labelled by file stem.
pub fn plot_files(paths: &[PathBuf]) -> Result<String, HarnessError> {
    let traces = paths
        .iter()
        .map(|p| {
            let text = read(p)?;
            let trace = GraspTrace::from_csv(&text)
                .map_err(|e: TraceError| HarnessError::Plot(format!("{}: {e}", p.display())))?;
            let name = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
            Ok((name, trace))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    render_svg(&traces)
}

/// What a spec file turned out to be and its validation outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecCheck {
    pub bead: ValidationReport,
    /// Gripper-level problems, when the file was a full gripper config.
    pub gripper_errors: Vec<String>,
    pub gripper_warnings: Vec<String>,
}

impl SpecCheck {
    pub fn valid(&self) -> bool {
        self.bead.valid && self.gripper_errors.is_empty()
    }
}

/// Accepts either a bare bead spec or a whole gripper config.
pub fn validate_file(path: &Path) -> Result<SpecCheck, HarnessError> {
    let text = read(path)?;
    let value: Value = parse(path, &text)?;
    let invalid = |e: String| HarnessError::Parse {
        path: path.to_path_buf(),
        reason: e,
    };
    if value.get("chain").is_some() {
        let config: GripperConfig = serde_json::from_value(value).map_err(|e| invalid(e.to_string()))?;
        let bead = validate_bead_spec(&config.chain.bead).map_err(|e| invalid(e.to_string()))?;
        let (errors, warnings) = match config.check() {
            Ok(w) => (Vec::new(), w),
            Err(e) => (vec![e.to_string()], Vec::new()),
        };
        Ok(SpecCheck {
            bead,
            gripper_errors: errors,
            gripper_warnings: warnings,
        })
    } else {
        let spec: BeadSpec = serde_json::from_value(value).map_err(|e| invalid(e.to_string()))?;
        let bead = validate_bead_spec(&spec).map_err(|e| invalid(e.to_string()))?;
        Ok(SpecCheck {
            bead,
            gripper_errors: Vec::new(),
            gripper_warnings: Vec::new(),
        })
    }
}

/// Loads a catalog: an explicit file, else `materials.json` under
/// `$JAMCORD_CONFIG_DIR`, else the bundled one.
pub fn load_catalog(path: Option<&Path>) -> Result<MaterialCatalog, HarnessError> {
    let path = match path {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_DIR_VAR)
            .map(|d| Path::new(&d).join("materials.json"))
            .filter(|p| p.exists()),
    };
    match path {
        None => Ok(MaterialCatalog::bundled()),
        Some(p) => MaterialCatalog::from_json(&read(&p)?).map_err(|e| HarnessError::Parse {
            path: p,
            reason: e.to_string(),
        }),
    }
}

/// Screens the BOM at `temp` °C.
pub fn firecheck_file(bom: &Path, temp: f64, catalog: &MaterialCatalog) -> Result<Vec<Failure>, HarnessError> {
    if !temp.is_finite() {
        return Err(HarnessError::Invalid(format!("temperature must be finite, got {temp}")));
    }
    let path = resolve_path(&bom.to_string_lossy(), None);
    let bom = BillOfMaterials::from_json(&read(&path)?, catalog).map_err(|e| HarnessError::Parse {
        path,
        reason: e.to_string(),
    })?;
    Ok(check_fire_exposure(&bom, temp))
}
