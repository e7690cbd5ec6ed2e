//! Run configuration: defaults, the flat `key = value` config file format
//! with `[section]` headers, and the named analytic profiles a run can
//! reference.
//!
//! Precedence is defaults, then the config file, then command-line flags.
//! Unknown sections and keys are hard errors so a typo never silently falls
//! back to a default.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use halfwave::flux::{p_laplacian_flux, StructuralFlux};
use halfwave::verify::AUDIT_SAMPLES;
use halfwave::{SampledField2D, SpaceTimeGrid};

/// What a run is asked to do. The command comes from the command line or
/// from `command =` under `[run]`, with the command line winning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Solve,
    Trace,
    Audit,
}

impl Command {
    pub fn from_name(name: &str) -> Option<Command> {
        match name {
            "verify" => Some(Command::Verify),
            "solve" => Some(Command::Solve),
            "trace" => Some(Command::Trace),
            "audit" => Some(Command::Audit),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Solve => "solve",
            Command::Trace => "trace",
            Command::Audit => "audit",
        }
    }
}

/// Named space-time profiles available to configs. The heat profiles solve
/// the quadratic-flux equation with vanishing wall values on the unit
/// interval; elsewhere they are still well-defined sample data.
pub const PROFILE_NAMES: [&str; 4] = ["zero", "heat-mode-1", "heat-two-mode", "separable-sine"];

/// Looks up a named analytic profile as a function of `(x, t)`.
pub fn profile(name: &str) -> Option<fn(f64, f64) -> f64> {
    use std::f64::consts::PI;
    match name {
        "zero" => Some(|_, _| 0.0),
        "heat-mode-1" => Some(|x, t| (-PI * PI * t).exp() * (PI * x).sin()),
        "heat-two-mode" => Some(|x, t| {
            (-PI * PI * t).exp() * (PI * x).sin()
                + (-4.0 * PI * PI * t).exp() * (2.0 * PI * x).sin()
        }),
        "separable-sine" => Some(|x, t| (PI * x).sin() * t * (-t).exp()),
        _ => None,
    }
}

/// A field-valued input: identically zero, a named analytic profile, or a
/// CSV file in the same `x,t,u` layout the solve command writes.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Zero,
    Profile(String),
    Csv(PathBuf),
}

impl FieldSpec {
    fn parse(raw: &str) -> Result<FieldSpec, String> {
        if raw == "zero" {
            Ok(FieldSpec::Zero)
        } else if let Some(path) = raw.strip_prefix("csv:") {
            Ok(FieldSpec::Csv(PathBuf::from(path)))
        } else if profile(raw).is_some() {
            Ok(FieldSpec::Profile(raw.to_string()))
        } else {
            Err(format!(
                "unknown field '{raw}'; use one of {PROFILE_NAMES:?} or csv:PATH"
            ))
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FieldSpec::Zero => "zero".into(),
            FieldSpec::Profile(name) => name.clone(),
            FieldSpec::Csv(path) => format!("csv:{}", path.display()),
        }
    }

    fn csv_path(&self) -> Option<&Path> {
        match self {
            FieldSpec::Csv(path) => Some(path),
            _ => None,
        }
    }

    /// Materializes the field on `grid`.
    pub fn sample(&self, grid: SpaceTimeGrid) -> Result<SampledField2D, String> {
        match self {
            FieldSpec::Zero => Ok(SampledField2D::zeros(grid)),
            FieldSpec::Profile(name) => Ok(SampledField2D::from_fn(
                grid,
                profile(name).expect("profile names are validated at parse time"),
            )),
            FieldSpec::Csv(path) => load_field_csv(path, grid),
        }
    }
}

/// Source term for a solve: a plain field used as pointwise forcing, or
/// `manufactured`, which runs the solver's stencil backwards on the `exact`
/// profile so that profile becomes the exact discrete solution.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Field(FieldSpec),
    Manufactured,
}

impl SourceSpec {
    fn parse(raw: &str) -> Result<SourceSpec, String> {
        if raw == "manufactured" {
            Ok(SourceSpec::Manufactured)
        } else {
            FieldSpec::parse(raw).map(SourceSpec::Field)
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SourceSpec::Field(spec) => spec.describe(),
            SourceSpec::Manufactured => "manufactured".into(),
        }
    }
}

/// Parabolic boundary datum for a solve: a plain field, or `exact`, which
/// samples the `exact` profile so the boundary carries its values.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec {
    Field(FieldSpec),
    Exact,
}

impl BoundarySpec {
    fn parse(raw: &str) -> Result<BoundarySpec, String> {
        if raw == "exact" {
            Ok(BoundarySpec::Exact)
        } else {
            FieldSpec::parse(raw).map(BoundarySpec::Field)
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BoundarySpec::Field(spec) => spec.describe(),
            BoundarySpec::Exact => "exact".into(),
        }
    }
}

/// The structural flux a run works with.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSpec {
    pub name: String,
    pub p: f64,
    pub coefficient: f64,
}

impl FluxSpec {
    pub fn build(&self) -> Result<StructuralFlux, String> {
        match self.name.as_str() {
            "p-laplacian" => p_laplacian_flux(self.p).map_err(|e| e.to_string()),
            "linear" => {
                StructuralFlux::linear(vec![vec![self.coefficient]]).map_err(|e| e.to_string())
            }
            "negated" => Ok(StructuralFlux::negated()),
            other => Err(format!(
                "unknown flux '{other}'; use p-laplacian, linear, or negated"
            )),
        }
    }
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub suite: String,
    pub seed: u64,
    pub x_min: f64,
    pub x_max: f64,
    pub m: usize,
    pub t_max: f64,
    pub n: usize,
    pub flux: FluxSpec,
    /// True once the config file touched the `[flux]` section; a verify run
    /// audits the configured flux only in that case.
    pub flux_given: bool,
    pub source: SourceSpec,
    pub boundary: BoundarySpec,
    pub exact: Option<String>,
    pub field: FieldSpec,
    pub tol: f64,
    pub max_iter: usize,
    pub samples: usize,
    pub refine: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            suite: "all".into(),
            seed: 0,
            x_min: 0.0,
            x_max: 1.0,
            m: 17,
            t_max: 1.0,
            n: 33,
            flux: FluxSpec {
                name: "p-laplacian".into(),
                p: 2.0,
                coefficient: 1.0,
            },
            flux_given: false,
            source: SourceSpec::Field(FieldSpec::Zero),
            boundary: BoundarySpec::Field(FieldSpec::Zero),
            exact: None,
            field: FieldSpec::Profile("heat-mode-1".into()),
            tol: 1e-8,
            max_iter: 200,
            samples: AUDIT_SAMPLES,
            refine: 1,
            out_dir: PathBuf::from("halfwave-out"),
        }
    }
}

impl RunConfig {
    /// Applies a config file on top of the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| format!("{}:{}: {msg}", path.display(), idx + 1);
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| at(format!("unterminated section header '{line}'")))?
                    .trim();
                if !matches!(name, "run" | "grid" | "flux" | "problem") {
                    return Err(at(format!(
                        "unknown section [{name}]; use [run], [grid], [flux], or [problem]"
                    )));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, got '{line}'")))?;
            self.apply_pair(&section, key.trim(), value.trim())
                .map_err(at)?;
        }
        Ok(())
    }

    fn apply_pair(&mut self, section: &str, key: &str, value: &str) -> Result<(), String> {
        match (section, key) {
            ("", _) => Err(format!(
                "key '{key}' appears before any [section] header"
            )),
            ("run", "command") => {
                self.command = Some(Command::from_name(value).ok_or_else(|| {
                    format!("unknown command '{value}'; use verify, solve, trace, or audit")
                })?);
                Ok(())
            }
            ("run", "suite") => {
                self.suite = value.to_string();
                Ok(())
            }
            ("run", "seed") => assign(&mut self.seed, value, "seed"),
            ("run", "refine") => assign(&mut self.refine, value, "refine"),
            ("grid", "x_min") => assign(&mut self.x_min, value, "x_min"),
            ("grid", "x_max") => assign(&mut self.x_max, value, "x_max"),
            ("grid", "m") => assign(&mut self.m, value, "m"),
            ("grid", "t_max") => assign(&mut self.t_max, value, "t_max"),
            ("grid", "n") => assign(&mut self.n, value, "n"),
            ("flux", "name") => {
                self.flux.name = value.to_string();
                self.flux_given = true;
                Ok(())
            }
            ("flux", "p") => {
                self.flux_given = true;
                assign(&mut self.flux.p, value, "p")
            }
            ("flux", "coefficient") => {
                self.flux_given = true;
                assign(&mut self.flux.coefficient, value, "coefficient")
            }
            ("problem", "source") => {
                self.source = SourceSpec::parse(value)?;
                Ok(())
            }
            ("problem", "boundary") => {
                self.boundary = BoundarySpec::parse(value)?;
                Ok(())
            }
            ("problem", "exact") => {
                if profile(value).is_none() {
                    return Err(format!(
                        "exact must name an analytic profile, one of {PROFILE_NAMES:?}; got '{value}'"
                    ));
                }
                self.exact = Some(value.to_string());
                Ok(())
            }
            ("problem", "field") => {
                self.field = FieldSpec::parse(value)?;
                Ok(())
            }
            ("problem", "tol") => assign(&mut self.tol, value, "tol"),
            ("problem", "max_iter") => assign(&mut self.max_iter, value, "max_iter"),
            ("problem", "samples") => assign(&mut self.samples, value, "samples"),
            (sec, key) => Err(format!("unknown key '{key}' in section [{sec}]")),
        }
    }

    /// Builds the base space-time grid, surfacing parameter problems as
    /// configuration errors.
    pub fn grid(&self) -> Result<SpaceTimeGrid, String> {
        SpaceTimeGrid::new(self.x_min, self.x_max, self.m, self.t_max, self.n)
            .map_err(|e| e.to_string())
    }

    /// Checks every invariant that does not need a solve: the grid and flux
    /// parameters are admissible, tolerances are sane, and every referenced
    /// file exists.
    pub fn validate(&self) -> Result<(), String> {
        self.grid()?;
        self.flux.build()?;
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(format!("tol must be positive and finite, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return Err("max_iter must be at least 1".into());
        }
        if self.samples == 0 {
            return Err("samples must be at least 1".into());
        }
        if self.refine == 0 {
            return Err("refine must be at least 1".into());
        }
        if self.refine > 8 {
            return Err(format!(
                "refine = {} would grow the grid by 2^{}; pick at most 8 levels",
                self.refine,
                self.refine - 1
            ));
        }
        for path in self.referenced_files() {
            if !path.is_file() {
                return Err(format!(
                    "referenced file {} does not exist",
                    path.display()
                ));
            }
        }
        Ok(())
    }

    fn referenced_files(&self) -> Vec<&Path> {
        let mut paths = Vec::new();
        if let SourceSpec::Field(spec) = &self.source {
            paths.extend(spec.csv_path());
        }
        if let BoundarySpec::Field(spec) = &self.boundary {
            paths.extend(spec.csv_path());
        }
        paths.extend(self.field.csv_path());
        paths
    }

    /// True when any solve input comes from a CSV file; such inputs cannot
    /// be resampled onto refined grids.
    pub fn uses_csv_inputs(&self) -> bool {
        matches!(&self.source, SourceSpec::Field(FieldSpec::Csv(_)))
            || matches!(&self.boundary, BoundarySpec::Field(FieldSpec::Csv(_)))
    }
}

fn assign<T: FromStr>(slot: &mut T, value: &str, what: &str) -> Result<(), String>
where
    T::Err: fmt::Display,
{
    *slot = value
        .parse()
        .map_err(|e| format!("cannot parse {what} '{value}': {e}"))?;
    Ok(())
}

/// Reads a field from the `x,t,u` CSV layout written by the solve command,
/// checking that its node coordinates match `grid`.
pub fn load_field_csv(path: &Path, grid: SpaceTimeGrid) -> Result<SampledField2D, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let at = |msg: String| format!("{}: {msg}", path.display());
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| at("file is empty".into()))?;
    if header.trim() != "x,t,u" {
        return Err(at(format!("expected header 'x,t,u', got '{header}'")));
    }
    let (m, n) = (grid.m(), grid.n());
    let x_tol = 1e-9 * (grid.x_max() - grid.x_min()).abs().max(1.0);
    let t_tol = 1e-9 * (grid.t_max() - grid.t_min()).abs().max(1.0);
    let mut values = Vec::with_capacity(m * n);
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if values.len() == m * n {
            return Err(at(format!("more than {} data rows for a {m}x{n} grid", m * n)));
        }
        let mut cols = line.split(',');
        let mut next = |what: &str| -> Result<f64, String> {
            cols.next()
                .ok_or_else(|| at(format!("row '{line}' is missing the {what} column")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| at(format!("cannot parse {what} in row '{line}': {e}")))
        };
        let (x, t, u) = (next("x")?, next("t")?, next("u")?);
        let (i, j) = (values.len() / n, values.len() % n);
        if (x - grid.x(i)).abs() > x_tol || (t - grid.t(j)).abs() > t_tol {
            return Err(at(format!(
                "row {} carries coordinates ({x}, {t}) but node ({i}, {j}) sits at ({}, {}); \
                 the file must match the configured grid in row-major space-then-time order",
                values.len() + 2,
                grid.x(i),
                grid.t(j)
            )));
        }
        values.push(u);
    }
    if values.len() != m * n {
        return Err(at(format!(
            "expected {} data rows for a {m}x{n} grid, got {}",
            m * n,
            values.len()
        )));
    }
    SampledField2D::new(grid, values).map_err(|e| at(e.to_string()))
}
