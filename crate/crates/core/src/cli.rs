//! Command-line front end: configuration, dispatch and record emission.
//!
//! Every subcommand produces a flat list of [`OutputRecord`]s which are
//! written as CSV or JSON. Exit codes: 0 ok, 2 configuration error,
//! 3 quadrature did not converge, 4 a verification check failed.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equivalence::{
    default_grid, default_particle, default_surface, expected_ratio, force, prefactor_suite,
    RatioReport, SuiteEntry,
};
use crate::error::ForceError;
use crate::integrands::{ev_integrand, symmetry_residual, Formulation, ScenarioParams};
use crate::physics::ModePoint;
use crate::quadrature::{ForceResult, ForceSector, QuadratureSpec};
use crate::response::{DrudeModel, LorentzOscillator};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

/// Largest relative residual accepted by the symmetry check.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

const DEFAULT_SYMMETRY_SAMPLES: usize = 10_000;

pub const CSV_HEADER: &str =
    "beta,z,t1,t2,omega_p,gamma_d,alpha0,omega0,gamma_a,formulation,sector,value,error,evals,status";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<ForceError> for CliError {
    fn from(e: ForceError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "frictionkit",
    version,
    about = "Lateral force on a polarizable particle moving above a Drude surface"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate one formulation in one sector.
    Force(Flags),
    /// Integrate two formulations and compare their ratio with the claimed factor.
    Compare(Flags),
    /// Repeat `force` along one parameter axis.
    Sweep(Flags),
    /// Run the conversion-factor suite, a symmetry sample and the equilibrium nulls.
    Verify(Flags),
    /// Sample random evanescent modes and report the largest symmetry residual.
    CheckSymmetry(Flags),
}

impl Command {
    fn parts(&self) -> (CommandKind, &Flags) {
        match self {
            Command::Force(f) => (CommandKind::Force, f),
            Command::Compare(f) => (CommandKind::Compare, f),
            Command::Sweep(f) => (CommandKind::Sweep, f),
            Command::Verify(f) => (CommandKind::Verify, f),
            Command::CheckSymmetry(f) => (CommandKind::CheckSymmetry, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Force,
    Compare,
    Sweep,
    Verify,
    CheckSymmetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Beta,
    Z,
    T1,
    T2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn parse_formulation(s: &str) -> Result<Formulation, String> {
    s.parse().map_err(|e: ForceError| e.to_string())
}

fn parse_sector(s: &str) -> Result<ForceSector, String> {
    s.parse().map_err(|e: ForceError| e.to_string())
}

/// Flags shared by every subcommand. All are optional here so that values
/// from a config file can fill the gaps.
#[derive(Args, Debug, Clone, Default, PartialEq)]
pub struct Flags {
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    #[arg(long)]
    pub omega_p: Option<f64>,
    #[arg(long)]
    pub gamma_d: Option<f64>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub gamma_a: Option<f64>,
    /// ph, vp, dk or dk-quadrant.
    #[arg(long, value_parser = parse_formulation)]
    pub formulation: Option<Formulation>,
    /// Denominator of `compare` (defaults to ph).
    #[arg(long, value_parser = parse_formulation)]
    pub reference: Option<Formulation>,
    /// ev, prop-surface, free-space or vp-stress.
    #[arg(long, value_parser = parse_sector)]
    pub sector: Option<ForceSector>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<u64>,
    #[arg(long, value_enum)]
    pub axis: Option<Axis>,
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub stop: Option<f64>,
    /// Sweep points, or sample size for `check-symmetry`.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Flat key=value file using the flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Config(format!("{key}: cannot parse '{value}': {e}")))
}

impl Flags {
    /// Parses a config file. Keys are the long flag names; `omega_p` and
    /// `omega-p` are both accepted. Blank lines and `#` comments are skipped.
    pub fn from_config_text(text: &str) -> Result<Self, CliError> {
        let mut f = Flags::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("config line {}: expected key=value, got '{line}'", n + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let k = key.as_str();
            match k {
                "beta" => f.beta = Some(parse_value(k, value)?),
                "z" => f.z = Some(parse_value(k, value)?),
                "t1" => f.t1 = Some(parse_value(k, value)?),
                "t2" => f.t2 = Some(parse_value(k, value)?),
                "omega-p" => f.omega_p = Some(parse_value(k, value)?),
                "gamma-d" => f.gamma_d = Some(parse_value(k, value)?),
                "alpha0" => f.alpha0 = Some(parse_value(k, value)?),
                "omega0" => f.omega0 = Some(parse_value(k, value)?),
                "gamma-a" => f.gamma_a = Some(parse_value(k, value)?),
                "formulation" => f.formulation = Some(parse_value(k, value)?),
                "reference" => f.reference = Some(parse_value(k, value)?),
                "sector" => f.sector = Some(parse_value(k, value)?),
                "rel-tol" => f.rel_tol = Some(parse_value(k, value)?),
                "max-evals" => f.max_evals = Some(parse_value(k, value)?),
                "axis" => {
                    f.axis = Some(Axis::from_str(value, true).map_err(|e| {
                        CliError::Config(format!("axis: cannot parse '{value}': {e}"))
                    })?)
                }
                "start" => f.start = Some(parse_value(k, value)?),
                "stop" => f.stop = Some(parse_value(k, value)?),
                "count" => f.count = Some(parse_value(k, value)?),
                "output" => {
                    f.output = Some(OutputFormat::from_str(value, true).map_err(|e| {
                        CliError::Config(format!("output: cannot parse '{value}': {e}"))
                    })?)
                }
                "jobs" => f.jobs = Some(parse_value(k, value)?),
                "seed" => f.seed = Some(parse_value(k, value)?),
                _ => {
                    return Err(CliError::Config(format!(
                        "config line {}: unknown key '{}'",
                        n + 1,
                        key
                    )))
                }
            }
        }
        Ok(f)
    }

    /// Values set here win over those in `base`.
    pub fn over(self, base: Flags) -> Flags {
        Flags {
            beta: self.beta.or(base.beta),
            z: self.z.or(base.z),
            t1: self.t1.or(base.t1),
            t2: self.t2.or(base.t2),
            omega_p: self.omega_p.or(base.omega_p),
            gamma_d: self.gamma_d.or(base.gamma_d),
            alpha0: self.alpha0.or(base.alpha0),
            omega0: self.omega0.or(base.omega0),
            gamma_a: self.gamma_a.or(base.gamma_a),
            formulation: self.formulation.or(base.formulation),
            reference: self.reference.or(base.reference),
            sector: self.sector.or(base.sector),
            rel_tol: self.rel_tol.or(base.rel_tol),
            max_evals: self.max_evals.or(base.max_evals),
            axis: self.axis.or(base.axis),
            start: self.start.or(base.start),
            stop: self.stop.or(base.stop),
            count: self.count.or(base.count),
            output: self.output.or(base.output),
            jobs: self.jobs.or(base.jobs),
            seed: self.seed.or(base.seed),
            config: self.config.or(base.config),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + i as f64 * h
                }
            })
            .collect()
    }
}

/// A fully validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub scenario: ScenarioParams,
    pub spec: QuadratureSpec,
    pub formulation: Formulation,
    pub reference: Formulation,
    pub sector: ForceSector,
    pub sweep: Option<SweepAxis>,
    /// Scenarios of a sweep, in axis order.
    pub sweep_points: Vec<ScenarioParams>,
    pub count: Option<usize>,
    pub output: OutputFormat,
    pub jobs: usize,
    pub seed: u64,
}

fn scenario_from(flags: &Flags, beta: f64, z: f64, t1: f64, t2: f64) -> Result<ScenarioParams, CliError> {
    let surface = DrudeModel::new(
        flags.omega_p.unwrap_or(default_surface().omega_p()),
        flags.gamma_d.unwrap_or(default_surface().gamma_d()),
    )?;
    let particle = LorentzOscillator::new(
        flags.alpha0.unwrap_or(default_particle().alpha0()),
        flags.omega0.unwrap_or(default_particle().omega0()),
        flags.gamma_a.unwrap_or(default_particle().gamma_a()),
    )?;
    Ok(ScenarioParams::new(beta, z, t1, t2, surface, particle)?)
}

/// Parses `argv` (including the program name), merging in the config file
/// named by `--config` if any.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Config(e.to_string()))?;
    let (kind, flags) = cli.command.parts();
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Flags::from_config_text(&text)?
        }
        None => Flags::default(),
    };
    build_config(kind, flags.clone().over(file))
}

/// Validates merged flags for subcommand `kind`.
pub fn build_config(kind: CommandKind, flags: Flags) -> Result<RunConfig, CliError> {
    let needs_point = matches!(kind, CommandKind::Force | CommandKind::Compare | CommandKind::Sweep);
    let sweep_axis = if kind == CommandKind::Sweep {
        let axis = flags
            .axis
            .ok_or_else(|| CliError::Config("sweep needs --axis".into()))?;
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| CliError::Config(format!("sweep needs --{name}")))
        };
        let count = flags
            .count
            .ok_or_else(|| CliError::Config("sweep needs --count".into()))?;
        if count == 0 {
            return Err(CliError::Config("count must be positive".into()));
        }
        Some(SweepAxis {
            axis,
            start: need("start", flags.start)?,
            stop: need("stop", flags.stop)?,
            count,
        })
    } else {
        None
    };

    let field = |name: &str, v: Option<f64>, axis: Axis, default: f64| -> Result<f64, CliError> {
        match v {
            Some(v) => Ok(v),
            None if sweep_axis.map(|s| s.axis) == Some(axis) => Ok(default),
            None if needs_point => Err(CliError::Config(format!("missing required field --{name}"))),
            None => Ok(default),
        }
    };
    let beta = field("beta", flags.beta, Axis::Beta, 0.5)?;
    let z = field("z", flags.z, Axis::Z, 1.0)?;
    let t1 = field("t1", flags.t1, Axis::T1, 0.5)?;
    let t2 = field("t2", flags.t2, Axis::T2, 0.2)?;
    let scenario = scenario_from(&flags, beta, z, t1, t2)?;

    let sweep_points = match sweep_axis {
        Some(s) => s
            .points()
            .into_iter()
            .map(|v| {
                let (mut b, mut zz, mut a, mut c) = (beta, z, t1, t2);
                match s.axis {
                    Axis::Beta => b = v,
                    Axis::Z => zz = v,
                    Axis::T1 => a = v,
                    Axis::T2 => c = v,
                }
                scenario_from(&flags, b, zz, a, c)
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };

    let defaults = QuadratureSpec::default();
    let spec = QuadratureSpec {
        rel_tol: flags.rel_tol.unwrap_or(defaults.rel_tol),
        max_evals: flags.max_evals.unwrap_or(defaults.max_evals),
        ..defaults
    };
    spec.validate()?;

    let formulation = flags.formulation.unwrap_or(Formulation::Ph);
    let reference = flags.reference.unwrap_or(Formulation::Ph);
    let sector = flags.sector.unwrap_or(ForceSector::Evanescent);
    if matches!(kind, CommandKind::Force | CommandKind::Sweep) {
        supported(formulation, sector)?;
    }
    if kind == CommandKind::Compare {
        if formulation == reference {
            return Err(CliError::Config(format!(
                "compare needs two different formulations, got {formulation} twice"
            )));
        }
        expected_ratio(formulation, reference, sector, scenario.kin.gamma())?;
    }

    let jobs = match flags.jobs {
        Some(0) => return Err(CliError::Config("jobs must be positive".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    if kind == CommandKind::CheckSymmetry && flags.count == Some(0) {
        return Err(CliError::Config("count must be positive".into()));
    }

    Ok(RunConfig {
        command: kind,
        scenario,
        spec,
        formulation,
        reference,
        sector,
        sweep: sweep_axis,
        sweep_points,
        count: flags.count,
        output: flags.output.unwrap_or_default(),
        jobs,
        seed: flags.seed.unwrap_or(0),
    })
}

/// Rejects pairs without a printed formula before any work is done.
fn supported(f: Formulation, sector: ForceSector) -> Result<(), CliError> {
    let ok = match sector {
        ForceSector::Evanescent => true,
        ForceSector::PropSurface => f != Formulation::Vp,
        ForceSector::FreeSpace => matches!(f, Formulation::Ph | Formulation::DkFolded),
        ForceSector::VpStress => f == Formulation::Vp,
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "unsupported combination: no {sector} formula is printed for {f}"
        )))
    }
}

/// One output row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub beta: f64,
    pub z: f64,
    pub t1: f64,
    pub t2: f64,
    pub omega_p: f64,
    pub gamma_d: f64,
    pub alpha0: f64,
    pub omega0: f64,
    pub gamma_a: f64,
    pub formulation: String,
    pub sector: String,
    /// `NaN` when there is no value; JSON writes it as `null`.
    #[serde(deserialize_with = "null_as_nan")]
    pub value: f64,
    #[serde(deserialize_with = "null_as_nan")]
    pub error: f64,
    pub evals: u64,
    pub status: String,
}

impl OutputRecord {
    fn new(p: &ScenarioParams, formulation: String, sector: ForceSector) -> Self {
        Self {
            beta: p.kin.beta(),
            z: p.kin.z(),
            t1: p.thermal.t1(),
            t2: p.thermal.t2(),
            omega_p: p.surface.omega_p(),
            gamma_d: p.surface.gamma_d(),
            alpha0: p.particle.alpha0(),
            omega0: p.particle.omega0(),
            gamma_a: p.particle.gamma_a(),
            formulation,
            sector: sector.label().to_string(),
            value: 0.0,
            error: 0.0,
            evals: 0,
            status: String::new(),
        }
    }

    fn from_force(
        p: &ScenarioParams,
        f: Formulation,
        sector: ForceSector,
        r: &Result<ForceResult, ForceError>,
    ) -> Self {
        let mut rec = Self::new(p, f.label().to_string(), sector);
        match r {
            Ok(r) => {
                rec.value = r.value;
                rec.error = r.error_estimate;
                rec.evals = r.evals;
                rec.status = "ok".into();
            }
            Err(e) => rec.set_error(e),
        }
        rec
    }

    fn set_error(&mut self, e: &ForceError) {
        match e {
            ForceError::Nonconverged { value, error, evals } => {
                self.value = *value;
                self.error = *error;
                self.evals = *evals;
                self.status = "nonconverged".into();
            }
            ForceError::Indeterminate { denominator, .. } => {
                self.value = f64::NAN;
                self.error = denominator.abs();
                self.status = "indeterminate".into();
            }
            _ => {
                self.value = f64::NAN;
                self.status = "error".into();
            }
        }
    }

    /// Ratio row: `formulation` is `a/b`, `value` the measured ratio and
    /// `error` its propagated quadrature error.
    fn from_ratio(
        p: &ScenarioParams,
        pair: (Formulation, Formulation),
        sector: ForceSector,
        r: &Result<RatioReport, ForceError>,
    ) -> Self {
        let mut rec = Self::new(p, format!("{}/{}", pair.0, pair.1), sector);
        match r {
            Ok(r) => {
                let (a, b) = (r.numerator, r.denominator);
                rec.value = r.measured_ratio;
                rec.error = r.measured_ratio.abs()
                    * (a.error_estimate / a.value.abs() + b.error_estimate / b.value.abs());
                rec.evals = a.evals + b.evals;
                rec.status = if r.pass { "pass" } else { "fail" }.into();
            }
            Err(e) => rec.set_error(e),
        }
        rec
    }

    fn from_entry(grid: &[ScenarioParams], e: &SuiteEntry) -> Self {
        Self::from_ratio(&grid[e.scenario_index], e.pair, e.sector, &e.outcome)
    }
}

fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Renders `x` with 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Writes `records` as CSV (with the fixed header) or as a JSON array.
pub fn emit_records(records: &[OutputRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(128 * (records.len() + 1));
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in records {
                let floats = [
                    r.beta, r.z, r.t1, r.t2, r.omega_p, r.gamma_d, r.alpha0, r.omega0, r.gamma_a,
                ];
                for x in floats {
                    out.push_str(&format_float(x));
                    out.push(',');
                }
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.formulation,
                    r.sector,
                    format_float(r.value),
                    format_float(r.error),
                    r.evals,
                    r.status
                );
            }
            out
        }
        OutputFormat::Json => {
            // Non-finite values have no JSON representation and become null.
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
    }
}

/// Records produced by a run and the exit code they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub records: Vec<OutputRecord>,
    pub exit_code: i32,
}

fn exit_for(records: &[OutputRecord]) -> i32 {
    if records.iter().any(|r| matches!(r.status.as_str(), "fail" | "error")) {
        EXIT_VERIFICATION
    } else if records.iter().any(|r| r.status == "nonconverged") {
        EXIT_CONVERGENCE
    } else {
        EXIT_OK
    }
}

/// Draws an evanescent mode `|q| > |ω|` with `ω ∈ [−4, 4]`.
fn random_evanescent_mode(rng: &mut ChaCha8Rng) -> ModePoint {
    loop {
        let omega: f64 = rng.random_range(-4.0..4.0);
        let q = omega.abs() + rng.random_range(0.01..6.0);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let mode = ModePoint::new(omega, q * theta.cos(), q * theta.sin());
        if omega != 0.0 && mode.transverse.value > 0.0 {
            return mode;
        }
    }
}

/// Largest relative symmetry residual of the PH evanescent integrand over
/// `n` seeded random modes.
pub fn symmetry_sample(p: &ScenarioParams, n: usize, seed: u64) -> Result<f64, ForceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let mode = random_evanescent_mode(&mut rng);
        let scale = ev_integrand(Formulation::Ph, &mode, p)?.abs();
        if scale > 0.0 {
            worst = worst.max(symmetry_residual(&mode, p)? / scale);
        }
    }
    Ok(worst)
}

fn symmetry_record(p: &ScenarioParams, n: usize, seed: u64) -> OutputRecord {
    let mut rec = OutputRecord::new(p, "ph-symmetry".into(), ForceSector::Evanescent);
    rec.evals = 2 * n as u64;
    match symmetry_sample(p, n, seed) {
        Ok(worst) => {
            rec.value = worst;
            rec.status = if worst <= SYMMETRY_TOLERANCE { "pass" } else { "fail" }.into();
        }
        Err(e) => rec.set_error(&e),
    }
    rec
}

/// Every printed (formulation, sector) pair.
pub const SUPPORTED_PAIRS: [(Formulation, ForceSector); 10] = [
    (Formulation::Ph, ForceSector::Evanescent),
    (Formulation::Vp, ForceSector::Evanescent),
    (Formulation::DkFolded, ForceSector::Evanescent),
    (Formulation::DkQuadrant, ForceSector::Evanescent),
    (Formulation::Ph, ForceSector::PropSurface),
    (Formulation::DkFolded, ForceSector::PropSurface),
    (Formulation::DkQuadrant, ForceSector::PropSurface),
    (Formulation::Ph, ForceSector::FreeSpace),
    (Formulation::DkFolded, ForceSector::FreeSpace),
    (Formulation::Vp, ForceSector::VpStress),
];

/// Equilibrium scenario used for the null checks: at rest, equal temperatures.
fn null_scenario() -> ScenarioParams {
    ScenarioParams::new(0.0, 1.0, 0.3, 0.3, default_surface(), default_particle())
        .expect("valid equilibrium scenario")
}

fn null_records(spec: &QuadratureSpec) -> Vec<OutputRecord> {
    let p = null_scenario();
    SUPPORTED_PAIRS
        .iter()
        .map(|&(f, s)| {
            let r = force(f, s, &p, spec);
            let mut rec = OutputRecord::from_force(&p, f, s, &r);
            if let Ok(r) = r {
                let null = r.value.abs() <= spec.abs_floor;
                rec.status = if null { "pass" } else { "fail" }.into();
            }
            rec
        })
        .collect()
}

fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

fn run_inner(config: &RunConfig) -> RunOutcome {
    let p = &config.scenario;
    let spec = &config.spec;
    let records = match config.command {
        CommandKind::Force => {
            let r = force(config.formulation, config.sector, p, spec);
            vec![OutputRecord::from_force(p, config.formulation, config.sector, &r)]
        }
        CommandKind::Sweep => map_ordered(&config.sweep_points, |q| {
            let r = force(config.formulation, config.sector, q, spec);
            OutputRecord::from_force(q, config.formulation, config.sector, &r)
        }),
        CommandKind::Compare => {
            let (a, b, s) = (config.formulation, config.reference, config.sector);
            let fa = force(a, s, p, spec);
            let fb = force(b, s, p, spec);
            let ratio = match (&fa, &fb) {
                (Ok(x), Ok(y)) => crate::equivalence::ratio_from_forces(*x, *y, p, spec),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            vec![
                OutputRecord::from_force(p, a, s, &fa),
                OutputRecord::from_force(p, b, s, &fb),
                OutputRecord::from_ratio(p, (a, b), s, &ratio),
            ]
        }
        CommandKind::Verify => {
            let grid = default_grid();
            let mut records: Vec<OutputRecord> = match prefactor_suite(&grid, spec) {
                Ok(report) => report.entries.iter().map(|e| OutputRecord::from_entry(&grid, e)).collect(),
                Err(e) => {
                    let mut rec = OutputRecord::new(&grid[0], "suite".into(), ForceSector::Evanescent);
                    rec.set_error(&e);
                    vec![rec]
                }
            };
            let n = config.count.unwrap_or(DEFAULT_SYMMETRY_SAMPLES);
            records.push(symmetry_record(p, n, config.seed));
            records.extend(null_records(spec));
            records
        }
        CommandKind::CheckSymmetry => {
            let n = config.count.unwrap_or(DEFAULT_SYMMETRY_SAMPLES);
            vec![symmetry_record(p, n, config.seed)]
        }
    };
    let exit_code = exit_for(&records);
    RunOutcome { records, exit_code }
}

/// Executes a validated configuration on a pool of `config.jobs` threads.
pub fn run(config: &RunConfig) -> RunOutcome {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build() {
            Ok(pool) => pool.install(|| run_inner(config)),
            Err(_) => run_inner(config),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_inner(config)
    }
}

/// Entry point of the binary: parses, runs, prints and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    // Help and version requests are not errors.
    if let Err(e) = Cli::try_parse_from(&argv) {
        if !e.use_stderr() {
            let _ = e.print();
            return EXIT_OK;
        }
    }
    let config = match parse_config(&argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    let outcome = run(&config);
    print!("{}", emit_records(&outcome.records, config.output));
    outcome.exit_code
}
