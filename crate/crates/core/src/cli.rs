//! Command-line front end.
//!
//! Every command writes its data either to `--out` or to standard output.
//! JSON documents carry a `manifest` object and CSV files start with a
//! `# manifest: {...}` comment line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::channels::{optimal_cloning_fidelity, postselected_cloning_fidelity, postselected_unot_fidelity};
use crate::detection::{
    simulate_cloning_run, simulate_unot_run, write_z_scan_csv, z_scan, DetectorModel, ExperimentConfig,
    Measurement,
};
use crate::dynamics::{evolve_qubit, nm_clone_state};
use crate::error::{Error, Result};
use crate::fock::{StateVector, DEFAULT_CUTOFF};
use crate::params::{AmplifierParams, PolarizationQubit};
use crate::table::sig12;
use crate::universality::{bloch_fidelity_scan, fidelity_spread, write_bloch_csv};
use crate::wigner::{negativity_scan, Axis, GridSpec, PhasePoint, PlaneSpec};

#[derive(Debug, Parser)]
#[command(name = "qiopa", version, about = "Quantum-injected parametric amplifier simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a single-photon qubit and write the output state as JSON.
    Evolve(EvolveArgs),
    /// Postselected fidelities for one qubit, or a seeded Bloch-sphere scan.
    Fidelity(FidelityArgs),
    /// Scan the Wigner function on a 2-plane.
    Wigner(WignerArgs),
    /// Monte-Carlo coincidence experiment driven by a JSON config.
    Experiment(ExperimentArgs),
    /// Ideal N→M cloner state and its optimal fidelity.
    NmState(NmArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AmpArgs {
    /// Gain g.
    #[arg(long, default_value_t = 0.11, allow_hyphen_values = true)]
    pub gain: f64,
    /// Intrinsic phase Φ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phase: f64,
}

impl AmpArgs {
    fn params(&self) -> Result<AmplifierParams> {
        AmplifierParams::new(self.gain, self.phase)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub amp: AmpArgs,
    /// Preset (H, V, D, L) or `a_re,a_im,b_re,b_im`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_text")]
    pub qubit: PolarizationQubit,
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: u32,
    #[arg(long, default_value = "state.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct FidelityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub amp: AmpArgs,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "scan", conflicts_with = "scan")]
    #[serde(serialize_with = "opt_text")]
    pub qubit: Option<PolarizationQubit>,
    /// Number of Haar-random qubits scanned after H, D and L.
    #[arg(long, requires = "seed")]
    pub scan: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct WignerArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub amp: AmpArgs,
    /// First scanned axis, e.g. `alpha1.re`.
    #[arg(long, default_value = "alpha1.re")]
    pub axis1: String,
    /// Second scanned axis, e.g. `alpha1.im`.
    #[arg(long, default_value = "alpha1.im")]
    pub axis2: String,
    /// Grid on axis 1 as `min:max:points`.
    #[arg(long, default_value = "-2:2:81", allow_hyphen_values = true)]
    pub grid1: String,
    /// Grid on axis 2 as `min:max:points`.
    #[arg(long, default_value = "-2:2:81", allow_hyphen_values = true)]
    pub grid2: String,
    /// Base point as eight reals: alpha1, alpha2, beta1, beta2 (re, im each).
    #[arg(long, allow_hyphen_values = true)]
    pub base: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentMode {
    Clone,
    Unot,
    Zscan,
}

#[derive(Debug, Args, Serialize)]
pub struct ExperimentArgs {
    /// JSON experiment file.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum)]
    pub mode: ExperimentMode,
    /// Overrides the seed in the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the trial count in the config file.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Z grid as `min:max:points`; overrides the config file.
    #[arg(long, allow_hyphen_values = true)]
    pub z_grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct NmArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value = "nm_state.json")]
    pub out: PathBuf,
}

fn as_text<S: serde::Serializer>(q: &PolarizationQubit, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{},{},{},{}", q.alpha.re, q.alpha.im, q.beta.re, q.beta.im))
}

fn opt_text<S: serde::Serializer>(q: &Option<PolarizationQubit>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => as_text(q, s),
        None => s.serialize_none(),
    }
}

/// Experiment file: the run configuration plus apparatus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentFile {
    pub experiment: ExperimentConfig,
    #[serde(default = "DetectorModel::ideal")]
    pub detectors: DetectorModel,
    /// Measurement performed at each point of a Z scan.
    #[serde(default = "default_measurement")]
    pub scan_measurement: Measurement,
    #[serde(default)]
    pub z_grid: Option<GridSpec>,
}

fn default_measurement() -> Measurement {
    Measurement::Clone
}

/// Provenance attached to every emitted file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new<T: Serialize>(command: &str, args: &T, seed: Option<u64>, out: Option<&Path>) -> Self {
        Self {
            command: command.to_string(),
            parameters: serde_json::to_value(args).unwrap_or(Value::Null),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: out.map(|p| p.display().to_string()).into_iter().collect(),
        }
    }

    fn csv_line(&self) -> String {
        format!("# manifest: {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }
}

fn with_manifest(body: Value, manifest: &RunManifest) -> Value {
    match body {
        Value::Object(mut map) => {
            map.insert("manifest".into(), json!(manifest));
            Value::Object(map)
        }
        other => json!({ "manifest": manifest, "data": other }),
    }
}

fn io_err(path: Option<&Path>, e: std::io::Error) -> Error {
    match path {
        Some(p) => Error::InvalidArguments(format!("cannot write {}: {e}", p.display())),
        None => Error::InvalidArguments(format!("cannot write output: {e}")),
    }
}

/// Writes `bytes` to `path` (or `stdout`), then the summary. The summary goes
/// to stdout only when the data went to a file.
fn emit(path: Option<&Path>, bytes: &[u8], summary: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => {
            fs::write(p, bytes).map_err(|e| io_err(Some(p), e))?;
            stdout.write_all(summary.as_bytes()).map_err(|e| io_err(None, e))?;
        }
        None => {
            stdout.write_all(bytes).map_err(|e| io_err(None, e))?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s.into_bytes()
}

fn parse_grid(text: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidArguments(format!("grid `{text}` must be min:max:points"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
    GridSpec::new(min, max, points)
}

fn parse_base(text: &str) -> Result<PhasePoint> {
    let xs: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidArguments(format!("base `{text}` is not a list of numbers")))?;
    let arr: [f64; 8] = xs
        .try_into()
        .map_err(|_| Error::InvalidArguments("base point needs eight reals".into()))?;
    Ok(PhasePoint::from_real(&arr))
}

fn state_json(state: &StateVector, manifest: &RunManifest) -> Value {
    with_manifest(serde_json::to_value(state).expect("state serializes"), manifest)
}

fn cmd_evolve(args: &EvolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let params = args.amp.params()?;
    let state = evolve_qubit(&args.qubit, &params, args.cutoff)?;
    let manifest = RunManifest::new("evolve", args, None, Some(&args.out));
    let summary = format!(
        "leakage = {}\nnorm = {}\nkets = {}\n",
        sig12(state.leakage()),
        sig12(state.norm_sqr().sqrt()),
        state.len()
    );
    emit(Some(&args.out), &json_bytes(&state_json(&state, &manifest)), &summary, stdout)
}

fn cmd_fidelity(args: &FidelityArgs, stdout: &mut dyn Write) -> Result<()> {
    let params = args.amp.params()?;
    let out = args.out.as_deref();
    let manifest = RunManifest::new("fidelity", args, args.seed, out);
    if let Some(samples) = args.scan {
        let seed = args.seed.ok_or_else(|| Error::InvalidArguments("--scan requires --seed".into()))?;
        let rows = bloch_fidelity_scan(&params, samples, seed)?;
        let mut buf = manifest.csv_line().into_bytes();
        write_bloch_csv(&rows, &mut buf).map_err(|e| io_err(None, e))?;
        let spread = fidelity_spread(&rows).map_or("empty".to_string(), sig12);
        let summary = format!("rows = {}\nF spread = {spread}\n", rows.len());
        return emit(out, &buf, &summary, stdout);
    }
    let qubit = args.qubit.ok_or_else(|| Error::InvalidArguments("--qubit or --scan is required".into()))?;
    let state = evolve_qubit(&qubit, &params, 3)?;
    let clone = postselected_cloning_fidelity(&state, &qubit)?;
    let unot = postselected_unot_fidelity(&state, &qubit)?;
    debug_assert!((clone.f_star - unot.f_star).abs() < 1e-12);
    let body = with_manifest(serde_json::to_value(clone).expect("report serializes"), &manifest);
    let summary = format!("F = {}\nF* = {}\n", sig12(clone.f), sig12(clone.f_star));
    emit(out, &json_bytes(&body), &summary, stdout)
}

fn cmd_wigner(args: &WignerArgs, stdout: &mut dyn Write) -> Result<()> {
    let params = args.amp.params()?;
    let axis1: Axis = args.axis1.parse()?;
    let axis2: Axis = args.axis2.parse()?;
    let base = match &args.base {
        Some(b) => parse_base(b)?,
        None => PhasePoint::from_real(&[0.0; 8]),
    };
    let plane = PlaneSpec { axis1, axis2, base };
    let scan = negativity_scan(&plane, &parse_grid(&args.grid1)?, &parse_grid(&args.grid2)?, &params)?;
    let manifest = RunManifest::new("wigner", args, None, args.out.as_deref());
    let mut buf = manifest.csv_line().into_bytes();
    scan.write_csv(&mut buf).map_err(|e| io_err(None, e))?;
    let summary = format!(
        "min_W = {}\nnegative_fraction = {}\n",
        sig12(scan.min_w),
        sig12(scan.negative_fraction)
    );
    emit(args.out.as_deref(), &buf, &summary, stdout)
}

/// Reads and validates an experiment file.
pub fn load_experiment(path: &Path) -> Result<ExperimentFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArguments(format!("cannot read config {}: {e}", path.display())))?;
    let file: ExperimentFile = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArguments(format!("invalid config {}: {e}", path.display())))?;
    file.experiment.validate()?;
    file.detectors.validate()?;
    Ok(file)
}

fn cmd_experiment(args: &ExperimentArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut file = load_experiment(&args.config)?;
    if let Some(s) = args.seed {
        file.experiment.seed = s;
    }
    if let Some(t) = args.trials {
        file.experiment.trials = t;
    }
    let cfg = file.experiment;
    let out = args.out.as_deref();
    let mut manifest = RunManifest::new("experiment", args, Some(cfg.seed), out);
    if let Value::Object(map) = &mut manifest.parameters {
        map.insert("resolved".into(), serde_json::to_value(&file).expect("config serializes"));
    }
    match args.mode {
        ExperimentMode::Zscan => {
            let grid = match &args.z_grid {
                Some(g) => parse_grid(g)?,
                None => file
                    .z_grid
                    .ok_or_else(|| Error::InvalidArguments("z scan needs --z-grid or a z_grid entry".into()))?,
            };
            let zs: Vec<f64> = (0..grid.points).map(|i| grid.value(i)).collect();
            let rows = z_scan(&cfg, &file.detectors, file.scan_measurement, &zs)?;
            let mut buf = manifest.csv_line().into_bytes();
            write_z_scan_csv(&rows, &cfg, &file.detectors, file.scan_measurement, &mut buf)
                .map_err(|e| io_err(None, e))?;
            emit(out, &buf, &format!("rows = {}\n", rows.len()), stdout)
        }
        mode => {
            let report = if mode == ExperimentMode::Clone {
                simulate_cloning_run(&cfg, &file.detectors)?
            } else {
                simulate_unot_run(&cfg, &file.detectors)?
            };
            let body = with_manifest(serde_json::to_value(report).expect("report serializes"), &manifest);
            let summary = format!(
                "signal = {}\nnoise = {}\nratio = {} +- {}\nfidelity = {} +- {}\n",
                report.signal,
                report.noise,
                sig12(report.ratio),
                sig12(report.ratio_se),
                sig12(report.fidelity),
                sig12(report.fidelity_se)
            );
            emit(out, &json_bytes(&body), &summary, stdout)
        }
    }
}

fn cmd_nm_state(args: &NmArgs, stdout: &mut dyn Write) -> Result<()> {
    let f = optimal_cloning_fidelity(args.n as u64, args.m as u64)?;
    let state = nm_clone_state(args.n, args.m)?;
    let manifest = RunManifest::new("nm-state", args, None, Some(&args.out));
    let mut body = state_json(&state, &manifest);
    body["fidelity"] = json!(f.to_string());
    let summary = format!("F = {f}\n");
    emit(Some(&args.out), &json_bytes(&body), &summary, stdout)
}

/// Runs a parsed command, writing data and summaries to `stdout`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Evolve(a) => cmd_evolve(a, stdout),
        Command::Fidelity(a) => cmd_fidelity(a, stdout),
        Command::Wigner(a) => cmd_wigner(a, stdout),
        Command::Experiment(a) => cmd_experiment(a, stdout),
        Command::NmState(a) => cmd_nm_state(a, stdout),
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
