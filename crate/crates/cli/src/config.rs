//! Experiment configuration: parsed from the command line, validated and
//! normalized, and echoed verbatim into the JSON sidecar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qchaos_core::sawtooth::SawtoothParams;
use serde::{Deserialize, Serialize};

/// Kick strength and classicality used when neither is given.
pub const DEFAULT_K: f64 = 0.273;
pub const DEFAULT_BIG_K: f64 = 1.5;

#[derive(Debug, Parser)]
#[command(name = "qchaos", version, about = "Gate-level quantum chaos experiments with CSV/JSON output")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CommonArgs {
    /// Master seed for every random stream of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for the CSV and JSON outputs.
    #[arg(long, global = true, env = "QCHAOS_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
    /// File stem of the outputs; defaults to the subcommand name.
    #[arg(long, global = true)]
    pub prefix: Option<String>,
    /// Upper bound on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Evolve an action eigenstate and write the action distribution W_m.
    SawtoothEvolve(EvolveArgs),
    /// Time-averaged Husimi function on a theta x action grid.
    Husimi(HusimiArgs),
    /// Localization peak under noise: noiseless, exact noisy and sampled W_m.
    Localization(LocalizationArgs),
    /// Classical ensemble diffusion, optionally with the quantum second moment.
    Diffusion(DiffusionArgs),
    /// Fidelity decay under a kick perturbation, direct and via the Ramsey circuit.
    Fidelity(FidelityArgs),
    /// Split-step Schrödinger evolution of a Gaussian packet.
    Schrodinger(SchrodingerArgs),
    /// Quantum volume from a constant, tabulated or estimated error rate.
    Qvolume(QvolumeArgs),
    /// Print a circuit in the line-oriented text format.
    DumpCircuit(DumpArgs),
    /// Re-run the experiment recorded in a JSON sidecar.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SawtoothEvolve(_) => "sawtooth-evolve",
            Command::Husimi(_) => "husimi",
            Command::Localization(_) => "localization",
            Command::Diffusion(_) => "diffusion",
            Command::Fidelity(_) => "fidelity",
            Command::Schrodinger(_) => "schrodinger",
            Command::Qvolume(_) => "qvolume",
            Command::DumpCircuit(_) => "dump-circuit",
            Command::Replay(_) => "replay",
        }
    }
}

/// Map parameters. Any two of `k`, `T`, `kT` fix the third; missing values
/// default to `kT = 1.5` and `k = 0.273`.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MapArgs {
    /// Number of qubits; the map has N = 2^n levels.
    #[arg(long)]
    pub n: usize,
    /// Kick strength k.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Kick period T.
    #[arg(long = "T", allow_negative_numbers = true)]
    pub period: Option<f64>,
    /// Classicality parameter K = kT.
    #[arg(long = "kT", allow_negative_numbers = true)]
    pub big_k: Option<f64>,
    /// Initial action eigenvalue, in [-N/2, N/2).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m0: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evolution {
    /// Gate-by-gate circuit.
    Gates,
    /// FFT split-operator reference.
    Reference,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Number of map steps.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub t: i64,
    /// Average W_m over steps `average_from..=t` instead of reporting step `t`.
    #[arg(long, allow_negative_numbers = true)]
    pub average_from: Option<i64>,
    #[arg(long, value_enum, default_value_t = Evolution::Gates)]
    pub method: Evolution,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct HusimiArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// First step of the averaging window.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub t_from: i64,
    /// Last step of the averaging window.
    #[arg(long, allow_negative_numbers = true)]
    pub t: i64,
    #[arg(long, default_value_t = 64, allow_negative_numbers = true)]
    pub n_theta: i64,
    #[arg(long, default_value_t = 64, allow_negative_numbers = true)]
    pub n_action: i64,
    #[arg(long, value_enum, default_value_t = Evolution::Gates)]
    pub method: Evolution,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct NoiseArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p_dephase: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p_relax: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p_readout: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LocalizationArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub t: i64,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Measurements per repetition.
    #[arg(long, default_value_t = 8192, allow_negative_numbers = true)]
    pub shots: i64,
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    pub repetitions: i64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DiffusionArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Classical trajectories.
    #[arg(long, default_value_t = 100_000, allow_negative_numbers = true)]
    pub ensemble: i64,
    #[arg(long, default_value_t = 50, allow_negative_numbers = true)]
    pub t_max: i64,
    /// Also average the quantum second moment over this many initial actions
    /// spread evenly over the register.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub quantum_starts: i64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Perturbation of the kick strength, k -> k + eps_k.
    #[arg(long, allow_negative_numbers = true)]
    pub eps_k: f64,
    #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
    pub t_max: i64,
    /// Also estimate the polarizations from this many simulated shots.
    #[arg(long, allow_negative_numbers = true)]
    pub shots: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    Free,
    /// `m omega^2 x^2 / 2`.
    Harmonic,
    /// `a x^4 - b x^2`.
    DoubleWell,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SchrodingerArgs {
    /// Qubits of the position register.
    #[arg(long)]
    pub n: usize,
    /// Half-width of the box [-d, d].
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub d: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub dt: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub steps: i64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub hbar: f64,
    #[arg(long, value_enum, default_value_t = PotentialKind::Harmonic)]
    pub potential: PotentialKind,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub well_a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub well_b: f64,
    /// Initial packet centre.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,
    /// Initial packet width.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Initial mean momentum.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long, default_value_t = 16)]
    pub ancilla_bits: usize,
    /// Fixed `v_min,v_max` for the ancilla encoding instead of the grid's range.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub potential_range: Option<Vec<f64>>,
    /// Use the n^2-gate quadratic construction instead of the ancilla table.
    #[arg(long)]
    pub fast_path: bool,
    /// Record observables every this many steps.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub record_every: i64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct QvolumeArgs {
    /// Machine qubit count.
    #[arg(long)]
    pub n: usize,
    /// Constant effective error rate.
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Comma-separated error rates for kappa = 1..=n.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub eps_table: Option<Vec<f64>>,
    /// Estimate the error rates from random two-qubit circuits under noise.
    #[arg(long)]
    pub estimate: bool,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
    pub sequences: i64,
    /// Layer counts of the estimator circuits.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub depths: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DumpArgs {
    #[arg(long)]
    pub n: usize,
    /// One sawtooth map step (needs the map parameters, defaulted if absent).
    #[arg(long)]
    pub map_step: bool,
    /// The quantum Fourier transform.
    #[arg(long)]
    pub qft: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long = "T", allow_negative_numbers = true)]
    pub period: Option<f64>,
    #[arg(long = "kT", allow_negative_numbers = true)]
    pub big_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Sidecar written by an earlier run.
    pub sidecar: PathBuf,
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub prefix: String,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_cli(cli: Cli) -> Self {
        let prefix = cli.common.prefix.unwrap_or_else(|| cli.command.name().to_string());
        ExperimentConfig {
            command: cli.command,
            seed: cli.common.seed,
            out_dir: cli.common.out_dir,
            prefix,
            threads: cli.common.threads,
        }
    }
}

/// Collects every problem with a configuration so they can be reported together.
#[derive(Debug, Default)]
pub struct Validation {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl Validation {
    fn error(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
    }

    fn at_least(&mut self, name: &str, value: i64, min: i64) {
        if value < min {
            self.error(format!("{name} must be at least {min}, got {value}"));
        }
    }

    fn probability(&mut self, name: &str, p: f64) {
        if !(0.0..=1.0).contains(&p) {
            self.error(format!("{name} must lie in [0, 1], got {p}"));
        }
    }

    fn positive(&mut self, name: &str, x: f64) {
        if !(x > 0.0 && x.is_finite()) {
            self.error(format!("{name} must be positive, got {x}"));
        }
    }
}

/// Resolves `(k, T, kT)` from any subset, filling defaults.
fn resolve_map(k: Option<f64>, period: Option<f64>, big_k: Option<f64>, v: &mut Validation) -> (f64, f64, f64) {
    for (name, x) in [("k", k), ("T", period), ("kT", big_k)] {
        if let Some(x) = x {
            if !x.is_finite() {
                v.error(format!("{name} must be finite, got {x}"));
            }
        }
    }
    let (k, period, big_k) = match (k, period, big_k) {
        (Some(k), Some(t), Some(bk)) => {
            if (k * t - bk).abs() > 1e-12 * bk.abs().max(1.0) {
                v.error(format!("k = {k} and T = {t} give kT = {}, not {bk}", k * t));
            }
            (k, t, bk)
        }
        (Some(k), Some(t), None) => (k, t, k * t),
        (Some(k), None, bk) => {
            let bk = bk.unwrap_or(DEFAULT_BIG_K);
            (k, bk / k, bk)
        }
        (None, Some(t), bk) => {
            let bk = bk.unwrap_or(DEFAULT_BIG_K);
            (bk / t, t, bk)
        }
        (None, None, bk) => {
            let bk = bk.unwrap_or(DEFAULT_BIG_K);
            (DEFAULT_K, bk / DEFAULT_K, bk)
        }
    };
    if k == 0.0 || period == 0.0 || !k.is_finite() || !period.is_finite() {
        v.error(format!("k and T must be finite and non-zero (k = {k}, T = {period})"));
    }
    if (-4.0..=0.0).contains(&big_k) {
        v.warnings.push(format!(
            "kT = {big_k} lies in [-4, 0]: integrable/quasi-integrable regime, no chaotic diffusion expected"
        ));
    }
    (k, period, big_k)
}

fn check_width(n: usize, max: usize, v: &mut Validation) {
    if n == 0 || n > max {
        v.error(format!("n must lie in 1..={max}, got {n}"));
    }
}

/// Largest register any subcommand accepts.
pub const MAX_QUBITS: usize = 24;

impl MapArgs {
    fn normalize(&mut self, v: &mut Validation) {
        check_width(self.n, MAX_QUBITS, v);
        let (k, t, bk) = resolve_map(self.k, self.period, self.big_k, v);
        (self.k, self.period, self.big_k) = (Some(k), Some(t), Some(bk));
        if (1..=MAX_QUBITS).contains(&self.n) {
            let half = 1i64 << (self.n - 1);
            if self.m0 < -half || self.m0 >= half {
                v.error(format!("m0 must lie in [{}, {half}), got {}", -half, self.m0));
            }
        }
    }

    /// Only valid after a successful [`validate_config`].
    pub fn params(&self) -> SawtoothParams {
        let k = self.k.expect("normalized");
        let period = self.period.expect("normalized");
        SawtoothParams::new(self.n, k, period, self.m0).expect("validated map parameters")
    }
}

impl NoiseArgs {
    fn check(&self, v: &mut Validation) {
        v.probability("p_dephase", self.p_dephase);
        v.probability("p_relax", self.p_relax);
        v.probability("p_readout", self.p_readout);
    }
}

/// Range checks and default filling. Returns the normalized configuration
/// with its warnings, or every error found.
pub fn validate_config(mut config: ExperimentConfig) -> Result<(ExperimentConfig, Vec<String>), Vec<String>> {
    let mut v = Validation::default();
    if config.prefix.is_empty() || config.prefix.contains(['/', '\\']) {
        v.error(format!("prefix `{}` must be a non-empty file stem", config.prefix));
    }
    if config.threads == Some(0) {
        v.error("threads must be at least 1");
    }
    match &mut config.command {
        Command::SawtoothEvolve(a) => {
            a.map.normalize(&mut v);
            v.at_least("t", a.t, 0);
            if let Some(from) = a.average_from {
                if from < 0 || from > a.t {
                    v.error(format!("average_from must lie in [0, t = {}], got {from}", a.t));
                }
            }
        }
        Command::Husimi(a) => {
            a.map.normalize(&mut v);
            v.at_least("t_from", a.t_from, 0);
            if a.t < a.t_from {
                v.error(format!("t = {} must not precede t_from = {}", a.t, a.t_from));
            }
            v.at_least("n_theta", a.n_theta, 1);
            v.at_least("n_action", a.n_action, 1);
        }
        Command::Localization(a) => {
            a.map.normalize(&mut v);
            v.at_least("t", a.t, 0);
            a.noise.check(&mut v);
            v.at_least("shots", a.shots, 1);
            v.at_least("repetitions", a.repetitions, 1);
        }
        Command::Diffusion(a) => {
            a.map.normalize(&mut v);
            v.at_least("ensemble", a.ensemble, 2);
            v.at_least("t_max", a.t_max, 2);
            v.at_least("quantum_starts", a.quantum_starts, 0);
            if a.map.n <= MAX_QUBITS && a.quantum_starts > (1i64 << a.map.n) {
                v.error(format!("quantum_starts cannot exceed the {} levels", 1u64 << a.map.n));
            }
        }
        Command::Fidelity(a) => {
            a.map.normalize(&mut v);
            if a.map.n >= MAX_QUBITS {
                v.error(format!("the Ramsey circuit needs n + 1 <= {MAX_QUBITS} qubits"));
            }
            if !a.eps_k.is_finite() {
                v.error(format!("eps_k must be finite, got {}", a.eps_k));
            }
            v.at_least("t_max", a.t_max, 0);
            if let Some(s) = a.shots {
                v.at_least("shots", s, 1);
            }
        }
        Command::Schrodinger(a) => {
            check_width(a.n, MAX_QUBITS, &mut v);
            v.positive("d", a.d);
            if !(a.dt >= 0.0 && a.dt.is_finite()) {
                v.error(format!("dt must be non-negative, got {}", a.dt));
            }
            v.at_least("steps", a.steps, 1);
            v.positive("mass", a.mass);
            v.positive("hbar", a.hbar);
            v.positive("sigma", a.sigma);
            v.at_least("record_every", a.record_every, 1);
            if !(1..=40).contains(&a.ancilla_bits) {
                v.error(format!("ancilla_bits must lie in 1..=40, got {}", a.ancilla_bits));
            }
            if let Some(r) = &a.potential_range {
                if r.len() != 2 || !(r[0] < r[1]) {
                    v.error(format!("potential_range needs two increasing values, got {r:?}"));
                }
            }
            if a.fast_path && a.potential == PotentialKind::DoubleWell {
                v.error("the quadratic fast path cannot represent the double-well potential");
            }
        }
        Command::Qvolume(a) => {
            if a.n == 0 || a.n > 127 {
                v.error(format!("n must lie in 1..=127, got {}", a.n));
            }
            let sources = [a.eps.is_some(), a.eps_table.is_some(), a.estimate].iter().filter(|x| **x).count();
            if sources != 1 {
                v.error("give exactly one of --eps, --eps-table and --estimate");
            }
            if let Some(e) = a.eps {
                v.positive("eps", e);
            }
            if let Some(t) = &a.eps_table {
                if t.len() != a.n {
                    v.error(format!("eps_table needs {} entries, got {}", a.n, t.len()));
                }
                for e in t {
                    v.positive("eps_table entry", *e);
                }
            }
            if a.estimate {
                a.noise.check(&mut v);
                v.at_least("sequences", a.sequences, 1);
                if a.n < 2 {
                    v.error("estimating error rates needs n >= 2");
                }
                if a.depths.len() < 2 {
                    v.error("estimating error rates needs at least two depths");
                }
                for d in &a.depths {
                    v.at_least("depth", *d, 1);
                }
            }
        }
        Command::DumpCircuit(a) => {
            check_width(a.n, MAX_QUBITS, &mut v);
            if a.map_step == a.qft {
                v.error("choose exactly one of --map-step and --qft");
            }
            if a.map_step {
                let (k, t, bk) = resolve_map(a.k, a.period, a.big_k, &mut v);
                (a.k, a.period, a.big_k) = (Some(k), Some(t), Some(bk));
            }
        }
        Command::Replay(_) => {}
    }
    if v.errors.is_empty() {
        Ok((config, v.warnings))
    } else {
        Err(v.errors)
    }
}
