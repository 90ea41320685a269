//! Command-line front end: every experiment writes a data CSV and a JSON
//! sidecar holding the full configuration, seed, gate counts and timing.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use qchaos_core::Error;

use crate::commands::RunOutput;
use crate::config::{validate_config, Cli, Command, ExperimentConfig};
use crate::output::{write_files, Sidecar, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Parameter problems surfacing inside the simulation count as configuration
/// errors; everything else is a numerical failure.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::QubitOutOfRange { .. }
        | Error::BasisIndexOutOfRange { .. }
        | Error::Capacity { .. }
        | Error::SameQubit(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn execute(config: &ExperimentConfig) -> qchaos_core::Result<RunOutput> {
    let seed = config.seed;
    match &config.command {
        Command::SawtoothEvolve(a) => commands::sawtooth_evolve(a),
        Command::Husimi(a) => commands::husimi_command(a),
        Command::Localization(a) => commands::localization(a, seed),
        Command::Diffusion(a) => commands::diffusion(a, seed),
        Command::Fidelity(a) => commands::fidelity(a, seed),
        Command::Schrodinger(a) => commands::schrodinger(a),
        Command::Qvolume(a) => commands::qvolume(a, seed),
        Command::DumpCircuit(a) => commands::dump_circuit(a),
        Command::Replay(_) => unreachable!("replay is resolved before execution"),
    }
}

/// Runs a validated configuration and writes its outputs.
pub fn run_config(config: ExperimentConfig) -> i32 {
    let (config, warnings) = match validate_config(config) {
        Ok(v) => v,
        Err(errors) => {
            eprintln!("invalid configuration:");
            for e in errors {
                eprintln!("  - {e}");
            }
            return EXIT_CONFIG;
        }
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let start = Instant::now();
    let result = match config.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&config)),
            Err(e) => {
                eprintln!("cannot start {t} worker threads: {e}");
                return EXIT_CONFIG;
            }
        },
        None => execute(&config),
    };
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            eprintln!("{} failed: {e}", config.command.name());
            return exit_code(&e);
        }
    };
    let wall = start.elapsed().as_secs_f64();

    let mut files = vec![(format!("{}.csv", config.prefix), out.csv)];
    files.extend(out.extra.into_iter().map(|(ext, body)| (format!("{}.{ext}", config.prefix), body)));
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let mut all_warnings = warnings;
    all_warnings.extend(out.warnings);
    let sidecar = Sidecar {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        gate_total: out.gate_counts.total(),
        gate_counts: out.gate_counts,
        wall_time_seconds: wall,
        warnings: all_warnings,
        outputs: files.iter().map(|(name, _)| name.clone()).collect(),
        results: out.results,
        config: config.clone(),
    };
    let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes") + "\n";
    files.push((format!("{}.json", config.prefix), json));
    if let Err(e) = write_files(&config.out_dir, &files) {
        eprintln!("cannot write outputs to {}: {e}", config.out_dir.display());
        return EXIT_CONFIG;
    }
    if let Some(text) = out.stdout {
        print!("{text}");
    }
    EXIT_OK
}

/// Parses `argv` and runs it, returning the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let mut config = ExperimentConfig::from_cli(cli);
    if let Command::Replay(r) = &config.command {
        let recorded = match Sidecar::read(&r.sidecar) {
            Ok(s) => s.config,
            Err(e) => {
                eprintln!("{e}");
                return EXIT_CONFIG;
            }
        };
        if matches!(recorded.command, Command::Replay(_)) {
            eprintln!("a sidecar cannot record a replay");
            return EXIT_CONFIG;
        }
        // the recorded experiment, written where this invocation points
        let prefix = if config.prefix == "replay" { recorded.prefix.clone() } else { config.prefix.clone() };
        config = ExperimentConfig { out_dir: config.out_dir, prefix, ..recorded };
    }
    run_config(config)
}
