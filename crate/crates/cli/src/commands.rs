//! One function per subcommand, each turning a validated configuration into
//! CSV rows plus a JSON summary.

use std::fmt::Write as _;

use num_complex::Complex64;
use qchaos_core::classical::diffusion_coefficient;
use qchaos_core::noise::{localization_experiment, NoiseParams};
use qchaos_core::observables::{
    action_distribution, echo_blocks, fidelity_ramsey, fit_localization_length, husimi, second_moment,
    ActionDistribution, HusimiGridSpec,
};
use qchaos_core::qft::qft_circuit;
use qchaos_core::qvolume::{estimate_eps_eff, quantum_volume, EpsEff, QVolumeInput};
use qchaos_core::sawtooth::{action_eigenstate, map_step_circuit, SawtoothEvolver, SawtoothParams, SignedActionMap};
use qchaos_core::schrodinger::{discretize, trotter_evolve_with, EvolutionSettings, Potential, PotentialMethod, SpatialGrid};
use qchaos_core::{rng, Circuit, GateCounts, GateOp, Result, StateVector};
use serde_json::{json, Value};

use crate::config::*;

/// Data produced by one subcommand.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub csv: String,
    /// Additional files as `(extension, contents)`.
    pub extra: Vec<(String, String)>,
    /// Text echoed on standard output.
    pub stdout: Option<String>,
    pub gate_counts: GateCounts,
    pub results: Value,
    pub warnings: Vec<String>,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn scaled(c: &GateCounts, times: usize) -> GateCounts {
    GateCounts {
        hadamard: c.hadamard * times,
        phase_shift: c.phase_shift * times,
        cnot: c.cnot * times,
        two_qubit_diagonal: c.two_qubit_diagonal * times,
        controlled_phase: c.controlled_phase * times,
        multi_controlled_x: c.multi_controlled_x * times,
    }
}

fn evolver(params: &SawtoothParams, method: Evolution) -> Result<SawtoothEvolver> {
    match method {
        Evolution::Gates => SawtoothEvolver::gates(params),
        Evolution::Reference => Ok(SawtoothEvolver::reference(params)),
    }
}

fn distribution_summary(dist: &ActionDistribution) -> Value {
    let fit = match fit_localization_length(dist) {
        Ok(f) => json!({ "ell": f.ell, "r_squared": f.r_squared, "points": f.points }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    json!({
        "peak": dist.peak(),
        "mean": dist.mean(),
        "variance": second_moment(dist),
        "spread_about_m0": dist.spread_about_reference(),
        "localization_fit": fit,
    })
}

pub fn sawtooth_evolve(a: &EvolveArgs) -> Result<RunOutput> {
    let params = a.map.params();
    let ev = evolver(&params, a.method)?;
    let mut state = action_eigenstate(params.n, params.m0)?;
    let t = a.t as usize;
    let from = a.average_from.map(|f| f as usize);
    let mut acc = vec![0.0; params.dim()];
    let mut samples = 0usize;
    let mut record = |s: &StateVector, step: usize| {
        if from.is_some_and(|f| step >= f) {
            acc.iter_mut().zip(&action_distribution(s).w).for_each(|(x, w)| *x += w);
            samples += 1;
        }
    };
    record(&state, 0);
    for step in 1..=t {
        ev.step(&mut state)?;
        record(&state, step);
    }
    let dist = if from.is_some() {
        ActionDistribution::from_weights(acc, params.m0)?
    } else {
        action_distribution(&state).with_reference(params.m0)?
    };
    let mut csv = String::from("m,w\n");
    for (m, w) in dist.actions().zip(&dist.w) {
        let _ = writeln!(csv, "{m},{}", num(*w));
    }
    Ok(RunOutput {
        csv,
        gate_counts: scaled(&ev.gate_counts(), t),
        results: json!({ "distribution": distribution_summary(&dist), "averaged_steps": samples, "norm_drift": state.norm_drift() }),
        ..Default::default()
    })
}

pub fn husimi_command(a: &HusimiArgs) -> Result<RunOutput> {
    let params = a.map.params();
    let ev = evolver(&params, a.method)?;
    let spec = HusimiGridSpec::new(a.n_theta as usize, a.n_action as usize)?;
    let mut state = action_eigenstate(params.n, params.m0)?;
    let mut sum: Option<qchaos_core::observables::HusimiGrid> = None;
    let mut count = 0usize;
    for step in 0..=a.t as usize {
        if step > 0 {
            ev.step(&mut state)?;
        }
        if step >= a.t_from as usize {
            let g = husimi(&state, &spec)?;
            match &mut sum {
                None => sum = Some(g),
                Some(acc) => acc.values.iter_mut().zip(&g.values).for_each(|(x, y)| *x += y),
            }
            count += 1;
        }
    }
    let mut grid = sum.expect("window holds at least one step");
    grid.values.iter_mut().for_each(|v| *v /= count as f64);
    let mut csv = String::from("theta,action,q\n");
    for row in 0..spec.n_action {
        for col in 0..spec.n_theta {
            let _ = writeln!(csv, "{},{},{}", num(grid.theta(col)), num(grid.action(row)), num(grid.value(col, row)));
        }
    }
    Ok(RunOutput {
        csv,
        gate_counts: scaled(&ev.gate_counts(), a.t as usize),
        results: json!({
            "averaged_states": count,
            "sigma_theta": grid.sigma_theta,
            "sigma_action": grid.sigma_action,
            "integral": grid.integral(),
        }),
        warnings: grid.warning.into_iter().collect(),
        ..Default::default()
    })
}

fn noise_params(n: &NoiseArgs) -> Result<NoiseParams> {
    NoiseParams::new(n.p_dephase, n.p_relax, n.p_readout)
}

pub fn localization(a: &LocalizationArgs, seed: u64) -> Result<RunOutput> {
    let params = a.map.params();
    let table = localization_experiment(
        &params,
        &noise_params(&a.noise)?,
        a.t as usize,
        a.shots as u64,
        a.repetitions as usize,
        seed,
    )?;
    let mut csv = String::from("m,noiseless,noisy_exact,sampled_mean,sampled_std\n");
    for r in &table.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            r.m,
            num(r.noiseless),
            num(r.noisy_exact),
            num(r.sampled_mean),
            num(r.sampled_std)
        );
    }
    Ok(RunOutput {
        csv,
        gate_counts: table.gate_counts,
        results: json!({
            "peak_noiseless": table.peak_noiseless(),
            "peak_noisy_exact": table.peak_noisy_exact(),
            "peak_sampled": table.peak_sampled(),
            "noisy_method": format!("{:?}", table.noisy_method),
        }),
        ..Default::default()
    })
}

pub fn diffusion(a: &DiffusionArgs, seed: u64) -> Result<RunOutput> {
    let params = a.map.params();
    let t_max = a.t_max as usize;
    let fit = diffusion_coefficient(&params, a.ensemble as usize, t_max, seed)?;

    let starts = a.quantum_starts as usize;
    let mut quantum = Vec::new();
    let mut counts = GateCounts::default();
    if starts > 0 {
        let map = SignedActionMap::new(params.n);
        let ev = SawtoothEvolver::gates(&params)?;
        let dim = params.dim();
        let m0s: Vec<i64> = (0..starts).map(|j| map.signed(j * dim / starts)).collect();
        let mut states: Vec<StateVector> = m0s.iter().map(|&m| action_eigenstate(params.n, m)).collect::<Result<_>>()?;
        quantum.push(0.0);
        for _ in 1..=t_max {
            let mut q = 0.0;
            for (s, &m0) in states.iter_mut().zip(&m0s) {
                ev.step(s)?;
                q += action_distribution(s).with_reference(m0)?.spread_about_reference();
            }
            quantum.push(q / starts as f64);
        }
        counts = scaled(&ev.gate_counts(), t_max * starts);
    }
    let t_star = (1..quantum.len()).find(|&t| quantum[t] < 0.5 * fit.d * t as f64);

    let mut csv = String::from(if starts > 0 { "t,classical,fit,quantum\n" } else { "t,classical,fit\n" });
    for t in 0..=t_max {
        let _ = write!(csv, "{t},{},{}", num(fit.second_moment[t]), num(fit.d * t as f64));
        if starts > 0 {
            let _ = write!(csv, ",{}", num(quantum[t]));
        }
        csv.push('\n');
    }
    Ok(RunOutput {
        csv,
        gate_counts: counts,
        results: json!({
            "d": fit.d,
            "std_error": fit.std_error,
            "r_squared": fit.r_squared,
            "quantum_starts": starts,
            "t_star": t_star,
        }),
        warnings: fit.warning.into_iter().collect(),
        ..Default::default()
    })
}

pub fn fidelity(a: &FidelityArgs, seed: u64) -> Result<RunOutput> {
    let params = a.map.params();
    let perturbed = params.with_k(params.k + a.eps_k);
    let psi0 = action_eigenstate(params.n, params.m0)?;
    let (u, v) = (SawtoothEvolver::gates(&params)?, SawtoothEvolver::gates(&perturbed)?);
    let (mut x, mut y) = (psi0.clone(), psi0.clone());
    let shots = a.shots.map(|s| s as u64);
    let mut csv = String::from(if shots.is_some() {
        "t,direct,ramsey,sigma_z,sigma_y,sampled_fidelity\n"
    } else {
        "t,direct,ramsey,sigma_z,sigma_y\n"
    });
    let mut counts = GateCounts::default();
    let mut worst: f64 = 0.0;
    for t in 0..=a.t_max as usize {
        if t > 0 {
            u.step(&mut x)?;
            v.step(&mut y)?;
        }
        let direct = y.overlap(&x)?.norm_sqr();
        let spec = echo_blocks(&params, a.eps_k, t)?;
        let r = fidelity_ramsey(&psi0, &spec, shots, rng::derive(seed, t as u64))?;
        worst = worst.max((r.fidelity - direct).abs());
        let _ = write!(csv, "{t},{},{},{},{}", num(direct), num(r.fidelity), num(r.sigma_z), num(r.sigma_y));
        if let Some(s) = &r.sampled {
            let _ = write!(csv, ",{}", num(s.fidelity));
        }
        csv.push('\n');
        counts.add(spec.controlled()?.counts());
    }
    Ok(RunOutput {
        csv,
        gate_counts: counts,
        results: json!({ "max_direct_vs_ramsey": worst }),
        ..Default::default()
    })
}

pub fn schrodinger(a: &SchrodingerArgs) -> Result<RunOutput> {
    let grid = SpatialGrid::new(a.d, a.n)?;
    let (x0, sigma, p0, hbar) = (a.x0, a.sigma, a.p0, a.hbar);
    let psi0 = discretize(
        move |x| Complex64::from_polar((-(x - x0).powi(2) / (2.0 * sigma * sigma)).exp(), p0 * x / hbar),
        &grid,
    )?;
    let potential = match a.potential {
        PotentialKind::Free => Potential::zero(),
        PotentialKind::Harmonic => Potential::harmonic(a.mass, a.omega),
        PotentialKind::DoubleWell => {
            let (wa, wb) = (a.well_a, a.well_b);
            Potential::static_fn(move |x| wa * x.powi(4) - wb * x * x)
        }
    };
    let mut settings = EvolutionSettings::new(a.dt, a.steps as usize, potential);
    settings.mass = a.mass;
    settings.hbar = a.hbar;
    settings.ancilla_bits = a.ancilla_bits;
    settings.potential_range = a.potential_range.as_ref().map(|r| (r[0], r[1]));
    if a.fast_path {
        settings.method = PotentialMethod::QuadraticFastPath;
    }
    let every = a.record_every as usize;
    let mut csv = String::from("step,time,mean_x,std_x,norm\n");
    let mut row = |step: usize, s: &StateVector| {
        let w = qchaos_core::schrodinger::DiscretizedWavefunction { grid, state: s.clone(), norm_factor: 1.0 };
        let _ = writeln!(
            csv,
            "{step},{},{},{},{}",
            num(step as f64 * a.dt),
            num(w.mean_position()),
            num(w.position_std()),
            num(s.norm_sqr())
        );
    };
    row(0, &psi0.state);
    let out = trotter_evolve_with(&psi0, &settings, |step, s| {
        if step % every == 0 || step == a.steps as usize {
            row(step, s);
        }
        Ok(())
    })?;
    let mut warnings = Vec::new();
    let band = out.wavefunction.band_mass(0.9);
    if band < 1.0 - 1e-6 {
        warnings.push(format!("only {band:.8} of the final momentum mass lies inside 90% of the resolvable band"));
    }
    Ok(RunOutput {
        csv,
        gate_counts: out.gate_counts,
        results: json!({
            "final_mean_x": out.wavefunction.mean_position(),
            "final_std_x": out.wavefunction.position_std(),
            "band_mass": band,
            "max_ancilla_residual": out.max_ancilla_residual,
        }),
        warnings,
        ..Default::default()
    })
}

pub fn qvolume(a: &QvolumeArgs, seed: u64) -> Result<RunOutput> {
    let mut intervals: Vec<Option<(f64, f64)>> = vec![None; a.n];
    let eps_eff = if let Some(e) = a.eps {
        EpsEff::Constant(e)
    } else if let Some(t) = &a.eps_table {
        EpsEff::Table(t.clone())
    } else {
        let noise = noise_params(&a.noise)?;
        let depths: Vec<usize> = a.depths.iter().map(|&d| d as usize).collect();
        let mut table = vec![0.0; a.n];
        for kappa in 2..=a.n {
            let est = estimate_eps_eff(kappa, &noise, a.sequences as usize, &depths, rng::derive(seed, kappa as u64))?;
            table[kappa - 1] = est.eps;
            intervals[kappa - 1] = Some((est.ci_low, est.ci_high));
        }
        // a single qubit runs no two-qubit unitaries; reuse the two-qubit rate
        table[0] = table[1];
        intervals[0] = intervals[1];
        EpsEff::Table(table)
    };
    let report = quantum_volume(&QVolumeInput { n: a.n, eps_eff })?;
    let mut csv = String::from("kappa,eps_eff,depth,min_value,ci_low,ci_high\n");
    for (row, ci) in report.table.iter().zip(&intervals) {
        let (lo, hi) = ci.map_or((String::new(), String::new()), |(l, h)| (num(l), num(h)));
        let _ = writeln!(csv, "{},{},{},{},{lo},{hi}", row.kappa, num(row.eps_eff), num(row.depth), num(row.min_value));
    }
    let mut warnings = Vec::new();
    if a.estimate {
        warnings.push("kappa = 1 reuses the kappa = 2 error-rate estimate".to_string());
    }
    Ok(RunOutput {
        csv,
        results: json!({
            "log2_vq": report.log2_vq,
            "vq": report.vq.to_string(),
            "best_kappa": report.best_kappa,
        }),
        warnings,
        ..Default::default()
    })
}

fn op_row(i: usize, op: &GateOp) -> String {
    let (name, params): (&str, Vec<f64>) = match op {
        GateOp::Hadamard { .. } => ("H", vec![]),
        GateOp::PhaseShift { delta, .. } => ("P", vec![*delta]),
        GateOp::Cnot { .. } => ("CNOT", vec![]),
        GateOp::ControlledPhase { delta, .. } => ("CP", vec![*delta]),
        GateOp::TwoQubitDiagonal { phases, .. } => ("DIAG2", phases.to_vec()),
        GateOp::MultiControlledX { .. } => ("MCX", vec![]),
    };
    let qubits: Vec<String> = op.qubits().iter().map(|q| q.to_string()).collect();
    let params: Vec<String> = params.into_iter().map(num).collect();
    format!("{i},{name},{},{}\n", qubits.join(" "), params.join(" "))
}

pub fn dump_circuit(a: &DumpArgs) -> Result<RunOutput> {
    let circuit: Circuit = if a.map_step {
        let params = SawtoothParams::new(a.n, a.k.expect("normalized"), a.period.expect("normalized"), 0)?;
        map_step_circuit(&params)?
    } else {
        qft_circuit(a.n)?
    };
    let mut csv = String::from("index,gate,qubits,params\n");
    for (i, op) in circuit.ops().iter().enumerate() {
        csv.push_str(&op_row(i, op));
    }
    let text = circuit.to_text();
    Ok(RunOutput {
        csv,
        extra: vec![("txt".into(), text.clone())],
        stdout: Some(text),
        gate_counts: *circuit.counts(),
        results: json!({ "ops": circuit.len(), "n_qubits": circuit.n_qubits() }),
        ..Default::default()
    })
}
