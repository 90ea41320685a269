//! Quantum volume `log2 V_Q = max_{kappa <= n} min[kappa, d(kappa)]` with
//! `d(kappa) = 1 / (kappa eps_eff(kappa))`, and an estimator for the
//! effective error rate from random two-qubit-unitary circuits.

mod kak;

pub use kak::{haar_unitary4, lower_two_qubit_unitary, Unitary4, GATES_PER_UNITARY};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::noise::{noisy_run, noisy_trajectory, trajectory_seed, NoiseParams, NoisyMethod, NoisyOutcome, MAX_DENSITY_QUBITS};
use crate::rng;
use crate::statevec::StateVector;

/// `eps_eff` as a function of the register size `kappa`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EpsEff {
    Constant(f64),
    /// Entry `kappa - 1` holds `eps_eff(kappa)`.
    Table(Vec<f64>),
}

impl EpsEff {
    pub fn at(&self, kappa: usize) -> Option<f64> {
        match self {
            EpsEff::Constant(e) => Some(*e),
            EpsEff::Table(t) => t.get(kappa.checked_sub(1)?).copied(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QVolumeInput {
    pub n: usize,
    pub eps_eff: EpsEff,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QVolumeRow {
    pub kappa: usize,
    pub eps_eff: f64,
    /// Achievable depth `1 / (kappa eps_eff)`.
    pub depth: f64,
    pub min_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QVolumeReport {
    pub log2_vq: u32,
    pub vq: u128,
    /// The maximizing register size (smallest on ties).
    pub best_kappa: usize,
    /// One row for every `kappa` in `1..=n`.
    pub table: Vec<QVolumeRow>,
}

pub fn quantum_volume(input: &QVolumeInput) -> Result<QVolumeReport> {
    if input.n == 0 || input.n > 127 {
        return Err(Error::InvalidParameter(format!("qubit count must lie in 1..=127, got {}", input.n)));
    }
    let mut table = Vec::with_capacity(input.n);
    for kappa in 1..=input.n {
        let eps = input
            .eps_eff
            .at(kappa)
            .ok_or_else(|| Error::InvalidParameter(format!("no effective error rate for kappa = {kappa}")))?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps_eff({kappa}) must be positive, got {eps}")));
        }
        let depth = 1.0 / (kappa as f64 * eps);
        table.push(QVolumeRow { kappa, eps_eff: eps, depth, min_value: depth.min(kappa as f64) });
    }
    let best = table.iter().fold(&table[0], |b, r| if r.min_value > b.min_value { r } else { b });
    let log2_vq = best.min_value.floor() as u32;
    Ok(QVolumeReport { log2_vq, vq: 1u128 << log2_vq, best_kappa: best.kappa, table })
}

/// `log2 V_Q` of a reported power-of-two volume.
pub fn log2_of_volume(vq: u128) -> Result<u32> {
    if vq == 0 || !vq.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("quantum volume {vq} is not a power of two")));
    }
    Ok(vq.trailing_zeros())
}

/// `layers` layers on `kappa` qubits; each layer pairs the qubits at random
/// and applies an independent Haar-random unitary to every pair.
pub fn random_layered_circuit(kappa: usize, layers: usize, seed: u64) -> Result<Circuit> {
    if kappa < 2 {
        return Err(Error::InvalidParameter(format!("random two-qubit circuits need kappa >= 2, got {kappa}")));
    }
    let mut rng = rng::seeded(seed);
    let mut circ = Circuit::new(kappa);
    let mut order: Vec<usize> = (0..kappa).collect();
    for _ in 0..layers {
        order.shuffle(&mut rng);
        for pair in order.chunks_exact(2) {
            let u = haar_unitary4(&mut rng);
            lower_two_qubit_unitary(&mut circ, pair[0], pair[1], &u)?;
        }
    }
    Ok(circ)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    pub sequence: usize,
    pub layers: usize,
    pub gates: usize,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsEffEstimate {
    pub kappa: usize,
    pub eps: f64,
    /// 95% confidence interval.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Fitted prefactor `A` in `F(g) = A (1 - eps)^g`.
    pub amplitude: f64,
    pub slope_std_error: f64,
    pub points: Vec<FidelityPoint>,
    pub seed: u64,
}

impl EpsEffEstimate {
    pub fn contains(&self, eps: f64) -> bool {
        self.ci_low <= eps && eps <= self.ci_high
    }
}

/// Smallest slope standard error used for the interval: fidelities carry
/// rounding error of order `1e-15` per gate, so a noiseless fit cannot
/// resolve rates below this.
const SLOPE_RESOLUTION: f64 = 1e-12;

/// Trajectories per circuit when `kappa` is too wide for the density method.
pub const ESTIMATOR_TRAJECTORIES: usize = 512;

fn state_fidelity(circ: &Circuit, noise: &NoiseParams, seed: u64) -> Result<f64> {
    let initial = StateVector::basis(circ.n_qubits(), 0)?;
    let mut ideal = initial.clone();
    circ.apply(&mut ideal)?;
    if circ.n_qubits() <= MAX_DENSITY_QUBITS {
        let NoisyOutcome::Density(rho) = noisy_run(circ, &initial, noise, NoisyMethod::Density)? else {
            unreachable!("density method requested")
        };
        let a = ideal.amplitudes();
        let dim = a.len();
        let mut f = num_complex::Complex64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                f += a[r].conj() * rho.entry(r, c) * a[c];
            }
        }
        Ok(f.re)
    } else {
        let total: f64 = (0..ESTIMATOR_TRAJECTORIES)
            .map(|i| -> Result<f64> {
                let s = noisy_trajectory(circ, &initial, noise, trajectory_seed(seed, i))?;
                Ok(ideal.overlap(&s)?.norm_sqr())
            })
            .sum::<Result<f64>>()?;
        Ok(total / ESTIMATOR_TRAJECTORIES as f64)
    }
}

/// Fits `ln F = ln A + g ln(1 - eps)` over every (sequence, depth) circuit.
/// `depth_grid` lists layer counts; readout error does not enter state
/// fidelities and is ignored.
pub fn estimate_eps_eff(
    kappa: usize,
    noise: &NoiseParams,
    sequences: usize,
    depth_grid: &[usize],
    seed: u64,
) -> Result<EpsEffEstimate> {
    noise.validate()?;
    if kappa < 2 {
        return Err(Error::InvalidParameter(format!("kappa must be at least 2, got {kappa}")));
    }
    if sequences == 0 || depth_grid.is_empty() {
        return Err(Error::InvalidParameter("need at least one sequence and one depth".into()));
    }
    let jobs: Vec<(usize, usize, usize)> = (0..sequences)
        .flat_map(|s| depth_grid.iter().enumerate().map(move |(di, &d)| (s, di, d)))
        .collect();
    let points: Vec<FidelityPoint> = jobs
        .par_iter()
        .map(|&(s, di, layers)| {
            let job_seed = rng::derive(seed, (s * depth_grid.len() + di) as u64);
            let circ = random_layered_circuit(kappa, layers, job_seed)?;
            let fidelity = state_fidelity(&circ, noise, rng::derive(job_seed, 0))?;
            Ok(FidelityPoint { sequence: s, layers, gates: circ.len(), fidelity })
        })
        .collect::<Result<_>>()?;

    if let Some(p) = points.iter().find(|p| !(p.fidelity > 0.0)) {
        return Err(Error::Fit(format!("fidelity {} at {} gates cannot be log-fitted", p.fidelity, p.gates)));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.gates as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.fidelity.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all circuits have the same gate count; use at least two depths".into()));
    }
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let se = if xs.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { 0.0 }.max(SLOPE_RESOLUTION);
    if slope - 1.96 * se > 0.0 {
        return Err(Error::Fit(format!("fidelity does not decay with gate count (slope {slope})")));
    }
    let eps = 1.0 - slope.exp();
    Ok(EpsEffEstimate {
        kappa,
        eps,
        ci_low: 1.0 - (slope + 1.96 * se).exp(),
        ci_high: 1.0 - (slope - 1.96 * se).exp(),
        amplitude: intercept.exp(),
        slope_std_error: se,
        points,
        seed,
    })
}
