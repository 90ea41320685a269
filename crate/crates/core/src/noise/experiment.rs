//! Noiseless vs noisy localization peaks for the sawtooth map, measured in
//! the action basis.

use serde::{Deserialize, Serialize};

use super::{apply_readout_error, noisy_run, NoiseParams, NoisyMethod, MAX_DENSITY_QUBITS};
use crate::circuit::{Circuit, GateCounts};
use crate::error::{Error, Result};
use crate::qft::{inverse_qft_circuit, qft_circuit};
use crate::rng;
use crate::sawtooth::{map_step_circuit, SawtoothParams, SignedActionMap};
use crate::statevec::{sample_distribution, StateVector};

/// Trajectories used for the noisy-exact column when the register is too
/// wide for the density method.
pub const FALLBACK_TRAJECTORIES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoisyMethodUsed {
    Density,
    Trajectories { count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationRow {
    pub m: i64,
    pub noiseless: f64,
    pub noisy_exact: f64,
    pub sampled_mean: f64,
    pub sampled_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationTable {
    /// Rows in increasing `m`.
    pub rows: Vec<LocalizationRow>,
    pub m0: i64,
    pub shots: u64,
    pub repetitions: usize,
    pub seed: u64,
    pub noisy_method: NoisyMethodUsed,
    pub gate_counts: GateCounts,
}

impl LocalizationTable {
    pub fn row(&self, m: i64) -> Option<&LocalizationRow> {
        self.rows.iter().find(|r| r.m == m)
    }

    pub fn peak_noiseless(&self) -> f64 {
        self.row(self.m0).map_or(0.0, |r| r.noiseless)
    }

    pub fn peak_noisy_exact(&self) -> f64 {
        self.row(self.m0).map_or(0.0, |r| r.noisy_exact)
    }

    pub fn peak_sampled(&self) -> f64 {
        self.row(self.m0).map_or(0.0, |r| r.sampled_mean)
    }
}

/// Preparation, `t` map steps and readout: `QFT |m0 mod N>` gives the action
/// eigenstate in the angle representation, and the closing inverse QFT
/// maps action `m` onto basis index `m mod N` for measurement.
pub fn localization_circuit(params: &SawtoothParams, t: usize) -> Result<Circuit> {
    let mut c = qft_circuit(params.n)?;
    let step = map_step_circuit(params)?;
    for _ in 0..t {
        c.append(&step)?;
    }
    c.append(&inverse_qft_circuit(params.n)?)?;
    Ok(c)
}

/// Runs the experiment in three regimes: noiseless, noisy with exact
/// probabilities (gate noise then readout confusion), and finite sampling
/// (`repetitions` batches of `shots` runs) of the noisy distribution.
pub fn localization_experiment(
    params: &SawtoothParams,
    noise: &NoiseParams,
    t: usize,
    shots: u64,
    repetitions: usize,
    seed: u64,
) -> Result<LocalizationTable> {
    noise.validate()?;
    if shots == 0 || repetitions == 0 {
        return Err(Error::InvalidParameter("shots and repetitions must be at least 1".into()));
    }
    let map = SignedActionMap::new(params.n);
    let circuit = localization_circuit(params, t)?;
    let initial = StateVector::basis(params.n, map.index_of(params.m0)?)?;

    let mut clean = initial.clone();
    circuit.apply(&mut clean)?;
    let noiseless = clean.probabilities();

    let (method, used) = if params.n <= MAX_DENSITY_QUBITS {
        (NoisyMethod::Density, NoisyMethodUsed::Density)
    } else {
        (
            NoisyMethod::Trajectories { count: FALLBACK_TRAJECTORIES, seed: rng::derive(seed, 0) },
            NoisyMethodUsed::Trajectories { count: FALLBACK_TRAJECTORIES },
        )
    };
    let noisy = noisy_run(&circuit, &initial, noise, method)?.probabilities();
    let noisy = apply_readout_error(&noisy, noise.p_readout)?;

    let dim = params.dim();
    let mut samples = vec![vec![0.0; repetitions]; dim];
    for r in 0..repetitions {
        let rec = sample_distribution(&noisy, params.n, shots, rng::derive(seed, 1 + r as u64))?;
        for (b, f) in rec.frequencies().into_iter().enumerate() {
            samples[b][r] = f;
        }
    }

    let mut rows: Vec<LocalizationRow> = (0..dim)
        .map(|b| {
            let s = &samples[b];
            let mean = s.iter().sum::<f64>() / repetitions as f64;
            let std = if repetitions > 1 {
                (s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (repetitions - 1) as f64).sqrt()
            } else {
                0.0
            };
            LocalizationRow {
                m: map.signed(b),
                noiseless: noiseless[b],
                noisy_exact: noisy[b],
                sampled_mean: mean,
                sampled_std: std,
            }
        })
        .collect();
    rows.sort_by_key(|r| r.m);
    Ok(LocalizationTable {
        rows,
        m0: params.m0,
        shots,
        repetitions,
        seed,
        noisy_method: used,
        gate_counts: *circuit.counts(),
    })
}
