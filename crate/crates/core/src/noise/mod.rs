//! Dephasing, relaxation and readout noise, simulated either exactly on a
//! density matrix or by sampling Kraus branches on pure-state trajectories.
//!
//! Noise acts after every gate on that gate's operand qubits only.

mod experiment;

pub use experiment::{localization_circuit, localization_experiment, LocalizationRow, LocalizationTable, NoisyMethodUsed};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateOp};
use crate::error::{check_probability, Error, Result};
use crate::kernels;
use crate::rng;
use crate::statevec::{MeasurementRecord, StateVector};

/// Widest register the density method accepts.
pub const MAX_DENSITY_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Phase-flip probability per gate operand.
    pub p_dephase: f64,
    /// Amplitude-damping parameter per gate operand.
    pub p_relax: f64,
    /// Classical bit-flip probability per measured bit.
    pub p_readout: f64,
}

impl NoiseParams {
    pub fn new(p_dephase: f64, p_relax: f64, p_readout: f64) -> Result<Self> {
        let p = NoiseParams { p_dephase, p_relax, p_readout };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p_dephase", self.p_dephase)?;
        check_probability("p_relax", self.p_relax)?;
        check_probability("p_readout", self.p_readout)
    }

    pub fn is_zero(&self) -> bool {
        self.p_dephase == 0.0 && self.p_relax == 0.0 && self.p_readout == 0.0
    }

    /// Every rate multiplied by `factor`, e.g. to model a device that is
    /// noisier than its calibration data.
    pub fn inflated(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise inflation must be non-negative, got {factor}")));
        }
        NoiseParams::new(self.p_dephase * factor, self.p_relax * factor, self.p_readout * factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Channel {
    /// `rho -> (1-p) rho + p Z rho Z`.
    Dephase,
    /// Amplitude damping with Kraus operators `diag(1, sqrt(1-g))` and `sqrt(g) |0><1|`.
    Relax,
}

/// A mixed state of `n` qubits. Entries are stored as a `2n`-qubit vector:
/// the row index occupies the high `n` bits, the column index the low bits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let n = state.n_qubits();
        check_density_width(n)?;
        let a = state.amplitudes();
        let dim = a.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[(r << n) | c] = a[r] * a[c].conj();
            }
        }
        Ok(DensityMatrix { n_qubits: n, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row << self.n_qubits) | col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// Computational-basis outcome probabilities (the real diagonal).
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entry(i, i).re).collect()
    }

    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest `|rho - rho^dag|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// `U rho U^dag` for one gate: `U` on the row wires, `conj(U)` on the
    /// column wires. Every gate in the set is real or diagonal, so
    /// `conj(U)` is the adjoint gate.
    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        let n = self.n_qubits;
        op.relabeled(|q| q + n).apply_raw(&mut self.data);
        op.adjoint().apply_raw(&mut self.data);
        Ok(())
    }

    fn apply_layout(&mut self, layout: &[usize]) {
        if layout.iter().enumerate().all(|(q, &w)| q == w) {
            return;
        }
        let n = self.n_qubits;
        let wide: Vec<usize> = layout.iter().copied().chain(layout.iter().map(|&w| w + n)).collect();
        self.data = kernels::permute_qubits(&self.data, &wide);
    }

    pub fn apply_channel(&mut self, channel: Channel, q: usize, param: f64) -> Result<()> {
        check_probability("channel parameter", param)?;
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits: self.n_qubits });
        }
        if param == 0.0 {
            return Ok(());
        }
        let col = 1usize << q;
        let row = col << self.n_qubits;
        match channel {
            Channel::Dephase => {
                let f = 1.0 - 2.0 * param;
                for (i, z) in self.data.iter_mut().enumerate() {
                    if ((i & row) != 0) != ((i & col) != 0) {
                        *z *= f;
                    }
                }
            }
            Channel::Relax => {
                let s = (1.0 - param).sqrt();
                for i in 0..self.data.len() {
                    if i & row != 0 || i & col != 0 {
                        continue;
                    }
                    let (i01, i10, i11) = (i | col, i | row, i | row | col);
                    let rho11 = self.data[i11];
                    self.data[i] += param * rho11;
                    self.data[i01] *= s;
                    self.data[i10] *= s;
                    self.data[i11] = rho11 * (1.0 - param);
                }
            }
        }
        Ok(())
    }
}

fn check_density_width(n: usize) -> Result<()> {
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::Capacity { what: "density-matrix qubits", requested: n, limit: MAX_DENSITY_QUBITS });
    }
    Ok(())
}

/// Functional form of [`DensityMatrix::apply_channel`].
pub fn apply_channel(rho: &DensityMatrix, channel: Channel, q: usize, param: f64) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply_channel(channel, q, param)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoisyMethod {
    Density,
    Trajectories { count: usize, seed: u64 },
}

/// Trajectory statistics of the computational-basis outcome probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryBatch {
    pub count: usize,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    /// Trajectory average of each outcome probability.
    pub mean: Vec<f64>,
    /// Standard error of that average.
    pub std_error: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoisyOutcome {
    Density(DensityMatrix),
    Trajectories(TrajectoryBatch),
}

impl NoisyOutcome {
    /// Outcome probabilities before readout error.
    pub fn probabilities(&self) -> Vec<f64> {
        match self {
            NoisyOutcome::Density(rho) => rho.probabilities(),
            NoisyOutcome::Trajectories(batch) => batch.mean.clone(),
        }
    }
}

/// Runs `circuit` on `initial` with gate noise. Readout error is not
/// applied here; see [`apply_readout_error`].
pub fn noisy_run(circuit: &Circuit, initial: &StateVector, noise: &NoiseParams, method: NoisyMethod) -> Result<NoisyOutcome> {
    noise.validate()?;
    if initial.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), found: initial.n_qubits() });
    }
    match method {
        NoisyMethod::Density => Ok(NoisyOutcome::Density(density_run(circuit, initial, noise)?)),
        NoisyMethod::Trajectories { count, seed } => {
            Ok(NoisyOutcome::Trajectories(trajectory_run(circuit, initial, noise, count, seed)?))
        }
    }
}

fn density_run(circuit: &Circuit, initial: &StateVector, noise: &NoiseParams) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::from_pure(initial)?;
    for op in circuit.ops() {
        rho.apply_gate(op)?;
        for q in op.qubits() {
            rho.apply_channel(Channel::Dephase, q, noise.p_dephase)?;
            rho.apply_channel(Channel::Relax, q, noise.p_relax)?;
        }
    }
    rho.apply_layout(circuit.layout());
    Ok(rho)
}

/// One unravelled trajectory; returns its final state.
pub fn noisy_trajectory(circuit: &Circuit, initial: &StateVector, noise: &NoiseParams, seed: u64) -> Result<StateVector> {
    noise.validate()?;
    let mut rng = rng::seeded(seed);
    let mut state = initial.clone();
    for op in circuit.ops() {
        op.apply_raw(state.amplitudes_mut());
        for q in op.qubits() {
            if noise.p_dephase > 0.0 && rng.random::<f64>() < noise.p_dephase {
                state.pauli_z(q)?;
            }
            if noise.p_relax > 0.0 {
                let p_jump = noise.p_relax * state.probability_one(q)?;
                let jump = rng.random::<f64>() < p_jump;
                let keep = (1.0 - noise.p_relax).sqrt();
                let bit = 1usize << q;
                for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
                    if jump {
                        // sqrt(g) |0><1|: the |1> branch moves to |0>.
                        if i & bit == 0 {
                            *a = Complex64::new(0.0, 0.0);
                        }
                    } else if i & bit != 0 {
                        *a *= keep;
                    }
                }
                if jump {
                    let moved = state.amplitudes().to_vec();
                    let amps = state.amplitudes_mut();
                    for i in 0..amps.len() {
                        if i & bit == 0 {
                            amps[i] = moved[i | bit];
                            amps[i | bit] = Complex64::new(0.0, 0.0);
                        }
                    }
                }
                state.renormalize();
            }
        }
    }
    let amps = kernels::permute_qubits(state.amplitudes(), circuit.layout());
    state.amplitudes_mut().copy_from_slice(&amps);
    Ok(state)
}

/// Seed of trajectory `index` under `master`.
pub fn trajectory_seed(master: u64, index: usize) -> u64 {
    rng::derive(master, index as u64)
}

const TRAJECTORY_CHUNK: usize = 256;

fn trajectory_run(circuit: &Circuit, initial: &StateVector, noise: &NoiseParams, count: usize, master: u64) -> Result<TrajectoryBatch> {
    if count == 0 {
        return Err(Error::InvalidParameter("trajectory count must be at least 1".into()));
    }
    let seeds: Vec<u64> = (0..count).map(|i| trajectory_seed(master, i)).collect();
    let dim = initial.dim();
    // Fixed chunking keeps the floating-point reduction order independent
    // of the thread count.
    let partials: Vec<(Vec<f64>, Vec<f64>)> = seeds
        .par_chunks(TRAJECTORY_CHUNK)
        .map(|chunk| {
            let mut sum = vec![0.0; dim];
            let mut sq = vec![0.0; dim];
            for &s in chunk {
                let st = noisy_trajectory(circuit, initial, noise, s)?;
                for (i, p) in st.probabilities().into_iter().enumerate() {
                    sum[i] += p;
                    sq[i] += p * p;
                }
            }
            Ok((sum, sq))
        })
        .collect::<Result<_>>()?;
    let mut sum = vec![0.0; dim];
    let mut sq = vec![0.0; dim];
    for (s, q) in partials {
        sum.iter_mut().zip(&s).for_each(|(a, b)| *a += b);
        sq.iter_mut().zip(&q).for_each(|(a, b)| *a += b);
    }
    let c = count as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / c).collect();
    let std_error = if count > 1 {
        sq.iter().zip(&mean).map(|(q, m)| ((q / c - m * m).max(0.0) * c / (c - 1.0) / c).sqrt()).collect()
    } else {
        vec![f64::INFINITY; dim]
    };
    Ok(TrajectoryBatch { count, master_seed: master, seeds, mean, std_error })
}

/// Exact outcome distribution after independent bit flips with probability
/// `p` on each of the `log2(len)` measured bits.
pub fn apply_readout_error(probs: &[f64], p: f64) -> Result<Vec<f64>> {
    check_probability("p_readout", p)?;
    if !probs.len().is_power_of_two() {
        return Err(Error::InvalidParameter(format!("{} outcomes is not a power of two", probs.len())));
    }
    let mut out = probs.to_vec();
    let n = probs.len().trailing_zeros();
    for q in 0..n {
        let bit = 1usize << q;
        for i in 0..out.len() {
            if i & bit == 0 {
                let (a, b) = (out[i], out[i | bit]);
                out[i] = (1.0 - p) * a + p * b;
                out[i | bit] = (1.0 - p) * b + p * a;
            }
        }
    }
    Ok(out)
}

/// Flips every bit of every recorded shot independently with probability `p`.
pub fn apply_readout_error_to_record(record: &MeasurementRecord, p: f64, seed: u64) -> Result<MeasurementRecord> {
    check_probability("p_readout", p)?;
    let mut rng = rng::seeded(seed);
    let mut counts = std::collections::BTreeMap::new();
    for (&outcome, &c) in &record.counts {
        for _ in 0..c {
            let mut k = outcome;
            for q in 0..record.n_qubits {
                if rng.random::<f64>() < p {
                    k ^= 1 << q;
                }
            }
            *counts.entry(k).or_insert(0) += 1;
        }
    }
    Ok(MeasurementRecord { n_qubits: record.n_qubits, shots: record.shots, counts, seed: record.seed })
}
