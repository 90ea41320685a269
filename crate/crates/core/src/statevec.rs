//! Exact state-vector storage and elementary gate application.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::kernels;
use crate::rng;

/// Largest register the simulator will allocate (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Tolerance used when checking that supplied amplitudes are normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Computational-basis label `k = sum_j k_j 2^j`, qubit 0 being the least
/// significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex(pub usize);

impl BasisIndex {
    pub fn from_bits(bits: &[u8]) -> Self {
        BasisIndex(bits.iter().enumerate().map(|(j, &b)| (b as usize & 1) << j).sum())
    }

    pub fn bit(self, j: usize) -> u8 {
        ((self.0 >> j) & 1) as u8
    }

    /// Binary digits `k_0, k_1, ..., k_{n-1}`.
    pub fn bits(self, n: usize) -> Vec<u8> {
        (0..n).map(|j| self.bit(j)).collect()
    }

    pub fn value(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Outcome counts of repeated computational-basis measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub n_qubits: usize,
    pub shots: u64,
    pub counts: BTreeMap<usize, u64>,
    pub seed: u64,
}

impl MeasurementRecord {
    pub fn count(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let mut f = vec![0.0; 1 << self.n_qubits];
        for (&k, &c) in &self.counts {
            f[k] = c as f64 / self.shots as f64;
        }
        f
    }
}

/// Pure state of an `n`-qubit register: `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

pub(crate) fn check_width(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("register needs at least one qubit".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::Capacity { what: "qubits", requested: n, limit: MAX_QUBITS });
    }
    Ok(())
}

impl StateVector {
    /// The basis state `|k>` of an `n`-qubit register.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        check_width(n)?;
        let dim = 1usize << n;
        if k >= dim {
            return Err(Error::BasisIndexOutOfRange { index: k as u64, dim: dim as u64 });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Equal-weight superposition of all basis states.
    pub fn uniform(n: usize) -> Result<Self> {
        check_width(n)?;
        let dim = 1usize << n;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(StateVector { n_qubits: n, amps: vec![a; dim] })
    }

    /// Wraps amplitudes that are already normalized (to `NORM_TOLERANCE`).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = width_of(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "amplitudes must be normalized, squared norm is {norm}"
            )));
        }
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n = width_of(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(format!("cannot normalize vector of norm {norm}")));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Wraps amplitudes without a norm check, for linear algebra on
    /// unnormalized vectors inside the crate.
    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Result<Self> {
        let n = width_of(amps.len())?;
        Ok(StateVector { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Raw mutable access. Callers must keep the evolution unitary.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|sum |c_k|^2 - 1|`; drift is reported, never silently corrected.
    pub fn norm_drift(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    pub fn renormalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= norm);
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.n_qubits {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange { qubit: q, n_qubits: self.n_qubits })
        }
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::SameQubit(a));
        }
        Ok(())
    }

    pub fn hadamard(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        kernels::hadamard(&mut self.amps, q);
        Ok(())
    }

    /// `|1>_q` picks up `e^{i delta}`; `|0>_q` is untouched.
    pub fn phase_shift(&mut self, q: usize, delta: f64) -> Result<()> {
        self.check_qubit(q)?;
        check_finite("phase", delta)?;
        kernels::phase_shift(&mut self.amps, q, delta);
        Ok(())
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_pair(control, target)?;
        kernels::cnot(&mut self.amps, control, target);
        Ok(())
    }

    pub fn controlled_phase(&mut self, a: usize, b: usize, delta: f64) -> Result<()> {
        self.check_pair(a, b)?;
        check_finite("phase", delta)?;
        kernels::controlled_phase(&mut self.amps, a, b, delta);
        Ok(())
    }

    /// Basis state with bits `(a_i, a_j)` acquires `e^{i phases[2 a_i + a_j]}`.
    /// `i == j` acts as a single-qubit diagonal using entries 0 and 3.
    pub fn two_qubit_diagonal(&mut self, i: usize, j: usize, phases: [f64; 4]) -> Result<()> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        for p in phases {
            check_finite("phase", p)?;
        }
        kernels::two_qubit_diagonal(&mut self.amps, i, j, &phases);
        Ok(())
    }

    /// Flips `target` when every `(qubit, value)` control matches.
    pub fn multi_controlled_x(&mut self, controls: &[(usize, bool)], target: usize) -> Result<()> {
        self.check_qubit(target)?;
        let mut mask = 0usize;
        let mut pattern = 0usize;
        for &(q, value) in controls {
            self.check_pair(q, target)?;
            mask |= 1 << q;
            if value {
                pattern |= 1 << q;
            }
        }
        kernels::multi_controlled_x(&mut self.amps, mask, pattern, target);
        Ok(())
    }

    pub fn pauli_x(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        kernels::pauli_x(&mut self.amps, q);
        Ok(())
    }

    pub fn pauli_z(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        kernels::pauli_z(&mut self.amps, q);
        Ok(())
    }

    /// Exact `<psi| sigma_axis^(q) |psi>` with the standard Pauli matrices.
    pub fn expectation_pauli(&self, q: usize, axis: Pauli) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            if i & mask != 0 {
                continue;
            }
            let (a0, a1) = (*a, self.amps[i | mask]);
            acc += match axis {
                Pauli::Z => a0.norm_sqr() - a1.norm_sqr(),
                Pauli::X => 2.0 * (a0.conj() * a1).re,
                Pauli::Y => 2.0 * (a0.conj() * a1).im,
            };
        }
        Ok(acc)
    }

    /// Probability that qubit `q` reads 1.
    pub fn probability_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Born-rule sampling of `shots` independent computational-basis
    /// measurements.
    pub fn sample_measurements(&self, shots: u64, seed: u64) -> Result<MeasurementRecord> {
        sample_distribution(&self.probabilities(), self.n_qubits, shots, seed)
    }
}

/// Draws `shots` outcomes from an explicit probability vector.
pub fn sample_distribution(
    probs: &[f64],
    n_qubits: usize,
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    if probs.len() != 1usize << n_qubits {
        return Err(Error::DimensionMismatch { expected: 1 << n_qubits, found: probs.len() });
    }
    let dist = WeightedIndex::new(probs.iter().map(|p| p.max(0.0)))
        .map_err(|e| Error::InvalidParameter(format!("bad outcome distribution: {e}")))?;
    let mut rng = rng::seeded(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(MeasurementRecord { n_qubits, shots, counts, seed })
}

fn width_of(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "amplitude count {len} is not a power of two >= 2"
        )));
    }
    let n = len.trailing_zeros() as usize;
    check_width(n)?;
    Ok(n)
}
