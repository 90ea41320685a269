//! The quantum sawtooth map `U = U_T U_k` on `N = 2^n` levels.
//!
//! States are held in the angle representation on the grid
//! `theta_i = 2 pi i / N`. Action amplitudes are
//! `a_m = N^{-1/2} sum_i e^{-i m theta_i} psi_i` over signed actions
//! `m in [-N/2, N/2)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateCounts};
use crate::error::{check_finite, Error, Result};
use crate::qft::{inverse_qft_circuit, qft_circuit};
use crate::statevec::{check_width, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SawtoothParams {
    pub n: usize,
    /// Kick strength.
    pub k: f64,
    /// Kick period `T`.
    pub period: f64,
    /// Classicality parameter, stored as the product `k * period`.
    pub big_k: f64,
    /// Initial action eigenvalue.
    pub m0: i64,
}

impl SawtoothParams {
    pub fn new(n: usize, k: f64, period: f64, m0: i64) -> Result<Self> {
        check_width(n)?;
        check_finite("k", k)?;
        check_finite("T", period)?;
        SignedActionMap::new(n).index_of(m0)?;
        Ok(SawtoothParams { n, k, period, big_k: k * period, m0 })
    }

    /// Parameters from the classicality `K = kT` and kick strength `k`.
    pub fn from_classicality(n: usize, big_k: f64, k: f64, m0: i64) -> Result<Self> {
        if k == 0.0 {
            return Err(Error::InvalidParameter("k must be non-zero to derive T from K".into()));
        }
        SawtoothParams::new(n, k, big_k / k, m0)
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn with_k(&self, k: f64) -> Self {
        SawtoothParams { k, big_k: k * self.period, ..*self }
    }

    /// Classical motion is chaotic for `K < -4` or `K > 0`.
    pub fn is_chaotic(&self) -> bool {
        self.big_k < -4.0 || self.big_k > 0.0
    }
}

/// Bijection between basis index `i in [0, N)` and signed action
/// `m in [-N/2, N/2)`: `m = i` below `N/2`, `m = i - N` above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedActionMap {
    n: usize,
}

impl SignedActionMap {
    pub fn new(n: usize) -> Self {
        SignedActionMap { n }
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn signed(&self, index: usize) -> i64 {
        let dim = self.dim() as i64;
        let i = index as i64;
        if i < dim / 2 {
            i
        } else {
            i - dim
        }
    }

    pub fn index_of(&self, m: i64) -> Result<usize> {
        let half = (self.dim() / 2) as i64;
        if m < -half || m >= half {
            return Err(Error::InvalidParameter(format!(
                "action {m} outside [-{half}, {half}) for n = {}",
                self.n
            )));
        }
        Ok(m.rem_euclid(self.dim() as i64) as usize)
    }

    /// Signed weight of qubit `q` in `m = sum_q w_q b_q` (two's complement).
    pub fn weight(&self, q: usize) -> f64 {
        let w = (1u64 << q) as f64;
        if q + 1 == self.n {
            -w
        } else {
            w
        }
    }
}

/// `n^2` two-qubit diagonal gates realizing `e^{i coeff m^2}` over signed `m`.
pub fn signed_quadratic_phase_circuit(n: usize, coeff: f64) -> Result<Circuit> {
    let map = SignedActionMap::new(n);
    let mut c = Circuit::new(n);
    for q in 0..n {
        for r in 0..n {
            let w = coeff * map.weight(q) * map.weight(r);
            c.diag2(q, r, [0.0, 0.0, 0.0, w])?;
        }
    }
    Ok(c)
}

/// `U_k = e^{i k (theta - pi)^2 / 2}` as `n^2` two-qubit gates. With
/// `theta = 2 pi sum_{j=1..n} alpha_j 2^{-j}` the factor for the pair
/// `(i, j)` is `e^{i 2 pi^2 k (alpha_i 2^{-i} - 1/2n)(alpha_j 2^{-j} - 1/2n)}`;
/// `alpha_j` is qubit `n - j`.
pub fn uk_circuit(params: &SawtoothParams) -> Result<Circuit> {
    let n = params.n;
    let offset = 1.0 / (2.0 * n as f64);
    let term = |j: usize, alpha: u8| alpha as f64 / (1u64 << j) as f64 - offset;
    let mut c = Circuit::new(n);
    for i in 1..=n {
        for j in 1..=n {
            let phase = |ai: u8, aj: u8| 2.0 * PI * PI * params.k * term(i, ai) * term(j, aj);
            c.diag2(n - i, n - j, [phase(0, 0), phase(0, 1), phase(1, 0), phase(1, 1)])?;
        }
    }
    Ok(c)
}

/// `U_T = e^{-i T m^2 / 2}` over signed actions, `n^2` two-qubit gates.
pub fn ut_circuit(params: &SawtoothParams) -> Result<Circuit> {
    signed_quadratic_phase_circuit(params.n, -params.period / 2.0)
}

/// One map iteration: `U_k`, QFT, `U_T`, inverse QFT; `3n^2 + n` gates.
pub fn map_step_circuit(params: &SawtoothParams) -> Result<Circuit> {
    let mut c = uk_circuit(params)?;
    c.append(&qft_circuit(params.n)?)?;
    c.append(&ut_circuit(params)?)?;
    c.append(&inverse_qft_circuit(params.n)?)?;
    Ok(c)
}

/// `|m>` written in the angle representation.
pub fn action_eigenstate(n: usize, m: i64) -> Result<StateVector> {
    check_width(n)?;
    SignedActionMap::new(n).index_of(m)?;
    let dim = 1usize << n;
    let norm = (dim as f64).sqrt().recip();
    let amps = (0..dim)
        .map(|i| {
            let phase = 2.0 * PI * ((m * i as i64).rem_euclid(dim as i64)) as f64 / dim as f64;
            Complex64::from_polar(norm, phase)
        })
        .collect();
    StateVector::from_amplitudes(amps)
}

/// Unitary change of basis between angle and action amplitudes (FFT based).
pub struct ActionTransform {
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    backward: Arc<dyn Fft<f64>>,
}

impl ActionTransform {
    pub fn new(n: usize) -> Self {
        let dim = 1usize << n;
        let mut planner = FftPlanner::new();
        ActionTransform { dim, forward: planner.plan_fft_forward(dim), backward: planner.plan_fft_inverse(dim) }
    }

    /// Angle amplitudes to action amplitudes (indexed by basis index).
    pub fn to_action(&self, amps: &mut [Complex64]) {
        self.forward.process(amps);
        let s = (self.dim as f64).sqrt().recip();
        amps.iter_mut().for_each(|a| *a *= s);
    }

    pub fn to_angle(&self, amps: &mut [Complex64]) {
        self.backward.process(amps);
        let s = (self.dim as f64).sqrt().recip();
        amps.iter_mut().for_each(|a| *a *= s);
    }
}

/// Action amplitudes of an angle-representation state, indexed by basis index.
pub fn action_amplitudes(state: &StateVector) -> Vec<Complex64> {
    let mut amps = state.amplitudes().to_vec();
    ActionTransform::new(state.n_qubits()).to_action(&mut amps);
    amps
}

/// Stepper for the map, either gate by gate or by FFT split-operator.
pub enum SawtoothEvolver {
    Gates { circuit: Circuit },
    Reference { kick: Vec<Complex64>, rotation: Vec<Complex64>, transform: ActionTransform },
}

impl SawtoothEvolver {
    pub fn gates(params: &SawtoothParams) -> Result<Self> {
        Ok(SawtoothEvolver::Gates { circuit: map_step_circuit(params)? })
    }

    pub fn reference(params: &SawtoothParams) -> Self {
        let dim = params.dim();
        let map = SignedActionMap::new(params.n);
        let kick = (0..dim)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / dim as f64;
                Complex64::from_polar(1.0, params.k * (theta - PI).powi(2) / 2.0)
            })
            .collect();
        let rotation = (0..dim)
            .map(|i| {
                let m = map.signed(i) as f64;
                Complex64::from_polar(1.0, -params.period * m * m / 2.0)
            })
            .collect();
        SawtoothEvolver::Reference { kick, rotation, transform: ActionTransform::new(params.n) }
    }

    pub fn step(&self, state: &mut StateVector) -> Result<()> {
        match self {
            SawtoothEvolver::Gates { circuit } => {
                circuit.apply(state)?;
            }
            SawtoothEvolver::Reference { kick, rotation, transform } => {
                if state.dim() != kick.len() {
                    return Err(Error::DimensionMismatch { expected: kick.len(), found: state.dim() });
                }
                let amps = state.amplitudes_mut();
                crate::kernels::diagonal(amps, kick);
                transform.to_action(amps);
                crate::kernels::diagonal(amps, rotation);
                transform.to_angle(amps);
            }
        }
        Ok(())
    }

    /// Gates executed per step (zero for the FFT reference).
    pub fn gate_counts(&self) -> GateCounts {
        match self {
            SawtoothEvolver::Gates { circuit } => *circuit.counts(),
            SawtoothEvolver::Reference { .. } => GateCounts::default(),
        }
    }
}

fn check_state(state: &StateVector, params: &SawtoothParams) -> Result<()> {
    if state.n_qubits() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, found: state.n_qubits() });
    }
    Ok(())
}

/// `U^t psi` through the gate circuit.
pub fn evolve_quantum(state: &StateVector, params: &SawtoothParams, steps: usize) -> Result<StateVector> {
    check_state(state, params)?;
    let evolver = SawtoothEvolver::gates(params)?;
    let mut s = state.clone();
    for _ in 0..steps {
        evolver.step(&mut s)?;
    }
    Ok(s)
}

/// `U^t psi` through direct diagonal multiplications and FFTs.
pub fn evolve_reference(state: &StateVector, params: &SawtoothParams, steps: usize) -> Result<StateVector> {
    check_state(state, params)?;
    let evolver = SawtoothEvolver::reference(params);
    let mut s = state.clone();
    for _ in 0..steps {
        evolver.step(&mut s)?;
    }
    Ok(s)
}
