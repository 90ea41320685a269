//! One-dimensional Schrödinger evolution by first-order Trotter splitting.
//!
//! Each step applies `e^{-i V(x,t) eps / hbar}` through the ancilla phase
//! construction and then `F^{-1} e^{-i (hbar k^2 / 2m) eps} F` with the QFT.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ancilla::{build_diagonal_phase_via_ancilla, AncillaLayout, CompiledPermutationPhase};
use crate::circuit::{Circuit, GateCounts};
use crate::error::{check_finite, Error, Result};
use crate::qft::{inverse_qft_circuit, qft_circuit};
use crate::sawtooth::{signed_quadratic_phase_circuit, ActionTransform, SignedActionMap};
use crate::statevec::{check_width, StateVector};

/// `2^n` cells of width `delta = 2d / 2^n` covering `[-d, d]`, sampled at
/// the cell centers `x_i = -d + (i + 1/2) delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    pub d: f64,
    pub n: usize,
    pub delta: f64,
}

impl SpatialGrid {
    pub fn new(d: f64, n: usize) -> Result<Self> {
        check_width(n)?;
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidParameter(format!("half-width must be positive, got {d}")));
        }
        Ok(SpatialGrid { d, n, delta: 2.0 * d / (1u64 << n) as f64 })
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.d + (i as f64 + 0.5) * self.delta
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Wave number of Fourier index `i`: `pi * m / d` with `m` signed.
    pub fn wave_number(&self, i: usize) -> f64 {
        PI * SignedActionMap::new(self.n).signed(i) as f64 / self.d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedWavefunction {
    pub grid: SpatialGrid,
    pub state: StateVector,
    /// `sqrt(sum |psi(x_i)|^2)` of the samples.
    pub norm_factor: f64,
}

impl DiscretizedWavefunction {
    /// Continuum-normalized value `psi(x_i)` (so that `sum |psi|^2 delta = 1`).
    pub fn psi(&self, i: usize) -> Complex64 {
        self.state.amplitudes()[i] / self.grid.delta.sqrt()
    }

    pub fn mean_position(&self) -> f64 {
        self.state.probabilities().iter().enumerate().map(|(i, p)| p * self.grid.x(i)).sum()
    }

    pub fn position_std(&self) -> f64 {
        let mean = self.mean_position();
        let var: f64 = self
            .state
            .probabilities()
            .iter()
            .enumerate()
            .map(|(i, p)| p * (self.grid.x(i) - mean).powi(2))
            .sum();
        var.sqrt()
    }

    /// Probability mass per Fourier index, indexed by basis index.
    pub fn momentum_distribution(&self) -> Vec<f64> {
        let mut amps = self.state.amplitudes().to_vec();
        ActionTransform::new(self.grid.n).to_action(&mut amps);
        amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Momentum mass with `|k| <= fraction * k_max`.
    pub fn band_mass(&self, fraction: f64) -> f64 {
        let kmax = PI * (self.grid.len() / 2) as f64 / self.grid.d;
        self.momentum_distribution()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.wave_number(*i).abs() <= fraction * kmax)
            .map(|(_, p)| p)
            .sum()
    }
}

/// Samples `psi` on the grid and normalizes.
pub fn discretize(psi: impl Fn(f64) -> Complex64, grid: &SpatialGrid) -> Result<DiscretizedWavefunction> {
    let samples: Vec<Complex64> = grid.points().into_iter().map(psi).collect();
    if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
        return Err(Error::InvalidParameter("wavefunction is not finite on the grid".into()));
    }
    let norm_factor = samples.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt();
    if norm_factor == 0.0 {
        return Err(Error::InvalidParameter("wavefunction vanishes on every grid point".into()));
    }
    let amps = samples.into_iter().map(|s| s / norm_factor).collect();
    Ok(DiscretizedWavefunction { grid: *grid, state: StateVector::normalized(amps)?, norm_factor })
}

type PotentialFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// `V(x, t)`. Static potentials are compiled once per evolution.
#[derive(Clone)]
pub struct Potential {
    f: Arc<PotentialFn>,
    time_dependent: bool,
    quadratic: Option<[f64; 3]>,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential")
            .field("time_dependent", &self.time_dependent)
            .field("quadratic", &self.quadratic)
            .finish()
    }
}

impl Potential {
    pub fn zero() -> Self {
        Potential::quadratic(0.0, 0.0, 0.0)
    }

    pub fn static_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential { f: Arc::new(move |x, _| f(x)), time_dependent: false, quadratic: None }
    }

    pub fn time_dependent(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential { f: Arc::new(f), time_dependent: true, quadratic: None }
    }

    /// `a x^2 + b x + c`; eligible for the ancilla-free fast path.
    pub fn quadratic(a: f64, b: f64, c: f64) -> Self {
        Potential {
            f: Arc::new(move |x, _| a * x * x + b * x + c),
            time_dependent: false,
            quadratic: Some([a, b, c]),
        }
    }

    /// `m omega^2 x^2 / 2`.
    pub fn harmonic(mass: f64, omega: f64) -> Self {
        Potential::quadratic(0.5 * mass * omega * omega, 0.0, 0.0)
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        (self.f)(x, t)
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PotentialMethod {
    /// Tabulated `m`-bit function evaluation into an ancilla register.
    AncillaTable,
    /// `n^2` two-qubit diagonal gates, exact; requires a quadratic potential.
    QuadraticFastPath,
}

#[derive(Debug, Clone)]
pub struct EvolutionSettings {
    pub dt: f64,
    pub mass: f64,
    pub hbar: f64,
    pub steps: usize,
    pub potential: Potential,
    pub ancilla_bits: usize,
    /// Fixed `[v_min, v_max]` mapped onto the ancilla range; `None` scales to
    /// the sampled extrema.
    pub potential_range: Option<(f64, f64)>,
    pub method: PotentialMethod,
}

impl EvolutionSettings {
    pub fn new(dt: f64, steps: usize, potential: Potential) -> Self {
        EvolutionSettings {
            dt,
            mass: 1.0,
            hbar: 1.0,
            steps,
            potential,
            ancilla_bits: 16,
            potential_range: None,
            method: PotentialMethod::AncillaTable,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // a zero step is allowed and makes every step the identity
        if !(self.dt >= 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be non-negative, got {}", self.dt)));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {}", self.mass)));
        }
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {}", self.hbar)));
        }
        if self.ancilla_bits == 0 || self.ancilla_bits > 40 {
            return Err(Error::InvalidParameter(format!("ancilla bits must lie in 1..=40, got {}", self.ancilla_bits)));
        }
        if let Some((lo, hi)) = self.potential_range {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::InvalidParameter(format!("bad potential range [{lo}, {hi}]")));
            }
        }
        if self.method == PotentialMethod::QuadraticFastPath && self.potential.quadratic.is_none() {
            return Err(Error::Unsupported("quadratic fast path needs a quadratic potential".into()));
        }
        Ok(())
    }
}

/// QFT, `e^{-i (hbar k^2 / 2m) eps}` over signed wave numbers, inverse QFT.
pub fn kinetic_circuit(grid: &SpatialGrid, settings: &EvolutionSettings) -> Result<Circuit> {
    settings.validate()?;
    let coeff = -settings.dt * settings.hbar * (PI / grid.d).powi(2) / (2.0 * settings.mass);
    let mut c = qft_circuit(grid.n)?;
    c.append(&signed_quadratic_phase_circuit(grid.n, coeff)?)?;
    c.append(&inverse_qft_circuit(grid.n)?)?;
    Ok(c)
}

pub fn kinetic_phase_step(state: &mut StateVector, grid: &SpatialGrid, settings: &EvolutionSettings) -> Result<()> {
    kinetic_circuit(grid, settings)?.apply(state)?;
    Ok(())
}

/// How `V` was mapped onto the ancilla register.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialEncoding {
    pub v_min: f64,
    pub v_max: f64,
    /// Phase per ancilla unit, `c` in `e^{i c f(x)}`.
    pub phase_quantum: f64,
}

/// Potential-phase circuit at time `t` together with its data-register
/// width. Constant offsets of `V` go into the circuit's global phase.
pub fn potential_circuit(grid: &SpatialGrid, settings: &EvolutionSettings, t: f64) -> Result<(Circuit, PotentialEncoding)> {
    settings.validate()?;
    let scale = -settings.dt / settings.hbar;
    if settings.method == PotentialMethod::QuadraticFastPath {
        let [a, b, c0] = settings.potential.quadratic.expect("validated");
        let x0 = grid.x(0);
        let dx = grid.delta;
        let quad = scale * a * dx * dx;
        let lin = scale * (2.0 * a * x0 * dx + b * dx);
        let mut c = Circuit::new(grid.n);
        for q in 0..grid.n {
            for r in 0..grid.n {
                let wq = (1u64 << q) as f64;
                let wr = (1u64 << r) as f64;
                let mut phase = quad * wq * wr;
                if q == r {
                    phase += lin * wq;
                }
                c.diag2(q, r, [0.0, 0.0, 0.0, phase])?;
            }
        }
        c.add_global_phase(scale * (a * x0 * x0 + b * x0 + c0));
        return Ok((c, PotentialEncoding { v_min: f64::NAN, v_max: f64::NAN, phase_quantum: 0.0 }));
    }

    let values: Vec<f64> = grid.points().into_iter().map(|x| settings.potential.eval(x, t)).collect();
    for (i, v) in values.iter().enumerate() {
        check_finite(&format!("V(x_{i})"), *v)?;
    }
    let bits = settings.ancilla_bits;
    let levels = ((1u64 << bits) - 1) as f64;
    let (v_min, v_max) = match settings.potential_range {
        Some(r) => r,
        None => values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v))),
    };
    let span = v_max - v_min;
    let mut table = Vec::with_capacity(values.len());
    for (index, &v) in values.iter().enumerate() {
        if v < v_min || v > v_max {
            return Err(Error::AncillaOverflow { index, value: v, bits: bits as u32 });
        }
        table.push(if span > 0.0 { ((v - v_min) / span * levels).round() as u64 } else { 0 });
    }
    let unit = if span > 0.0 { span / levels } else { 0.0 };
    let phase_quantum = scale * unit;
    let layout = AncillaLayout::new(grid.n, bits, phase_quantum, table)?;
    let mut circuit = build_diagonal_phase_via_ancilla(&layout)?;
    circuit.add_global_phase(scale * v_min);
    Ok((circuit, PotentialEncoding { v_min, v_max, phase_quantum }))
}

/// A compiled potential step ready to apply to data-register states.
pub struct PotentialStep {
    program: Option<CompiledPermutationPhase>,
    fast: Option<Circuit>,
    pub counts: GateCounts,
    pub encoding: PotentialEncoding,
}

impl PotentialStep {
    pub fn build(grid: &SpatialGrid, settings: &EvolutionSettings, t: f64) -> Result<Self> {
        let (circuit, encoding) = potential_circuit(grid, settings, t)?;
        let counts = *circuit.counts();
        if circuit.n_qubits() == grid.n {
            return Ok(PotentialStep { program: None, fast: Some(circuit), counts, encoding });
        }
        let program = CompiledPermutationPhase::compile(&circuit, grid.n)?;
        Ok(PotentialStep { program: Some(program), fast: None, counts, encoding })
    }

    /// Applies the phase and returns the ancilla residual probability.
    pub fn apply(&self, state: &mut StateVector) -> Result<f64> {
        if let Some(c) = &self.fast {
            c.apply(state)?;
            return Ok(0.0);
        }
        let program = self.program.as_ref().expect("one of the paths is set");
        let residual = program.ancilla_residual(state)?;
        program.apply(state)?;
        Ok(residual)
    }
}

/// Multiplies the amplitude at `x_i` by `e^{-i V(x_i, t) eps / hbar}` (quantized).
pub fn potential_phase_step(state: &mut StateVector, grid: &SpatialGrid, settings: &EvolutionSettings, t: f64) -> Result<f64> {
    PotentialStep::build(grid, settings, t)?.apply(state)
}

#[derive(Debug, Clone)]
pub struct TrotterOutcome {
    pub wavefunction: DiscretizedWavefunction,
    pub gate_counts: GateCounts,
    pub max_ancilla_residual: f64,
}

pub fn trotter_evolve(psi0: &DiscretizedWavefunction, settings: &EvolutionSettings) -> Result<TrotterOutcome> {
    trotter_evolve_with(psi0, settings, |_, _| Ok(()))
}

/// Like [`trotter_evolve`], calling `observe(step, state)` after every step.
pub fn trotter_evolve_with(
    psi0: &DiscretizedWavefunction,
    settings: &EvolutionSettings,
    mut observe: impl FnMut(usize, &StateVector) -> Result<()>,
) -> Result<TrotterOutcome> {
    settings.validate()?;
    let grid = psi0.grid;
    let kinetic = kinetic_circuit(&grid, settings)?;
    let cached = if settings.potential.is_time_dependent() {
        None
    } else {
        Some(PotentialStep::build(&grid, settings, 0.0)?)
    };
    let mut state = psi0.state.clone();
    let mut counts = GateCounts::default();
    let mut max_residual: f64 = 0.0;
    for l in 0..settings.steps {
        let t = l as f64 * settings.dt;
        let fresh;
        let step = match &cached {
            Some(p) => p,
            None => {
                fresh = PotentialStep::build(&grid, settings, t)?;
                &fresh
            }
        };
        max_residual = max_residual.max(step.apply(&mut state)?);
        counts.add(&step.counts);
        kinetic.apply(&mut state)?;
        counts.add(kinetic.counts());
        observe(l + 1, &state)?;
    }
    Ok(TrotterOutcome {
        wavefunction: DiscretizedWavefunction { grid, state, norm_factor: psi0.norm_factor },
        gate_counts: counts,
        max_ancilla_residual: max_residual,
    })
}

/// FFT-based kinetic step, the reference for [`kinetic_phase_step`].
pub fn kinetic_phase_step_reference(state: &mut StateVector, grid: &SpatialGrid, settings: &EvolutionSettings) -> Result<()> {
    settings.validate()?;
    if state.n_qubits() != grid.n {
        return Err(Error::DimensionMismatch { expected: grid.n, found: state.n_qubits() });
    }
    let transform = ActionTransform::new(grid.n);
    let amps = state.amplitudes_mut();
    transform.to_action(amps);
    for (i, a) in amps.iter_mut().enumerate() {
        let k = grid.wave_number(i);
        *a *= Complex64::from_polar(1.0, -settings.dt * settings.hbar * k * k / (2.0 * settings.mass));
    }
    transform.to_angle(amps);
    Ok(())
}

/// Exact (unquantized) multiplication by `e^{-i V(x_i, t) eps / hbar}`.
pub fn potential_phase_step_exact(state: &mut StateVector, grid: &SpatialGrid, settings: &EvolutionSettings, t: f64) -> Result<()> {
    if state.n_qubits() != grid.n {
        return Err(Error::DimensionMismatch { expected: grid.n, found: state.n_qubits() });
    }
    for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
        let v = settings.potential.eval(grid.x(i), t);
        check_finite("V", v)?;
        *a *= Complex64::from_polar(1.0, -v * settings.dt / settings.hbar);
    }
    Ok(())
}

/// Split-step evolution with FFTs and exact potential phases, in the same
/// order as [`trotter_evolve`].
pub fn trotter_evolve_reference(psi0: &DiscretizedWavefunction, settings: &EvolutionSettings) -> Result<DiscretizedWavefunction> {
    settings.validate()?;
    let grid = psi0.grid;
    let mut state = psi0.state.clone();
    for l in 0..settings.steps {
        potential_phase_step_exact(&mut state, &grid, settings, l as f64 * settings.dt)?;
        kinetic_phase_step_reference(&mut state, &grid, settings)?;
    }
    Ok(DiscretizedWavefunction { grid, state, norm_factor: psi0.norm_factor })
}
