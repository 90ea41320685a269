//! Fidelity (Loschmidt echo) by direct overlap and by the Ramsey
//! interferometer with one control ancilla.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateOp};
use crate::error::{Error, Result};
use crate::qft::qft_circuit;
use crate::rng;
use crate::sawtooth::{evolve_quantum, ut_circuit, uk_circuit, SawtoothParams};
use crate::statevec::{sample_distribution, Pauli, StateVector};

/// A unit the controlled-circuit builder knows how to control. Only
/// diagonal gates ever receive the control; basis changes are applied
/// unconditionally around them, which is exact because they cancel when
/// the control is off.
#[derive(Debug, Clone)]
pub enum ControllableBlock {
    /// A circuit of diagonal gates with identity layout.
    Diagonal(Circuit),
    /// `frame`, then `inner`, then `frame^{-1}`.
    Conjugated { frame: Circuit, inner: Vec<ControllableBlock> },
    /// `e^{i phi}`.
    GlobalPhase(f64),
}

/// `W` as a product of controllable blocks, applied in order.
#[derive(Debug, Clone)]
pub struct ControlledCircuitSpec {
    pub n_qubits: usize,
    pub blocks: Vec<ControllableBlock>,
}

impl ControlledCircuitSpec {
    pub fn new(n_qubits: usize, blocks: Vec<ControllableBlock>) -> Result<Self> {
        let spec = ControlledCircuitSpec { n_qubits, blocks };
        for b in &spec.blocks {
            check_block(b, n_qubits)?;
        }
        Ok(spec)
    }

    /// `W` itself on `n` qubits.
    pub fn circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.n_qubits);
        for b in &self.blocks {
            append_plain(&mut c, b)?;
        }
        Ok(c)
    }

    /// Controlled-`W` on `n + 1` qubits with the control on qubit `n`.
    pub fn controlled(&self) -> Result<Circuit> {
        let control = self.n_qubits;
        let mut c = Circuit::new(self.n_qubits + 1);
        for b in &self.blocks {
            append_controlled(&mut c, b, control)?;
        }
        Ok(c)
    }
}

fn check_block(block: &ControllableBlock, n: usize) -> Result<()> {
    match block {
        ControllableBlock::Diagonal(c) => {
            if c.n_qubits() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.n_qubits() });
            }
            if !c.has_identity_layout() || c.ops().iter().any(|op| !op.is_diagonal()) {
                return Err(Error::Unsupported("diagonal block contains a non-diagonal gate".into()));
            }
        }
        ControllableBlock::Conjugated { frame, inner } => {
            if frame.n_qubits() != n {
                return Err(Error::DimensionMismatch { expected: n, found: frame.n_qubits() });
            }
            for b in inner {
                check_block(b, n)?;
            }
        }
        ControllableBlock::GlobalPhase(phi) => crate::error::check_finite("global phase", *phi)?,
    }
    Ok(())
}

fn append_plain(c: &mut Circuit, block: &ControllableBlock) -> Result<()> {
    match block {
        ControllableBlock::Diagonal(d) => c.append(d),
        ControllableBlock::Conjugated { frame, inner } => {
            c.append(frame)?;
            for b in inner {
                append_plain(c, b)?;
            }
            c.append(&frame.inverse())
        }
        ControllableBlock::GlobalPhase(phi) => {
            c.add_global_phase(*phi);
            Ok(())
        }
    }
}

/// `e^{i gamma}` on `a = b = c = 1` from three controlled phases and two CNOTs.
fn push_doubly_controlled_phase(c: &mut Circuit, a: usize, b: usize, ctl: usize, gamma: f64) -> Result<()> {
    c.cphase(b, ctl, gamma / 2.0)?;
    c.cnot(a, b)?;
    c.cphase(b, ctl, -gamma / 2.0)?;
    c.cnot(a, b)?;
    c.cphase(a, ctl, gamma / 2.0)
}

fn push_controlled_diagonal(c: &mut Circuit, op: &GateOp, ctl: usize) -> Result<()> {
    match *op {
        GateOp::PhaseShift { q, delta } => c.cphase(q, ctl, delta),
        GateOp::ControlledPhase { control, target, delta } => push_doubly_controlled_phase(c, control, target, ctl, delta),
        GateOp::TwoQubitDiagonal { i, j, phases: [p00, p01, p10, p11] } => {
            if p00 != 0.0 {
                c.phase(ctl, p00)?;
            }
            if i == j {
                return c.cphase(i, ctl, p11 - p00);
            }
            let (di, dj, dij) = (p10 - p00, p01 - p00, p11 - p10 - p01 + p00);
            if di != 0.0 {
                c.cphase(i, ctl, di)?;
            }
            if dj != 0.0 {
                c.cphase(j, ctl, dj)?;
            }
            if dij != 0.0 {
                push_doubly_controlled_phase(c, i, j, ctl, dij)?;
            }
            Ok(())
        }
        _ => Err(Error::Unsupported(format!("cannot control non-diagonal gate {op:?}"))),
    }
}

fn append_controlled(c: &mut Circuit, block: &ControllableBlock, ctl: usize) -> Result<()> {
    let total = c.n_qubits();
    match block {
        ControllableBlock::Diagonal(d) => {
            for op in d.ops() {
                push_controlled_diagonal(c, op, ctl)?;
            }
            if d.global_phase() != 0.0 {
                c.phase(ctl, d.global_phase())?;
            }
            Ok(())
        }
        ControllableBlock::Conjugated { frame, inner } => {
            let wide = frame.widened(total)?;
            c.append(&wide)?;
            for b in inner {
                append_controlled(c, b, ctl)?;
            }
            c.append(&wide.inverse())
        }
        ControllableBlock::GlobalPhase(phi) => c.phase(ctl, *phi),
    }
}

/// One map step `U = F^{-1} U_T F U_k` as controllable blocks.
pub fn map_step_blocks(params: &SawtoothParams) -> Result<Vec<ControllableBlock>> {
    Ok(vec![
        ControllableBlock::Diagonal(uk_circuit(params)?),
        ControllableBlock::Conjugated {
            frame: qft_circuit(params.n)?,
            inner: vec![ControllableBlock::Diagonal(ut_circuit(params)?)],
        },
    ])
}

/// `W = (U_eps^dag)^t U^t` with `U_eps` the map at kick `k + eps_k`.
pub fn echo_blocks(params: &SawtoothParams, eps_k: f64, t: usize) -> Result<ControlledCircuitSpec> {
    let forward = map_step_blocks(params)?;
    let perturbed = params.with_k(params.k + eps_k);
    let backward = vec![
        ControllableBlock::Conjugated {
            frame: qft_circuit(params.n)?,
            inner: vec![ControllableBlock::Diagonal(ut_circuit(&perturbed)?.inverse())],
        },
        ControllableBlock::Diagonal(uk_circuit(&perturbed)?.inverse()),
    ];
    let mut blocks = Vec::with_capacity(4 * t);
    for _ in 0..t {
        blocks.extend(forward.iter().cloned());
    }
    for _ in 0..t {
        blocks.extend(backward.iter().cloned());
    }
    ControlledCircuitSpec::new(params.n, blocks)
}

/// `|<U_eps^t psi0 | U^t psi0>|^2`, the perturbation being `k -> k + eps_k`.
pub fn fidelity_direct(psi0: &StateVector, params: &SawtoothParams, eps_k: f64, t: usize) -> Result<f64> {
    let a = evolve_quantum(psi0, params, t)?;
    let b = evolve_quantum(psi0, &params.with_k(params.k + eps_k), t)?;
    Ok(b.overlap(&a)?.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledRamsey {
    pub shots: u64,
    pub sigma_z: f64,
    pub sigma_y: f64,
    pub fidelity: f64,
}

/// Ancilla polarizations after `H`, controlled-`W`, `H`.
///
/// `sigma_z = Re <psi|W|psi>` and `sigma_y = Im <psi|W|psi>`. The latter is
/// minus the textbook `<sigma_y>` of the ancilla, so that `W = e^{i phi}`
/// reads `(cos phi, sin phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamseyResult {
    pub sigma_z: f64,
    pub sigma_y: f64,
    pub fidelity: f64,
    pub sampled: Option<SampledRamsey>,
}

fn ancilla_one_probability_after(state: &StateVector, rotate_y: bool) -> Result<(StateVector, f64)> {
    let mut s = state.clone();
    let a = s.n_qubits() - 1;
    if rotate_y {
        s.phase_shift(a, -std::f64::consts::FRAC_PI_2)?;
        s.hadamard(a)?;
    }
    let p = s.probability_one(a)?;
    Ok((s, p))
}

fn sampled_polarization(p_one: f64, shots: u64, seed: u64) -> Result<f64> {
    let rec = sample_distribution(&[1.0 - p_one, p_one], 1, shots, seed)?;
    Ok((rec.count(0) as f64 - rec.count(1) as f64) / shots as f64)
}

/// Runs the interferometer with `psi0` on the data register and the ancilla
/// on qubit `n` in `|0>`. With `shots`, both polarizations are also
/// estimated from that many simulated measurements each.
pub fn fidelity_ramsey(
    psi0: &StateVector,
    w: &ControlledCircuitSpec,
    shots: Option<u64>,
    seed: u64,
) -> Result<RamseyResult> {
    if psi0.n_qubits() != w.n_qubits {
        return Err(Error::DimensionMismatch { expected: w.n_qubits, found: psi0.n_qubits() });
    }
    let n = w.n_qubits;
    let mut amps = psi0.amplitudes().to_vec();
    amps.resize(psi0.dim() * 2, num_complex::Complex64::new(0.0, 0.0));
    let mut state = StateVector::from_amplitudes(amps)?;
    let mut circuit = Circuit::new(n + 1);
    circuit.h(n)?;
    circuit.append(&w.controlled()?)?;
    circuit.h(n)?;
    circuit.apply(&mut state)?;

    let sigma_z = state.expectation_pauli(n, Pauli::Z)?;
    let sigma_y = -state.expectation_pauli(n, Pauli::Y)?;
    let sampled = match shots {
        None => None,
        Some(shots) => {
            let (_, pz) = ancilla_one_probability_after(&state, false)?;
            let (_, py) = ancilla_one_probability_after(&state, true)?;
            let z = sampled_polarization(pz, shots, seed)?;
            let y = -sampled_polarization(py, shots, rng::derive(seed, 1))?;
            Some(SampledRamsey { shots, sigma_z: z, sigma_y: y, fidelity: z * z + y * y })
        }
    };
    Ok(RamseyResult { sigma_z, sigma_y, fidelity: sigma_z * sigma_z + sigma_y * sigma_y, sampled })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_global_phase() {
        let psi = StateVector::uniform(2).unwrap();
        let id = ControlledCircuitSpec::new(2, vec![]).unwrap();
        let r = fidelity_ramsey(&psi, &id, None, 0).unwrap();
        assert!((r.sigma_z - 1.0).abs() < 1e-14 && r.sigma_y.abs() < 1e-14);
        let phi = 0.7;
        let g = ControlledCircuitSpec::new(2, vec![ControllableBlock::GlobalPhase(phi)]).unwrap();
        let r = fidelity_ramsey(&psi, &g, Some(4000), 3).unwrap();
        assert!((r.sigma_z - phi.cos()).abs() < 1e-12);
        assert!((r.sigma_y - phi.sin()).abs() < 1e-12);
        assert!((r.fidelity - 1.0).abs() < 1e-12);
        let s = r.sampled.unwrap();
        assert!((s.sigma_z - phi.cos()).abs() < 0.1 && (s.sigma_y - phi.sin()).abs() < 0.1);
    }

    #[test]
    fn width_mismatch() {
        let psi = StateVector::uniform(3).unwrap();
        let id = ControlledCircuitSpec::new(2, vec![]).unwrap();
        assert!(matches!(fidelity_ramsey(&psi, &id, None, 0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_non_diagonal_block() {
        let mut c = Circuit::new(2);
        c.h(0).unwrap();
        assert!(ControlledCircuitSpec::new(2, vec![ControllableBlock::Diagonal(c)]).is_err());
    }
}
