//! Diagonal phases `|x> -> e^{i c f(x)} |x>` through an ancilla register.
//!
//! The data register occupies qubits `0..n`, the ancilla `n..n+m`. The
//! circuit writes `f(x)` into the ancilla with a table of multi-controlled
//! bit sets, kicks a phase with `m` single-qubit phase shifts (`c 2^j` on
//! ancilla bit `j`), then replays the table in reverse to clear the ancilla.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{control_mask, Circuit, GateOp};
use crate::error::{check_finite, Error, Result};
use crate::statevec::StateVector;

/// Widest joint register (data + ancilla) the basis-tracking executor indexes.
pub const MAX_JOINT_QUBITS: usize = 63;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AncillaLayout {
    pub data_qubits: usize,
    pub ancilla_qubits: usize,
    /// Phase per unit of `f`.
    pub value_scale: f64,
    /// `f(x)` for every data basis state `x`.
    pub function_table: Vec<u64>,
}

impl AncillaLayout {
    pub fn new(data_qubits: usize, ancilla_qubits: usize, value_scale: f64, function_table: Vec<u64>) -> Result<Self> {
        let layout = AncillaLayout { data_qubits, ancilla_qubits, value_scale, function_table };
        layout.validate()?;
        Ok(layout)
    }

    pub fn total_qubits(&self) -> usize {
        self.data_qubits + self.ancilla_qubits
    }

    pub fn validate(&self) -> Result<()> {
        if self.data_qubits == 0 || self.ancilla_qubits == 0 {
            return Err(Error::InvalidParameter("data and ancilla registers need at least one qubit".into()));
        }
        if self.total_qubits() > MAX_JOINT_QUBITS {
            return Err(Error::Capacity {
                what: "data + ancilla qubits",
                requested: self.total_qubits(),
                limit: MAX_JOINT_QUBITS,
            });
        }
        check_finite("value scale", self.value_scale)?;
        let dim = 1usize << self.data_qubits;
        if self.function_table.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.function_table.len() });
        }
        let limit = 1u64 << self.ancilla_qubits;
        if let Some((index, &value)) = self.function_table.iter().enumerate().find(|(_, &v)| v >= limit) {
            return Err(Error::AncillaOverflow { index, value: value as f64, bits: self.ancilla_qubits as u32 });
        }
        Ok(())
    }
}

/// Step 1 alone: `|0>_a |x> -> |f(x)>_a |x>`.
pub fn function_evaluation_circuit(layout: &AncillaLayout) -> Result<Circuit> {
    layout.validate()?;
    let n = layout.data_qubits;
    let mut c = Circuit::new(layout.total_qubits());
    for (x, &fx) in layout.function_table.iter().enumerate() {
        if fx == 0 {
            continue;
        }
        let controls: Vec<(usize, bool)> = (0..n).map(|q| (q, (x >> q) & 1 == 1)).collect();
        for j in 0..layout.ancilla_qubits {
            if (fx >> j) & 1 == 1 {
                c.push(GateOp::MultiControlledX { controls: controls.clone(), target: n + j })?;
            }
        }
    }
    Ok(c)
}

/// Step 2 alone: `|y>_a -> e^{i c y} |y>_a` as `m` phase shifts.
pub fn phase_kick_circuit(layout: &AncillaLayout) -> Result<Circuit> {
    let mut c = Circuit::new(layout.total_qubits());
    for j in 0..layout.ancilla_qubits {
        c.phase(layout.data_qubits + j, layout.value_scale * (1u64 << j) as f64)?;
    }
    Ok(c)
}

/// The full three-step construction.
pub fn build_diagonal_phase_via_ancilla(layout: &AncillaLayout) -> Result<Circuit> {
    let compute = function_evaluation_circuit(layout)?;
    let mut c = compute.clone();
    c.append(&phase_kick_circuit(layout)?)?;
    c.append(&compute.inverse())?;
    Ok(c)
}

/// A circuit of permutation and phase gates compiled to its action on the
/// data subspace with the ancilla block in `|0>`: `|x> -> e^{i phase[x]} |target[x]>`.
///
/// This is exact gate-by-gate execution; it only avoids storing ancilla
/// configurations that never receive amplitude.
#[derive(Debug, Clone)]
pub struct CompiledPermutationPhase {
    data_qubits: usize,
    total_qubits: usize,
    target: Vec<u64>,
    phase: Vec<f64>,
}

impl CompiledPermutationPhase {
    pub fn compile(circuit: &Circuit, data_qubits: usize) -> Result<Self> {
        let total = circuit.n_qubits();
        if data_qubits == 0 || data_qubits > total {
            return Err(Error::InvalidParameter(format!(
                "data register of {data_qubits} qubits does not fit a {total}-qubit circuit"
            )));
        }
        if total > MAX_JOINT_QUBITS {
            return Err(Error::Capacity { what: "joint qubits", requested: total, limit: MAX_JOINT_QUBITS });
        }
        let dim = 1usize << data_qubits;
        let mut idx: Vec<u64> = (0..dim as u64).collect();
        let mut phase = vec![0.0f64; dim];
        let bit = |j: u64, q: usize| (j >> q) & 1 == 1;
        for op in circuit.ops() {
            match op {
                GateOp::Hadamard { .. } => {
                    return Err(Error::Unsupported("Hadamard is not a permutation-phase gate".into()))
                }
                GateOp::PhaseShift { q, delta } => {
                    for (j, p) in idx.iter().zip(phase.iter_mut()) {
                        if bit(*j, *q) {
                            *p += delta;
                        }
                    }
                }
                GateOp::ControlledPhase { control, target, delta } => {
                    for (j, p) in idx.iter().zip(phase.iter_mut()) {
                        if bit(*j, *control) && bit(*j, *target) {
                            *p += delta;
                        }
                    }
                }
                GateOp::TwoQubitDiagonal { i, j: qj, phases } => {
                    for (j, p) in idx.iter().zip(phase.iter_mut()) {
                        *p += phases[(((*j >> i) & 1) << 1 | ((*j >> qj) & 1)) as usize];
                    }
                }
                GateOp::Cnot { control, target } => {
                    for j in idx.iter_mut() {
                        if bit(*j, *control) {
                            *j ^= 1 << target;
                        }
                    }
                }
                GateOp::MultiControlledX { controls, target } => {
                    let (mask, pattern) = control_mask(controls);
                    let (mask, pattern) = (mask as u64, pattern as u64);
                    for j in idx.iter_mut() {
                        if *j & mask == pattern {
                            *j ^= 1 << target;
                        }
                    }
                }
            }
        }
        if !circuit.has_identity_layout() {
            let layout = circuit.layout();
            for j in idx.iter_mut() {
                let mut out = 0u64;
                for (q, &w) in layout.iter().enumerate() {
                    out |= ((*j >> w) & 1) << q;
                }
                *j = out;
            }
        }
        let g = circuit.global_phase();
        phase.iter_mut().for_each(|p| *p += g);
        Ok(CompiledPermutationPhase { data_qubits, total_qubits: total, target: idx, phase })
    }

    /// Number of data basis states whose image leaves the ancilla non-zero.
    pub fn dirty_ancilla_count(&self) -> usize {
        let data_mask = (1u64 << self.data_qubits) - 1;
        self.target.iter().filter(|&&j| j & !data_mask != 0).count()
    }

    /// Probability that the ancilla block is left non-zero for input `state`.
    pub fn ancilla_residual(&self, state: &StateVector) -> Result<f64> {
        self.check(state)?;
        let data_mask = (1u64 << self.data_qubits) - 1;
        Ok(self
            .target
            .iter()
            .zip(state.amplitudes())
            .filter(|(&j, _)| j & !data_mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Phase acquired by data basis state `x` (meaningful when the map is diagonal).
    pub fn phase_of(&self, x: usize) -> f64 {
        self.phase[x]
    }

    pub fn is_diagonal(&self) -> bool {
        self.target.iter().enumerate().all(|(x, &j)| j == x as u64)
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if state.n_qubits() != self.data_qubits {
            return Err(Error::DimensionMismatch { expected: self.data_qubits, found: state.n_qubits() });
        }
        Ok(())
    }

    /// Applies the compiled map to a data-register state. Fails if any
    /// amplitude would be left entangled with a non-zero ancilla.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        self.check(state)?;
        let residual = self.ancilla_residual(state)?;
        if residual > 0.0 {
            return Err(Error::Unsupported(format!(
                "circuit leaves ancilla populated with probability {residual}"
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
        for (x, a) in state.amplitudes().iter().enumerate() {
            out[self.target[x] as usize] += a * Complex64::from_polar(1.0, self.phase[x]);
        }
        state.amplitudes_mut().copy_from_slice(&out);
        Ok(())
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }
}
