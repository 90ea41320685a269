//! Gate-list circuits with per-kind gate accounting.
//!
//! A circuit stores its gates on physical wires together with a `layout`:
//! after the last gate, logical qubit `q` sits on wire `layout[q]`. Executing
//! a circuit ends with a free index relabeling that restores logical order,
//! which is how the QFT's bit reversal is handled without SWAP gates.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::kernels;
use crate::statevec::StateVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    Hadamard { q: usize },
    PhaseShift { q: usize, delta: f64 },
    Cnot { control: usize, target: usize },
    /// Phase `phases[2 a_i + a_j]` on the bit pair `(a_i, a_j)`; `i == j` allowed.
    TwoQubitDiagonal { i: usize, j: usize, phases: [f64; 4] },
    ControlledPhase { control: usize, target: usize, delta: f64 },
    /// Bit flip on `target` conditioned on each `(qubit, value)` control.
    MultiControlledX { controls: Vec<(usize, bool)>, target: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    Hadamard,
    PhaseShift,
    Cnot,
    TwoQubitDiagonal,
    ControlledPhase,
    MultiControlledX,
}

impl GateOp {
    pub fn kind(&self) -> GateKind {
        match self {
            GateOp::Hadamard { .. } => GateKind::Hadamard,
            GateOp::PhaseShift { .. } => GateKind::PhaseShift,
            GateOp::Cnot { .. } => GateKind::Cnot,
            GateOp::TwoQubitDiagonal { .. } => GateKind::TwoQubitDiagonal,
            GateOp::ControlledPhase { .. } => GateKind::ControlledPhase,
            GateOp::MultiControlledX { .. } => GateKind::MultiControlledX,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Hadamard { q } | GateOp::PhaseShift { q, .. } => vec![*q],
            GateOp::Cnot { control, target } | GateOp::ControlledPhase { control, target, .. } => {
                vec![*control, *target]
            }
            GateOp::TwoQubitDiagonal { i, j, .. } => {
                if i == j {
                    vec![*i]
                } else {
                    vec![*i, *j]
                }
            }
            GateOp::MultiControlledX { controls, target } => {
                let mut qs: Vec<usize> = controls.iter().map(|c| c.0).collect();
                qs.push(*target);
                qs
            }
        }
    }

    /// True when the gate maps basis states to basis states up to a phase.
    pub fn is_permutation_phase(&self) -> bool {
        !matches!(self, GateOp::Hadamard { .. })
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            GateOp::PhaseShift { .. }
                | GateOp::TwoQubitDiagonal { .. }
                | GateOp::ControlledPhase { .. }
        )
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        match self {
            GateOp::Hadamard { .. } => {}
            GateOp::PhaseShift { delta, .. } => check_finite("phase", *delta)?,
            GateOp::Cnot { control, target } => {
                if control == target {
                    return Err(Error::SameQubit(*control));
                }
            }
            GateOp::ControlledPhase { control, target, delta } => {
                if control == target {
                    return Err(Error::SameQubit(*control));
                }
                check_finite("phase", *delta)?;
            }
            GateOp::TwoQubitDiagonal { phases, .. } => {
                for p in phases {
                    check_finite("phase", *p)?;
                }
            }
            GateOp::MultiControlledX { controls, target } => {
                let mut seen = vec![false; n_qubits];
                seen[*target] = true;
                for &(q, _) in controls {
                    if seen[q] {
                        return Err(Error::SameQubit(q));
                    }
                    seen[q] = true;
                }
            }
        }
        Ok(())
    }

    pub(crate) fn relabeled(&self, map: impl Fn(usize) -> usize) -> GateOp {
        match self {
            GateOp::Hadamard { q } => GateOp::Hadamard { q: map(*q) },
            GateOp::PhaseShift { q, delta } => GateOp::PhaseShift { q: map(*q), delta: *delta },
            GateOp::Cnot { control, target } => {
                GateOp::Cnot { control: map(*control), target: map(*target) }
            }
            GateOp::TwoQubitDiagonal { i, j, phases } => {
                GateOp::TwoQubitDiagonal { i: map(*i), j: map(*j), phases: *phases }
            }
            GateOp::ControlledPhase { control, target, delta } => GateOp::ControlledPhase {
                control: map(*control),
                target: map(*target),
                delta: *delta,
            },
            GateOp::MultiControlledX { controls, target } => GateOp::MultiControlledX {
                controls: controls.iter().map(|&(q, v)| (map(q), v)).collect(),
                target: map(*target),
            },
        }
    }

    /// The adjoint gate.
    pub fn adjoint(&self) -> GateOp {
        match self {
            GateOp::PhaseShift { q, delta } => GateOp::PhaseShift { q: *q, delta: -delta },
            GateOp::TwoQubitDiagonal { i, j, phases } => GateOp::TwoQubitDiagonal {
                i: *i,
                j: *j,
                phases: phases.map(|p| -p),
            },
            GateOp::ControlledPhase { control, target, delta } => {
                GateOp::ControlledPhase { control: *control, target: *target, delta: -delta }
            }
            other => other.clone(),
        }
    }

    /// Applies the gate to a raw buffer. Operands must already be validated.
    pub(crate) fn apply_raw(&self, amps: &mut [Complex64]) {
        match self {
            GateOp::Hadamard { q } => kernels::hadamard(amps, *q),
            GateOp::PhaseShift { q, delta } => kernels::phase_shift(amps, *q, *delta),
            GateOp::Cnot { control, target } => kernels::cnot(amps, *control, *target),
            GateOp::TwoQubitDiagonal { i, j, phases } => {
                kernels::two_qubit_diagonal(amps, *i, *j, phases)
            }
            GateOp::ControlledPhase { control, target, delta } => {
                kernels::controlled_phase(amps, *control, *target, *delta)
            }
            GateOp::MultiControlledX { controls, target } => {
                let (mask, pattern) = control_mask(controls);
                kernels::multi_controlled_x(amps, mask, pattern, *target)
            }
        }
    }
}

pub(crate) fn control_mask(controls: &[(usize, bool)]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(m, p), &(q, v)| (m | 1 << q, if v { p | 1 << q } else { p }))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub hadamard: usize,
    pub phase_shift: usize,
    pub cnot: usize,
    pub two_qubit_diagonal: usize,
    pub controlled_phase: usize,
    pub multi_controlled_x: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.hadamard
            + self.phase_shift
            + self.cnot
            + self.two_qubit_diagonal
            + self.controlled_phase
            + self.multi_controlled_x
    }

    pub fn get(&self, kind: GateKind) -> usize {
        match kind {
            GateKind::Hadamard => self.hadamard,
            GateKind::PhaseShift => self.phase_shift,
            GateKind::Cnot => self.cnot,
            GateKind::TwoQubitDiagonal => self.two_qubit_diagonal,
            GateKind::ControlledPhase => self.controlled_phase,
            GateKind::MultiControlledX => self.multi_controlled_x,
        }
    }

    fn bump(&mut self, kind: GateKind) {
        match kind {
            GateKind::Hadamard => self.hadamard += 1,
            GateKind::PhaseShift => self.phase_shift += 1,
            GateKind::Cnot => self.cnot += 1,
            GateKind::TwoQubitDiagonal => self.two_qubit_diagonal += 1,
            GateKind::ControlledPhase => self.controlled_phase += 1,
            GateKind::MultiControlledX => self.multi_controlled_x += 1,
        }
    }

    pub fn add(&mut self, other: &GateCounts) {
        self.hadamard += other.hadamard;
        self.phase_shift += other.phase_shift;
        self.cnot += other.cnot;
        self.two_qubit_diagonal += other.two_qubit_diagonal;
        self.controlled_phase += other.controlled_phase;
        self.multi_controlled_x += other.multi_controlled_x;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
    counts: GateCounts,
    layout: Vec<usize>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
            counts: GateCounts::default(),
            layout: (0..n_qubits).collect(),
            global_phase: 0.0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn counts(&self) -> &GateCounts {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn layout(&self) -> &[usize] {
        &self.layout
    }

    pub fn has_identity_layout(&self) -> bool {
        self.layout.iter().enumerate().all(|(q, &w)| q == w)
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_global_phase(&mut self, phase: f64) {
        self.global_phase += phase;
    }

    /// Appends a gate addressed by logical qubit indices.
    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        let op = op.relabeled(|q| self.layout[q]);
        self.counts.bump(op.kind());
        self.ops.push(op);
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.push(GateOp::Hadamard { q })
    }

    pub fn phase(&mut self, q: usize, delta: f64) -> Result<()> {
        self.push(GateOp::PhaseShift { q, delta })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(GateOp::Cnot { control, target })
    }

    pub fn cphase(&mut self, control: usize, target: usize, delta: f64) -> Result<()> {
        self.push(GateOp::ControlledPhase { control, target, delta })
    }

    pub fn diag2(&mut self, i: usize, j: usize, phases: [f64; 4]) -> Result<()> {
        self.push(GateOp::TwoQubitDiagonal { i, j, phases })
    }

    /// Relabels logical qubits for free: afterwards logical qubit `q` is the
    /// one that was previously logical `perm[q]`.
    pub fn relabel(&mut self, perm: &[usize]) -> Result<()> {
        check_permutation(perm, self.n_qubits)?;
        self.layout = perm.iter().map(|&p| self.layout[p]).collect();
        Ok(())
    }

    /// Sequential composition: `self` then `other`.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        for op in &other.ops {
            let op = op.relabeled(|w| self.layout[w]);
            self.counts.bump(op.kind());
            self.ops.push(op);
        }
        self.layout = other.layout.iter().map(|&w| self.layout[w]).collect();
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// The same circuit on a wider register; the extra qubits stay idle.
    pub fn widened(&self, n_qubits: usize) -> Result<Circuit> {
        if n_qubits < self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: n_qubits });
        }
        let mut layout = self.layout.clone();
        layout.extend(self.n_qubits..n_qubits);
        Ok(Circuit { n_qubits, ops: self.ops.clone(), counts: self.counts, layout, global_phase: self.global_phase })
    }

    /// Formal inverse: reversed adjoint gates with the layout undone.
    pub fn inverse(&self) -> Circuit {
        let mut inv_layout = vec![0; self.n_qubits];
        for (q, &w) in self.layout.iter().enumerate() {
            inv_layout[w] = q;
        }
        let ops: Vec<GateOp> =
            self.ops.iter().rev().map(|op| op.adjoint().relabeled(|w| inv_layout[w])).collect();
        Circuit {
            n_qubits: self.n_qubits,
            ops,
            counts: self.counts,
            layout: inv_layout,
            global_phase: -self.global_phase,
        }
    }

    /// Runs the circuit on `state` in place and returns the number of gates executed.
    pub fn apply(&self, state: &mut StateVector) -> Result<usize> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: state.n_qubits() });
        }
        self.apply_raw(state.amplitudes_mut());
        Ok(self.ops.len())
    }

    pub(crate) fn apply_raw(&self, amps: &mut [Complex64]) {
        for op in &self.ops {
            op.apply_raw(amps);
        }
        if self.global_phase != 0.0 {
            let w = Complex64::from_polar(1.0, self.global_phase);
            amps.iter_mut().for_each(|a| *a *= w);
        }
        if !self.has_identity_layout() {
            let permuted = kernels::permute_qubits(amps, &self.layout);
            amps.copy_from_slice(&permuted);
        }
    }

    /// Rewrites every gate over {Hadamard, PhaseShift, CNOT}; phases that
    /// only affect the global phase go to `global_phase`.
    pub fn lower_to_elementary(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.n_qubits);
        out.global_phase = self.global_phase;
        for op in &self.ops {
            match *op {
                GateOp::Hadamard { .. } | GateOp::PhaseShift { .. } | GateOp::Cnot { .. } => {
                    out.push(op.clone())?
                }
                GateOp::ControlledPhase { control, target, delta } => {
                    lower_cphase(&mut out, control, target, delta)?
                }
                GateOp::TwoQubitDiagonal { i, j, phases } => {
                    let [p00, p01, p10, p11] = phases;
                    out.global_phase += p00;
                    if i == j {
                        if p11 != p00 {
                            out.phase(i, p11 - p00)?;
                        }
                        continue;
                    }
                    if p10 != p00 {
                        out.phase(i, p10 - p00)?;
                    }
                    if p01 != p00 {
                        out.phase(j, p01 - p00)?;
                    }
                    let gamma = p11 - p10 - p01 + p00;
                    if gamma != 0.0 {
                        lower_cphase(&mut out, i, j, gamma)?;
                    }
                }
                GateOp::MultiControlledX { .. } => {
                    return Err(Error::Unsupported(
                        "multi-controlled X has no elementary lowering".into(),
                    ))
                }
            }
        }
        out.layout = self.layout.clone();
        Ok(out)
    }

    /// Line-oriented text form: one `KIND q0 [q1] [params...]` line per gate.
    /// Lines starting with `#` carry the register width, layout and global phase.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# qchaos-circuit n_qubits={} ops={}", self.n_qubits, self.ops.len());
        if !self.has_identity_layout() {
            let l: Vec<String> = self.layout.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(s, "# layout {}", l.join(" "));
        }
        if self.global_phase != 0.0 {
            let _ = writeln!(s, "# global_phase {:?}", self.global_phase);
        }
        for op in &self.ops {
            let _ = match op {
                GateOp::Hadamard { q } => writeln!(s, "H {q}"),
                GateOp::PhaseShift { q, delta } => writeln!(s, "P {q} {delta:?}"),
                GateOp::Cnot { control, target } => writeln!(s, "CNOT {control} {target}"),
                GateOp::ControlledPhase { control, target, delta } => {
                    writeln!(s, "CP {control} {target} {delta:?}")
                }
                GateOp::TwoQubitDiagonal { i, j, phases } => writeln!(
                    s,
                    "DIAG2 {i} {j} {:?} {:?} {:?} {:?}",
                    phases[0], phases[1], phases[2], phases[3]
                ),
                GateOp::MultiControlledX { controls, target } => {
                    let c: Vec<String> =
                        controls.iter().map(|(q, v)| format!("{q}:{}", *v as u8)).collect();
                    writeln!(s, "MCX {target} {}", c.join(" "))
                }
            };
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let bad = |line: &str| Error::InvalidParameter(format!("cannot parse circuit line `{line}`"));
        let mut circuit: Option<Circuit> = None;
        let mut layout: Option<Vec<usize>> = None;
        let mut global_phase = 0.0;
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                match words.next() {
                    Some("qchaos-circuit") => {
                        let n = words
                            .find_map(|w| w.strip_prefix("n_qubits="))
                            .and_then(|v| v.parse().ok())
                            .ok_or_else(|| bad(line))?;
                        circuit = Some(Circuit::new(n));
                    }
                    Some("layout") => {
                        let l: std::result::Result<Vec<usize>, _> = words.map(str::parse).collect();
                        layout = Some(l.map_err(|_| bad(line))?);
                    }
                    Some("global_phase") => {
                        global_phase =
                            words.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad(line))?;
                    }
                    _ => {}
                }
                continue;
            }
            let c = circuit.as_mut().ok_or_else(|| bad(line))?;
            let words: Vec<&str> = line.split_whitespace().collect();
            let int = |k: usize| words.get(k).and_then(|w| w.parse::<usize>().ok()).ok_or_else(|| bad(line));
            let real = |k: usize| words.get(k).and_then(|w| w.parse::<f64>().ok()).ok_or_else(|| bad(line));
            let op = match words[0] {
                "H" => GateOp::Hadamard { q: int(1)? },
                "P" => GateOp::PhaseShift { q: int(1)?, delta: real(2)? },
                "CNOT" => GateOp::Cnot { control: int(1)?, target: int(2)? },
                "CP" => GateOp::ControlledPhase { control: int(1)?, target: int(2)?, delta: real(3)? },
                "DIAG2" => GateOp::TwoQubitDiagonal {
                    i: int(1)?,
                    j: int(2)?,
                    phases: [real(3)?, real(4)?, real(5)?, real(6)?],
                },
                "MCX" => {
                    let mut controls = Vec::new();
                    for w in &words[2..] {
                        let (q, v) = w.split_once(':').ok_or_else(|| bad(line))?;
                        let q = q.parse().map_err(|_| bad(line))?;
                        let v = match v {
                            "0" => false,
                            "1" => true,
                            _ => return Err(bad(line)),
                        };
                        controls.push((q, v));
                    }
                    GateOp::MultiControlledX { controls, target: int(1)? }
                }
                _ => return Err(bad(line)),
            };
            c.push(op)?;
        }
        let mut c = circuit.ok_or_else(|| bad("<missing header>"))?;
        if let Some(l) = layout {
            check_permutation(&l, c.n_qubits)?;
            c.layout = l;
        }
        c.global_phase = global_phase;
        Ok(c)
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: perm.len() });
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// `e^{i delta a b}` as `P(a, d/2) P(b, d/2) CNOT(a,b) P(b, -d/2) CNOT(a,b)`.
fn lower_cphase(out: &mut Circuit, a: usize, b: usize, delta: f64) -> Result<()> {
    out.phase(a, delta / 2.0)?;
    out.phase(b, delta / 2.0)?;
    out.cnot(a, b)?;
    out.phase(b, -delta / 2.0)?;
    out.cnot(a, b)
}

/// Executes `circuit` on `state` (free-function form).
pub fn apply_circuit(state: &mut StateVector, circuit: &Circuit) -> Result<usize> {
    circuit.apply(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn random_state(n: usize, seed: u64) -> StateVector {
        use rand::Rng;
        let mut rng = crate::rng::seeded(seed);
        let amps = (0..1 << n)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        StateVector::normalized(amps).unwrap()
    }

    fn sample_circuit() -> Circuit {
        let mut c = Circuit::new(3);
        c.h(0).unwrap();
        c.phase(1, 0.3).unwrap();
        c.cnot(0, 2).unwrap();
        c.cphase(2, 1, -1.1).unwrap();
        c.diag2(0, 1, [0.1, 0.2, 0.3, 0.4]).unwrap();
        c.diag2(2, 2, [0.5, 0.0, 0.0, -0.7]).unwrap();
        c.h(2).unwrap();
        c
    }

    #[test]
    fn counts_follow_ops() {
        let c = sample_circuit();
        assert_eq!(c.counts().total(), c.len());
        assert_eq!(c.counts().hadamard, 2);
        assert_eq!(c.counts().two_qubit_diagonal, 2);
    }

    #[test]
    fn push_rejects_bad_operands() {
        let mut c = Circuit::new(2);
        assert!(c.cnot(1, 1).is_err());
        assert!(c.h(2).is_err());
        assert!(c.phase(0, f64::INFINITY).is_err());
        assert!(c.is_empty());
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = random_state(3, 1);
        let mut t = s.clone();
        assert_eq!(Circuit::new(3).apply(&mut t).unwrap(), 0);
        assert_eq!(s, t);
    }

    #[test]
    fn circuit_then_inverse_is_identity() {
        let mut c = sample_circuit();
        c.relabel(&[2, 0, 1]).unwrap();
        c.h(0).unwrap();
        c.add_global_phase(0.4);
        let s = random_state(3, 2);
        let mut t = s.clone();
        c.apply(&mut t).unwrap();
        c.inverse().apply(&mut t).unwrap();
        for (a, b) in s.amplitudes().iter().zip(t.amplitudes()) {
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn lowering_is_exact() {
        let c = sample_circuit();
        let low = c.lower_to_elementary().unwrap();
        assert_eq!(low.counts().two_qubit_diagonal + low.counts().controlled_phase, 0);
        let s = random_state(3, 3);
        let (mut a, mut b) = (s.clone(), s);
        c.apply(&mut a).unwrap();
        low.apply(&mut b).unwrap();
        let ov = a.overlap(&b).unwrap();
        assert!((ov - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lowering_rejects_mcx() {
        let mut c = Circuit::new(3);
        c.push(GateOp::MultiControlledX { controls: vec![(0, true), (1, false)], target: 2 })
            .unwrap();
        assert!(matches!(c.lower_to_elementary(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn text_round_trip() {
        let mut c = sample_circuit();
        c.push(GateOp::MultiControlledX { controls: vec![(0, true), (1, false)], target: 2 })
            .unwrap();
        c.relabel(&[1, 2, 0]).unwrap();
        c.add_global_phase(PI / 7.0);
        let text = c.to_text();
        let back = Circuit::from_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), c.len());
    }

    #[test]
    fn text_parse_errors() {
        assert!(Circuit::from_text("H 0\n").is_err());
        assert!(Circuit::from_text("# qchaos-circuit n_qubits=2\nFOO 1\n").is_err());
        assert!(Circuit::from_text("# qchaos-circuit n_qubits=2\nCNOT 1 1\n").is_err());
    }
}
