//! Gate-level simulation of quantum algorithms for complex dynamics: the
//! quantum sawtooth map, split-operator Schrödinger evolution, fidelity
//! readout through a Ramsey interferometer, noise channels and the
//! quantum-volume figure of merit.

pub mod ancilla;
pub mod circuit;
pub mod classical;
pub mod error;
pub mod kernels;
pub mod noise;
pub mod observables;
pub mod qft;
pub mod qvolume;
pub mod rng;
pub mod sawtooth;
pub mod schrodinger;
pub mod statevec;

pub use circuit::{apply_circuit, Circuit, GateCounts, GateKind, GateOp};
pub use error::{Error, Result};
pub use statevec::{BasisIndex, MeasurementRecord, Pauli, StateVector};
