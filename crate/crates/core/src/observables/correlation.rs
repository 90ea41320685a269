//! Dynamical correlation functions `<psi0| (U^dag)^t A^dag U^t B |psi0>` for
//! observables diagonal in the angle or the action basis.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sawtooth::{ActionTransform, SawtoothEvolver, SawtoothParams, SignedActionMap};
use crate::statevec::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObservableBasis {
    Angle,
    Action,
}

/// An operator diagonal in one of the two map bases. `values[b]` is the
/// eigenvalue on basis index `b` (`theta_b = 2 pi b / N`, or `m = signed(b)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalObservable {
    pub basis: ObservableBasis,
    pub values: Vec<Complex64>,
}

impl DiagonalObservable {
    pub fn identity(n: usize) -> Self {
        DiagonalObservable { basis: ObservableBasis::Angle, values: vec![Complex64::new(1.0, 0.0); 1 << n] }
    }

    pub fn angle_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let dim = 1usize << n;
        let values = (0..dim).map(|b| f(2.0 * PI * b as f64 / dim as f64)).collect();
        DiagonalObservable { basis: ObservableBasis::Angle, values }
    }

    pub fn action_fn(n: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let map = SignedActionMap::new(n);
        let values = (0..1usize << n).map(|b| f(map.signed(b))).collect();
        DiagonalObservable { basis: ObservableBasis::Action, values }
    }

    /// `O |v>` for angle-representation amplitudes.
    pub fn apply(&self, amps: &mut [Complex64]) -> Result<()> {
        if amps.len() != self.values.len() {
            return Err(Error::DimensionMismatch { expected: self.values.len(), found: amps.len() });
        }
        let n = amps.len().trailing_zeros() as usize;
        match self.basis {
            ObservableBasis::Angle => crate::kernels::diagonal(amps, &self.values),
            ObservableBasis::Action => {
                let t = ActionTransform::new(n);
                t.to_action(amps);
                crate::kernels::diagonal(amps, &self.values);
                t.to_angle(amps);
            }
        }
        Ok(())
    }
}

fn evolve_raw(evolver: &SawtoothEvolver, amps: Vec<Complex64>, steps: usize) -> Result<Vec<Complex64>> {
    // The map is linear, so unnormalized vectors evolve just like states.
    let mut v = StateVector::from_raw(amps)?;
    for _ in 0..steps {
        evolver.step(&mut v)?;
    }
    Ok(v.into_amplitudes())
}

/// `<psi0| (U^dag)^t A^dag U^t B |psi0> = <A U^t psi0 | U^t B psi0>` from two
/// gate-level evolutions.
pub fn correlation_function(
    psi0: &StateVector,
    a: &DiagonalObservable,
    b: &DiagonalObservable,
    params: &SawtoothParams,
    t: usize,
) -> Result<Complex64> {
    if psi0.n_qubits() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, found: psi0.n_qubits() });
    }
    let evolver = SawtoothEvolver::gates(params)?;
    let mut left = evolve_raw(&evolver, psi0.amplitudes().to_vec(), t)?;
    a.apply(&mut left)?;
    let mut right = psi0.amplitudes().to_vec();
    b.apply(&mut right)?;
    let right = evolve_raw(&evolver, right, t)?;
    Ok(left.iter().zip(&right).map(|(l, r)| l.conj() * r).sum())
}
