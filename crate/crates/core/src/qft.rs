//! Quantum Fourier transform, `b_l = N^{-1/2} sum_k e^{2 pi i k l / N} a_k`.

use std::f64::consts::PI;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::statevec::StateVector;

/// `n` Hadamards and `n(n-1)/2` controlled phases; the output bit reversal
/// is carried in the circuit layout instead of SWAP gates.
pub fn qft_circuit(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidParameter("QFT needs at least one qubit".into()));
    }
    let mut c = Circuit::new(n);
    for j in (0..n).rev() {
        c.h(j)?;
        for m in (0..j).rev() {
            c.cphase(m, j, PI / (1u64 << (j - m)) as f64)?;
        }
    }
    let reversed: Vec<usize> = (0..n).rev().collect();
    c.relabel(&reversed)?;
    Ok(c)
}

pub fn inverse_qft_circuit(n: usize) -> Result<Circuit> {
    Ok(qft_circuit(n)?.inverse())
}

/// Applies the (inverse) QFT to `state` in place.
pub fn apply_qft(state: &mut StateVector, inverse: bool) -> Result<()> {
    let c = if inverse {
        inverse_qft_circuit(state.n_qubits())?
    } else {
        qft_circuit(state.n_qubits())?
    };
    c.apply(state)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_counts() {
        assert_eq!(qft_circuit(1).unwrap().len(), 1);
        assert_eq!(qft_circuit(1).unwrap().counts().hadamard, 1);
        assert_eq!(qft_circuit(3).unwrap().len(), 6);
        for n in 1..=20 {
            let c = qft_circuit(n).unwrap();
            assert_eq!(c.len(), n * (n + 1) / 2);
            assert_eq!(c.counts().hadamard, n);
            assert_eq!(c.counts().controlled_phase, n * (n - 1) / 2);
        }
        assert!(qft_circuit(0).is_err());
    }

    #[test]
    fn zero_maps_to_uniform_and_back() {
        for n in 1..=6 {
            let mut s = StateVector::basis(n, 0).unwrap();
            apply_qft(&mut s, false).unwrap();
            let expected = (1usize << n) as f64;
            for a in s.amplitudes() {
                assert!((a.re - expected.sqrt().recip()).abs() < 1e-12 && a.im.abs() < 1e-12);
            }
            apply_qft(&mut s, false).unwrap();
            // QFT^2 maps |0> to |0> (index negation)
            assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-12);
            let mut u = StateVector::uniform(n).unwrap();
            apply_qft(&mut u, false).unwrap();
            assert!((u.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
        }
    }
}
