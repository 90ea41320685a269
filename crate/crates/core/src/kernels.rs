//! In-place gate kernels over a raw amplitude buffer.
//!
//! Qubit `q` addresses bit `q` of the basis index. Kernels pair indices by
//! stride and never form a dense matrix. Above `PAR_THRESHOLD` amplitudes the
//! work is split over disjoint index ranges with rayon.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;

const PAR_THRESHOLD: usize = 1 << 14;

#[inline]
fn for_each_indexed<F>(amps: &mut [Complex64], f: F)
where
    F: Fn(usize, &mut Complex64) + Sync + Send,
{
    if amps.len() >= PAR_THRESHOLD {
        amps.par_iter_mut().enumerate().for_each(|(i, a)| f(i, a));
    } else {
        amps.iter_mut().enumerate().for_each(|(i, a)| f(i, a));
    }
}

#[inline]
fn for_each_pair<F>(amps: &mut [Complex64], q: usize, f: F)
where
    F: Fn(usize, &mut Complex64, &mut Complex64) + Sync + Send,
{
    let stride = 1usize << q;
    let block = stride << 1;
    let run = |(b, chunk): (usize, &mut [Complex64])| {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (i, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            f(b * block + i, a0, a1);
        }
    };
    if amps.len() >= PAR_THRESHOLD && amps.len() / block >= 8 {
        amps.par_chunks_exact_mut(block).enumerate().for_each(run);
    } else {
        amps.chunks_exact_mut(block).enumerate().for_each(run);
    }
}

pub fn hadamard(amps: &mut [Complex64], q: usize) {
    for_each_pair(amps, q, |_, a0, a1| {
        let (x, y) = (*a0, *a1);
        *a0 = (x + y) * FRAC_1_SQRT_2;
        *a1 = (x - y) * FRAC_1_SQRT_2;
    });
}

pub fn pauli_x(amps: &mut [Complex64], q: usize) {
    for_each_pair(amps, q, |_, a0, a1| std::mem::swap(a0, a1));
}

pub fn pauli_z(amps: &mut [Complex64], q: usize) {
    let mask = 1usize << q;
    for_each_indexed(amps, |i, a| {
        if i & mask != 0 {
            *a = -*a;
        }
    });
}

pub fn phase_shift(amps: &mut [Complex64], q: usize, delta: f64) {
    let w = Complex64::from_polar(1.0, delta);
    let mask = 1usize << q;
    for_each_indexed(amps, |i, a| {
        if i & mask != 0 {
            *a *= w;
        }
    });
}

/// Swaps target amplitudes wherever the control bit is set.
pub fn cnot(amps: &mut [Complex64], control: usize, target: usize) {
    let cmask = 1usize << control;
    for_each_pair(amps, target, |i, a0, a1| {
        if i & cmask != 0 {
            std::mem::swap(a0, a1);
        }
    });
}

pub fn controlled_phase(amps: &mut [Complex64], a: usize, b: usize, delta: f64) {
    let w = Complex64::from_polar(1.0, delta);
    let mask = (1usize << a) | (1usize << b);
    for_each_indexed(amps, |i, amp| {
        if i & mask == mask {
            *amp *= w;
        }
    });
}

/// Phase `phases[2*bit_i + bit_j]` on each basis state. With `i == j` only
/// the entries 0 and 3 are reachable.
pub fn two_qubit_diagonal(amps: &mut [Complex64], i: usize, j: usize, phases: &[f64; 4]) {
    let w: [Complex64; 4] = std::array::from_fn(|s| Complex64::from_polar(1.0, phases[s]));
    for_each_indexed(amps, |idx, a| {
        let s = (((idx >> i) & 1) << 1) | ((idx >> j) & 1);
        *a *= w[s];
    });
}

/// Flips `target` on basis states where `index & mask == pattern`.
pub fn multi_controlled_x(amps: &mut [Complex64], mask: usize, pattern: usize, target: usize) {
    for_each_pair(amps, target, |i, a0, a1| {
        if i & mask == pattern {
            std::mem::swap(a0, a1);
        }
    });
}

/// Multiplies every amplitude by the matching entry of `diag`.
pub fn diagonal(amps: &mut [Complex64], diag: &[Complex64]) {
    debug_assert_eq!(amps.len(), diag.len());
    if amps.len() >= PAR_THRESHOLD {
        amps.par_iter_mut().zip(diag.par_iter()).for_each(|(a, d)| *a *= d);
    } else {
        amps.iter_mut().zip(diag).for_each(|(a, d)| *a *= d);
    }
}

/// General 2x2 unitary `[[u00, u01], [u10, u11]]` on qubit `q`.
pub fn single_qubit(amps: &mut [Complex64], q: usize, u: &[[Complex64; 2]; 2]) {
    let u = *u;
    for_each_pair(amps, q, |_, a0, a1| {
        let (x, y) = (*a0, *a1);
        *a0 = u[0][0] * x + u[0][1] * y;
        *a1 = u[1][0] * x + u[1][1] * y;
    });
}

/// Reorders amplitudes so that the bit on wire `layout[q]` becomes bit `q`.
pub fn permute_qubits(amps: &[Complex64], layout: &[usize]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (src, a) in amps.iter().enumerate() {
        let mut dst = 0usize;
        for (q, &wire) in layout.iter().enumerate() {
            dst |= ((src >> wire) & 1) << q;
        }
        out[dst] = *a;
    }
    out
}
