//! Independent reference implementations used by the integration tests.
//! Nothing here calls the crate's gate kernels: dense matrices are built
//! entry by entry from the textbook gate definitions.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use qchaos_core::{Circuit, GateOp};

pub mod fig1;
pub mod trotter;

pub type CMat = DMatrix<Complex64>;

pub fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

pub fn bit(x: usize, q: usize) -> usize {
    (x >> q) & 1
}

/// Dense matrix of one gate on `n` qubits.
pub fn gate_matrix(op: &GateOp, n: usize) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for col in 0..dim {
        match op {
            GateOp::Hadamard { q } => {
                let flipped = col ^ (1 << q);
                let sign = if bit(col, *q) == 1 { -s } else { s };
                m[(col, col)] += Complex64::new(sign, 0.0);
                m[(flipped, col)] += Complex64::new(s, 0.0);
            }
            GateOp::PhaseShift { q, delta } => {
                m[(col, col)] = if bit(col, *q) == 1 { cis(*delta) } else { Complex64::new(1.0, 0.0) };
            }
            GateOp::Cnot { control, target } => {
                let row = if bit(col, *control) == 1 { col ^ (1 << target) } else { col };
                m[(row, col)] = Complex64::new(1.0, 0.0);
            }
            GateOp::ControlledPhase { control, target, delta } => {
                m[(col, col)] = if bit(col, *control) == 1 && bit(col, *target) == 1 {
                    cis(*delta)
                } else {
                    Complex64::new(1.0, 0.0)
                };
            }
            GateOp::TwoQubitDiagonal { i, j, phases } => {
                m[(col, col)] = cis(phases[2 * bit(col, *i) + bit(col, *j)]);
            }
            GateOp::MultiControlledX { controls, target } => {
                let fire = controls.iter().all(|&(q, v)| bit(col, q) == v as usize);
                let row = if fire { col ^ (1 << target) } else { col };
                m[(row, col)] = Complex64::new(1.0, 0.0);
            }
        }
    }
    m
}

/// Dense unitary of a whole circuit, including its final relabeling and
/// global phase.
pub fn circuit_matrix(c: &Circuit) -> CMat {
    let n = c.n_qubits();
    let dim = 1usize << n;
    let mut u = CMat::identity(dim, dim);
    for op in c.ops() {
        u = gate_matrix(op, n) * u;
    }
    // logical qubit q sits on wire layout[q]
    let mut perm = CMat::zeros(dim, dim);
    for src in 0..dim {
        let dst: usize = c.layout().iter().enumerate().map(|(q, &w)| bit(src, w) << q).sum();
        perm[(dst, src)] = Complex64::new(1.0, 0.0);
    }
    perm * u * cis(c.global_phase())
}

/// Unitary DFT matrix `F[k][l] = e^{+2 pi i k l / N} / sqrt(N)`.
pub fn dft_matrix(n: usize) -> CMat {
    let dim = 1usize << n;
    let norm = (dim as f64).sqrt().recip();
    CMat::from_fn(dim, dim, |k, l| cis(2.0 * PI * ((k * l) % dim) as f64 / dim as f64) * norm)
}

/// `O(N^2)` summation of the same transform.
pub fn dft_sum(amps: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let dim = amps.len();
    let sign = if inverse { -1.0 } else { 1.0 };
    let norm = (dim as f64).sqrt().recip();
    (0..dim)
        .map(|k| {
            amps.iter()
                .enumerate()
                .map(|(l, a)| a * cis(sign * 2.0 * PI * ((k * l) % dim) as f64 / dim as f64))
                .sum::<Complex64>()
                * norm
        })
        .collect()
}

pub fn signed(b: usize, dim: usize) -> i64 {
    if b < dim / 2 {
        b as i64
    } else {
        b as i64 - dim as i64
    }
}

/// One sawtooth period as a dense product of the kick, an explicit DFT to
/// the action basis, the free rotation and the DFT back.
pub fn sawtooth_dense(n: usize, k: f64, period: f64) -> CMat {
    let dim = 1usize << n;
    let kick = CMat::from_diagonal(&DVector::from_fn(dim, |i, _| {
        let theta = 2.0 * PI * i as f64 / dim as f64;
        cis(k * (theta - PI).powi(2) / 2.0)
    }));
    let rot = CMat::from_diagonal(&DVector::from_fn(dim, |b, _| {
        let m = signed(b, dim) as f64;
        cis(-period * m * m / 2.0)
    }));
    // action amplitudes a_m = N^{-1/2} sum_i e^{-i m theta_i} psi_i
    let to_action = dft_matrix(n).adjoint();
    to_action.adjoint() * rot * to_action * kick
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_vec_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `exp(-i H t)` for real symmetric `H` via its eigendecomposition.
pub fn expm_symmetric(h: &DMatrix<f64>, t: f64) -> CMat {
    let eig = SymmetricEigen::new(h.clone());
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|e| cis(-e * t)));
    &v * d * v.transpose()
}

/// Grid Hamiltonian `hbar^2 k^2 / 2m` (built in the momentum basis) plus
/// `V(x_i)` on the cell-centered grid of half-width `d`; real symmetric.
pub fn grid_hamiltonian(n: usize, d: f64, mass: f64, hbar: f64, v: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let dim = 1usize << n;
    let delta = 2.0 * d / dim as f64;
    let f = dft_matrix(n);
    let kin = CMat::from_diagonal(&DVector::from_fn(dim, |b, _| {
        let kk = PI * signed(b, dim) as f64 / d;
        Complex64::new(hbar * kk * kk / (2.0 * mass), 0.0)
    }));
    // F diag F^dag with the DFT acting as position -> momentum up to sign
    // conventions; k^2 is even so either orientation gives the same matrix.
    let t = &f * kin * f.adjoint();
    DMatrix::from_fn(dim, dim, |i, j| {
        let x = -d + (i as f64 + 0.5) * delta;
        t[(i, j)].re + if i == j { v(x) } else { 0.0 }
    })
}

/// Random normalized complex vector from a simple LCG (independent of the
/// crate's RNG plumbing).
pub fn random_state(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(next(), next())).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn apply_dense(u: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    (u * DVector::from_column_slice(v)).iter().copied().collect()
}
