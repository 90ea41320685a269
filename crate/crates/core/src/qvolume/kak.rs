//! Haar-random two-qubit unitaries and their lowering to `{H, P, CNOT}`.
//!
//! The lowering uses the canonical decomposition
//! `U = e^{i phi} (A1 x B1) exp(i(a XX + b YY + c ZZ)) (A2 x B2)`, found by
//! diagonalizing `M^T M` with `M` the unitary written in the magic basis.
//! Each `exp(i theta PP)` costs two CNOTs and each single-qubit factor five
//! gates (`P H P H P`), so every unitary lowers to 41 gates, 6 of them CNOTs.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuit::Circuit;
use crate::error::{Error, Result};

pub type Unitary4 = Matrix4<Complex64>;

/// Elementary gates per lowered two-qubit unitary.
pub const GATES_PER_UNITARY: usize = 41;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Haar-distributed `U(4)` element: Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary4<R: Rng + ?Sized>(rng: &mut R) -> Unitary4 {
    let mut cols: Vec<[Complex64; 4]> = (0..4)
        .map(|_| std::array::from_fn(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))))
        .collect();
    for k in 0..4 {
        for j in 0..k {
            let proj: Complex64 = (0..4).map(|i| cols[j][i].conj() * cols[k][i]).sum();
            let prev = cols[j];
            for i in 0..4 {
                cols[k][i] -= proj * prev[i];
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[k].iter_mut().for_each(|z| *z /= norm);
    }
    Unitary4::from_fn(|i, j| cols[j][i])
}

/// Magic basis; columns are the basis vectors.
fn magic() -> Unitary4 {
    let s = FRAC_1_SQRT_2;
    Unitary4::new(
        c(s, 0.0), ZERO, ZERO, c(0.0, s),
        ZERO, c(0.0, s), c(s, 0.0), ZERO,
        ZERO, c(0.0, s), c(-s, 0.0), ZERO,
        c(s, 0.0), ZERO, ZERO, c(0.0, -s),
    )
}

/// `(A, B)` with `K = A x B` (A acts on the high qubit) and `det B = 1`.
fn split_tensor(k: &Unitary4) -> Result<(Matrix2<Complex64>, Matrix2<Complex64>)> {
    let block = |i1: usize, j1: usize| Matrix2::from_fn(|i0, j0| k[(2 * i1 + i0, 2 * j1 + j0)]);
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for i1 in 0..2 {
        for j1 in 0..2 {
            let n = block(i1, j1).norm();
            if n > best {
                (bi, bj, best) = (i1, j1, n);
            }
        }
    }
    let blk = block(bi, bj);
    let b = blk / blk.determinant().sqrt();
    let (mut ki, mut kj, mut bmax) = (0, 0, -1.0);
    for i in 0..2 {
        for j in 0..2 {
            if b[(i, j)].norm() > bmax {
                (ki, kj, bmax) = (i, j, b[(i, j)].norm());
            }
        }
    }
    let a = Matrix2::from_fn(|i1, j1| k[(2 * i1 + ki, 2 * j1 + kj)] / b[(ki, kj)]);
    let rebuilt = a.kronecker(&b);
    if (rebuilt - k).norm() > 1e-8 {
        return Err(Error::Unsupported("local factor is not a tensor product".into()));
    }
    Ok((a, b))
}

/// `P H P H P` realizing `u` exactly, global phase included.
fn push_single_qubit(circ: &mut Circuit, q: usize, u: &Matrix2<Complex64>) -> Result<()> {
    // u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta); Ry(g) = S H Rz(g) H S^dag
    // and Rz(x) = e^{-i x/2} P(x).
    let det = u.determinant();
    let alpha = det.arg() / 2.0;
    let v = u * Complex64::from_polar(1.0, -alpha);
    let (a, b) = (v[(0, 0)], v[(1, 0)]);
    let gamma = 2.0 * b.norm().atan2(a.norm());
    let sum = -2.0 * a.arg();
    let diff = 2.0 * b.arg();
    let (beta, delta) = ((sum + diff) / 2.0, (sum - diff) / 2.0);
    circ.phase(q, delta - FRAC_PI_2)?;
    circ.h(q)?;
    circ.phase(q, gamma)?;
    circ.h(q)?;
    circ.phase(q, beta + FRAC_PI_2)?;
    circ.add_global_phase(alpha - (beta + gamma + delta) / 2.0);
    Ok(())
}

/// `exp(i theta Z x Z)` on `(lo, hi)`.
fn push_zz(circ: &mut Circuit, lo: usize, hi: usize, theta: f64) -> Result<()> {
    circ.cnot(lo, hi)?;
    circ.phase(hi, -2.0 * theta)?;
    circ.cnot(lo, hi)?;
    circ.add_global_phase(theta);
    Ok(())
}

/// `exp(i (a XX + b YY + c ZZ))` on `(lo, hi)`; the three terms commute.
fn push_canonical(circ: &mut Circuit, lo: usize, hi: usize, [a, b, cc]: [f64; 3]) -> Result<()> {
    for q in [lo, hi] {
        circ.h(q)?;
    }
    push_zz(circ, lo, hi, a)?;
    for q in [lo, hi] {
        circ.h(q)?;
    }
    // H S^dag maps Y to Z.
    for q in [lo, hi] {
        circ.phase(q, -FRAC_PI_2)?;
        circ.h(q)?;
    }
    push_zz(circ, lo, hi, b)?;
    for q in [lo, hi] {
        circ.h(q)?;
        circ.phase(q, FRAC_PI_2)?;
    }
    push_zz(circ, lo, hi, cc)
}

fn pauli_pair(p: usize) -> Unitary4 {
    let m2 = match p {
        0 => Matrix2::new(ZERO, c(1.0, 0.0), c(1.0, 0.0), ZERO),
        1 => Matrix2::new(ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO),
        _ => Matrix2::new(c(1.0, 0.0), ZERO, ZERO, c(-1.0, 0.0)),
    };
    m2.kronecker(&m2)
}

/// Appends gates realizing `u` on qubits `(lo, hi)`: basis index
/// `2 b_hi + b_lo` of the 4x4 matrix. Exact including global phase.
pub fn lower_two_qubit_unitary(circ: &mut Circuit, lo: usize, hi: usize, u: &Unitary4) -> Result<()> {
    let det = u.determinant();
    let phi = det.arg() / 4.0;
    let su = u * Complex64::from_polar(1.0, -phi);
    let bm = magic();
    let m = bm.adjoint() * su * bm;
    let s = m.transpose() * m;
    // Re S and Im S are commuting real symmetric matrices; a generic
    // combination shares their eigenvectors.
    let mix = s.map(|z| z.re) + s.map(|z| z.im) * 0.618_033_988_749_894_9;
    let eig = SymmetricEigen::new(mix);
    let mut o = eig.eigenvectors;
    if o.determinant() < 0.0 {
        o.column_mut(0).neg_mut();
    }
    let oc = o.map(|x| c(x, 0.0));
    let sd = oc.transpose() * s * oc;
    let mut delta: Vec<Complex64> = (0..4).map(|k| sd[(k, k)].sqrt()).collect();
    let mut q1 = m * oc * Unitary4::from_diagonal(&nalgebra::Vector4::from_fn(|k, _| delta[k].inv()));
    if q1.determinant().re < 0.0 {
        delta[0] = -delta[0];
        q1.column_mut(0).neg_mut();
    }
    if q1.map(|z| z.im.abs()).max() > 1e-8 {
        return Err(Error::Unsupported("canonical decomposition did not yield a real orthogonal factor".into()));
    }
    let k1 = bm * q1 * bm.adjoint();
    let k2 = bm * oc.transpose() * bm.adjoint();

    // Eigenphases of the canonical part against the diagonals of XX, YY, ZZ
    // in the magic basis (rows of a 4x4 Hadamard pattern).
    let phases: Vec<f64> = delta.iter().map(|d| d.arg()).collect();
    let diag_of = |p: usize| {
        let d = bm.adjoint() * pauli_pair(p) * bm;
        [d[(0, 0)].re, d[(1, 1)].re, d[(2, 2)].re, d[(3, 3)].re]
    };
    let coeff = |d: [f64; 4]| (0..4).map(|k| phases[k] * d[k]).sum::<f64>() / 4.0;
    let abc = [coeff(diag_of(0)), coeff(diag_of(1)), coeff(diag_of(2))];
    let offset = phases.iter().sum::<f64>() / 4.0;

    let (a2, b2) = split_tensor(&k2)?;
    let (a1, b1) = split_tensor(&k1)?;
    push_single_qubit(circ, lo, &b2)?;
    push_single_qubit(circ, hi, &a2)?;
    push_canonical(circ, lo, hi, abc)?;
    push_single_qubit(circ, lo, &b1)?;
    push_single_qubit(circ, hi, &a1)?;
    circ.add_global_phase(phi + offset);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::StateVector;

    fn unitary_of(circ: &Circuit) -> Unitary4 {
        let mut m = Unitary4::zeros();
        for j in 0..4 {
            let mut s = StateVector::basis(2, j).unwrap();
            circ.apply(&mut s).unwrap();
            for i in 0..4 {
                m[(i, j)] = s.amplitudes()[i];
            }
        }
        m
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = crate::rng::seeded(1);
        let u = haar_unitary4(&mut rng);
        assert!((u.adjoint() * u - Unitary4::identity()).norm() < 1e-12);
    }

    #[test]
    fn lowering_reproduces_random_unitaries_exactly() {
        let mut rng = crate::rng::seeded(11);
        for _ in 0..50 {
            let u = haar_unitary4(&mut rng);
            let mut circ = Circuit::new(2);
            lower_two_qubit_unitary(&mut circ, 0, 1, &u).unwrap();
            assert_eq!(circ.len(), GATES_PER_UNITARY);
            assert_eq!(circ.counts().cnot, 6);
            let err = (unitary_of(&circ) - u).norm();
            assert!(err < 1e-9, "lowering error {err}");
        }
    }
}
