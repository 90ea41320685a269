//! Error measurements for the split-step integrator shared by the
//! Schrödinger tests and the acceptance run.

use std::f64::consts::PI;

use num_complex::Complex64;
use qchaos_core::schrodinger::*;

use super::{apply_dense, expm_symmetric, grid_hamiltonian};

pub fn gaussian(x0: f64, sigma: f64, k0: f64) -> impl Fn(f64) -> Complex64 {
    move |x| Complex64::from_polar((-(x - x0).powi(2) / (2.0 * sigma * sigma)).exp(), k0 * x)
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn oscillator_setup() -> DiscretizedWavefunction {
    let grid = SpatialGrid::new(8.0, 6).unwrap();
    discretize(gaussian(0.5, 1.0, 0.5), &grid).unwrap()
}

/// `|| split(eps) psi - exp(-i H eps) psi ||` against the dense Hamiltonian
/// of a harmonic oscillator on 64 points.
pub fn local_error(eps: f64) -> f64 {
    let psi0 = oscillator_setup();
    let mut st = EvolutionSettings::new(eps, 1, Potential::harmonic(1.0, 1.0));
    st.ancilla_bits = 24;
    let split = trotter_evolve(&psi0, &st).unwrap().wavefunction.state;
    let h = grid_hamiltonian(6, 8.0, 1.0, 1.0, |x| x * x / 2.0);
    let exact = apply_dense(&expm_symmetric(&h, eps), psi0.state.amplitudes());
    distance(split.amplitudes(), &exact)
}

/// Distance at `t = 1` between runs at `eps` and at `eps / 16`.
pub fn global_error(eps: f64) -> f64 {
    let psi0 = oscillator_setup();
    let run = |dt: f64| {
        let mut st = EvolutionSettings::new(dt, (1.0 / dt).round() as usize, Potential::harmonic(1.0, 1.0));
        st.ancilla_bits = 24;
        trotter_evolve(&psi0, &st).unwrap().wavefunction.state
    };
    distance(run(eps).amplitudes(), run(eps / 16.0).amplitudes())
}

/// `|<psi0|psi(2 pi)>|^2` for a displaced ground state of the unit
/// oscillator, `steps` steps per period.
pub fn coherent_return_overlap(steps: usize) -> f64 {
    let grid = SpatialGrid::new(10.0, 8).unwrap();
    let psi0 = discretize(gaussian(2.0, 1.0, 0.0), &grid).unwrap();
    let st = EvolutionSettings::new(2.0 * PI / steps as f64, steps, Potential::harmonic(1.0, 1.0));
    let out = trotter_evolve(&psi0, &st).unwrap();
    psi0.state.overlap(&out.wavefunction.state).unwrap().norm_sqr()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

pub const LOCAL_EPS: [f64; 4] = [0.04, 0.02, 0.01, 0.005];
pub const GLOBAL_EPS: [f64; 3] = [0.1, 0.05, 0.025];
