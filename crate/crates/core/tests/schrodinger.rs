mod common;

use std::f64::consts::PI;

use common::trotter::*;
use common::*;
use num_complex::Complex64;
use qchaos_core::schrodinger::*;
use qchaos_core::{Error, StateVector};

fn settings(dt: f64, steps: usize, v: Potential) -> EvolutionSettings {
    EvolutionSettings::new(dt, steps, v)
}

#[test]
fn discretize_examples() {
    let grid = SpatialGrid::new(10.0, 8).unwrap();
    let flat = discretize(|_| Complex64::new(3.0, 0.0), &grid).unwrap();
    assert!(flat.state.amplitudes().iter().all(|a| (a.re - 1.0 / 16.0).abs() < 1e-15));
    let spike_x = grid.x(17);
    let spike = discretize(|x| Complex64::new(((x - spike_x).abs() < 1e-9) as u8 as f64, 0.0), &grid).unwrap();
    assert!((spike.state.amplitudes()[17].re - 1.0).abs() < 1e-15);
    let g = discretize(gaussian(0.0, 1.0, 0.0), &grid).unwrap();
    assert!((g.state.norm_sqr() - 1.0).abs() < 1e-12);
    let raw: Vec<f64> = grid.points().iter().map(|x| (-x * x / 2.0).exp()).collect();
    let norm = raw.iter().map(|r| r * r).sum::<f64>().sqrt();
    assert!((g.norm_factor - norm).abs() < 1e-12);
    for (i, r) in raw.iter().enumerate() {
        assert!((g.state.amplitudes()[i].re - r / norm).abs() < 1e-14);
    }
    assert!(discretize(|_| Complex64::new(0.0, 0.0), &grid).is_err());
}

#[test]
fn kinetic_step_examples() {
    let grid = SpatialGrid::new(5.0, 6).unwrap();
    let psi = StateVector::from_amplitudes(random_state(64, 5)).unwrap();
    let mut s = psi.clone();
    kinetic_phase_step(&mut s, &grid, &settings(0.0, 1, Potential::zero())).unwrap();
    assert!(max_vec_diff(s.amplitudes(), psi.amplitudes()) < 1e-13);

    // plane wave with k = pi m / d picks up exp(-i eps k^2 / 2)
    let (m, eps) = (7i64, 0.3);
    let k = PI * m as f64 / grid.d;
    let wave = discretize(|x| Complex64::from_polar(1.0, k * x), &grid).unwrap();
    let mut s = wave.state.clone();
    kinetic_phase_step(&mut s, &grid, &settings(eps, 1, Potential::zero())).unwrap();
    let phase = Complex64::from_polar(1.0, -eps * k * k / 2.0);
    let expect: Vec<Complex64> = wave.state.amplitudes().iter().map(|a| a * phase).collect();
    assert!(max_vec_diff(s.amplitudes(), &expect) < 1e-12);

    for n in [3, 5, 8] {
        let grid = SpatialGrid::new(4.0, n).unwrap();
        let psi = StateVector::from_amplitudes(random_state(1 << n, n as u64)).unwrap();
        let st = settings(0.07, 1, Potential::zero());
        let mut a = psi.clone();
        let mut b = psi.clone();
        kinetic_phase_step(&mut a, &grid, &st).unwrap();
        kinetic_phase_step_reference(&mut b, &grid, &st).unwrap();
        assert!(max_vec_diff(a.amplitudes(), b.amplitudes()) < 1e-10, "n = {n}");
    }
}

#[test]
fn potential_step_examples() {
    let grid = SpatialGrid::new(6.0, 6).unwrap();
    let psi = StateVector::uniform(6).unwrap();
    let mut s = psi.clone();
    potential_phase_step(&mut s, &grid, &settings(0.5, 1, Potential::zero()), 0.0).unwrap();
    assert!(max_vec_diff(s.amplitudes(), psi.amplitudes()) < 1e-14);

    // 16-bit quantization: per-point phase error within half a phase quantum
    let mut st = settings(0.05, 1, Potential::static_fn(|x| x * x / 2.0));
    st.ancilla_bits = 16;
    let (_, enc) = potential_circuit(&grid, &st, 0.0).unwrap();
    let mut a = psi.clone();
    potential_phase_step(&mut a, &grid, &st, 0.0).unwrap();
    let mut b = psi.clone();
    potential_phase_step_exact(&mut b, &grid, &st, 0.0).unwrap();
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        let err = (x / y).arg().abs();
        assert!(err <= enc.phase_quantum.abs() / 2.0 + 1e-13, "phase error {err}");
    }

    // 24 bits: essentially exact
    st.ancilla_bits = 24;
    let mut a = StateVector::from_amplitudes(random_state(64, 1)).unwrap();
    let mut b = a.clone();
    let residual = potential_phase_step(&mut a, &grid, &st, 0.0).unwrap();
    potential_phase_step_exact(&mut b, &grid, &st, 0.0).unwrap();
    assert!(max_vec_diff(a.amplitudes(), b.amplitudes()) < 1e-6);
    assert!(residual < 1e-12);
}

#[test]
fn fixed_range_overflow_reports_grid_point() {
    let grid = SpatialGrid::new(4.0, 4).unwrap();
    let mut st = settings(0.1, 1, Potential::static_fn(|x| x));
    st.potential_range = Some((-1.0, 1.0));
    match potential_circuit(&grid, &st, 0.0) {
        Err(Error::AncillaOverflow { index, value, .. }) => {
            assert_eq!(index, 0);
            assert_eq!(value, grid.x(0));
        }
        other => panic!("expected overflow, got {other:?}"),
    }
}

#[test]
fn quadratic_fast_path_is_exact() {
    let grid = SpatialGrid::new(5.0, 6).unwrap();
    let mut st = settings(0.2, 1, Potential::quadratic(0.7, -0.3, 2.0));
    st.method = PotentialMethod::QuadraticFastPath;
    let (c, _) = potential_circuit(&grid, &st, 0.0).unwrap();
    assert_eq!(c.len(), 36);
    let mut a = StateVector::from_amplitudes(random_state(64, 2)).unwrap();
    let mut b = a.clone();
    potential_phase_step(&mut a, &grid, &st, 0.0).unwrap();
    potential_phase_step_exact(&mut b, &grid, &st, 0.0).unwrap();
    assert!(max_vec_diff(a.amplitudes(), b.amplitudes()) < 1e-11);
}

#[test]
fn free_gaussian_spreads_like_the_analytic_packet() {
    let grid = SpatialGrid::new(20.0, 8).unwrap();
    let sigma = 1.0;
    let psi0 = discretize(gaussian(0.0, sigma, 0.0), &grid).unwrap();
    let t = 3.0;
    let out = trotter_evolve(&psi0, &settings(0.01, 300, Potential::zero())).unwrap();
    let ratio = out.wavefunction.position_std() / psi0.position_std();
    let expect = (1.0 + (t / sigma.powi(2)).powi(2)).sqrt();
    assert!((ratio / expect - 1.0).abs() < 0.01, "ratio {ratio} vs {expect}");
    assert!(out.wavefunction.band_mass(0.9) > 1.0 - 1e-6);
}

#[test]
fn coherent_state_returns_after_one_period() {
    let grid = SpatialGrid::new(10.0, 8).unwrap();
    let psi0 = discretize(gaussian(2.0, 1.0, 0.0), &grid).unwrap();
    let steps = 512;
    let out = trotter_evolve(&psi0, &settings(2.0 * PI / steps as f64, steps, Potential::harmonic(1.0, 1.0))).unwrap();
    let overlap = psi0.state.overlap(&out.wavefunction.state).unwrap().norm_sqr();
    assert!(overlap > 0.99, "overlap {overlap}");
    assert!(out.max_ancilla_residual < 1e-12);
    assert!(psi0.band_mass(0.9) > 1.0 - 1e-6);
}

#[test]
fn norm_is_preserved_over_a_thousand_steps() {
    let grid = SpatialGrid::new(8.0, 6).unwrap();
    let psi0 = discretize(gaussian(1.0, 0.8, 1.0), &grid).unwrap();
    let st = settings(0.01, 1000, Potential::static_fn(|x| 0.1 * x.powi(4) - x * x));
    let out = trotter_evolve(&psi0, &st).unwrap();
    assert!((out.wavefunction.state.norm_sqr() - 1.0).abs() < 1e-10);
}

#[test]
fn time_dependent_potential_uses_left_endpoint() {
    let grid = SpatialGrid::new(6.0, 6).unwrap();
    let psi0 = discretize(gaussian(0.0, 1.0, 0.0), &grid).unwrap();
    let mut st = settings(0.05, 40, Potential::time_dependent(|x, t| (1.0 + t) * x * x / 2.0));
    st.ancilla_bits = 24;
    let gates = trotter_evolve(&psi0, &st).unwrap();
    let reference = trotter_evolve_reference(&psi0, &st).unwrap();
    assert!(max_vec_diff(gates.wavefunction.state.amplitudes(), reference.state.amplitudes()) < 1e-5);
}

#[test]
fn local_trotter_error_is_second_order() {
    let errs: Vec<f64> = LOCAL_EPS.iter().map(|&e| local_error(e)).collect();
    let s = log_log_slope(&LOCAL_EPS, &errs);
    assert!((s - 2.0).abs() <= 0.2, "slope {s}, errors {errs:?}");
}

#[test]
fn global_trotter_error_is_first_order() {
    let errs: Vec<f64> = GLOBAL_EPS.iter().map(|&e| global_error(e)).collect();
    let s = log_log_slope(&GLOBAL_EPS, &errs);
    assert!((s - 1.0).abs() <= 0.15, "slope {s}, errors {errs:?}");
}
