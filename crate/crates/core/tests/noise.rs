mod common;

use common::*;
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use qchaos_core::noise::*;
use qchaos_core::qft::qft_circuit;
use qchaos_core::sawtooth::SawtoothParams;
use qchaos_core::{Circuit, Error, StateVector};

/// Kraus operators of one channel on qubit `q` of `n`.
fn kraus(channel: Channel, q: usize, n: usize, p: f64) -> Vec<CMat> {
    let dim = 1usize << n;
    let one = |i: usize| bit(i, q) == 1;
    match channel {
        Channel::Dephase => vec![
            CMat::identity(dim, dim) * Complex64::new((1.0 - p).sqrt(), 0.0),
            CMat::from_fn(dim, dim, |r, c| {
                if r != c {
                    Complex64::new(0.0, 0.0)
                } else if one(r) {
                    Complex64::new(-p.sqrt(), 0.0)
                } else {
                    Complex64::new(p.sqrt(), 0.0)
                }
            }),
        ],
        Channel::Relax => vec![
            CMat::from_fn(dim, dim, |r, c| {
                if r != c {
                    Complex64::new(0.0, 0.0)
                } else if one(r) {
                    Complex64::new((1.0 - p).sqrt(), 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            }),
            CMat::from_fn(dim, dim, |r, c| {
                if one(c) && r == c ^ (1 << q) {
                    Complex64::new(p.sqrt(), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        ],
    }
}

fn apply_kraus(rho: &CMat, ks: &[CMat]) -> CMat {
    ks.iter().fold(CMat::zeros(rho.nrows(), rho.ncols()), |acc, k| acc + k * rho * k.adjoint())
}

/// Dense density-matrix simulation: every gate, then dephasing and
/// relaxation on each of its qubits, then the final relabeling.
fn dense_noisy(c: &Circuit, psi: &StateVector, noise: &NoiseParams) -> CMat {
    let n = c.n_qubits();
    let v = DVector::from_vec(psi.amplitudes().to_vec());
    let mut rho = &v * v.adjoint();
    let mut gates = CMat::identity(1 << n, 1 << n);
    for op in c.ops() {
        let g = gate_matrix(op, n);
        gates = &g * gates;
        rho = &g * rho * g.adjoint();
        for q in op.qubits() {
            rho = apply_kraus(&rho, &kraus(Channel::Dephase, q, n, noise.p_dephase));
            rho = apply_kraus(&rho, &kraus(Channel::Relax, q, n, noise.p_relax));
        }
    }
    let perm = circuit_matrix(c) * gates.adjoint();
    &perm * rho * perm.adjoint()
}

fn to_dense(rho: &DensityMatrix) -> CMat {
    CMat::from_fn(rho.dim(), rho.dim(), |r, c| rho.entry(r, c))
}

fn test_circuit(n: usize, seed: u64) -> Circuit {
    let mut c = qft_circuit(n).unwrap();
    let mut x = seed as f64 * 0.1234 + 0.5;
    let mut next = || {
        x = (x * 91.7 + 0.37).fract();
        x
    };
    for q in 0..n {
        c.phase(q, next() * 6.0).unwrap();
        c.cnot(q, (q + 1) % n).unwrap();
        c.h((q + 2) % n).unwrap();
        c.diag2(q, (q + 1) % n, [next(), next(), next(), next()]).unwrap();
    }
    c
}

fn state(n: usize, seed: u64) -> StateVector {
    StateVector::from_amplitudes(random_state(1 << n, seed)).unwrap()
}

fn density(c: &Circuit, psi: &StateVector, noise: &NoiseParams) -> DensityMatrix {
    match noisy_run(c, psi, noise, NoisyMethod::Density).unwrap() {
        NoisyOutcome::Density(rho) => rho,
        NoisyOutcome::Trajectories(_) => unreachable!(),
    }
}

#[test]
fn zero_noise_reproduces_the_pure_state() {
    let c = test_circuit(4, 1);
    let psi = state(4, 2);
    let rho = density(&c, &psi, &NoiseParams::default());
    let mut out = psi.clone();
    c.apply(&mut out).unwrap();
    let v = DVector::from_vec(out.amplitudes().to_vec());
    assert!(max_abs_diff(&to_dense(&rho), &(&v * v.adjoint())) < 1e-12);
    assert!((rho.purity() - 1.0).abs() < 1e-12);
}

#[test]
fn density_run_matches_kraus_oracle() {
    for (n, noise) in [(2, (0.1, 0.0)), (3, (0.0, 0.2)), (4, (0.03, 0.05)), (3, (0.5, 1.0))] {
        let noise = NoiseParams::new(noise.0, noise.1, 0.0).unwrap();
        let c = test_circuit(n, n as u64);
        let psi = state(n, 7);
        let rho = density(&c, &psi, &noise);
        let oracle = dense_noisy(&c, &psi, &noise);
        assert!(max_abs_diff(&to_dense(&rho), &oracle) < 1e-12, "n = {n}");
    }
}

#[test]
fn single_hadamard_dephasing() {
    let mut c = Circuit::new(1);
    c.h(0).unwrap();
    let zero = StateVector::basis(1, 0).unwrap();
    for (p, coherence) in [(0.0, 0.5), (0.1, 0.4), (0.5, 0.0)] {
        let rho = density(&c, &zero, &NoiseParams::new(p, 0.0, 0.0).unwrap());
        assert!((rho.entry(0, 1).re - coherence).abs() < 1e-14);
        assert!((rho.entry(0, 0).re - 0.5).abs() < 1e-14);
    }
}

#[test]
fn full_relaxation_empties_the_excited_state() {
    let mut c = Circuit::new(2);
    c.h(0).unwrap();
    c.cnot(0, 1).unwrap();
    let rho = density(&c, &StateVector::basis(2, 0).unwrap(), &NoiseParams::new(0.0, 1.0, 0.0).unwrap());
    assert!((rho.probabilities()[0] - 1.0).abs() < 1e-14);
}

#[test]
fn density_capacity_is_enforced() {
    let c = Circuit::new(11);
    let psi = StateVector::basis(11, 0).unwrap();
    let r = noisy_run(&c, &psi, &NoiseParams::default(), NoisyMethod::Density);
    assert!(matches!(r, Err(Error::Capacity { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn density_stays_a_valid_state(n in 2usize..=4, seed in 0u64..1000, pd in 0.0f64..0.5, pr in 0.0f64..1.0) {
        let c = test_circuit(n, seed);
        let rho = density(&c, &state(n, seed), &NoiseParams::new(pd, pr, 0.0).unwrap());
        prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(rho.hermiticity_error() < 1e-12);
        let eig = to_dense(&rho).symmetric_eigen();
        prop_assert!(eig.eigenvalues.iter().all(|&l| l > -1e-12));
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
    }

    #[test]
    fn readout_confusion_is_stochastic(n in 1usize..=5, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let probs = state(n, seed).probabilities();
        let out = apply_readout_error(&probs, p).unwrap();
        prop_assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(out.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn readout_examples() {
    let out = apply_readout_error(&[1.0, 0.0, 0.0, 0.0], 0.1).unwrap();
    let expect = [0.81, 0.09, 0.09, 0.01];
    for (a, b) in out.iter().zip(expect) {
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(apply_readout_error(&[0.0, 1.0], 1.0).unwrap(), vec![1.0, 0.0]);

    let rec = StateVector::basis(2, 0).unwrap().sample_measurements(40_000, 3).unwrap();
    let noisy = apply_readout_error_to_record(&rec, 0.1, 4).unwrap();
    for (f, e) in noisy.frequencies().iter().zip(expect) {
        // binomial standard error at 40000 shots is below 0.002
        assert!((f - e).abs() < 0.01);
    }
}

#[test]
fn trajectories_agree_with_density_matrix() {
    let n = 3;
    let c = test_circuit(n, 3);
    let psi = state(n, 4);
    let noise = NoiseParams::new(0.02, 0.03, 0.0).unwrap();
    let exact = density(&c, &psi, &noise).probabilities();
    let batch = match noisy_run(&c, &psi, &noise, NoisyMethod::Trajectories { count: 4000, seed: 21 }).unwrap() {
        NoisyOutcome::Trajectories(b) => b,
        NoisyOutcome::Density(_) => unreachable!(),
    };
    for i in 0..exact.len() {
        let z = (batch.mean[i] - exact[i]).abs() / batch.std_error[i].max(1e-15);
        assert!(z < 3.0, "outcome {i}: {} vs {} ({z} sigma)", batch.mean[i], exact[i]);
    }
    assert_eq!(batch.seeds[5], trajectory_seed(21, 5));
}

#[test]
fn trajectory_error_shrinks_as_inverse_sqrt_count() {
    let c = test_circuit(3, 8);
    let psi = state(3, 8);
    let noise = NoiseParams::new(0.05, 0.05, 0.0).unwrap();
    let se = |count: usize| match noisy_run(&c, &psi, &noise, NoisyMethod::Trajectories { count, seed: 2 }).unwrap() {
        NoisyOutcome::Trajectories(b) => b.std_error.iter().sum::<f64>(),
        NoisyOutcome::Density(_) => unreachable!(),
    };
    let ratio = se(256) / se(4096);
    assert!((ratio / 4.0 - 1.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn trajectories_do_not_depend_on_thread_count() {
    let c = test_circuit(4, 5);
    let psi = state(4, 5);
    let noise = NoiseParams::new(0.05, 0.02, 0.0).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            noisy_run(&c, &psi, &noise, NoisyMethod::Trajectories { count: 1000, seed: 9 }).unwrap().probabilities()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn localization_peak_drops_as_noise_grows() {
    let params = SawtoothParams::from_classicality(3, 1.5, 0.273, 0).unwrap();
    let mut last = f64::INFINITY;
    for p in [0.0, 0.002, 0.005, 0.01, 0.02] {
        let noise = NoiseParams::new(p, p, p).unwrap();
        let table = localization_experiment(&params, &noise, 1, 8192, 10, 0).unwrap();
        let peak = table.peak_noisy_exact();
        assert!(peak < last, "p = {p}: {peak} >= {last}");
        last = peak;
        let total: f64 = table.rows.iter().map(|r| r.noisy_exact).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
    let clean = localization_experiment(&params, &NoiseParams::default(), 1, 8192, 10, 0).unwrap();
    assert!((clean.peak_noiseless() - clean.peak_noisy_exact()).abs() < 1e-12);
    assert_eq!(clean.noisy_method, NoisyMethodUsed::Density);
}
