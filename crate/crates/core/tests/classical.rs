use std::f64::consts::PI;

use qchaos_core::classical::*;
use qchaos_core::sawtooth::SawtoothParams;

/// `D` for `K = 1.5`, `k = 0.273`, `t_max = 50`, 10^5 uniform angles at
/// `I = 0`, from an independent loop with its own SplitMix64 generator.
const ORACLE_D: f64 = 0.270_447;
const ORACLE_SE: f64 = 1.048e-3;

#[test]
fn diffusion_matches_frozen_oracle() {
    let params = SawtoothParams::from_classicality(6, 1.5, 0.273, 0).unwrap();
    let fit = diffusion_coefficient(&params, 100_000, 50, 0).unwrap();
    let sigma = (ORACLE_SE.powi(2) + fit.std_error.powi(2)).sqrt();
    assert!((fit.d - ORACLE_D).abs() < 3.0 * sigma, "D = {} +- {}", fit.d, fit.std_error);
    assert!(fit.r_squared >= 0.99, "R^2 = {}", fit.r_squared);
    assert!((fit.std_error / ORACLE_SE - 1.0).abs() < 0.1);
    assert!(fit.warning.is_none());
}

#[test]
fn diffusion_scales_as_k_squared_at_fixed_classicality() {
    let d = |k: f64| {
        let p = SawtoothParams::from_classicality(6, 1.5, k, 0).unwrap();
        diffusion_coefficient(&p, 20_000, 50, 1).unwrap()
    };
    let (a, b) = (d(0.5), d(2.0));
    let ratio = b.d / a.d;
    let se = ratio * ((a.std_error / a.d).powi(2) + (b.std_error / b.d).powi(2)).sqrt();
    assert!((ratio - 16.0).abs() < 3.0 * se, "ratio {ratio} +- {se}");
}

#[test]
fn zero_kick_gives_no_diffusion() {
    let p = SawtoothParams::new(6, 0.0, 0.7, 3).unwrap();
    let fit = diffusion_coefficient(&p, 1000, 20, 0).unwrap();
    assert_eq!(fit.d, 0.0);
    assert!(fit.second_moment.iter().all(|&m| m == 0.0));
    assert!(fit.warning.is_some());
}

#[test]
fn ensemble_is_reproducible_and_thread_independent() {
    let p = SawtoothParams::from_classicality(6, 1.5, 1.0, 0).unwrap();
    let a = diffusion_coefficient(&p, 5000, 30, 4).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| diffusion_coefficient(&p, 5000, 30, 4).unwrap());
    assert_eq!(a, b);
}

#[test]
fn map_is_area_preserving_with_trace_two_plus_k() {
    for (big_k, k) in [(1.5, 0.273), (-2.0, 1.0), (0.3, 3.0), (-5.0, 0.5)] {
        let p = SawtoothParams::from_classicality(6, big_k, k, 0).unwrap();
        let h = 1e-6;
        // stay away from the kick discontinuity at theta = 0 and the angle wrap
        for &(i, th) in &[(0.1, 1.0), (-0.4, 2.5), (0.0, 4.0)] {
            let f = |i: f64, th: f64| {
                let action = i + k * (th - PI);
                (action, th + p.period * action)
            };
            let (a0, t0) = f(i, th);
            let (ai, ti) = f(i + h, th);
            let (at, tt) = f(i, th + h);
            let j = [[(ai - a0) / h, (at - a0) / h], [(ti - t0) / h, (tt - t0) / h]];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            assert!((det - 1.0).abs() < 1e-6);
            assert!((j[0][0] + j[1][1] - (2.0 + big_k)).abs() < 1e-6);
            let (ca, ct) = classical_step(i, th, &p);
            assert!((ca - a0).abs() < 1e-12 && (ct - t0.rem_euclid(2.0 * PI)).abs() < 1e-12);
        }
    }
}

#[test]
fn classical_step_keeps_angle_on_the_circle() {
    let p = SawtoothParams::from_classicality(6, 1.5, 2.0, 0).unwrap();
    let mut e = ClassicalEnsemble::fixed_action(0.0, 500, 3);
    for _ in 0..200 {
        e.step(&p);
    }
    assert!(e.trajectories.iter().all(|&(i, th)| i.is_finite() && (0.0..2.0 * PI).contains(&th)));
}
