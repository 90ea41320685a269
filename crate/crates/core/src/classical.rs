//! Classical sawtooth map and ensemble diffusion.
//!
//! One iteration kicks then rotates, matching `U = U_T U_k`:
//! `I' = I + k (theta - pi)`, `theta' = (theta + T I') mod 2 pi`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::sawtooth::SawtoothParams;

const CHUNK: usize = 1024;

pub fn classical_step(action: f64, theta: f64, params: &SawtoothParams) -> (f64, f64) {
    let action = action + params.k * (theta - PI);
    let theta = (theta + params.period * action).rem_euclid(TAU);
    // rem_euclid can round up to exactly 2 pi
    (action, if theta >= TAU { 0.0 } else { theta })
}

/// Trajectories `(I, theta)` with `theta` reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalEnsemble {
    pub trajectories: Vec<(f64, f64)>,
    pub seed: u64,
}

impl ClassicalEnsemble {
    /// Fixed initial action, angles uniform on `[0, 2 pi)`; trajectory `j`
    /// draws from stream `j` of `seed`.
    pub fn fixed_action(action: f64, size: usize, seed: u64) -> Self {
        let trajectories = (0..size)
            .map(|j| (action, rng::stream(seed, j as u64).random::<f64>() * TAU))
            .collect();
        ClassicalEnsemble { trajectories, seed }
    }

    pub fn step(&mut self, params: &SawtoothParams) {
        for (i, th) in self.trajectories.iter_mut() {
            (*i, *th) = classical_step(*i, *th, params);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionFit {
    /// Slope of `<(Delta I)^2>` against `t`, fitted through the origin.
    pub d: f64,
    pub r_squared: f64,
    /// Standard error of `d` across trajectories.
    pub std_error: f64,
    /// `<(I_t - I_0)^2>` for `t = 0..=t_max`.
    pub second_moment: Vec<f64>,
    pub ensemble_size: usize,
    pub seed: u64,
    pub warning: Option<String>,
}

/// Least-squares slope through the origin with its coefficient of determination.
pub fn fit_through_origin(ts: &[f64], ys: &[f64]) -> (f64, f64) {
    let stt: f64 = ts.iter().map(|t| t * t).sum();
    let slope = ts.iter().zip(ys).map(|(t, y)| t * y).sum::<f64>() / stt;
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = ts.iter().zip(ys).map(|(t, y)| (y - slope * t).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else if ss_res == 0.0 { 1.0 } else { 0.0 };
    (slope, r2)
}

/// Launches `ensemble_size` trajectories at `I = m0` with uniform angles and
/// fits `<(Delta I)^2> ~ D t` over `t = 1..=t_max`.
pub fn diffusion_coefficient(params: &SawtoothParams, ensemble_size: usize, t_max: usize, seed: u64) -> Result<DiffusionFit> {
    if t_max < 2 {
        return Err(Error::Fit(format!("need t_max >= 2 for a diffusion fit, got {t_max}")));
    }
    if ensemble_size < 2 {
        return Err(Error::InvalidParameter("ensemble needs at least two trajectories".into()));
    }
    let stt: f64 = (1..=t_max).map(|t| (t * t) as f64).sum();
    let i0 = params.m0 as f64;

    // per chunk: summed (Delta I)^2 per t, sum and sum of squares of per-trajectory slopes
    let chunks: Vec<(Vec<f64>, f64, f64)> = (0..ensemble_size.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut moments = vec![0.0; t_max + 1];
            let (mut s1, mut s2) = (0.0, 0.0);
            for j in c * CHUNK..((c + 1) * CHUNK).min(ensemble_size) {
                let mut theta = rng::stream(seed, j as u64).random::<f64>() * TAU;
                let mut action = i0;
                let mut slope_num = 0.0;
                for (t, m) in moments.iter_mut().enumerate().skip(1) {
                    (action, theta) = classical_step(action, theta, params);
                    let d2 = (action - i0).powi(2);
                    *m += d2;
                    slope_num += t as f64 * d2;
                }
                let slope = slope_num / stt;
                s1 += slope;
                s2 += slope * slope;
            }
            (moments, s1, s2)
        })
        .collect();

    let mut moments = vec![0.0; t_max + 1];
    let (mut s1, mut s2) = (0.0, 0.0);
    for (m, a, b) in &chunks {
        moments.iter_mut().zip(m).for_each(|(acc, v)| *acc += v);
        s1 += a;
        s2 += b;
    }
    let count = ensemble_size as f64;
    moments.iter_mut().for_each(|m| *m /= count);
    let mean_slope = s1 / count;
    let var = ((s2 / count - mean_slope * mean_slope) * count / (count - 1.0)).max(0.0);

    let ts: Vec<f64> = (1..=t_max).map(|t| t as f64).collect();
    let (d, r_squared) = fit_through_origin(&ts, &moments[1..]);
    let warning = (!params.is_chaotic()).then(|| {
        format!("K = {} is outside the chaotic regime (K < -4 or K > 0); diffusion is not expected", params.big_k)
    });
    Ok(DiffusionFit {
        d,
        r_squared,
        std_error: (var / count).sqrt(),
        second_moment: moments,
        ensemble_size,
        seed,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: f64, t: f64) -> SawtoothParams {
        SawtoothParams::new(3, k, t, 0).unwrap()
    }

    #[test]
    fn zero_force_at_center() {
        let (i, _) = classical_step(2.5, PI, &params(0.7, 1.0));
        assert_eq!(i, 2.5);
    }

    #[test]
    fn free_rotation() {
        assert_eq!(classical_step(2.0, 0.0, &params(0.0, 1.0)), (2.0, 2.0));
    }

    #[test]
    fn theta_stays_reduced() {
        let p = params(1.3, 2.1);
        let (mut i, mut th) = (0.0, 0.1);
        for _ in 0..1000 {
            (i, th) = classical_step(i, th, &p);
            assert!((0.0..TAU).contains(&th));
        }
    }

    #[test]
    fn no_force_no_diffusion() {
        let fit = diffusion_coefficient(&params(0.0, 1.0), 100, 10, 3).unwrap();
        assert_eq!(fit.d, 0.0);
        assert!(fit.second_moment.iter().all(|&m| m == 0.0));
        assert!(fit.warning.is_some());
    }

    #[test]
    fn degenerate_fit_rejected() {
        assert!(matches!(diffusion_coefficient(&params(1.0, 1.0), 100, 1, 0), Err(Error::Fit(_))));
    }

    #[test]
    fn ensemble_is_seeded() {
        let a = ClassicalEnsemble::fixed_action(0.0, 10, 9);
        let b = ClassicalEnsemble::fixed_action(0.0, 10, 9);
        assert_eq!(a, b);
        assert!(a.trajectories.iter().all(|&(_, th)| (0.0..TAU).contains(&th)));
    }

    #[test]
    fn origin_fit_exact_line() {
        let ts = [1.0, 2.0, 3.0];
        let (s, r2) = fit_through_origin(&ts, &[2.0, 4.0, 6.0]);
        assert!((s - 2.0).abs() < 1e-15 && (r2 - 1.0).abs() < 1e-15);
    }
}
