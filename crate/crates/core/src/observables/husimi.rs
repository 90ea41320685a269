//! Coherent-state (Husimi) phase-space functions on the torus
//! `[0, 2 pi) x [-N/2, N/2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sawtooth::{action_amplitudes, SignedActionMap};
use crate::statevec::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HusimiGridSpec {
    pub n_theta: usize,
    pub n_action: usize,
}

impl HusimiGridSpec {
    pub fn new(n_theta: usize, n_action: usize) -> Result<Self> {
        if n_theta == 0 || n_action == 0 {
            return Err(Error::InvalidParameter("Husimi grid needs at least one cell per axis".into()));
        }
        Ok(HusimiGridSpec { n_theta, n_action })
    }
}

/// Husimi values, row-major with one row per action grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HusimiGrid {
    pub spec: HusimiGridSpec,
    pub n_qubits: usize,
    pub values: Vec<f64>,
    pub sigma_theta: f64,
    pub sigma_action: f64,
    pub warning: Option<String>,
}

impl HusimiGrid {
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.spec.n_theta as f64
    }

    pub fn action(&self, j: usize) -> f64 {
        action_point(self.dim(), self.spec.n_action, j)
    }

    pub fn cell_area(&self) -> f64 {
        (2.0 * PI / self.spec.n_theta as f64) * (self.dim() as f64 / self.spec.n_action as f64)
    }

    pub fn value(&self, theta_index: usize, action_index: usize) -> f64 {
        self.values[action_index * self.spec.n_theta + theta_index]
    }

    /// `sum values * cell area`; one for a normalized grid.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    /// Marginal over `theta` for each action row (`sum_theta Q dtheta`).
    pub fn action_marginal(&self) -> Vec<f64> {
        let dtheta = 2.0 * PI / self.spec.n_theta as f64;
        self.values.chunks(self.spec.n_theta).map(|row| row.iter().sum::<f64>() * dtheta).collect()
    }
}

/// Action-width of the coherent states, `sqrt(N / 4 pi)`; the angle width
/// is `1 / (2 sigma_I)`.
pub fn coherent_widths(dim: usize) -> (f64, f64) {
    let sigma_action = (dim as f64 / (4.0 * PI)).sqrt();
    (1.0 / (2.0 * sigma_action), sigma_action)
}

fn action_point(dim: usize, n_action: usize, j: usize) -> f64 {
    -(dim as f64) / 2.0 + j as f64 * dim as f64 / n_action as f64
}

/// The image of `m` on the action torus nearest to `center`.
fn nearest_image(m: i64, center: f64, dim: usize) -> i64 {
    let n = dim as f64;
    m + (((center - m as f64) / n).round() * n) as i64
}

fn gaussian_weights(dim: usize, center: f64, sigma: f64) -> Vec<(i64, f64)> {
    let map = SignedActionMap::new(dim.trailing_zeros() as usize);
    (0..dim)
        .map(|b| {
            let m = nearest_image(map.signed(b), center, dim);
            let d = m as f64 - center;
            (m, (-d * d / (4.0 * sigma * sigma)).exp())
        })
        .collect()
}

/// `Q(theta, I) = |<theta, I|psi>|^2` with coherent states wrapped on the
/// torus, normalized so that the grid integrates to one.
pub fn husimi(state: &StateVector, spec: &HusimiGridSpec) -> Result<HusimiGrid> {
    let dim = state.dim();
    let (sigma_theta, sigma_action) = coherent_widths(dim);
    let amps = action_amplitudes(state);
    let fft = FftPlanner::new().plan_fft_inverse(spec.n_theta);
    let nt = spec.n_theta as i64;
    let mut values: Vec<f64> = (0..spec.n_action)
        .into_par_iter()
        .flat_map_iter(|row| {
            let center = action_point(dim, spec.n_action, row);
            let weights = gaussian_weights(dim, center, sigma_action);
            let mut bins = vec![Complex64::new(0.0, 0.0); spec.n_theta];
            let mut norm2 = 0.0;
            for (a, (m, w)) in amps.iter().zip(&weights) {
                bins[m.rem_euclid(nt) as usize] += a * w;
                norm2 += w * w;
            }
            fft.process(&mut bins);
            bins.into_iter().map(move |c| c.norm_sqr() / norm2)
        })
        .collect();
    let warning = (spec.n_theta * spec.n_action < dim).then(|| {
        format!(
            "Husimi grid of {}x{} cells is coarser than the {dim}-level Hilbert space",
            spec.n_theta, spec.n_action
        )
    });
    let mut grid = HusimiGrid { spec: *spec, n_qubits: state.n_qubits(), values: Vec::new(), sigma_theta, sigma_action, warning };
    let total = values.iter().sum::<f64>() * grid.cell_area();
    if !(total > 0.0) {
        return Err(Error::InvalidParameter("Husimi function vanishes on the whole grid".into()));
    }
    values.iter_mut().for_each(|v| *v /= total);
    grid.values = values;
    Ok(grid)
}

/// Average of the normalized Husimi grids of several states.
pub fn husimi_average<'a>(states: impl IntoIterator<Item = &'a StateVector>, spec: &HusimiGridSpec) -> Result<HusimiGrid> {
    let mut acc: Option<HusimiGrid> = None;
    let mut count = 0usize;
    for s in states {
        let g = husimi(s, spec)?;
        count += 1;
        match &mut acc {
            None => acc = Some(g),
            Some(a) => {
                if a.n_qubits != g.n_qubits {
                    return Err(Error::DimensionMismatch { expected: a.n_qubits, found: g.n_qubits });
                }
                a.values.iter_mut().zip(&g.values).for_each(|(x, y)| *x += y);
            }
        }
    }
    let mut grid = acc.ok_or_else(|| Error::InvalidParameter("no states to average".into()))?;
    grid.values.iter_mut().for_each(|v| *v /= count as f64);
    Ok(grid)
}

/// The action distribution smoothed with the squared coherent-state
/// profile, sampled at the grid's action points and normalized like
/// [`HusimiGrid::action_marginal`]. Equals the marginal whenever
/// `n_theta >= N`.
pub fn smoothed_action_distribution(state: &StateVector, spec: &HusimiGridSpec) -> Vec<f64> {
    let dim = state.dim();
    let (_, sigma_action) = coherent_widths(dim);
    let probs: Vec<f64> = action_amplitudes(state).iter().map(|a| a.norm_sqr()).collect();
    let mut rows: Vec<f64> = (0..spec.n_action)
        .map(|row| {
            let weights = gaussian_weights(dim, action_point(dim, spec.n_action, row), sigma_action);
            let norm2: f64 = weights.iter().map(|(_, w)| w * w).sum();
            probs.iter().zip(&weights).map(|(p, (_, w))| p * w * w).sum::<f64>() / norm2
        })
        .collect();
    let total = rows.iter().sum::<f64>() * dim as f64 / spec.n_action as f64;
    rows.iter_mut().for_each(|r| *r /= total);
    rows
}
