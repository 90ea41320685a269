//! Quantities read out of sawtooth-map states: action distributions,
//! localization lengths, Husimi functions, correlation functions and
//! fidelities.

mod correlation;
mod fidelity;
mod husimi;

pub use correlation::{correlation_function, DiagonalObservable, ObservableBasis};
pub use fidelity::{
    echo_blocks, fidelity_direct, fidelity_ramsey, map_step_blocks, ControllableBlock, ControlledCircuitSpec,
    RamseyResult, SampledRamsey,
};
pub use husimi::{husimi, husimi_average, smoothed_action_distribution, HusimiGrid, HusimiGridSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sawtooth::{action_amplitudes, SignedActionMap};
use crate::statevec::StateVector;

/// Default floor below which action probabilities are excluded from fits.
pub const LOCALIZATION_FLOOR: f64 = 1e-8;

/// `W_m = |<m|psi>|^2` over signed actions `m in [-N/2, N/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionDistribution {
    /// Probabilities in signed order: entry `j` belongs to `m = j - N/2`.
    pub w: Vec<f64>,
    /// Reference action for the localization fit.
    pub m0: i64,
}

impl ActionDistribution {
    /// Builds a distribution from non-negative weights in signed order,
    /// normalizing them.
    pub fn from_weights(w: Vec<f64>, m0: i64) -> Result<Self> {
        if w.len() < 2 || !w.len().is_power_of_two() {
            return Err(Error::InvalidParameter(format!("{} weights is not a power of two >= 2", w.len())));
        }
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParameter("weights must be finite and non-negative".into()));
        }
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter("weights sum to zero".into()));
        }
        let dist = ActionDistribution { w: w.into_iter().map(|x| x / total).collect(), m0 };
        dist.check_m(m0)?;
        Ok(dist)
    }

    /// Builds a distribution from probabilities indexed by basis index
    /// (index `b` holds `m = signed(b)`).
    pub fn from_basis_probabilities(probs: &[f64], m0: i64) -> Result<Self> {
        let dim = probs.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("{dim} probabilities is not a power of two >= 2")));
        }
        let map = SignedActionMap::new(dim.trailing_zeros() as usize);
        let mut w = vec![0.0; dim];
        for (b, p) in probs.iter().enumerate() {
            w[(map.signed(b) + dim as i64 / 2) as usize] = *p;
        }
        ActionDistribution::from_weights(w, m0)
    }

    fn check_m(&self, m: i64) -> Result<()> {
        let half = self.w.len() as i64 / 2;
        if m < -half || m >= half {
            return Err(Error::BasisIndexOutOfRange { index: m as u64, dim: self.w.len() as u64 });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn with_reference(mut self, m0: i64) -> Result<Self> {
        self.check_m(m0)?;
        self.m0 = m0;
        Ok(self)
    }

    pub fn actions(&self) -> impl Iterator<Item = i64> + '_ {
        let half = self.w.len() as i64 / 2;
        (0..self.w.len() as i64).map(move |j| j - half)
    }

    /// `W_m` for signed `m` (zero outside the window).
    pub fn get(&self, m: i64) -> f64 {
        let j = m + self.w.len() as i64 / 2;
        if j < 0 || j >= self.w.len() as i64 {
            0.0
        } else {
            self.w[j as usize]
        }
    }

    /// Action with the largest probability (lowest `m` on ties).
    pub fn peak(&self) -> i64 {
        let mut best = 0;
        for (j, &x) in self.w.iter().enumerate() {
            if x > self.w[best] {
                best = j;
            }
        }
        best as i64 - self.w.len() as i64 / 2
    }

    pub fn mean(&self) -> f64 {
        self.actions().zip(&self.w).map(|(m, w)| m as f64 * w).sum()
    }

    /// Distance from `m0` on the action torus of `N` levels.
    pub fn torus_distance(&self, m: i64) -> i64 {
        let n = self.w.len() as i64;
        let d = (m - self.m0).rem_euclid(n);
        d.min(n - d)
    }

    /// `sum_m W_m d(m, m0)^2` with the torus distance: the spread about the
    /// initial action.
    pub fn spread_about_reference(&self) -> f64 {
        self.actions().zip(&self.w).map(|(m, w)| (self.torus_distance(m) as f64).powi(2) * w).sum()
    }
}

/// Action distribution of an angle-representation state. The reference
/// action is set to the peak; use [`ActionDistribution::with_reference`] to
/// pin it to the initial condition.
pub fn action_distribution(state: &StateVector) -> ActionDistribution {
    let probs: Vec<f64> = action_amplitudes(state).iter().map(|a| a.norm_sqr()).collect();
    let mut dist = ActionDistribution::from_basis_probabilities(&probs, 0).expect("state dimension is valid");
    dist.m0 = dist.peak();
    dist
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationFit {
    /// Localization length from `W_m ~ exp(-2 |m - m0| / ell)`.
    pub ell: f64,
    pub r_squared: f64,
    /// Smallest and largest `|m - m0|` among the fitted points.
    pub support: (i64, i64),
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
}

pub fn fit_localization_length(dist: &ActionDistribution) -> Result<LocalizationFit> {
    fit_localization_length_with_floor(dist, LOCALIZATION_FLOOR)
}

/// Least squares of `ln W_m` against `|m - m0|` over points with `W_m > floor`.
pub fn fit_localization_length_with_floor(dist: &ActionDistribution, floor: f64) -> Result<LocalizationFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = dist
        .actions()
        .zip(&dist.w)
        .filter(|(_, &w)| w > floor)
        .map(|(m, &w)| (dist.torus_distance(m) as f64, w.ln()))
        .unzip();
    if xs.len() < 4 {
        return Err(Error::Fit(format!("only {} points above the floor {floor}, need 4", xs.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all fitted points share one distance from m0".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    if slope >= -1e-12 {
        return Err(Error::NotLocalized { slope });
    }
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min) as i64;
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) as i64;
    Ok(LocalizationFit { ell: -2.0 / slope, r_squared, support: (lo, hi), points: xs.len(), slope, intercept })
}

/// Variance `sum W_m (m - <m>)^2`.
pub fn second_moment(dist: &ActionDistribution) -> f64 {
    let mean = dist.mean();
    dist.actions().zip(&dist.w).map(|(m, w)| (m as f64 - mean).powi(2) * w).sum()
}
