//! The chaotic-sea / stable-island configuration on 9 qubits: `T = 2 pi / N`,
//! `kT = -0.1`, `m0 = floor(0.38 N)`, Husimi averaged over `950 <= t <= 1000`.

use std::f64::consts::PI;
use std::path::PathBuf;

use qchaos_core::observables::{husimi_average, HusimiGrid, HusimiGridSpec};
use qchaos_core::sawtooth::{action_eigenstate, SawtoothEvolver, SawtoothParams};
use qchaos_core::StateVector;

pub const N_QUBITS: usize = 9;
pub const T_FIRST: usize = 950;
pub const T_LAST: usize = 1000;
pub const GRID: usize = 64;

pub fn params() -> SawtoothParams {
    let dim = 1usize << N_QUBITS;
    let period = 2.0 * PI / dim as f64;
    let m0 = (0.38 * dim as f64).floor() as i64;
    SawtoothParams::from_classicality(N_QUBITS, -0.1, -0.1 / period, m0).unwrap()
}

/// States for `T_FIRST ..= T_LAST` under the given evolver.
pub fn window(evolver: &SawtoothEvolver) -> Vec<StateVector> {
    let p = params();
    let mut s = action_eigenstate(p.n, p.m0).unwrap();
    let mut out = Vec::with_capacity(T_LAST - T_FIRST + 1);
    for t in 1..=T_LAST {
        evolver.step(&mut s).unwrap();
        if t >= T_FIRST {
            out.push(s.clone());
        }
    }
    out
}

pub fn averaged_husimi(states: &[StateVector]) -> HusimiGrid {
    husimi_average(states, &HusimiGridSpec::new(GRID, GRID).unwrap()).unwrap()
}

pub fn reference_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/fig1_husimi.csv")
}

/// One row per action cell, `GRID` comma-separated values per row.
pub fn write_grid(grid: &HusimiGrid) -> String {
    grid.values
        .chunks(GRID)
        .map(|row| row.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

pub fn read_grid() -> Vec<f64> {
    let text = std::fs::read_to_string(reference_path()).expect("stored Husimi reference grid");
    text.lines().flat_map(|l| l.split(',')).map(|v| v.trim().parse::<f64>().unwrap()).collect()
}
