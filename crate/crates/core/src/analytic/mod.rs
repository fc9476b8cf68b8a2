//! Closed-form radial solution of the 2-D wave equation for a Gaussian
//! pressure pulse released at rest, evaluated by a Fourier–Bessel series.

pub mod bessel;
pub mod hankel;

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

pub use bessel::{bessel_j0, bessel_j1, j0_zero, j0_zeros};
pub use hankel::{HankelTable, DEFAULT_TERMS, DEFAULT_X_MAX};

use crate::kinetic::AcousticState;
use crate::lattice::Grid;
use crate::Result;

/// Spectral samples whose Gaussian factor falls below this are dropped.
pub const SPECTRAL_CUTOFF: f64 = 1e-18;

/// `p₀(r) = κ exp(−μ r²)`, `v₀ = w₀ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianInit {
    pub kappa: f64,
    pub mu: f64,
}

impl Default for GaussianInit {
    fn default() -> Self {
        Self { kappa: 1.0, mu: 2.0 }
    }
}

impl GaussianInit {
    pub fn pressure(&self, r: f64) -> f64 {
        self.kappa * (-self.mu * r * r).exp()
    }

    /// Order-zero Hankel transform `κ/(2μ) exp(−k²/4μ)`.
    pub fn transform(&self, k: f64) -> f64 {
        self.kappa / (2.0 * self.mu) * (-k * k / (4.0 * self.mu)).exp()
    }

    pub fn state(&self, grid: Grid) -> AcousticState {
        AcousticState::from_fn(grid, |x, y| [0.0, 0.0, self.pressure(x.hypot(y))])
    }
}

/// Shared table with the default size, built on first use.
pub fn default_table() -> &'static HankelTable {
    static TABLE: OnceLock<HankelTable> = OnceLock::new();
    TABLE.get_or_init(|| HankelTable::new(DEFAULT_TERMS, DEFAULT_X_MAX).expect("default Hankel table"))
}

/// Series coefficients of `u(t, ·)` at one fixed time.
#[derive(Debug, Clone)]
pub struct RadialSolution<'a> {
    table: &'a HankelTable,
    samples: Vec<f64>,
}

impl<'a> RadialSolution<'a> {
    pub fn new(table: &'a HankelTable, init: GaussianInit, c: f64, t: f64) -> Self {
        let mut samples = Vec::new();
        for s in 0..table.len() {
            let k = table.wavenumber(s);
            if (-k * k / (4.0 * init.mu)).exp() < SPECTRAL_CUTOFF {
                break;
            }
            samples.push(init.transform(k) * (c * k * t).cos());
        }
        Self { table, samples }
    }

    pub fn terms(&self) -> usize {
        self.samples.len()
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        self.table.inverse(&self.samples, r)
    }
}

/// `u(t, r)` with the default table.
pub fn analytic_u(init: GaussianInit, c: f64, t: f64, r: f64) -> Result<f64> {
    RadialSolution::new(default_table(), init, c, t).eval(r)
}

/// Exact pressure at every node with `r ≤ r_max`; other nodes are left at
/// zero. Velocities are not filled. The support radius is doubled as often
/// as needed to cover `r_max`.
pub fn analytic_field_within(init: GaussianInit, c: f64, t: f64, grid: &Grid, r_max: f64) -> Result<AcousticState> {
    let owned;
    let mut table = default_table();
    if r_max > table.x_max() {
        let mut x = table.x_max();
        while x < r_max {
            x *= 2.0;
        }
        log::warn!("radius {r_max} exceeds the Hankel support {}; using X = {x}", table.x_max());
        owned = HankelTable::new(DEFAULT_TERMS, x)?;
        table = &owned;
    }
    let sol = RadialSolution::new(table, init, c, t);

    // Node radii are Δ/2·√(a² + b²) with odd a, b, so a² + b² keys the radius.
    let n = grid.n_per_side();
    let half = 0.5 * grid.delta();
    let offset = |i: usize| (2 * i as i64 + 1 - n as i64).unsigned_abs();
    let mut keys: HashMap<u64, f64> = HashMap::new();
    for j in 0..n {
        for i in 0..n {
            let key = offset(i).pow(2) + offset(j).pow(2);
            keys.entry(key).or_insert(0.0);
        }
    }
    let list: Vec<u64> = keys
        .keys()
        .copied()
        .filter(|&k| half * (k as f64).sqrt() <= r_max)
        .collect();
    let values: Vec<(u64, f64)> = list
        .par_iter()
        .map(|&k| sol.eval(half * (k as f64).sqrt()).map(|u| (k, u)))
        .collect::<Result<_>>()?;
    let lookup: HashMap<u64, f64> = values.into_iter().collect();

    let mut q = AcousticState::zeros(*grid);
    for (idx, cell) in q.data_mut().iter_mut().enumerate() {
        let (i, j) = grid.coords_of(idx);
        let key = offset(i).pow(2) + offset(j).pow(2);
        if let Some(&u) = lookup.get(&key) {
            cell[2] = u;
        }
    }
    Ok(q)
}

/// Exact pressure at every node of the grid.
pub fn analytic_field(init: GaussianInit, c: f64, t: f64, grid: &Grid) -> Result<AcousticState> {
    let corner = std::f64::consts::SQRT_2 * (grid.half_extent() - 0.5 * grid.delta());
    analytic_field_within(init, c, t, grid, corner)
}
