//! Discrete Hankel transform of order zero on `[0, X]`.

use super::bessel::{bessel_j0, bessel_j1, j0_zeros};
use crate::{Error, Result};

/// Default number of zeros and truncation radius.
pub const DEFAULT_TERMS: usize = 4096;
pub const DEFAULT_X_MAX: f64 = 4.0;

/// Zeros `z_s` of `J₀` and the Fourier–Bessel weights `2/(X² J₁(z_s)²)`
/// for functions supported on `[0, X]`.
#[derive(Debug, Clone)]
pub struct HankelTable {
    x_max: f64,
    zeros: Vec<f64>,
    weights: Vec<f64>,
}

impl HankelTable {
    pub fn new(m: usize, x_max: f64) -> Result<Self> {
        if x_max.is_nan() || x_max <= 0.0 {
            return Err(Error::Config(format!("Hankel radius must be positive, got {x_max}")));
        }
        let zeros = j0_zeros(m)?;
        let weights = zeros
            .iter()
            .map(|&z| {
                let j1 = bessel_j1(z);
                2.0 / (x_max * x_max * j1 * j1)
            })
            .collect();
        Ok(Self { x_max, zeros, weights })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Wavenumber `z_s / X` of term `s` (0-based).
    pub fn wavenumber(&self, s: usize) -> f64 {
        self.zeros[s] / self.x_max
    }

    /// `u(r) = Σ_s w_s F_s J₀(z_s r / X)` for spectral samples `F_s = F(k_s)`.
    /// Missing trailing samples are taken as zero.
    pub fn inverse(&self, samples: &[f64], r: f64) -> Result<f64> {
        if r > self.x_max || r < 0.0 {
            return Err(Error::DomainTruncation { r, x_max: self.x_max });
        }
        let scale = r / self.x_max;
        Ok(samples
            .iter()
            .zip(&self.zeros)
            .zip(&self.weights)
            .map(|((&f, &z), &w)| if f == 0.0 { 0.0 } else { w * f * bessel_j0(z * scale) })
            .sum())
    }

    /// Forward transform on the sampling points `r_n = z_n X / z_M`:
    /// `F(k_m) ≈ (2X²/z_M²) Σ_{n<M} f(r_n) J₀(z_m z_n / z_M) / J₁(z_n)²`,
    /// for the first `n_out` wavenumbers.
    pub fn forward(&self, f: impl Fn(f64) -> f64, n_out: usize) -> Vec<f64> {
        let m = self.zeros.len();
        let z_last = self.zeros[m - 1];
        let pre = 2.0 * self.x_max * self.x_max / (z_last * z_last);
        let terms: Vec<(f64, f64)> = self.zeros[..m - 1]
            .iter()
            .map(|&zn| {
                let j1 = bessel_j1(zn);
                (zn, f(zn * self.x_max / z_last) / (j1 * j1))
            })
            .filter(|t| t.1 != 0.0)
            .collect();
        self.zeros
            .iter()
            .take(n_out.min(m))
            .map(|&zm| pre * terms.iter().map(|&(zn, g)| g * bessel_j0(zm * zn / z_last)).sum::<f64>())
            .collect()
    }
}
