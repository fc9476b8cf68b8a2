//! Bessel functions of the first kind of orders 0 and 1, and the positive
//! zeros of `J₀`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::{Error, Result};

/// Below this the ascending series is used.
const SERIES_LIMIT: f64 = 1.0;
/// From here on the Hankel asymptotic expansion converges to round-off.
const ASYMPTOTIC_LIMIT: f64 = 25.0;

pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        series(ax, 0)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax).0
    } else {
        asymptotic(ax, 0)
    }
}

pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        series(ax, 1)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax).1
    } else {
        asymptotic(ax, 1)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J_n(x) = Σ_k (−1)^k (x/2)^{2k+n} / (k! (k+n)!)` for `n ∈ {0, 1}`.
fn series(x: f64, n: u32) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = if n == 0 { 1.0 } else { h };
    let mut sum = term;
    for k in 1..40 {
        term *= -h2 / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller's downward recurrence `J_{k−1} = (2k/x) J_k − J_{k+1}` from a
/// deep start, normalised by `J₀ + 2 Σ J_{2k} = 1`. Returns `(J₀, J₁)`.
fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x + 20.0 + 8.0 * x.cbrt()) as usize / 2 + 1);
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut norm = 0.0;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        let below = k as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        // `cur` now holds J_{k−1}.
        if k > 1 && (k - 1) % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += cur;
    (cur / norm, above / norm)
}

/// Hankel expansion `J_n(x) ≈ √(2/πx) (P cos χ − Q sin χ)`, `χ = x − (2n+1)π/4`.
/// The phase is formed from `sin x` and `cos x` to avoid reducing `x − π/4`.
fn asymptotic(x: f64, n: u32) -> f64 {
    let mu = 4.0 * (n * n) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    let eight_x = 8.0 * x;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let (cos_chi, sin_chi) = if n == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// First `m` positive zeros of `J₀`, by Newton iteration from McMahon's
/// asymptotic estimate.
pub fn j0_zeros(m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::Config("need at least one zero".into()));
    }
    (1..=m).map(j0_zero).collect()
}

pub fn j0_zero(s: usize) -> Result<f64> {
    let beta = (s as f64 - 0.25) * PI;
    let e = 1.0 / (8.0 * beta);
    let mut z = beta + e - 124.0 / 3.0 * e * e * e;
    for _ in 0..50 {
        let dz = bessel_j0(z) / bessel_j1(z);
        z += dz;
        if dz.abs() <= 4.0 * f64::EPSILON * z {
            // One more correction settles the last bit.
            z += bessel_j0(z) / bessel_j1(z);
            return Ok(z);
        }
    }
    Err(Error::Numeric(format!("Newton iteration for zero {s} of J0 did not converge")))
}
