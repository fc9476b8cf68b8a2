//! Test-side oracles that share no code with the library under test.

use std::f64::consts::PI;

/// `J₀(x) = (1/π) ∫₀^π cos(x sin θ) dθ` by the trapezoidal rule, which is
/// spectrally accurate for this periodic integrand.
pub fn j0_trapezoid(x: f64) -> f64 {
    let n = 64 + 2 * x.abs().ceil() as usize;
    let h = PI / n as f64;
    let mut s = 0.5 * (1.0 + (x * PI.sin()).cos());
    for i in 1..n {
        s += (x * (i as f64 * h).sin()).cos();
    }
    s * h / PI
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Kronrod and Gauss estimates on `[a, b]`.
fn g7k15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let d = half * XGK[j];
        let pair = f(mid - d) + f(mid + d);
        k += WGK[j] * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    (k * half, g * half)
}

/// Adaptive Gauss–Kronrod quadrature by recursive bisection.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (k, g) = g7k15(f, a, b);
        if (k - g).abs() <= tol || depth == 0 {
            return k;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    rec(&f, a, b, tol, 40)
}

/// Pulse solution `(κ/2μ) ∫ e^{−k²/4μ} cos(ckt) J₀(kr) k dk`, cut where the
/// Gaussian factor drops below 1e−18.
pub fn pulse_by_quadrature(kappa: f64, mu: f64, c: f64, t: f64, r: f64) -> f64 {
    let k_max = (4.0 * mu * (1e18f64).ln()).sqrt();
    let integrand = |k: f64| (-k * k / (4.0 * mu)).exp() * (c * k * t).cos() * j0_trapezoid(k * r) * k;
    kappa / (2.0 * mu) * integrate(integrand, 0.0, k_max, 1e-12)
}
