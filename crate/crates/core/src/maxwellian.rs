//! Linear Maxwellians `f̄_ζ(q) = Ω_ζ q` for the symmetrized acoustics
//! system on D2Q5 and D2Q9 lattices.
//!
//! A scheme is fixed by the rest-free blocks `Ω₁` (and `Ω₅` on D2Q9); the
//! other matrices follow by quarter-turn conjugation and `Ω₀` closes the
//! zeroth-moment identity `Σ_ζ Ω_ζ = I`. The flux identities
//! `Σ_ζ c_ζ^a Ω_ζ = A_a` pin `Ω₁[0][2] = −c/(2λ)` and the other odd entries
//! to zero.

use std::fmt;
use std::str::FromStr;

use crate::lattice::{LatticeKind, VelocitySet};
use crate::linalg::{min_eigenvalue3, min_eigenvalue6, pseudo_inverse_sym, quarter_turn, Mat3, Mat6};
use crate::{Error, Result};

/// Tolerance for positivity and moment checks.
pub const TOL: f64 = 1e-12;
/// Relative eigenvalue cut-off of the pseudo-inverse.
pub const RANK_TOL: f64 = 1e-10;

/// Flux matrices `A₁`, `A₂` of `∂_t q + A₁ ∂_x q + A₂ ∂_y q = 0`, `q = (v, w, p)`.
pub fn acoustic_matrices(c: f64) -> [Mat3; 2] {
    [
        Mat3::new(0.0, 0.0, -c, 0.0, 0.0, 0.0, -c, 0.0, 0.0),
        Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, -c, 0.0, -c, 0.0),
    ]
}

/// Free parameters of a D2Q5/D2Q9 scheme. The tilded fields parametrise the
/// diagonal block `Ω₅` and must be zero on D2Q5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticParams {
    pub lattice: LatticeKind,
    /// Sound speed.
    pub c: f64,
    /// Lattice speed magnitude.
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub x: f64,
    pub tilde_alpha: f64,
    pub tilde_beta: f64,
    pub tilde_gamma: f64,
    pub tilde_x: f64,
}

impl KineticParams {
    pub fn d2q5(c: f64, lambda: f64, alpha: f64, beta: f64, gamma: f64, x: f64) -> Self {
        Self {
            lattice: LatticeKind::D2Q5,
            c,
            lambda,
            alpha,
            beta,
            gamma,
            x,
            tilde_alpha: 0.0,
            tilde_beta: 0.0,
            tilde_gamma: 0.0,
            tilde_x: 0.0,
        }
    }

    /// D2Q9 parameters; `tilde = (α̃, β̃, γ̃, x̃)`.
    pub fn d2q9(c: f64, lambda: f64, alpha: f64, beta: f64, gamma: f64, x: f64, tilde: [f64; 4]) -> Self {
        Self {
            lattice: LatticeKind::D2Q9,
            tilde_alpha: tilde[0],
            tilde_beta: tilde[1],
            tilde_gamma: tilde[2],
            tilde_x: tilde[3],
            ..Self::d2q5(c, lambda, alpha, beta, gamma, x)
        }
    }

    /// `Ω₁[0][2]`, forced by the x-flux identity.
    pub fn y(&self) -> f64 {
        -self.c / (2.0 * self.lambda)
    }

    pub fn z(&self) -> f64 {
        0.0
    }

    /// CFL number `c/λ` of the kinetic scheme.
    pub fn cfl(&self) -> f64 {
        self.c / self.lambda
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    fn has_tilde(&self) -> bool {
        self.tilde_alpha != 0.0 || self.tilde_beta != 0.0 || self.tilde_gamma != 0.0 || self.tilde_x != 0.0
    }
}

/// Named parameter sets compared in the numerical study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `λ = √2 c`, `α = ½`, `γ = ¼`: minimal numerical diffusion.
    Optimal,
    CflHalfA,
    CflHalfB,
    CflHalfC,
    D2q9,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Optimal,
        Preset::CflHalfA,
        Preset::CflHalfB,
        Preset::CflHalfC,
        Preset::D2q9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Optimal => "optimal",
            Preset::CflHalfA => "cfl-half-a",
            Preset::CflHalfB => "cfl-half-b",
            Preset::CflHalfC => "cfl-half-c",
            Preset::D2q9 => "d2q9",
        }
    }

    pub fn params(self, c: f64) -> KineticParams {
        match self {
            Preset::Optimal => KineticParams::d2q5(c, 2f64.sqrt() * c, 0.5, 0.0, 0.25, 0.0),
            Preset::CflHalfA => KineticParams::d2q5(c, 2.0 * c, 0.5, 0.0, 0.25, 0.0),
            Preset::CflHalfB => KineticParams::d2q5(c, 2.0 * c, 0.25, 0.0, 0.25, 0.0),
            Preset::CflHalfC => KineticParams::d2q5(c, 2.0 * c, 0.5, 0.0, 0.125, 0.0),
            Preset::D2q9 => {
                let lambda = 1.5 * c;
                let t = c * c / (16.0 * lambda * lambda);
                KineticParams::d2q9(c, lambda, 4.0 / 9.0, 0.0, 0.25, 0.0, [t, t, 0.0, t])
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

pub fn preset(name: &str, c: f64) -> Result<KineticParams> {
    Ok(name.parse::<Preset>()?.params(c))
}

/// The `Q` matrices `Ω_ζ` together with their pseudo-inverses.
#[derive(Debug, Clone)]
pub struct MaxwellianSet {
    omegas: Vec<Mat3>,
    pinv_omegas: Vec<Mat3>,
    velocity_set: VelocitySet,
    c: f64,
}

impl MaxwellianSet {
    fn from_omegas(omegas: Vec<Mat3>, velocity_set: VelocitySet, c: f64) -> Self {
        let pinv_omegas = omegas.iter().map(|m| pseudo_inverse_sym(m, RANK_TOL)).collect();
        Self {
            omegas,
            pinv_omegas,
            velocity_set,
            c,
        }
    }

    pub fn omegas(&self) -> &[Mat3] {
        &self.omegas
    }

    pub fn omega(&self, zeta: usize) -> &Mat3 {
        &self.omegas[zeta]
    }

    pub fn pinv_omegas(&self) -> &[Mat3] {
        &self.pinv_omegas
    }

    pub fn velocity_set(&self) -> &VelocitySet {
        &self.velocity_set
    }

    pub fn q(&self) -> usize {
        self.omegas.len()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `Σ_ζ Ω_ζ`, which is the identity for a consistent scheme.
    pub fn zeroth_moment(&self) -> Mat3 {
        self.omegas.iter().sum()
    }

    /// `Σ_ζ c_ζ^a Ω_ζ` for `a ∈ {0, 1}` (x, y).
    pub fn first_moment(&self, a: usize) -> Mat3 {
        self.omegas
            .iter()
            .enumerate()
            .map(|(z, m)| m * self.velocity_set.speed(z)[a])
            .sum()
    }

    /// `M_ab f̄ = Σ_ζ c_ζ^a c_ζ^b Ω_ζ`.
    pub fn second_moment(&self, a: usize, b: usize) -> Mat3 {
        self.omegas
            .iter()
            .enumerate()
            .map(|(z, m)| {
                let c = self.velocity_set.speed(z);
                m * (c[a] * c[b])
            })
            .sum()
    }

    /// Largest entrywise violation of `Σ Ω = I` and `Σ c^a Ω = A_a`.
    pub fn moment_residual(&self) -> f64 {
        let [a1, a2] = acoustic_matrices(self.c);
        let r0 = (self.zeroth_moment() - Mat3::identity()).amax();
        let r1 = (self.first_moment(0) - a1).amax();
        let r2 = (self.first_moment(1) - a2).amax();
        r0.max(r1).max(r2)
    }

    pub fn min_eigenvalues(&self) -> Vec<f64> {
        self.omegas.iter().map(min_eigenvalue3).collect()
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalues().iter().all(|&ev| ev >= -TOL)
    }
}

fn rest_block(diag_v: f64, diag_p: f64) -> Mat3 {
    Mat3::new(diag_v, 0.0, 0.0, 0.0, diag_v, 0.0, 0.0, 0.0, diag_p)
}

/// Appends `base` and its three successive quarter-turn conjugates.
fn push_orbit(out: &mut Vec<Mat3>, base: Mat3) {
    let r = quarter_turn();
    let mut m = base;
    for _ in 0..4 {
        out.push(m);
        m = r * m * r.transpose();
    }
}

fn omega1(p: &KineticParams) -> Mat3 {
    let y = p.y();
    let z = p.z();
    Mat3::new(p.alpha, p.x, y, p.x, p.beta, z, y, z, p.gamma)
}

fn check_speed(p: &KineticParams) -> Result<()> {
    if !(p.lambda > 0.0 && p.c > 0.0) {
        return Err(Error::Config(format!(
            "need positive λ and c, got λ={}, c={}",
            p.lambda, p.c
        )));
    }
    Ok(())
}

pub fn build_d2q5(p: &KineticParams) -> Result<MaxwellianSet> {
    check_speed(p)?;
    if p.has_tilde() {
        return Err(Error::Config("D2Q5 parameters carry non-zero D2Q9 entries".into()));
    }
    let mut omegas = Vec::with_capacity(5);
    let s = p.alpha + p.beta;
    omegas.push(rest_block(1.0 - 2.0 * s, 1.0 - 4.0 * p.gamma));
    push_orbit(&mut omegas, omega1(p));
    let vs = VelocitySet::new(LatticeKind::D2Q5, p.lambda)?;
    Ok(MaxwellianSet::from_omegas(omegas, vs, p.c))
}

pub fn build_d2q9(p: &KineticParams) -> Result<MaxwellianSet> {
    check_speed(p)?;
    let mut omegas = Vec::with_capacity(9);
    let s = p.alpha + p.beta + p.tilde_alpha + p.tilde_beta;
    omegas.push(rest_block(1.0 - 2.0 * s, 1.0 - 4.0 * (p.gamma + p.tilde_gamma)));
    push_orbit(&mut omegas, omega1(p));
    let omega5 = Mat3::new(
        p.tilde_alpha,
        p.tilde_x,
        0.0,
        p.tilde_x,
        p.tilde_beta,
        0.0,
        0.0,
        0.0,
        p.tilde_gamma,
    );
    push_orbit(&mut omegas, omega5);
    let vs = VelocitySet::new(LatticeKind::D2Q9, p.lambda)?;
    Ok(MaxwellianSet::from_omegas(omegas, vs, p.c))
}

/// Builds the Maxwellian set for the lattice named in `p`.
pub fn build(p: &KineticParams) -> Result<MaxwellianSet> {
    match p.lattice {
        LatticeKind::D2Q5 => build_d2q5(p),
        LatticeKind::D2Q9 => build_d2q9(p),
    }
}

/// One positivity inequality written as `slack ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality {
    pub name: &'static str,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub checks: Vec<Inequality>,
}

impl Admissibility {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.slack >= -TOL)
    }

    pub fn violations(&self) -> Vec<&Inequality> {
        self.checks.iter().filter(|c| c.slack < -TOL).collect()
    }

    pub fn slack(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.slack)
    }
}

/// Principal-minor test for positivity of `Ω₀`, `Ω₁` (and `Ω₅`); the other
/// matrices are congruent to these.
pub fn check_admissible(p: &KineticParams) -> Admissibility {
    let y = p.y();
    let bound = p.c * p.c / (4.0 * p.lambda * p.lambda);
    let (ta, tb, tg, tx) = (p.tilde_alpha, p.tilde_beta, p.tilde_gamma, p.tilde_x);
    let mut checks = vec![
        Inequality { name: "alpha*beta >= x^2", slack: p.alpha * p.beta - p.x * p.x },
        Inequality { name: "alpha*gamma >= c^2/(4 lambda^2)", slack: p.alpha * p.gamma - bound },
        // Full 3×3 minor of Ω₁; implied by the two above when x = 0.
        Inequality {
            name: "det(Omega_1) >= 0",
            slack: p.gamma * (p.alpha * p.beta - p.x * p.x) - y * y * p.beta,
        },
        Inequality { name: "alpha >= 0", slack: p.alpha },
        Inequality { name: "beta >= 0", slack: p.beta },
        Inequality { name: "gamma >= 0", slack: p.gamma },
    ];
    match p.lattice {
        LatticeKind::D2Q5 => {
            checks.push(Inequality { name: "alpha+beta <= 1/2", slack: 0.5 - (p.alpha + p.beta) });
            checks.push(Inequality { name: "gamma <= 1/4", slack: 0.25 - p.gamma });
        }
        LatticeKind::D2Q9 => {
            checks.push(Inequality { name: "ta*tb >= tx^2", slack: ta * tb - tx * tx });
            checks.push(Inequality { name: "ta*tg >= 0", slack: ta * tg });
            checks.push(Inequality { name: "ta >= 0", slack: ta });
            checks.push(Inequality { name: "tb >= 0", slack: tb });
            checks.push(Inequality { name: "tg >= 0", slack: tg });
            checks.push(Inequality {
                name: "alpha+beta+ta+tb <= 1/2",
                slack: 0.5 - (p.alpha + p.beta + ta + tb),
            });
            checks.push(Inequality { name: "gamma+tg <= 1/4", slack: 0.25 - (p.gamma + tg) });
        }
    }
    Admissibility { checks }
}

/// Defect matrices `M_ab f̄ − A_a A_b`, indexed `[a][b]`.
pub fn second_moment_defect(ms: &MaxwellianSet) -> [[Mat3; 2]; 2] {
    let a = acoustic_matrices(ms.c());
    let d = |i: usize, j: usize| ms.second_moment(i, j) - a[i] * a[j];
    [[d(0, 0), d(0, 1)], [d(1, 0), d(1, 1)]]
}

#[derive(Debug, Clone)]
pub struct DiffusionReport {
    /// `B = [[D₁₁, D₁₂], [D₂₁, D₂₂]]` with `D_ab` the second-moment defects.
    pub b_matrix: Mat6,
    pub min_eigenvalue: f64,
    /// Frobenius norm of the four stacked defect blocks.
    pub residual_norm: f64,
}

pub fn diffusion_report(p: &KineticParams) -> Result<DiffusionReport> {
    let ms = build(p)?;
    Ok(diffusion_report_for(&ms))
}

pub fn diffusion_report_for(ms: &MaxwellianSet) -> DiffusionReport {
    let defects = second_moment_defect(ms);
    let mut b = Mat6::zeros();
    for (a, row) in defects.iter().enumerate() {
        for (bb, block) in row.iter().enumerate() {
            b.fixed_view_mut::<3, 3>(3 * a, 3 * bb).copy_from(block);
        }
    }
    let residual_norm = defects
        .iter()
        .flatten()
        .map(|m| m.norm_squared())
        .sum::<f64>()
        .sqrt();
    DiffusionReport {
        min_eigenvalue: min_eigenvalue6(&b),
        b_matrix: b,
        residual_norm,
    }
}

/// Diffusion objective `J(α, γ, λ) = (2λ²α − c²)² + (2λ²γ − c²)²` minimised
/// by the optimal preset over the admissible set.
pub fn diffusion_objective(alpha: f64, gamma: f64, lambda: f64, c: f64) -> f64 {
    let l2 = 2.0 * lambda * lambda;
    let c2 = c * c;
    (l2 * alpha - c2).powi(2) + (l2 * gamma - c2).powi(2)
}

/// Kinetic entropy weights `Ω_ζ⁺`; fails if some `Ω_ζ` is indefinite.
pub fn entropy_weights(ms: &MaxwellianSet) -> Result<Vec<Mat3>> {
    for (index, ev) in ms.min_eigenvalues().into_iter().enumerate() {
        if ev < -TOL {
            return Err(Error::NotPsd { index, min_eigenvalue: ev });
        }
    }
    Ok(ms.pinv_omegas().to_vec())
}
