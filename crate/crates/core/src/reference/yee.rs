use rayon::prelude::*;

use super::check_courant;
use crate::kinetic::AcousticState;
use crate::lattice::Grid;
use crate::Result;

/// Yee unknowns: `p[i,j]` at nodes and integer time levels, `v[i,j]` on the
/// x-face `(i+½, j)` and `w[i,j]` on the y-face `(i, j+½)`, both half a step
/// ahead of `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredState {
    pub grid: Grid,
    pub p: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl StaggeredState {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            p: vec![0.0; grid.len()],
            v: vec![0.0; grid.len()],
            w: vec![0.0; grid.len()],
        }
    }

    /// Node pressures as an acoustic state with face velocities averaged
    /// back onto the nodes.
    pub fn to_acoustic(&self) -> AcousticState {
        let g = self.grid;
        let n = g.n_per_side();
        let mut data = Vec::with_capacity(g.len());
        for j in 0..n {
            for i in 0..n {
                let idx = g.index(i, j);
                let v = 0.5 * (self.v[idx] + self.v[g.index(g.wrap(i, -1), j)]);
                let w = 0.5 * (self.w[idx] + self.w[g.index(i, g.wrap(j, -1))]);
                data.push([v, w, self.p[idx]]);
            }
        }
        AcousticState::from_vec(g, data).expect("grid-sized buffer")
    }
}

/// Samples `p⁰` at the nodes and advances the face velocities by half a step
/// from rest (`∂_t p = 0` at `t = 0`).
pub fn yee_init(q0: &AcousticState, courant: f64) -> Result<StaggeredState> {
    check_courant(courant, std::f64::consts::FRAC_1_SQRT_2, "Yee scheme")?;
    let g = *q0.grid();
    let n = g.n_per_side();
    let d = q0.data();
    let half = 0.5 * courant;
    let mut s = StaggeredState::zeros(g);
    for j in 0..n {
        for i in 0..n {
            let idx = g.index(i, j);
            let e = g.index(g.wrap(i, 1), j);
            let nn = g.index(i, g.wrap(j, 1));
            s.p[idx] = d[idx][2];
            s.v[idx] = 0.5 * (d[idx][0] + d[e][0]) + half * (d[e][2] - d[idx][2]);
            s.w[idx] = 0.5 * (d[idx][1] + d[nn][1]) + half * (d[nn][2] - d[idx][2]);
        }
    }
    Ok(s)
}

fn advance_p(grid: &Grid, p: &[f64], v: &[f64], w: &[f64], courant: f64, out: &mut [f64]) {
    let n = grid.n_per_side();
    let mask = n - 1;
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        let js = (j + mask) & mask;
        for (i, o) in row.iter_mut().enumerate() {
            let iw = (i + mask) & mask;
            let idx = j * n + i;
            *o = p[idx] + courant * (v[idx] - v[j * n + iw] + w[idx] - w[js * n + i]);
        }
    });
}

fn advance_faces(grid: &Grid, p: &[f64], courant: f64, v: &mut [f64], w: &mut [f64]) {
    let n = grid.n_per_side();
    let mask = n - 1;
    v.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (i, o) in row.iter_mut().enumerate() {
            let ie = (i + 1) & mask;
            *o += courant * (p[j * n + ie] - p[j * n + i]);
        }
    });
    w.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        let jn = (j + 1) & mask;
        for (i, o) in row.iter_mut().enumerate() {
            *o += courant * (p[jn * n + i] - p[j * n + i]);
        }
    });
}

/// `(p^n, v^{n+½}, w^{n+½}) → (p^{n+1}, v^{n+3/2}, w^{n+3/2})`.
pub fn yee_step(state: &StaggeredState, courant: f64) -> Result<StaggeredState> {
    check_courant(courant, std::f64::consts::FRAC_1_SQRT_2, "Yee scheme")?;
    let mut next = state.clone();
    advance_p(&state.grid, &state.p, &state.v, &state.w, courant, &mut next.p);
    let StaggeredState { grid, p, v, w } = &mut next;
    advance_faces(grid, p, courant, v, w);
    Ok(next)
}

/// Leapfrog invariant `Σ v² + Σ w² + Σ pⁿ pⁿ⁺¹`, exactly conserved by the
/// scheme on a periodic grid.
pub fn yee_energy(state: &StaggeredState, courant: f64) -> f64 {
    let mut p_next = vec![0.0; state.p.len()];
    advance_p(&state.grid, &state.p, &state.v, &state.w, courant, &mut p_next);
    let kin: f64 = state.v.iter().chain(&state.w).map(|x| x * x).sum();
    let pot: f64 = state.p.iter().zip(&p_next).map(|(a, b)| a * b).sum();
    kin + pot
}
