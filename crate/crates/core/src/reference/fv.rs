use rayon::prelude::*;

use super::check_courant;
use crate::kinetic::AcousticState;
use crate::linalg::State3;
use crate::Result;

/// Co-located cell averages `(v, w, p)`.
pub type FvState = AcousticState;

/// Centred slopes per cell, in units of the cell width:
/// `q̃(x, y) = q + s_x (x − x_i)/Δ + s_y (y − y_j)/Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub sx: Vec<State3>,
    pub sy: Vec<State3>,
}

impl Reconstruction {
    pub fn zeros(len: usize) -> Self {
        Self {
            sx: vec![[0.0; 3]; len],
            sy: vec![[0.0; 3]; len],
        }
    }
}

/// Least-squares slopes over the four face neighbours. For this stencil the
/// normal equations reduce to `s_x = (q_E − q_W)/2`, `s_y = (q_N − q_S)/2`.
pub fn lsq_reconstruct(state: &FvState) -> Reconstruction {
    let g = state.grid();
    let n = g.n_per_side();
    let mask = n - 1;
    let q = state.data();
    let mut r = Reconstruction::zeros(g.len());
    r.sx.par_chunks_mut(n)
        .zip(r.sy.par_chunks_mut(n))
        .enumerate()
        .for_each(|(j, (rx, ry))| {
            let jn = (j + 1) & mask;
            let js = (j + mask) & mask;
            for i in 0..n {
                let e = q[j * n + ((i + 1) & mask)];
                let w = q[j * n + ((i + mask) & mask)];
                let no = q[jn * n + i];
                let so = q[js * n + i];
                rx[i] = [0.5 * (e[0] - w[0]), 0.5 * (e[1] - w[1]), 0.5 * (e[2] - w[2])];
                ry[i] = [0.5 * (no[0] - so[0]), 0.5 * (no[1] - so[1]), 0.5 * (no[2] - so[2])];
            }
        });
    r
}

/// Upwind flux through an x-face divided by `c`:
/// `½A₁(q_L + q_R) − ½|A₁|(q_R − q_L)` with `|A₁| = c·diag(1, 0, 1)`.
#[inline]
fn flux_x(l: &State3, r: &State3) -> State3 {
    [
        -0.5 * (l[2] + r[2]) - 0.5 * (r[0] - l[0]),
        0.0,
        -0.5 * (l[0] + r[0]) - 0.5 * (r[2] - l[2]),
    ]
}

#[inline]
fn flux_y(l: &State3, r: &State3) -> State3 {
    [
        0.0,
        -0.5 * (l[2] + r[2]) - 0.5 * (r[1] - l[1]),
        -0.5 * (l[1] + r[1]) - 0.5 * (r[2] - l[2]),
    ]
}

#[inline]
fn trace(q: &State3, s: &State3, sign: f64) -> State3 {
    [q[0] + sign * 0.5 * s[0], q[1] + sign * 0.5 * s[1], q[2] + sign * 0.5 * s[2]]
}

/// Net inflow `F_{i−½} − F_{i+½} + G_{j−½} − G_{j+½}` per unit `c`, with
/// face states taken from `slopes` (piecewise constant when `None`).
pub fn fv_flux_divergence(state: &FvState, slopes: Option<&Reconstruction>) -> Vec<State3> {
    let g = state.grid();
    let n = g.n_per_side();
    let mask = n - 1;
    let q = state.data();
    let zeros;
    let rec = match slopes {
        Some(r) => r,
        None => {
            zeros = Reconstruction::zeros(g.len());
            &zeros
        }
    };
    let mut out = vec![[0.0; 3]; g.len()];
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        let jn = (j + 1) & mask;
        let js = (j + mask) & mask;
        for (i, o) in row.iter_mut().enumerate() {
            let c = j * n + i;
            let e = j * n + ((i + 1) & mask);
            let w = j * n + ((i + mask) & mask);
            let no = jn * n + i;
            let so = js * n + i;
            let fe = flux_x(&trace(&q[c], &rec.sx[c], 1.0), &trace(&q[e], &rec.sx[e], -1.0));
            let fw = flux_x(&trace(&q[w], &rec.sx[w], 1.0), &trace(&q[c], &rec.sx[c], -1.0));
            let gn = flux_y(&trace(&q[c], &rec.sy[c], 1.0), &trace(&q[no], &rec.sy[no], -1.0));
            let gs = flux_y(&trace(&q[so], &rec.sy[so], 1.0), &trace(&q[c], &rec.sy[c], -1.0));
            for l in 0..3 {
                o[l] = fw[l] - fe[l] + gs[l] - gn[l];
            }
        }
    });
    out
}

/// First-order upwind step at Courant number `ck/Δ`.
pub fn fv1_step(state: &FvState, courant: f64) -> Result<FvState> {
    check_courant(courant, 0.5, "first-order FV scheme")?;
    let g = *state.grid();
    let n = g.n_per_side();
    let mask = n - 1;
    let q = state.data();
    let a = 0.5 * courant;
    let mut out = vec![[0.0; 3]; g.len()];
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        let jn = (j + 1) & mask;
        let js = (j + mask) & mask;
        for (i, o) in row.iter_mut().enumerate() {
            let c = q[j * n + i];
            let e = q[j * n + ((i + 1) & mask)];
            let w = q[j * n + ((i + mask) & mask)];
            let no = q[jn * n + i];
            let so = q[js * n + i];
            o[0] = c[0] + a * (e[2] - w[2] - 2.0 * c[0] + e[0] + w[0]);
            o[1] = c[1] + a * (no[2] - so[2] - 2.0 * c[1] + no[1] + so[1]);
            o[2] = c[2] + a * (e[0] - w[0] + no[1] - so[1] - 4.0 * c[2] + no[2] + so[2] + e[2] + w[2]);
        }
    });
    FvState::from_vec(g, out)
}

fn axpy(state: &FvState, rhs: &[State3], s: f64) -> Vec<State3> {
    state
        .data()
        .iter()
        .zip(rhs)
        .map(|(q, r)| [q[0] + s * r[0], q[1] + s * r[1], q[2] + s * r[2]])
        .collect()
}

/// Second-order step: centred reconstruction with the two-stage (Heun)
/// integrator `q⁽¹⁾ = qⁿ + C L(qⁿ)`, `qⁿ⁺¹ = ½qⁿ + ½(q⁽¹⁾ + C L(q⁽¹⁾))`.
pub fn fv2_step(state: &FvState, courant: f64) -> Result<FvState> {
    check_courant(courant, 0.5, "second-order FV scheme")?;
    let g = *state.grid();
    let rhs0 = fv_flux_divergence(state, Some(&lsq_reconstruct(state)));
    let stage1 = FvState::from_vec(g, axpy(state, &rhs0, courant))?;
    let rhs1 = fv_flux_divergence(&stage1, Some(&lsq_reconstruct(&stage1)));
    let stage2 = axpy(&stage1, &rhs1, courant);
    let out = state
        .data()
        .iter()
        .zip(&stage2)
        .map(|(a, b)| [0.5 * a[0] + 0.5 * b[0], 0.5 * a[1] + 0.5 * b[1], 0.5 * a[2] + 0.5 * b[2]])
        .collect();
    FvState::from_vec(g, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Grid;
    use nalgebra::{Matrix4x2, Vector4};

    fn grid() -> Grid {
        Grid::with_nodes(2.0, 16).unwrap()
    }

    fn pseudo_random(g: Grid, seed: u64) -> FvState {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let data = (0..g.len()).map(|_| [next(), next(), next()]).collect();
        FvState::from_vec(g, data).unwrap()
    }

    #[test]
    fn constant_state_is_steady() {
        let g = grid();
        let q = FvState::uniform(g, [0.2, -0.4, 1.5]);
        assert!(fv1_step(&q, 0.5).unwrap().max_abs_diff(&q) <= 1e-15);
        assert!(fv2_step(&q, 0.5).unwrap().max_abs_diff(&q) <= 1e-15);
        let r = lsq_reconstruct(&q);
        assert!(r.sx.iter().chain(&r.sy).all(|s| *s == [0.0; 3]));
    }

    #[test]
    fn linear_field_slopes() {
        let g = grid();
        let d = g.delta();
        let q = FvState::from_fn(g, |x, _| [x / d, 0.0, 0.0]);
        let r = lsq_reconstruct(&q);
        let n = g.n_per_side();
        for j in 0..n {
            for i in 1..n - 1 {
                let s = r.sx[g.index(i, j)];
                assert!((s[0] - 1.0).abs() <= 1e-12);
                assert_eq!(r.sy[g.index(i, j)][0], 0.0);
            }
        }
    }

    #[test]
    fn slopes_match_generic_least_squares() {
        let g = grid();
        let q = pseudo_random(g, 7);
        let r = lsq_reconstruct(&q);
        let a = Matrix4x2::new(1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0);
        let ata_inv = (a.transpose() * a).try_inverse().unwrap();
        let b = ata_inv * a.transpose();
        let n = g.n_per_side();
        for j in 0..n {
            for i in 0..n {
                let c = q.at(i, j);
                let nb = [
                    q.at(g.wrap(i, 1), j),
                    q.at(i, g.wrap(j, 1)),
                    q.at(g.wrap(i, -1), j),
                    q.at(i, g.wrap(j, -1)),
                ];
                for l in 0..3 {
                    let rhs = Vector4::from_fn(|k, _| nb[k][l] - c[l]);
                    let sol = b * rhs;
                    assert!((sol[0] - r.sx[g.index(i, j)][l]).abs() <= 1e-14);
                    assert!((sol[1] - r.sy[g.index(i, j)][l]).abs() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn piecewise_constant_flux_is_first_order_step() {
        let g = grid();
        let q = pseudo_random(g, 99);
        let fv1 = fv1_step(&q, 0.5).unwrap();
        let rhs = fv_flux_divergence(&q, None);
        let stage = FvState::from_vec(g, axpy(&q, &rhs, 0.5)).unwrap();
        assert!(stage.max_abs_diff(&fv1) <= 1e-15);
    }

    #[test]
    fn conservation_and_linearity() {
        let g = grid();
        let q = pseudo_random(g, 3);
        let s0 = q.sum();
        for stepper in [fv1_step, fv2_step] {
            let q1 = stepper(&q, 0.5).unwrap();
            let s1 = q1.sum();
            for l in 0..3 {
                assert!((s1[l] - s0[l]).abs() <= 1e-13);
            }
            let scaled = stepper(&q.scaled(-3.0), 0.5).unwrap();
            assert!(scaled.max_abs_diff(&q1.scaled(-3.0)) <= 1e-14);
            let z = stepper(&FvState::zeros(g), 0.5).unwrap();
            assert_eq!(z.max_abs(), 0.0);
        }
    }

    #[test]
    fn rejects_courant_above_half() {
        let q = FvState::zeros(grid());
        assert!(fv1_step(&q, 0.6).is_err());
        assert!(fv2_step(&q, -0.1).is_err());
    }
}
