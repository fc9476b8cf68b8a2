//! Relax-and-stream update of the vectorial populations.
//!
//! One step is
//!
//! ```text
//! f^{n+½}_ζ(a)       = (1 − ω) f^n_ζ(a) + ω Ω_ζ M₀f^n(a)
//! f^{n+1}_ζ(a + kc_ζ) = f^{n+½}_ζ(a)
//! ```
//!
//! The transport is evaluated as a gather from `a − kc_ζ` into a second
//! buffer, so each output value is written by exactly one task and the
//! result does not depend on how rows are distributed over threads.

use rayon::prelude::*;

use crate::lattice::{Grid, VelocitySet};
use crate::linalg::{apply, quadratic_form, Mat3, State3};
use crate::maxwellian::{entropy_weights, MaxwellianSet};
use crate::{Error, Result};

/// Growth factor of `max |M₀f|` over its initial value that counts as a
/// blow-up.
pub const BLOW_UP_FACTOR: f64 = 1e6;

/// Per-node `(v, w, p)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AcousticState {
    grid: Grid,
    data: Vec<State3>,
}

impl AcousticState {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            data: vec![[0.0; 3]; grid.len()],
            grid,
        }
    }

    pub fn uniform(grid: Grid, q: State3) -> Self {
        Self {
            data: vec![q; grid.len()],
            grid,
        }
    }

    pub fn from_vec(grid: Grid, data: Vec<State3>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: data.len(),
            });
        }
        Ok(Self { grid, data })
    }

    /// Samples `q(x, y)` at the node positions.
    pub fn from_fn(grid: Grid, mut q: impl FnMut(f64, f64) -> State3) -> Self {
        let n = grid.n_per_side();
        let mut data = Vec::with_capacity(grid.len());
        for j in 0..n {
            for i in 0..n {
                let [x, y] = grid.position(i, j);
                data.push(q(x, y));
            }
        }
        Self { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[State3] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [State3] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<State3> {
        self.data
    }

    pub fn at(&self, i: usize, j: usize) -> State3 {
        self.data[self.grid.index(i, j)]
    }

    pub fn component(&self, l: usize) -> Vec<f64> {
        self.data.iter().map(|q| q[l]).collect()
    }

    /// Pressure component.
    pub fn p(&self) -> Vec<f64> {
        self.component(2)
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|q| q.iter())
            .fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
    }

    /// Componentwise sum over nodes in row-major order.
    pub fn sum(&self) -> State3 {
        self.data.iter().fold([0.0; 3], |a, q| [a[0] + q[0], a[1] + q[1], a[2] + q[2]])
    }

    pub fn max_abs_diff(&self, other: &AcousticState) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .flat_map(|(a, b)| (0..3).map(move |l| (a[l] - b[l]).abs()))
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            data: self.data.iter().map(|q| [s * q[0], s * q[1], s * q[2]]).collect(),
        }
    }

    /// The state seen after turning the plane a quarter turn counter-clockwise:
    /// node values move to the rotated node and `(v, w)` rotates with them.
    pub fn rotated_quarter(&self) -> Self {
        let n = self.grid.n_per_side();
        let mut data = vec![[0.0; 3]; self.grid.len()];
        for j in 0..n {
            for i in 0..n {
                let [v, w, p] = self.at(i, j);
                let (ri, rj) = self.grid.rotate_index(i, j);
                data[self.grid.index(ri, rj)] = [-w, v, p];
            }
        }
        Self { grid: self.grid, data }
    }
}

/// Populations `f_ζ(a)`, stored one contiguous array per speed.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticField {
    grid: Grid,
    velocity_set: VelocitySet,
    f: Vec<Vec<State3>>,
    time_index: usize,
}

impl KineticField {
    pub fn from_populations(grid: Grid, velocity_set: VelocitySet, f: Vec<Vec<State3>>) -> Result<Self> {
        if f.len() != velocity_set.q() {
            return Err(Error::ShapeMismatch {
                expected: velocity_set.q(),
                got: f.len(),
            });
        }
        if let Some(bad) = f.iter().find(|fz| fz.len() != grid.len()) {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: bad.len(),
            });
        }
        Ok(Self {
            grid,
            velocity_set,
            f,
            time_index: 0,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn velocity_set(&self) -> &VelocitySet {
        &self.velocity_set
    }

    pub fn populations(&self, zeta: usize) -> &[State3] {
        &self.f[zeta]
    }

    pub fn time_index(&self) -> usize {
        self.time_index
    }

    /// `M₀f`.
    pub fn density(&self) -> AcousticState {
        let mut q = vec![[0.0; 3]; self.grid.len()];
        accumulate_density(&self.f, &mut q);
        AcousticState { grid: self.grid, data: q }
    }
}

/// `f⁰_ζ = Ω_ζ q⁰` at every node.
pub fn init_field(grid: &Grid, ms: &MaxwellianSet, q0: &AcousticState) -> Result<KineticField> {
    if q0.grid() != grid {
        return Err(Error::ShapeMismatch {
            expected: grid.len(),
            got: q0.data().len(),
        });
    }
    let f = ms
        .omegas()
        .iter()
        .map(|om| q0.data().par_iter().map(|q| apply(om, q)).collect())
        .collect();
    KineticField::from_populations(*grid, ms.velocity_set().clone(), f)
}

#[derive(Debug, Clone)]
pub struct Moments {
    pub m0: AcousticState,
    /// `Σ_ζ c_ζ^x f_ζ`.
    pub m1: Vec<State3>,
    /// `Σ_ζ c_ζ^y f_ζ`.
    pub m2: Vec<State3>,
}

pub fn moments(field: &KineticField) -> Moments {
    let len = field.grid.len();
    let mut m1 = vec![[0.0; 3]; len];
    let mut m2 = vec![[0.0; 3]; len];
    for (z, fz) in field.f.iter().enumerate() {
        let [cx, cy] = field.velocity_set.speed(z);
        for ((a, b), f) in m1.iter_mut().zip(m2.iter_mut()).zip(fz) {
            for l in 0..3 {
                a[l] += cx * f[l];
                b[l] += cy * f[l];
            }
        }
    }
    Moments {
        m0: field.density(),
        m1,
        m2,
    }
}

/// `M_ab f̄ − A_a A_b` for the given Maxwellians.
pub fn second_moment_defect(ms: &MaxwellianSet) -> [[Mat3; 2]; 2] {
    crate::maxwellian::second_moment_defect(ms)
}

fn accumulate_density(f: &[Vec<State3>], q: &mut [State3]) {
    q.par_iter_mut().enumerate().for_each(|(idx, out)| {
        let mut s = [0.0; 3];
        for fz in f {
            let v = fz[idx];
            s[0] += v[0];
            s[1] += v[1];
            s[2] += v[2];
        }
        *out = s;
    });
}

fn check_omega(omega: f64) -> Result<()> {
    if !(1.0..=2.0).contains(&omega) {
        return Err(Error::Config(format!("relaxation parameter must lie in [1, 2], got {omega}")));
    }
    Ok(())
}

/// Double-buffered stepper owning a field.
#[derive(Debug, Clone)]
pub struct KineticSolver {
    ms: MaxwellianSet,
    omega: f64,
    field: KineticField,
    next: Vec<Vec<State3>>,
    density: Vec<State3>,
}

impl KineticSolver {
    pub fn new(ms: MaxwellianSet, omega: f64, field: KineticField) -> Result<Self> {
        check_omega(omega)?;
        if field.velocity_set != *ms.velocity_set() {
            return Err(Error::Config("field and Maxwellians use different velocity sets".into()));
        }
        let len = field.grid.len();
        let next = vec![vec![[0.0; 3]; len]; field.f.len()];
        let mut density = vec![[0.0; 3]; len];
        accumulate_density(&field.f, &mut density);
        Ok(Self {
            ms,
            omega,
            field,
            next,
            density,
        })
    }

    pub fn from_state(ms: MaxwellianSet, omega: f64, q0: &AcousticState) -> Result<Self> {
        let field = init_field(q0.grid(), &ms, q0)?;
        Self::new(ms, omega, field)
    }

    pub fn field(&self) -> &KineticField {
        &self.field
    }

    pub fn into_field(self) -> KineticField {
        self.field
    }

    pub fn maxwellians(&self) -> &MaxwellianSet {
        &self.ms
    }

    /// `M₀f` of the current field.
    pub fn density(&self) -> AcousticState {
        AcousticState {
            grid: self.field.grid,
            data: self.density.clone(),
        }
    }

    pub fn density_max_abs(&self) -> f64 {
        self.density
            .iter()
            .flat_map(|q| q.iter())
            .fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
    }

    pub fn step(&mut self) {
        let grid = self.field.grid;
        let n = grid.n_per_side();
        let mask = n - 1;
        let omega = self.omega;
        let keep = 1.0 - omega;
        let density = &self.density;
        let dirs = self.field.velocity_set.directions();

        for (z, (next_z, cur_z)) in self.next.iter_mut().zip(&self.field.f).enumerate() {
            let om = self.ms.omega(z) * omega;
            let [ex, ey] = dirs[z];
            next_z.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
                let js = (j as isize - ey as isize) as usize & mask;
                let src_q = &density[js * n..(js + 1) * n];
                let src_f = &cur_z[js * n..(js + 1) * n];
                for (i, out) in row.iter_mut().enumerate() {
                    let is = (i as isize - ex as isize) as usize & mask;
                    let eq = apply(&om, &src_q[is]);
                    if omega == 1.0 {
                        *out = eq;
                    } else {
                        let f = src_f[is];
                        *out = [keep * f[0] + eq[0], keep * f[1] + eq[1], keep * f[2] + eq[2]];
                    }
                }
            });
        }
        std::mem::swap(&mut self.field.f, &mut self.next);
        accumulate_density(&self.field.f, &mut self.density);
        self.field.time_index += 1;
    }
}

/// Allocating single step.
pub fn step(field: &KineticField, ms: &MaxwellianSet, omega: f64) -> Result<KineticField> {
    let mut solver = KineticSolver::new(ms.clone(), omega, field.clone())?;
    solver.step();
    Ok(solver.into_field())
}

/// `H = Δ² Σ_a Σ_ζ ½ f_ζᵀ Ω_ζ⁺ f_ζ`, summed row by row in a fixed order.
pub fn total_entropy(field: &KineticField, weights: &[Mat3]) -> f64 {
    let n = field.grid.n_per_side();
    let row_sums: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut s = 0.0;
            for i in 0..n {
                let idx = j * n + i;
                for (fz, w) in field.f.iter().zip(weights) {
                    s += 0.5 * quadratic_form(w, &fz[idx]);
                }
            }
            s
        })
        .collect();
    let d = field.grid.delta();
    d * d * row_sums.iter().sum::<f64>()
}

/// Per-step entropy totals `H⁰, H¹, …`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EntropyTrace(pub Vec<f64>);

impl EntropyTrace {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn initial(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }

    /// Largest `H^{n+1} − H^n`.
    pub fn max_increase(&self) -> f64 {
        self.0.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `|H^{n+1} − H^n|`.
    pub fn max_abs_change(&self) -> f64 {
        self.0.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Monitor {
    pub entropy: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: AcousticState,
    pub entropy: Option<EntropyTrace>,
    pub blow_up: bool,
    pub steps_taken: usize,
}

/// Steps `n_steps` times from the equilibrium of `q0`, aborting when the
/// blow-up monitor fires.
pub fn run(q0: &AcousticState, ms: &MaxwellianSet, omega: f64, n_steps: usize, monitor: Monitor) -> Result<RunOutcome> {
    let weights = if monitor.entropy { Some(entropy_weights(ms)?) } else { None };
    let mut solver = KineticSolver::from_state(ms.clone(), omega, q0)?;
    let initial_max = solver.density_max_abs();
    let threshold = BLOW_UP_FACTOR * initial_max;
    let mut trace = weights.as_ref().map(|w| vec![total_entropy(solver.field(), w)]);
    let mut blow_up = false;
    let mut steps_taken = 0;
    for _ in 0..n_steps {
        solver.step();
        steps_taken += 1;
        let m = solver.density_max_abs();
        if m.is_nan() || m > threshold {
            blow_up = true;
            break;
        }
        if let (Some(t), Some(w)) = (trace.as_mut(), weights.as_ref()) {
            t.push(total_entropy(solver.field(), w));
        }
    }
    Ok(RunOutcome {
        state: solver.density(),
        entropy: trace.map(EntropyTrace),
        blow_up,
        steps_taken,
    })
}

/// The two acoustic blocks `(F¹₁, F¹₂, u¹)` and `(F²₁, F²₂, u²)` of 2D
/// elastodynamics, each carried by its own populations over the same
/// Maxwellians.
#[derive(Debug, Clone)]
pub struct ElasticSolver {
    blocks: [KineticSolver; 2],
}

impl ElasticSolver {
    pub fn new(ms: &MaxwellianSet, omega: f64, q0: [&AcousticState; 2]) -> Result<Self> {
        Ok(Self {
            blocks: [
                KineticSolver::from_state(ms.clone(), omega, q0[0])?,
                KineticSolver::from_state(ms.clone(), omega, q0[1])?,
            ],
        })
    }

    pub fn step(&mut self) {
        for b in &mut self.blocks {
            b.step();
        }
    }

    pub fn block(&self, m: usize) -> &KineticSolver {
        &self.blocks[m]
    }

    /// True when both blocks hold bitwise-identical populations.
    pub fn blocks_identical(&self) -> bool {
        self.blocks[0].field().f == self.blocks[1].field().f
    }
}
