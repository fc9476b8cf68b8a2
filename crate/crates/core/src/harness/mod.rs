//! Experiment driver: runs one scheme on the Gaussian pulse problem,
//! measures the pressure error on a disc against the exact solution and
//! assembles convergence and stability tables.

pub mod config_file;
pub mod report;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::analytic::{analytic_field_within, GaussianInit};
use crate::kinetic::{run, AcousticState, ElasticSolver, Monitor, BLOW_UP_FACTOR};
use crate::lattice::{Grid, TimeGrid, VelocitySet};
use crate::maxwellian::{build, check_admissible, KineticParams, Preset};
use crate::reference::{fv1_step, fv2_step, yee_init, yee_step, REFERENCE_COURANT};
use crate::{Error, Result};

pub use config_file::{parse_config, ConfigEntries};
pub use report::{emit_csv, parse_csv, render_svg, stability_csv, write_report, CsvRow, ReportFormat, ReportOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Kinetic,
    Yee,
    Fv1,
    Fv2,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Kinetic, Scheme::Yee, Scheme::Fv1, Scheme::Fv2];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Kinetic => "kinetic",
            Scheme::Yee => "yee",
            Scheme::Fv1 => "fv1",
            Scheme::Fv2 => "fv2",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}` (expected kinetic, yee, fv1 or fv2)")))
    }
}

/// A fully specified discretisation.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Kinetic {
        label: String,
        params: KineticParams,
        omega: f64,
    },
    Yee,
    Fv1,
    Fv2,
}

impl Method {
    pub fn preset(preset: Preset, c: f64, omega: f64) -> Self {
        Method::Kinetic {
            label: preset.name().to_string(),
            params: preset.params(c),
            omega,
        }
    }

    pub fn reference(scheme: Scheme) -> Result<Self> {
        match scheme {
            Scheme::Yee => Ok(Method::Yee),
            Scheme::Fv1 => Ok(Method::Fv1),
            Scheme::Fv2 => Ok(Method::Fv2),
            Scheme::Kinetic => Err(Error::Config("the kinetic scheme needs parameters".into())),
        }
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            Method::Kinetic { .. } => Scheme::Kinetic,
            Method::Yee => Scheme::Yee,
            Method::Fv1 => Scheme::Fv1,
            Method::Fv2 => Scheme::Fv2,
        }
    }

    /// Preset name for kinetic runs, `-` otherwise.
    pub fn preset_label(&self) -> &str {
        match self {
            Method::Kinetic { label, .. } => label,
            _ => "-",
        }
    }

    pub fn omega(&self) -> Option<f64> {
        match self {
            Method::Kinetic { omega, .. } => Some(*omega),
            _ => None,
        }
    }

    /// Human-readable series name, e.g. `kinetic/optimal/ω=2`.
    pub fn label(&self) -> String {
        match self {
            Method::Kinetic { label, omega, .. } => format!("kinetic/{label}/omega={omega}"),
            m => m.scheme().to_string(),
        }
    }

    /// Time step on a grid of step `delta` for sound speed `c`.
    pub fn time_step(&self, delta: f64, c: f64) -> f64 {
        match self {
            Method::Kinetic { params, .. } => delta / params.lambda,
            _ => REFERENCE_COURANT * delta / c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub method: Method,
    pub c: f64,
    pub init: GaussianInit,
    pub half_extent: f64,
    pub radius: f64,
    pub t_final: f64,
    pub ladder: Vec<f64>,
}

pub const DEFAULT_LADDER: [f64; 4] = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];

impl ExperimentConfig {
    /// The standard pulse problem with the default ladder.
    pub fn new(method: Method) -> Self {
        Self {
            method,
            c: std::f64::consts::FRAC_1_SQRT_2,
            init: GaussianInit::default(),
            half_extent: 4.0,
            radius: 2.0,
            t_final: 1.0,
            ladder: DEFAULT_LADDER.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("c", self.c),
            ("mu", self.init.mu),
            ("half_extent", self.half_extent),
            ("radius", self.radius),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!("t_final must be non-negative, got {}", self.t_final)));
        }
        if self.radius + self.c * self.t_final > self.half_extent {
            return Err(Error::Config(format!(
                "disc radius {} plus travel distance {} exceeds the half extent {}",
                self.radius,
                self.c * self.t_final,
                self.half_extent
            )));
        }
        if self.ladder.is_empty() {
            return Err(Error::Config("the Δ ladder is empty".into()));
        }
        if self.ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("the Δ ladder must be strictly decreasing".into()));
        }
        if let Method::Kinetic { params, omega, .. } = &self.method {
            if (params.c - self.c).abs() > 1e-15 * self.c {
                return Err(Error::Config(format!(
                    "kinetic parameters use c = {} but the experiment uses c = {}",
                    params.c, self.c
                )));
            }
            if !(1.0..=2.0).contains(omega) {
                return Err(Error::Config(format!("omega must lie in [1, 2], got {omega}")));
            }
        }
        Ok(())
    }
}

/// Final state of one simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub state: AcousticState,
    pub k: f64,
    pub n_steps: usize,
    pub steps_taken: usize,
    pub t_reached: f64,
    pub blew_up: bool,
}

/// Integrates `method` from `q0` for `n_steps` steps of size `k`, stopping
/// early once `max |q|` grows past the blow-up threshold.
pub fn integrate(method: &Method, q0: &AcousticState, c: f64, n_steps: usize) -> Result<Simulation> {
    let grid = *q0.grid();
    let k = method.time_step(grid.delta(), c);
    let threshold = BLOW_UP_FACTOR * q0.max_abs();
    let exceeded = |q: &AcousticState| {
        let m = q.max_abs();
        m.is_nan() || m > threshold
    };
    let courant = REFERENCE_COURANT;
    let (state, steps_taken, blew_up) = match method {
        Method::Kinetic { params, omega, .. } => {
            let ms = build(params)?;
            let out = run(q0, &ms, *omega, n_steps, Monitor::default())?;
            (out.state, out.steps_taken, out.blow_up)
        }
        Method::Yee => {
            let mut s = yee_init(q0, courant)?;
            let mut taken = 0;
            let mut blown = false;
            for _ in 0..n_steps {
                s = yee_step(&s, courant)?;
                taken += 1;
                if exceeded(&s.to_acoustic()) {
                    blown = true;
                    break;
                }
            }
            (s.to_acoustic(), taken, blown)
        }
        Method::Fv1 | Method::Fv2 => {
            let step = if matches!(method, Method::Fv1) { fv1_step } else { fv2_step };
            let mut s = q0.clone();
            let mut taken = 0;
            let mut blown = false;
            for _ in 0..n_steps {
                s = step(&s, courant)?;
                taken += 1;
                if exceeded(&s) {
                    blown = true;
                    break;
                }
            }
            (s, taken, blown)
        }
    };
    Ok(Simulation {
        state,
        k,
        n_steps,
        steps_taken,
        t_reached: steps_taken as f64 * k,
        blew_up,
    })
}

/// Runs the configured method on the pulse problem at grid step `delta`
/// up to the step nearest `t_final`.
pub fn simulate(cfg: &ExperimentConfig, delta: f64) -> Result<Simulation> {
    let grid = Grid::new(cfg.half_extent, delta)?;
    let k = cfg.method.time_step(delta, cfg.c);
    let n_steps = TimeGrid::with_step(k, cfg.t_final).n_steps;
    integrate(&cfg.method, &cfg.init.state(grid), cfg.c, n_steps)
}

/// `√(Δ² Σ_{‖a‖ ≤ R} (p_num − p_ana)²)`, comparing pressures only.
///
/// Panics if the two states live on different grids.
pub fn l2_error_on_disc(numeric: &AcousticState, analytic: &AcousticState, radius: f64) -> f64 {
    let grid = numeric.grid();
    assert_eq!(grid, analytic.grid(), "fields live on different grids");
    let sum: f64 = numeric
        .data()
        .iter()
        .zip(analytic.data())
        .enumerate()
        .filter(|(idx, _)| {
            let (i, j) = grid.coords_of(*idx);
            grid.radius(i, j) <= radius
        })
        .map(|(_, (a, b))| (a[2] - b[2]).powi(2))
        .sum();
    grid.delta() * sum.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub delta: f64,
    pub n_steps: usize,
    pub t_reached: f64,
    pub l2_error: f64,
    pub wall_time_s: f64,
    pub blew_up: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub method: Method,
    pub rows: Vec<ConvergenceRow>,
    pub slope: Option<f64>,
}

impl ConvergenceReport {
    pub fn label(&self) -> String {
        self.method.label()
    }

    pub fn error_at(&self, delta: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| (r.delta - delta).abs() <= 1e-12 * delta && !r.blew_up)
            .map(|r| r.l2_error)
    }
}

/// Least-squares slope of `log(error)` against `log(Δ)` over the rows that
/// did not blow up.
pub fn fit_slope(rows: &[ConvergenceRow]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.blew_up && r.l2_error > 0.0 && r.l2_error.is_finite())
        .map(|r| (r.delta.ln(), r.l2_error.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientRows(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Numeric("all ladder steps are equal".into()));
    }
    Ok(sxy / sxx)
}

/// Runs every step of the ladder and fits the convergence slope.
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.ladder.len());
    for &delta in &cfg.ladder {
        let start = Instant::now();
        let sim = simulate(cfg, delta)?;
        let l2_error = if sim.blew_up {
            f64::INFINITY
        } else {
            let exact = analytic_field_within(cfg.init, cfg.c, sim.t_reached, sim.state.grid(), cfg.radius)?;
            l2_error_on_disc(&sim.state, &exact, cfg.radius)
        };
        let wall_time_s = start.elapsed().as_secs_f64();
        log::info!(
            "{} Δ={delta} steps={} t={} error={l2_error:.6e} ({wall_time_s:.2}s)",
            cfg.method.label(),
            sim.n_steps,
            sim.t_reached
        );
        if sim.blew_up {
            log::warn!("{} blew up at Δ={delta}", cfg.method.label());
        }
        rows.push(ConvergenceRow {
            delta,
            n_steps: sim.n_steps,
            t_reached: sim.t_reached,
            l2_error,
            wall_time_s,
            blew_up: sim.blew_up,
        });
    }
    let slope = fit_slope(&rows).ok();
    Ok(ConvergenceReport {
        method: cfg.method.clone(),
        rows,
        slope,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub lambda_over_c: f64,
    pub omega: f64,
    pub admissible: bool,
    pub blew_up: bool,
    pub steps_taken: usize,
}

/// Runs the pulse problem for every `(λ/c, ω)` combination at fixed `delta`
/// for `max_steps` steps, recording the admissibility verdict and whether
/// the blow-up monitor fired.
pub fn run_stability_scan(
    base: &KineticParams,
    lambda_multipliers: &[f64],
    omegas: &[f64],
    init: GaussianInit,
    half_extent: f64,
    delta: f64,
    max_steps: usize,
) -> Result<Vec<StabilityRow>> {
    let grid = Grid::new(half_extent, delta)?;
    let q0 = init.state(grid);
    let mut out = Vec::new();
    for &m in lambda_multipliers {
        let params = base.with_lambda(m * base.c);
        VelocitySet::new(params.lattice, params.lambda)?;
        let admissible = check_admissible(&params).pass();
        let ms = build(&params)?;
        for &omega in omegas {
            let r = run(&q0, &ms, omega, max_steps, Monitor::default())?;
            log::info!("λ/c={m} ω={omega} admissible={admissible} blew_up={} after {} steps", r.blow_up, r.steps_taken);
            out.push(StabilityRow {
                lambda_over_c: m,
                omega,
                admissible,
                blew_up: r.blow_up,
                steps_taken: r.steps_taken,
            });
        }
    }
    Ok(out)
}

/// Runs the elastodynamics system as two acoustic blocks fed with the same
/// pulse and returns the common final state. Fails if the blocks differ.
pub fn run_elastic(cfg: &ExperimentConfig, delta: f64) -> Result<AcousticState> {
    let Method::Kinetic { params, omega, .. } = &cfg.method else {
        return Err(Error::Config("elastic mode needs the kinetic scheme".into()));
    };
    let grid = Grid::new(cfg.half_extent, delta)?;
    let q0 = cfg.init.state(grid);
    let ms = build(params)?;
    let n = TimeGrid::with_step(delta / params.lambda, cfg.t_final).n_steps;
    let mut solver = ElasticSolver::new(&ms, *omega, [&q0, &q0])?;
    for _ in 0..n {
        solver.step();
    }
    if !solver.blocks_identical() {
        return Err(Error::Numeric("elastic blocks diverged".into()));
    }
    Ok(solver.block(0).density())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(delta: f64, err: f64) -> ConvergenceRow {
        ConvergenceRow {
            delta,
            n_steps: 1,
            t_reached: 1.0,
            l2_error: err,
            wall_time_s: 0.0,
            blew_up: false,
        }
    }

    #[test]
    fn slope_of_power_laws() {
        let ds = [0.1, 0.05, 0.025];
        for p in [0.0, 1.0, 2.0] {
            let rows: Vec<_> = ds.iter().map(|&d| row(d, 3.0 * d.powf(p))).collect();
            assert!((fit_slope(&rows).unwrap() - p).abs() < 1e-12);
        }
    }

    #[test]
    fn slope_needs_two_valid_rows() {
        let mut rows = vec![row(0.1, 1.0), row(0.05, 0.5)];
        rows[1].blew_up = true;
        assert!(matches!(fit_slope(&rows), Err(Error::InsufficientRows(1))));
        assert!(fit_slope(&[]).is_err());
    }

    #[test]
    fn config_validation() {
        let base = ExperimentConfig::new(Method::Yee);
        assert!(base.validate().is_ok());
        let mut c = base.clone();
        c.radius = 3.5;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.ladder = vec![0.1, 0.2];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.ladder.clear();
        assert!(c.validate().is_err());
        let k = ExperimentConfig::new(Method::preset(Preset::Optimal, 1.0, 2.0));
        assert!(k.validate().is_err(), "parameter c differs from experiment c");
        let k = ExperimentConfig::new(Method::preset(Preset::Optimal, std::f64::consts::FRAC_1_SQRT_2, 2.5));
        assert!(k.validate().is_err());
    }

    #[test]
    fn l2_error_examples() {
        let g = Grid::with_nodes(4.0, 64).unwrap();
        let a = GaussianInit::default().state(g);
        assert_eq!(l2_error_on_disc(&a, &a, 2.0), 0.0);
        let b = AcousticState::from_vec(g, a.data().iter().map(|q| [q[0], q[1], q[2] + 1.0]).collect()).unwrap();
        let pi_r2 = std::f64::consts::PI * 4.0;
        let e = l2_error_on_disc(&b, &a, 2.0);
        assert!((e - pi_r2.sqrt()).abs() < 0.03 * pi_r2.sqrt());
    }

    #[test]
    fn l2_error_quadrature_refines() {
        let err = |n: usize| {
            let g = Grid::with_nodes(4.0, n).unwrap();
            let z = AcousticState::zeros(g);
            let e = AcousticState::from_fn(g, |x, y| [0.0, 0.0, (x * y).sin() + 0.5 * x]);
            l2_error_on_disc(&e, &z, 2.0)
        };
        let (a, b) = (err(128), err(256));
        assert!((a - b).abs() < 0.02 * b);
    }

    #[test]
    fn time_steps() {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let m = Method::preset(Preset::Optimal, c, 2.0);
        assert!((m.time_step(0.125, c) - 0.125).abs() < 1e-15);
        assert!((Method::Yee.time_step(0.125, c) - 0.125 * 0.5 / c).abs() < 1e-15);
        assert_eq!(m.preset_label(), "optimal");
        assert_eq!(Method::Fv2.preset_label(), "-");
        assert_eq!("fv2".parse::<Scheme>().unwrap(), Scheme::Fv2);
        assert!("fv3".parse::<Scheme>().is_err());
    }

    #[test]
    fn reached_time_within_one_step() {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        for method in [Method::preset(Preset::CflHalfA, c, 1.0), Method::Fv1] {
            let mut cfg = ExperimentConfig::new(method);
            cfg.ladder = vec![0.25];
            let sim = simulate(&cfg, 0.25).unwrap();
            assert!((sim.t_reached - cfg.t_final).abs() <= sim.k);
            assert!(!sim.blew_up);
        }
    }
}
