//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use vkinetic::analytic::{analytic_u, GaussianInit};
use vkinetic::harness::{run_convergence, run_stability_scan, ConvergenceReport, ExperimentConfig, Method};
use vkinetic::kinetic::{run, AcousticState, ElasticSolver, KineticSolver, Monitor};
use vkinetic::lattice::{Grid, TimeGrid};
use vkinetic::linalg::Mat3;
use vkinetic::maxwellian::{acoustic_matrices, build, check_admissible, Preset};
use vkinetic::reference::fv1_step;
use vkinetic_validation::pulse_by_quadrature;

const C: f64 = FRAC_1_SQRT_2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn max_entry(m: &Mat3) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

fn pulse(delta: f64) -> AcousticState {
    GaussianInit::default().state(Grid::new(4.0, delta).unwrap())
}

fn construction_identities() -> Outcome {
    let a = acoustic_matrices(C);
    let mut worst_moment = 0.0f64;
    let mut worst_eig = f64::INFINITY;
    for p in Preset::ALL {
        let ms = build(&p.params(C)).unwrap();
        worst_moment = worst_moment.max(max_entry(&(ms.zeroth_moment() - Mat3::identity())));
        for (d, aa) in a.iter().enumerate() {
            worst_moment = worst_moment.max(max_entry(&(ms.first_moment(d) - aa)));
        }
        worst_eig = ms.min_eigenvalues().into_iter().fold(worst_eig, f64::min);
    }
    outcome(
        worst_moment <= 1e-13 && worst_eig >= -1e-12,
        format!("max moment error {worst_moment:.2e}, min eigenvalue {worst_eig:.2e}"),
    )
}

fn rest_matrices_vanish() -> Outcome {
    let opt = max_entry(build(&Preset::Optimal.params(C)).unwrap().omega(0));
    let d2q9 = max_entry(build(&Preset::D2q9.params(C)).unwrap().omega(0));
    let tol = 4.0 * f64::EPSILON;
    outcome(opt <= tol && d2q9 <= tol, format!("|Ω₀| optimal {opt:.2e}, d2q9 {d2q9:.2e}"))
}

fn kinetic_fv_coincidence() -> Outcome {
    let q0 = pulse(1.0 / 32.0);
    let ms = build(&Preset::CflHalfB.params(C)).unwrap();
    let mut kin = KineticSolver::from_state(ms, 1.0, &q0).unwrap();
    let mut fv = q0.clone();
    let mut worst = 0.0f64;
    for _ in 0..64 {
        kin.step();
        fv = fv1_step(&fv, 0.5).unwrap();
        worst = worst.max(kin.density().max_abs_diff(&fv));
    }
    outcome(worst <= 1e-12, format!("max difference over 64 steps {worst:.2e}"))
}

fn h_theorem() -> Outcome {
    let q0 = pulse(1.0 / 32.0);
    let mut pass = true;
    let mut worst_first = f64::NEG_INFINITY;
    let mut worst_second = 0.0f64;
    for p in Preset::ALL {
        let params = p.params(C);
        if !check_admissible(&params).pass() {
            continue;
        }
        let ms = build(&params).unwrap();
        for omega in [1.0, 2.0] {
            let out = run(&q0, &ms, omega, 200, Monitor { entropy: true }).unwrap();
            let trace = out.entropy.unwrap();
            let h0 = trace.initial();
            if omega == 1.0 {
                let inc = trace.max_increase() / h0;
                worst_first = worst_first.max(inc);
                pass &= inc <= 1e-12;
            } else {
                let drift = trace.values().iter().map(|h| (h - h0).abs()).fold(0.0, f64::max) / h0;
                worst_second = worst_second.max(drift);
                pass &= drift <= 1e-12;
            }
        }
    }
    outcome(
        pass,
        format!("ω=1 max relative increment {worst_first:.2e}, ω=2 max relative drift {worst_second:.2e}"),
    )
}

fn convergence_reports() -> Vec<ConvergenceReport> {
    let mut methods = Vec::new();
    for p in Preset::ALL {
        for omega in [1.0, 2.0] {
            methods.push(Method::preset(p, C, omega));
        }
    }
    methods.extend([Method::Fv1, Method::Yee, Method::Fv2]);
    methods
        .into_iter()
        .map(|m| run_convergence(&ExperimentConfig::new(m)).unwrap())
        .collect()
}

fn convergence_rates(reports: &[ConvergenceReport]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in reports {
        let first_order = r.method.omega() == Some(1.0) || matches!(r.method, Method::Fv1);
        let (lo, hi) = if first_order { (0.8, 1.2) } else { (1.7, 2.2) };
        let ok = r.slope.is_some_and(|s| (lo..=hi).contains(&s));
        pass &= ok;
        let s = r.slope.map(|s| format!("{s:.3}")).unwrap_or_else(|| "none".into());
        parts.push(format!("{} {s}{}", r.label(), if ok { "" } else { " (out of window)" }));
    }
    outcome(pass, parts.join("; "))
}

fn accuracy_ordering(reports: &[ConvergenceReport]) -> Outcome {
    let delta = 1.0 / 64.0;
    let err = |label: &str| {
        reports
            .iter()
            .find(|r| r.label() == label)
            .and_then(|r| r.error_at(delta))
            .unwrap_or(f64::INFINITY)
    };
    let opt = err("kinetic/optimal/omega=2");
    let d2q9 = err("kinetic/d2q9/omega=2");
    let half = ["cfl-half-a", "cfl-half-b", "cfl-half-c"].map(|p| err(&format!("kinetic/{p}/omega=2")));
    let half_min = half.iter().copied().fold(f64::INFINITY, f64::min);
    let yee = err("yee");
    let fv2 = err("fv2");
    let checks = [
        ("optimal ≤ d2q9", opt <= d2q9),
        ("d2q9 ≤ min(cfl-half)", d2q9 <= half_min),
        ("optimal ≤ yee", opt <= yee),
        ("optimal ≤ fv2", opt <= fv2),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let detail = format!(
        "errors at Δ=2^-6: optimal {opt:.4e}, d2q9 {d2q9:.4e}, cfl-half-a/b/c {:.4e}/{:.4e}/{:.4e}, yee {yee:.4e}, fv2 {fv2:.4e}{}",
        half[0],
        half[1],
        half[2],
        if failed.is_empty() { String::new() } else { format!("; violated: {}", failed.join(", ")) }
    );
    outcome(failed.is_empty(), detail)
}

fn instability_detection() -> Outcome {
    let delta = 1.0 / 128.0;
    let init = GaussianInit::default();
    let budget = |lambda: f64| 4 * TimeGrid::with_step(delta / lambda, 1.0).n_steps;
    let base = Preset::Optimal.params(C);
    let m = SQRT_2 - 0.1;
    let bad = run_stability_scan(&base, &[m], &[2.0], init, 4.0, delta, budget(m * C)).unwrap();
    let mut pass = bad[0].blew_up && !bad[0].admissible;
    let mut parts = vec![format!(
        "λ/c=√2−0.1: admissible={} blew_up={} after {} steps",
        bad[0].admissible, bad[0].blew_up, bad[0].steps_taken
    )];
    for p in Preset::ALL {
        let params = p.params(C);
        let rows = run_stability_scan(&params, &[params.lambda / C], &[2.0], init, 4.0, delta, budget(params.lambda)).unwrap();
        let ok = rows[0].admissible && !rows[0].blew_up;
        pass &= ok;
        parts.push(format!("{} stable for {} steps: {ok}", p.name(), rows[0].steps_taken));
    }
    outcome(pass, parts.join("; "))
}

fn oracle_cross_check() -> Outcome {
    let init = GaussianInit::default();
    let mut seed = 0x2545F4914F6CDD1Du64;
    let mut uniform = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        2.0 * (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (t, r) = (uniform(), uniform());
        let dht = analytic_u(init, C, t, r).unwrap();
        let quad = pulse_by_quadrature(init.kappa, init.mu, C, t, r);
        worst = worst.max((dht - quad).abs());
    }
    let mut worst_t0 = 0.0f64;
    for i in 0..=200 {
        let r = 2.0 * i as f64 / 200.0;
        worst_t0 = worst_t0.max((analytic_u(init, C, 0.0, r).unwrap() - init.pressure(r)).abs());
    }
    outcome(
        worst <= 1e-6 && worst_t0 <= 1e-6,
        format!("max |DHT − quadrature| {worst:.2e} at 20 points, t=0 profile error {worst_t0:.2e}"),
    )
}

fn symmetry_suite() -> Outcome {
    let grid = Grid::new(4.0, 1.0 / 32.0).unwrap();
    // Off-centre pulse with a velocity component, so that rotation is not
    // a symmetry of the data itself.
    let q0 = AcousticState::from_fn(grid, |x, y| {
        let g = (-2.0 * ((x - 0.7).powi(2) + (y + 0.3).powi(2))).exp();
        [0.3 * g * x, -0.2 * g, g]
    });
    let mut pass = true;
    let mut worst = 0.0f64;
    for p in [Preset::Optimal, Preset::D2q9] {
        let ms = build(&p.params(C)).unwrap();
        for omega in [1.0, 2.0] {
            let mut elastic = ElasticSolver::new(&ms, omega, [&q0, &q0]).unwrap();
            for _ in 0..50 {
                elastic.step();
            }
            pass &= elastic.blocks_identical();

            let direct = run(&q0, &ms, omega, 50, Monitor::default()).unwrap().state.rotated_quarter();
            let rotated = run(&q0.rotated_quarter(), &ms, omega, 50, Monitor::default()).unwrap().state;
            let d = direct.max_abs_diff(&rotated);
            worst = worst.max(d);
            pass &= d <= 1e-12;
        }
    }
    outcome(pass, format!("blocks bitwise equal: {pass}, max rotation defect {worst:.2e}"))
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut timed = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {n} [{name}]: {} ({}) [{secs:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((n, name, o, secs));
    };

    timed(1, "construction identities", &mut construction_identities);
    timed(2, "rest matrix degeneracy", &mut rest_matrices_vanish);
    timed(3, "kinetic/FV coincidence", &mut kinetic_fv_coincidence);
    timed(4, "discrete H-theorem", &mut h_theorem);
    let start = Instant::now();
    let reports = convergence_reports();
    let ladder_secs = start.elapsed().as_secs_f64();
    timed(5, "convergence rates", &mut || {
        let mut o = convergence_rates(&reports);
        o.detail = format!("{}; ladders took {ladder_secs:.1}s", o.detail);
        o
    });
    timed(6, "accuracy ordering", &mut || accuracy_ordering(&reports));
    timed(7, "instability detection", &mut instability_detection);
    timed(8, "oracle cross-validation", &mut oracle_cross_check);
    timed(9, "symmetry suite", &mut symmetry_suite);

    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
