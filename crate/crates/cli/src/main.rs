use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vkinetic::analytic::{default_table, RadialSolution};
use vkinetic::harness::{
    emit_csv, integrate, parse_config, render_svg, run_convergence, run_elastic, run_stability_scan, stability_csv,
    ConfigEntries, ExperimentConfig, Method, ReportFormat, ReportOptions, Scheme, DEFAULT_LADDER,
};
use vkinetic::kinetic::AcousticState;
use vkinetic::lattice::{Grid, TimeGrid};
use vkinetic::maxwellian::{build, check_admissible, diffusion_report, Preset};
use vkinetic::{Error, Result};

#[derive(Parser)]
#[command(name = "vkinetic", version, about = "Vectorial kinetic schemes for 2D acoustics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write the final field as CSV.
    Run(RunArgs),
    /// Run a mesh-refinement ladder and write the error report.
    Converge(ConvergeArgs),
    /// Scan λ/c and ω for blow-up at fixed resolution.
    StabilityScan(ScanArgs),
    /// Write radial profiles of the exact pulse solution.
    Analytic(AnalyticArgs),
    /// Print the preset catalogue.
    Presets(PresetArgs),
}

#[derive(Args)]
struct Physics {
    /// Sound speed.
    #[arg(long)]
    c: Option<f64>,
    /// Pulse amplitude.
    #[arg(long)]
    kappa: Option<f64>,
    /// Pulse width parameter.
    #[arg(long)]
    mu: Option<f64>,
    /// Final time.
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    /// Radius of the error disc.
    #[arg(long)]
    radius: Option<f64>,
    /// Half width of the periodic domain.
    #[arg(long = "half-extent")]
    half_extent: Option<f64>,
    /// `key = value` file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// kinetic, yee, fv1 or fv2.
    #[arg(long)]
    scheme: Option<String>,
    /// Kinetic preset name.
    #[arg(long)]
    preset: Option<String>,
    /// Relaxation parameter in [1, 2].
    #[arg(long)]
    omega: Option<f64>,
    /// Grid step.
    #[arg(long)]
    delta: Option<f64>,
    /// Override λ/c of the kinetic preset.
    #[arg(long = "lambda-over-c")]
    lambda_over_c: Option<f64>,
    /// Run the two-block elastodynamics system and check block equality.
    #[arg(long)]
    elastic: bool,
    #[command(flatten)]
    physics: Physics,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Comma-separated schemes.
    #[arg(long)]
    scheme: Option<String>,
    /// Comma-separated presets for the kinetic scheme.
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated relaxation parameters for the kinetic scheme.
    #[arg(long)]
    omega: Option<String>,
    /// Comma-separated ladder of grid steps.
    #[arg(long)]
    delta: Option<String>,
    /// Extend the default ladder down to 2^-9.
    #[arg(long)]
    full_scale: bool,
    /// Report format, `csv` or `svg`.
    #[arg(long)]
    format: Option<String>,
    /// Write 0 for wall times so that output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    physics: Physics,
}

#[derive(Args)]
struct ScanArgs {
    /// Preset providing α, β, γ, x.
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated λ/c values.
    #[arg(long = "lambda-over-c", default_value = "1.3142135623730951,1.4142135623730951,2")]
    lambda_over_c: String,
    /// Comma-separated relaxation parameters, default 1,2.
    #[arg(long)]
    omega: Option<String>,
    /// Grid step, default 2^-7.
    #[arg(long)]
    delta: Option<f64>,
    /// Step budget; defaults to four times the steps needed to reach the final time.
    #[arg(long = "max-steps")]
    max_steps: Option<usize>,
    #[command(flatten)]
    physics: Physics,
}

#[derive(Args)]
struct AnalyticArgs {
    /// Comma-separated times.
    #[arg(long, default_value = "0,0.5,1,2")]
    times: String,
    /// Largest sampled radius.
    #[arg(long = "r-max", default_value_t = 4.0)]
    r_max: f64,
    /// Number of equispaced radii on [0, r-max].
    #[arg(long, default_value_t = 401)]
    samples: usize,
    #[command(flatten)]
    physics: Physics,
}

#[derive(Args)]
struct PresetArgs {
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flag values backed by an optional config file.
struct Settings {
    file: ConfigEntries,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => parse_config(&fs::read_to_string(p)?)?,
            None => ConfigEntries::default(),
        };
        Ok(Self { file })
    }

    fn f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.parsed(key),
        }
    }

    fn string(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).map(str::to_string))
    }

    fn out(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file.get("out").map(PathBuf::from))
    }

    fn experiment(&self, p: &Physics, method: Method) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(method);
        if let Some(v) = self.f64(p.c, "c")? {
            cfg.c = v;
        }
        if let Some(v) = self.f64(p.kappa, "kappa")? {
            cfg.init.kappa = v;
        }
        if let Some(v) = self.f64(p.mu, "mu")? {
            cfg.init.mu = v;
        }
        if let Some(v) = self.f64(p.t_final, "t_final")? {
            cfg.t_final = v;
        }
        if let Some(v) = self.f64(p.radius, "radius")? {
            cfg.radius = v;
        }
        if let Some(v) = self.f64(p.half_extent, "half_extent")? {
            cfg.half_extent = v;
        }
        Ok(cfg)
    }

    fn c(&self, p: &Physics) -> Result<f64> {
        Ok(self.f64(p.c, "c")?.unwrap_or(std::f64::consts::FRAC_1_SQRT_2))
    }
}

fn list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("invalid {what} `{}`", s.trim())))
        })
        .collect()
}

fn emit(out: Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn field_csv(q: &AcousticState) -> String {
    let g = q.grid();
    let mut s = String::from("x,y,v,w,p\n");
    for (idx, v) in q.data().iter().enumerate() {
        let (i, j) = g.coords_of(idx);
        let [x, y] = g.position(i, j);
        let _ = writeln!(s, "{x},{y},{},{},{}", v[0], v[1], v[2]);
    }
    s
}

fn kinetic_methods(presets: &[Preset], omegas: &[f64], c: f64) -> Vec<Method> {
    presets
        .iter()
        .flat_map(|&p| omegas.iter().map(move |&w| Method::preset(p, c, w)))
        .collect()
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let s = Settings::load(a.physics.config.as_deref())?;
    let c = s.c(&a.physics)?;
    let scheme: Scheme = s.string(&a.scheme, "scheme").unwrap_or_else(|| "kinetic".into()).parse()?;
    let method = match scheme {
        Scheme::Kinetic => {
            let preset: Preset = s.string(&a.preset, "preset").unwrap_or_else(|| "optimal".into()).parse()?;
            let omega = s.f64(a.omega, "omega")?.unwrap_or(2.0);
            let mut params = preset.params(c);
            if let Some(m) = a.lambda_over_c {
                params = params.with_lambda(m * c);
            }
            Method::Kinetic {
                label: preset.name().to_string(),
                params,
                omega,
            }
        }
        other => Method::reference(other)?,
    };
    let mut cfg = s.experiment(&a.physics, method)?;
    let delta = s.f64(a.delta, "delta")?.unwrap_or(1.0 / 32.0);
    cfg.ladder = vec![delta];
    cfg.validate()?;
    let state = if a.elastic {
        run_elastic(&cfg, delta)?
    } else {
        let grid = Grid::new(cfg.half_extent, delta)?;
        let k = cfg.method.time_step(delta, cfg.c);
        let n = TimeGrid::with_step(k, cfg.t_final).n_steps;
        let sim = integrate(&cfg.method, &cfg.init.state(grid), cfg.c, n)?;
        if sim.blew_up {
            return Err(Error::Numeric(format!(
                "{} blew up after {} of {} steps",
                cfg.method.label(),
                sim.steps_taken,
                sim.n_steps
            )));
        }
        log::info!("{} reached t = {} in {} steps", cfg.method.label(), sim.t_reached, sim.n_steps);
        sim.state
    };
    emit(s.out(&a.physics.out), &field_csv(&state))
}

fn cmd_converge(a: ConvergeArgs) -> Result<()> {
    let s = Settings::load(a.physics.config.as_deref())?;
    let c = s.c(&a.physics)?;
    let schemes: Vec<Scheme> = list(&s.string(&a.scheme, "scheme").unwrap_or_else(|| "kinetic".into()), "scheme")?;
    let presets: Vec<Preset> = list(&s.string(&a.preset, "preset").unwrap_or_else(|| "optimal".into()), "preset")?;
    let omegas: Vec<f64> = list(&s.string(&a.omega, "omega").unwrap_or_else(|| "2".into()), "omega")?;
    let mut ladder: Vec<f64> = match s.string(&a.delta, "delta") {
        Some(text) => list(&text, "grid step")?,
        None => DEFAULT_LADDER.to_vec(),
    };
    if a.full_scale {
        ladder.extend([1.0 / 256.0, 1.0 / 512.0]);
    }
    ladder.sort_by(|x, y| y.total_cmp(x));
    ladder.dedup();
    let format: ReportFormat = s.string(&a.format, "format").unwrap_or_else(|| "csv".into()).parse()?;

    let mut methods = Vec::new();
    for scheme in schemes {
        match scheme {
            Scheme::Kinetic => methods.extend(kinetic_methods(&presets, &omegas, c)),
            other => methods.push(Method::reference(other)?),
        }
    }
    let mut reports = Vec::new();
    for m in methods {
        let mut cfg = s.experiment(&a.physics, m)?;
        cfg.ladder = ladder.clone();
        reports.push(run_convergence(&cfg)?);
    }
    let body = match format {
        ReportFormat::Csv => emit_csv(&reports, ReportOptions { timing: !a.no_timing }),
        ReportFormat::Svg => render_svg(&reports),
    };
    emit(s.out(&a.physics.out), &body)
}

fn cmd_scan(a: ScanArgs) -> Result<()> {
    let s = Settings::load(a.physics.config.as_deref())?;
    let c = s.c(&a.physics)?;
    let cfg = s.experiment(&a.physics, Method::Yee)?;
    let preset: Preset = s.string(&a.preset, "preset").unwrap_or_else(|| "optimal".into()).parse()?;
    let multipliers: Vec<f64> = list(&a.lambda_over_c, "λ/c")?;
    let omegas: Vec<f64> = list(&s.string(&a.omega, "omega").unwrap_or_else(|| "1,2".into()), "omega")?;
    let delta = s.f64(a.delta, "delta")?.unwrap_or(1.0 / 128.0);
    let base = preset.params(c);
    let mut rows = Vec::new();
    for m in multipliers {
        let budget = a
            .max_steps
            .unwrap_or_else(|| 4 * TimeGrid::with_step(delta / (m * c), cfg.t_final).n_steps);
        rows.extend(run_stability_scan(&base, &[m], &omegas, cfg.init, cfg.half_extent, delta, budget)?);
    }
    for r in &rows {
        if r.admissible && r.blew_up {
            log::warn!("admissible combination λ/c={} ω={} blew up", r.lambda_over_c, r.omega);
        }
    }
    emit(s.out(&a.physics.out), &stability_csv(&rows))
}

fn cmd_analytic(a: AnalyticArgs) -> Result<()> {
    let s = Settings::load(a.physics.config.as_deref())?;
    let c = s.c(&a.physics)?;
    let cfg = s.experiment(&a.physics, Method::Yee)?;
    let init = cfg.init;
    if init.mu.is_nan() || init.mu <= 0.0 {
        return Err(Error::Config(format!("mu must be positive, got {}", init.mu)));
    }
    if a.samples < 2 {
        return Err(Error::Config("need at least two radial samples".into()));
    }
    let times: Vec<f64> = list(&a.times, "time")?;
    let table = default_table();
    let mut body = String::from("t,r,u\n");
    for &t in &times {
        let sol = RadialSolution::new(table, init, c, t);
        for i in 0..a.samples {
            let r = a.r_max * i as f64 / (a.samples - 1) as f64;
            let _ = writeln!(body, "{t},{r},{}", sol.eval(r)?);
        }
    }
    emit(s.out(&a.physics.out), &body)
}

fn cmd_presets(a: PresetArgs) -> Result<()> {
    let c = a.c.unwrap_or(std::f64::consts::FRAC_1_SQRT_2);
    let mut body = String::from(
        "name,lattice,lambda_over_c,cfl,alpha,beta,gamma,x,tilde_alpha,tilde_beta,tilde_gamma,tilde_x,admissible,min_eigenvalue,diffusion_min_eigenvalue\n",
    );
    for p in Preset::ALL {
        let k = p.params(c);
        let ms = build(&k)?;
        let min_eig = ms.min_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        let diff = diffusion_report(&k)?;
        let _ = writeln!(
            body,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{:e},{:e}",
            p.name(),
            k.lattice,
            k.lambda / c,
            k.cfl(),
            k.alpha,
            k.beta,
            k.gamma,
            k.x,
            k.tilde_alpha,
            k.tilde_beta,
            k.tilde_gamma,
            k.tilde_x,
            check_admissible(&k).pass(),
            min_eig,
            diff.min_eigenvalue
        );
    }
    emit(a.out, &body)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Converge(a) => cmd_converge(a),
        Command::StabilityScan(a) => cmd_scan(a),
        Command::Analytic(a) => cmd_analytic(a),
        Command::Presets(a) => cmd_presets(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { 2 } else { 1 })
        }
    }
}
