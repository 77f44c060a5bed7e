mod config;
mod output;

use activeflux_core::cases::{self, CaseReference, CaseSpec, Preparation, StepPlan};
use activeflux_core::reconstruction::{build_deriv_ops, dump_stencils};
use activeflux_core::spectral::{self, tables, Problem, TranslationFactors, RANK_TOL};
use activeflux_core::{Boundary, Error as CoreError, Splitting};
use clap::{Args, Parser, Subcommand};
use config::Settings;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(CoreError::Unstable(_)) => 3,
            CliError::Core(CoreError::UnknownCase(_) | CoreError::Invalid(_) | CoreError::InvalidGrid(_)) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "activeflux", version, about = "Semi-discrete Active Flux runs and Fourier analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a named case and write snapshot, time series and manifest
    Run(RunArgs),
    /// Spectral analysis of the evolution matrix
    #[command(subcommand)]
    Analyze(Analyze),
    /// Grid refinement study against the case reference
    Convergence(ConvergenceArgs),
    /// Print the derivative stencils with exact coefficients
    DumpStencils(DumpArgs),
}

#[derive(Args, Default)]
pub struct RunArgs {
    /// key=value file mirroring the flag names; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    /// Cells per axis
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    nz: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// upwind, central, rusanov or rusanov-full
    #[arg(long)]
    splitting: Option<String>,
    /// periodic or zerograd
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Time-series rows after the initial one
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample the continuous mode instead of the well-prepared discrete one
    #[arg(long)]
    pointwise: bool,
    /// Cells of the radial reference solver
    #[arg(long = "radial-n")]
    radial_n: Option<usize>,
}

#[derive(Args)]
struct SpectralArgs {
    /// advect1d, acoustics2d or acoustics3d
    #[arg(long, default_value = "acoustics2d")]
    problem: String,
    #[arg(long, default_value = "upwind")]
    splitting: String,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    dx: f64,
    #[arg(long, default_value_t = 1.0)]
    dy: f64,
    #[arg(long, default_value_t = 1.0)]
    dz: f64,
}

#[derive(Subcommand)]
enum Analyze {
    /// Kernel dimension of E at random generic translation factors
    Kernel(SpectralArgs),
    /// Largest stable RK3 time step
    Stability(SpectralArgs),
    /// Amplification moduli over the phase along a ray
    Moduli {
        #[command(flatten)]
        common: SpectralArgs,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        cfl: Option<f64>,
        /// Ray angle in radians (2-d)
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
    },
    /// Rusanov determinant at t_x = t_y = -1 against the closed form
    Detcheck(SpectralArgs),
}

#[derive(Args)]
struct ConvergenceArgs {
    #[arg(long)]
    case: String,
    /// Comma-separated cells per axis, coarse to fine
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    grids: Vec<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long = "radial-n", default_value_t = cases::RADIAL_N)]
    radial_n: usize,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Convergence(a) => cmd_convergence(a),
        Command::DumpStencils(a) => cmd_dump(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn parse_splitting(s: &str) -> CliResult<Splitting> {
    Splitting::parse(s).ok_or_else(|| CliError::Usage(format!("unknown splitting `{s}`")))
}

fn parse_boundary(s: &str) -> CliResult<Boundary> {
    match s {
        "periodic" => Ok(Boundary::Periodic),
        "zerograd" | "zero-gradient" => Ok(Boundary::ZeroGradient),
        _ => Err(CliError::Usage(format!("unknown boundary `{s}`"))),
    }
}

fn parse_problem(s: &str) -> CliResult<Problem> {
    Problem::parse(s).ok_or_else(|| CliError::Usage(format!("unknown problem `{s}`")))
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })
}

fn stencil_digest(dim: usize) -> String {
    use sha2::{Digest, Sha256};
    let dump = dump_stencils(&build_deriv_ops(dim, &vec![1.0; dim]));
    Sha256::digest(dump.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn cmd_run(args: RunArgs) -> CliResult<()> {
    let s = Settings::resolve(args)?;
    let mut spec = CaseSpec::named(&s.case)?;
    if let Some(sp) = &s.splitting {
        spec.splitting = parse_splitting(sp)?;
    }
    if let Some(b) = &s.boundary {
        spec.boundary = parse_boundary(b)?;
    }
    if let Some(k) = s.samples {
        spec.samples = k;
    }
    if s.pointwise {
        spec.prep = Preparation::Pointwise;
    }
    let mut n = [s.n.unwrap_or(spec.n); 3];
    for (a, v) in [s.nx, s.ny, s.nz].into_iter().enumerate() {
        if let Some(v) = v {
            n[a] = v;
        }
    }
    let grid = spec.grid(n, None)?;
    let (cfl, dt) = match (s.cfl, s.dt) {
        (None, None) => (Some(spec.cfl), None),
        other => other,
    };
    let (t_end, steps) = match (s.t_end, s.steps) {
        (None, None) => (Some(spec.t_end), None),
        other => other,
    };
    let plan = StepPlan::new(&grid, &spec.model(), cfl, dt, t_end, steps).map_err(|e| CliError::Usage(e.to_string()))?;
    create_dir(&s.out)?;

    let initial = cases::init_case(&spec, &grid)?;
    let mut reference = CaseReference::for_case(&spec, &initial, s.radial_n)?;
    let series_path = s.out.join("timeseries.csv");
    let mut series = output::SeriesWriter::create(&series_path, &spec, &grid)?;
    let mut write_err = None;
    let outcome = cases::run_case(&spec, initial, plan, &mut reference, |row| {
        if write_err.is_none() {
            write_err = series.push(row).err();
        }
    })?;
    if let Some(e) = write_err {
        return Err(e);
    }
    series.finish()?;
    output::write_snapshot(&s.out.join("snapshot.csv"), &outcome.state)?;
    let last = outcome.series.last();
    let mut manifest = vec![
        ("case", spec.name.clone()),
        ("dim", spec.dim.to_string()),
        ("n", grid.n[..grid.dim].iter().map(|v| v.to_string()).collect::<Vec<_>>().join("x")),
        ("h", grid.h[..grid.dim].iter().map(|v| output::num(*v)).collect::<Vec<_>>().join(",")),
        ("boundary", grid.boundary.name().to_string()),
        ("splitting", spec.splitting.name().to_string()),
        ("preparation", if spec.prep == Preparation::Pointwise { "pointwise" } else { "well-prepared" }.to_string()),
        ("c", output::num(spec.c)),
        ("dt", output::num(outcome.dt)),
        ("steps", outcome.steps.to_string()),
        ("t_final", output::num(outcome.state.time)),
        ("samples", spec.samples.to_string()),
        ("seed", s.seed.to_string()),
        ("radial_n", s.radial_n.to_string()),
        ("tables_sha256", tables::digest()),
        ("stencils_sha256", stencil_digest(spec.dim)),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
    ];
    if let Some(row) = last {
        manifest.push(("final_l1", row.l1.iter().map(|v| output::num(*v)).collect::<Vec<_>>().join(",")));
        if let Some(d) = row.div {
            manifest.push(("final_div", d.div.iter().map(|v| output::num(*v)).collect::<Vec<_>>().join(",")));
            manifest.push(("final_div_control", output::num(d.control)));
        }
    }
    output::write_manifest(&s.out.join("manifest.txt"), &manifest)?;
    println!(
        "{}: {} steps of dt = {} to t = {}; outputs in {}",
        spec.name,
        outcome.steps,
        output::num(outcome.dt),
        output::num(outcome.state.time),
        s.out.display()
    );
    Ok(())
}

fn spectral_h(a: &SpectralArgs) -> CliResult<[f64; 3]> {
    let h = [a.dx, a.dy, a.dz];
    if h.iter().any(|v| !(*v > 0.0)) || !(a.c > 0.0) {
        return Err(CliError::Usage("c, dx, dy and dz must be positive".into()));
    }
    Ok(h)
}

fn cmd_analyze(cmd: Analyze) -> CliResult<()> {
    match cmd {
        Analyze::Kernel(a) => {
            let problem = parse_problem(&a.problem)?;
            let splitting = parse_splitting(&a.splitting)?;
            let h = spectral_h(&a)?;
            let samples = a.samples.unwrap_or(50);
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let sym = spectral::symbol(problem, splitting, a.c, h)?;
            create_dir(&a.out)?;
            let mut rows = Vec::with_capacity(samples);
            let mut dims = std::collections::BTreeSet::new();
            for i in 0..samples {
                let mut beta = [0.0; 3];
                for b in beta.iter_mut().take(problem.dim()) {
                    *b = rng.gen_range(0.15..PI - 0.15) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                }
                let t = TranslationFactors::from_phases(beta);
                let e = sym.eval(&t);
                let dim = spectral::kernel_dim(&e, RANK_TOL);
                dims.insert(dim);
                let residual = if splitting == Splitting::Upwind && problem != Problem::Advection1d {
                    spectral::kernel_vector_closed_form(problem, &t, h)?
                        .iter()
                        .map(|v| spectral::relative_residual(&e, v))
                        .fold(0.0, f64::max)
                } else {
                    f64::NAN
                };
                rows.push(vec![i.to_string(), output::num(beta[0]), output::num(beta[1]), output::num(beta[2]), dim.to_string(), output::num(residual)]);
            }
            output::write_csv(&a.out.join("kernel.csv"), &["sample", "beta_x", "beta_y", "beta_z", "kernel_dim", "closed_form_residual"], &rows)?;
            println!("{} {}: kernel dimensions {:?} over {samples} samples", problem.name(), splitting.name(), dims);
        }
        Analyze::Stability(a) => {
            let problem = parse_problem(&a.problem)?;
            let splitting = parse_splitting(&a.splitting)?;
            let h = spectral_h(&a)?;
            let samples = a.samples.unwrap_or(4096);
            let dt = spectral::max_stable_dt(problem, splitting, a.c, h, samples)?;
            let hmin = h[..problem.dim()].iter().cloned().fold(f64::INFINITY, f64::min);
            let cfl = dt * a.c / hmin;
            create_dir(&a.out)?;
            output::write_csv(
                &a.out.join("stability.csv"),
                &["problem", "splitting", "c", "h_min", "samples", "max_dt", "cfl"],
                &[vec![problem.name().into(), splitting.name().into(), output::num(a.c), output::num(hmin), samples.to_string(), output::num(dt), output::num(cfl)]],
            )?;
            println!("{} {}: max stable dt = {}, CFL = {}", problem.name(), splitting.name(), output::num(dt), output::num(cfl));
        }
        Analyze::Moduli { common: a, dt, cfl, phi } => {
            let problem = parse_problem(&a.problem)?;
            let splitting = parse_splitting(&a.splitting)?;
            let h = spectral_h(&a)?;
            let dt = match (dt, cfl) {
                (Some(d), None) => d,
                (None, Some(c)) => c * h[0] / a.c,
                (None, None) => 0.2 * h[0] / a.c,
                _ => return Err(CliError::Usage("give either --dt or --cfl".into())),
            };
            let samples = a.samples.unwrap_or(201).max(2);
            let beta: Vec<f64> = (0..samples).map(|i| -PI + 2.0 * PI * i as f64 / (samples - 1) as f64).collect();
            let s: Vec<f64> = beta.iter().map(|b| b / h[0]).collect();
            let res = spectral::moduli_along_ray(problem, splitting, a.c, h, phi, &s, dt)?;
            let width = res.first().map(|r| r.1.len()).unwrap_or(0);
            let mut header = vec!["beta".to_string(), "phi".to_string(), "dt".to_string()];
            header.extend((0..width).map(|i| format!("modulus_{i}")));
            let rows: Vec<Vec<String>> = res
                .iter()
                .zip(&beta)
                .map(|((_, m), b)| {
                    let mut r = vec![output::num(*b), output::num(phi), output::num(dt)];
                    r.extend(m.iter().map(|v| output::num(*v)));
                    r
                })
                .collect();
            create_dir(&a.out)?;
            let header: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
            output::write_csv(&a.out.join("moduli.csv"), &header, &rows)?;
            let worst = res.iter().flat_map(|r| r.1.iter()).cloned().fold(0.0, f64::max);
            println!("{} {}: largest modulus {} at dt = {}", problem.name(), splitting.name(), output::num(worst), output::num(dt));
        }
        Analyze::Detcheck(a) => {
            let splitting = parse_splitting(&a.splitting).unwrap_or(Splitting::Rusanov);
            let splitting = if a.splitting == "upwind" { Splitting::Rusanov } else { splitting };
            let h = spectral_h(&a)?;
            let t = TranslationFactors::new([Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]);
            let e = spectral::assemble_e(Problem::Acoustics2d, splitting, a.c, h, &t)?;
            let det = spectral::det_e(&e);
            let closed = spectral::rusanov_det_closed_form(a.c, h[0], h[1]);
            let rel = (det - closed).norm() / closed.abs();
            println!("splitting     {}", splitting.name());
            println!("computed det  {} {:+}i", output::num(det.re), output::num(det.im));
            println!("closed form   {}", output::num(closed));
            println!("relative diff {}", output::num(rel));
            println!("kernel dim    {}", spectral::kernel_dim(&e, RANK_TOL));
        }
    }
    Ok(())
}

fn cmd_convergence(a: ConvergenceArgs) -> CliResult<()> {
    if a.grids.len() < 2 {
        return Err(CliError::Usage("a convergence study needs at least two grids".into()));
    }
    let spec = CaseSpec::named(&a.case)?;
    let rows = cases::convergence_study(&spec, &a.grids, a.radial_n)?;
    let vars = output::var_names(spec.dim);
    let mut header = vec!["n".to_string(), "h".to_string()];
    header.extend(vars.iter().map(|v| format!("l1_{v}")));
    header.extend(vars.iter().map(|v| format!("order_{v}")));
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut line = vec![r.n.to_string(), output::num(r.h)];
        line.extend(r.l1.iter().map(|v| output::num(*v)));
        for v in 0..vars.len() {
            let o = if i == 0 { f64::NAN } else { cases::observed_order(rows[i - 1].l1[v], r.l1[v], rows[i - 1].h, r.h) };
            line.push(output::num(o));
        }
        println!("{}", line.join("  "));
        out.push(line);
    }
    create_dir(&a.out)?;
    let header: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    output::write_csv(&a.out.join(format!("convergence_{}.csv", spec.name)), &header, &out)
}

fn cmd_dump(a: DumpArgs) -> CliResult<()> {
    if !(1..=3).contains(&a.dim) {
        return Err(CliError::Usage(format!("dimension {} must be 1, 2 or 3", a.dim)));
    }
    let text = dump_stencils(&build_deriv_ops(a.dim, &vec![1.0; a.dim]));
    match a.out {
        Some(p) => std::fs::write(&p, text).map_err(|source| CliError::Io { path: p, source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
