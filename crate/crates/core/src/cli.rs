//! Command-line driver: every command builds one or more tables plus the
//! verdicts it was asked to check. Writing files and choosing exit codes is
//! left to the binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{domain, Result};
use crate::fd::{self, TimeSchedule};
use crate::model::{nondimensionalize, DimensionlessProblem, PhysicalExtent, PhysicalParams};
use crate::series::AnalyticSeries;
use crate::table::{BenchmarkTable, Cell, Format};
use crate::verify::{self, compare_with_analytic, Norm, Quantity};
use crate::{linspace, planar, spherical, Geometry, DEFAULT_ROOTS, DEFAULT_TAUS, SQRT3};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "MARSHAK_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "marshak", version, about = "Non-equilibrium Marshak wave benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory (default: $MARSHAK_OUT_DIR, else the current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Record the generation time in the metadata header.
    #[arg(long, global = true)]
    pub stamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Slab,
    Shell,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum, default_value_t = GeometryArg::Slab)]
    pub geometry: GeometryArg,
    /// Scaled slab thickness.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Scaled inner radius.
    #[arg(long, default_value_t = 1.0)]
    pub x1: f64,
    /// Scaled outer radius.
    #[arg(long, default_value_t = 2.0)]
    pub x2: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
}

impl ProblemArgs {
    pub fn problem(&self) -> Result<DimensionlessProblem> {
        match self.geometry {
            GeometryArg::Slab => DimensionlessProblem::slab(self.b, self.eps),
            GeometryArg::Shell => DimensionlessProblem::shell(self.x1, self.x2, self.eps),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    /// 3.33e-15 s up to tau = 0.1, then 3.33e-12 s.
    Paper,
    /// Constant scaled step `--dtau`.
    Uniform,
}

#[derive(Debug, Clone, Args)]
pub struct FdArgs {
    #[arg(long, default_value_t = 100.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 100)]
    pub cells: usize,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Paper)]
    pub schedule: ScheduleArg,
    /// Scaled step of the uniform schedule.
    #[arg(long, default_value_t = 0.01)]
    pub dtau: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Series solution on a uniform x grid at several times.
    Analytic {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = DEFAULT_ROOTS)]
        roots: usize,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_TAUS)]
        taus: Vec<f64>,
    },
    /// Leakage currents and integrated densities over time.
    Currents {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = DEFAULT_ROOTS)]
        roots: usize,
        #[arg(long, value_delimiter = ',', default_values_t = CURRENT_TAUS)]
        taus: Vec<f64>,
    },
    /// Finite-difference solution at probe times.
    Fd {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        fd: FdArgs,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_TAUS)]
        probes: Vec<f64>,
    },
    /// Finite differences against the series, with verdicts.
    Compare {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        fd: FdArgs,
        #[arg(long, default_value_t = DEFAULT_ROOTS)]
        roots: usize,
        /// First probe is gated by `--tolerance`, later ones must improve on it.
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 1.0])]
        probes: Vec<f64>,
        /// Largest allowed relative error in u at the first probe.
        #[arg(long, default_value_t = 0.01)]
        tolerance: f64,
    },
    /// Truncation error against the number of roots.
    Convergence {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Probe point `x tau`; x defaults to the driven face.
        #[arg(long, num_args = 2, value_names = ["X", "TAU"])]
        probe: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_ROOTS)]
        max_roots: usize,
    },
    /// Roots of the transcendental equation and their poles.
    Roots {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(short = 'n', long, default_value_t = 5)]
        count: usize,
    },
}

const CURRENT_TAUS: [f64; 14] = [0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 2.5, 5.0, 10.0, 20.0, 50.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// `(file stem, table)` pairs.
    pub tables: Vec<(String, BenchmarkTable)>,
    pub verdicts: Vec<Verdict>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

impl Cli {
    /// Output directory: `--out`, then the environment, then `.`.
    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

fn header(table: &mut BenchmarkTable, command: &str, problem: &DimensionlessProblem, stamp: bool) {
    table.meta("command", command).meta("version", env!("CARGO_PKG_VERSION"));
    match problem.geometry {
        Geometry::Slab { b } => table.meta("geometry", "slab").meta("b", b),
        Geometry::Shell { x1, x2 } => table.meta("geometry", "shell").meta("x1", x1).meta("x2", x2),
    };
    table.meta("eps", problem.eps);
    if stamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        table.meta("generated_unix", secs);
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Physical parameters that reproduce the scaled problem with opacity
/// `kappa` and `F_inc = c/4`.
pub fn physical_params(problem: &DimensionlessProblem, kappa: f64) -> Result<PhysicalParams> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return domain(format!("kappa must be positive, got {kappa}"));
    }
    if !(problem.eps > 0.0) {
        return domain("finite differences need eps > 0");
    }
    let k = SQRT3 * kappa;
    let extent = match problem.geometry {
        Geometry::Slab { b } => PhysicalExtent::Slab { length: b / k },
        Geometry::Shell { x1, x2 } => PhysicalExtent::Shell { r1: x1 / k, r2: x2 / k },
    };
    Ok(PhysicalParams::normalized(kappa, problem.eps, extent))
}

fn schedule(args: &FdArgs, params: &PhysicalParams, end_tau: f64) -> Result<TimeSchedule> {
    let end = end_tau.max(0.1) * 1.05 + 1.0;
    Ok(match args.schedule {
        ScheduleArg::Paper => TimeSchedule::paper(end),
        ScheduleArg::Uniform => {
            if !(args.dtau > 0.0) {
                return domain(format!("dtau must be positive, got {}", args.dtau));
            }
            let (_, scales) = nondimensionalize(params)?;
            TimeSchedule::uniform_tau(args.dtau, end, &scales)
        }
    })
}

fn schedule_label(args: &FdArgs) -> String {
    match args.schedule {
        ScheduleArg::Paper => "paper (3.33e-15 s to tau=0.1 then 3.33e-12 s)".into(),
        ScheduleArg::Uniform => format!("uniform dtau={}", args.dtau),
    }
}

fn fd_run(problem: &DimensionlessProblem, args: &FdArgs, probes: &[f64]) -> Result<(PhysicalParams, fd::FdRun)> {
    let params = physical_params(problem, args.kappa)?;
    let mesh = fd::build_mesh(params.extent, args.cells)?;
    let end = probes.last().copied().unwrap_or(0.0);
    let run = fd::run(&params, &mesh, &schedule(args, &params, end)?, probes)?;
    Ok((params, run))
}

/// Runs one command without touching the filesystem.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analytic { problem, roots, points, taus } => cmd_analytic(problem, *roots, *points, taus, cli.stamp),
        Command::Currents { problem, roots, taus } => cmd_currents(problem, *roots, taus, cli.stamp),
        Command::Fd { problem, fd, probes } => cmd_fd(problem, fd, probes, cli.stamp),
        Command::Compare { problem, fd, roots, probes, tolerance } => {
            cmd_compare(problem, fd, *roots, probes, *tolerance, cli.stamp)
        }
        Command::Convergence { problem, probe, max_roots } => {
            cmd_convergence(problem, probe.as_deref(), *max_roots, cli.stamp)
        }
        Command::Roots { problem, count } => cmd_roots(problem, *count, cli.stamp),
    }
}

fn geometry_name(problem: &DimensionlessProblem) -> &'static str {
    problem.geometry.name()
}

pub fn cmd_analytic(args: &ProblemArgs, roots: usize, points: usize, taus: &[f64], stamp: bool) -> Result<Outcome> {
    let problem = args.problem()?;
    if points < 2 {
        return domain("x grid needs at least 2 points");
    }
    let series = AnalyticSeries::new(&problem, roots)?;
    let (lo, hi) = problem.geometry.bounds();
    let xs = linspace(lo, hi, points);
    let mut table = BenchmarkTable::fields();
    header(&mut table, "analytic", &problem, stamp);
    table.meta("n_roots", roots).meta("points", points).meta("taus", join(taus));
    let name = geometry_name(&problem);
    for &tau in taus {
        let snap = series.snapshot(&xs, tau)?;
        table.push_snapshot(name, "series", problem.eps, roots, &snap)?;
    }
    if problem.eps == 0.0 {
        if let Geometry::Slab { b } = problem.geometry {
            // the finite radiation field present at tau = 0
            let mut snap = series.snapshot(&xs, 0.0)?;
            for (i, &x) in xs.iter().enumerate() {
                snap.u[i] = planar::eps0_initial_profile(x, b)?;
                snap.du_dx[i] = planar::eps0_initial_gradient(x, b)?;
                snap.v[i] = 0.0;
                snap.dv_dx[i] = 0.0;
                snap.tol[i] = 0.0;
            }
            table.push_snapshot(name, "closed_form_t0", 0.0, roots, &snap)?;
        }
    }
    Ok(Outcome { tables: vec![(format!("analytic_{name}"), table)], verdicts: Vec::new() })
}

pub fn cmd_currents(args: &ProblemArgs, roots: usize, taus: &[f64], stamp: bool) -> Result<Outcome> {
    let problem = args.problem()?;
    let series = AnalyticSeries::new(&problem, roots)?;
    let mut table = BenchmarkTable::new(&[
        "geometry", "method", "eps", "n_roots", "tau", "j_minus", "j_plus", "psi_r", "psi_m", "mean_u", "mean_v", "tol",
    ]);
    header(&mut table, "currents", &problem, stamp);
    table.meta("n_roots", roots);
    let name = geometry_name(&problem);
    if let AnalyticSeries::Spherical(_) = series {
        table.meta("psi", "4 pi int x^2 u dx; mean = psi / shell volume");
    } else {
        table.meta("psi", "int u dx");
    }
    for &tau in taus {
        let (cur, psi_r, psi_m, means) = match &series {
            AnalyticSeries::Planar(s) => {
                let i = s.integrated_densities(tau)?;
                (s.leakage_currents(tau)?, i.psi_r, i.psi_m, None)
            }
            AnalyticSeries::Spherical(s) => {
                let i = s.integrated_densities(tau)?;
                (s.leakage_currents(tau)?, i.psi_r, i.psi_m, Some((i.mean_u.value, i.mean_v.value)))
            }
        };
        let tol = [cur.j_minus.tol, cur.j_plus.tol, psi_r.tol, psi_m.tol].into_iter().fold(0.0, f64::max);
        let (mu, mv) = means.map_or((Cell::Empty, Cell::Empty), |(a, b)| (a.into(), b.into()));
        table.push(vec![
            name.into(),
            "series".into(),
            problem.eps.into(),
            roots.into(),
            tau.into(),
            cur.j_minus.value.into(),
            cur.j_plus.value.into(),
            psi_r.value.into(),
            psi_m.value.into(),
            mu,
            mv,
            tol.into(),
        ])?;
    }
    Ok(Outcome { tables: vec![(format!("currents_{name}"), table)], verdicts: Vec::new() })
}

pub fn cmd_fd(args: &ProblemArgs, fd_args: &FdArgs, probes: &[f64], stamp: bool) -> Result<Outcome> {
    let problem = args.problem()?;
    let (_, run) = fd_run(&problem, fd_args, probes)?;
    let mut table = BenchmarkTable::fields();
    header(&mut table, "fd", &problem, stamp);
    table
        .meta("kappa", fd_args.kappa)
        .meta("cells", fd_args.cells)
        .meta("schedule", schedule_label(fd_args))
        .meta("probes", join(probes))
        .meta("balance_implicit_max", format!("{:.3e}", run.audit.implicit_max))
        .meta("balance_trapezoid", format!("{:.3e}", run.audit.trapezoid));
    let name = geometry_name(&problem);
    for snap in &run.snapshots {
        table.push_snapshot(name, "fd", problem.eps, fd_args.cells, snap)?;
    }
    Ok(Outcome { tables: vec![(format!("fd_{name}"), table)], verdicts: Vec::new() })
}

pub fn cmd_compare(
    args: &ProblemArgs,
    fd_args: &FdArgs,
    roots: usize,
    probes: &[f64],
    tolerance: f64,
    stamp: bool,
) -> Result<Outcome> {
    if probes.is_empty() {
        return domain("compare needs at least one probe time");
    }
    let problem = args.problem()?;
    let series = AnalyticSeries::new(&problem, roots)?;
    let (_, run) = fd_run(&problem, fd_args, probes)?;
    let mut table = BenchmarkTable::new(&["quantity", "x", "tau", "analytic", "fd", "abs_err", "rel_err"]);
    header(&mut table, "compare", &problem, stamp);
    table
        .meta("n_roots", roots)
        .meta("kappa", fd_args.kappa)
        .meta("cells", fd_args.cells)
        .meta("schedule", schedule_label(fd_args))
        .meta("tolerance", tolerance)
        .meta("relative_error", "|a-b|/max(|a|,|b|,1e-12)");
    let mut verdicts = Vec::new();
    let mut first_error = None;
    for (probe, snap) in probes.iter().zip(&run.snapshots) {
        for (label, q) in [("u", Quantity::U), ("v", Quantity::V)] {
            let report = compare_with_analytic(&series, snap, "fd", q, Norm::Relative, tolerance)?;
            for p in &report.points {
                table.push(vec![label.into(), p.x.into(), p.tau.into(), p.a.into(), p.b.into(), p.abs.into(), p.rel.into()])?;
            }
            if q != Quantity::U {
                continue;
            }
            let detail = format!(
                "probe tau={probe} (actual {:.6}): max rel {:.4e}, max abs {:.4e}",
                snap.tau, report.max_rel, report.max_abs
            );
            match first_error {
                None => {
                    first_error = Some(report.max_rel);
                    verdicts.push(Verdict {
                        name: format!("max relative error in u at tau={probe} below {tolerance}"),
                        pass: report.max_rel < tolerance,
                        detail,
                    });
                }
                Some(first) => verdicts.push(Verdict {
                    name: format!("error in u at tau={probe} smaller than at tau={}", probes[0]),
                    pass: report.max_rel < first,
                    detail,
                }),
            }
        }
    }
    let name = geometry_name(&problem);
    Ok(Outcome { tables: vec![(format!("compare_{name}"), table)], verdicts })
}

pub fn cmd_convergence(args: &ProblemArgs, probe: Option<&[f64]>, max_roots: usize, stamp: bool) -> Result<Outcome> {
    let problem = args.problem()?;
    let (x, tau) = match probe {
        Some([x, tau]) => (*x, *tau),
        Some(_) => return domain("probe takes exactly two values: x tau"),
        None => (problem.geometry.bounds().0, 2.5),
    };
    let rows = verify::convergence_study(&problem, (x, tau), max_roots)?;
    let mut table = BenchmarkTable::new(&["n_roots", "n_terms", "n_poles", "u", "pct_error"]);
    header(&mut table, "convergence", &problem, stamp);
    table
        .meta("probe_x", x)
        .meta("probe_tau", tau)
        .meta("reference", format!("{max_roots} roots"))
        .meta("n_terms", "roots counting beta=0 as the first")
        .meta("n_poles", "residues summed including s=0");
    for r in rows {
        table.push(vec![r.n_roots.into(), r.n_terms.into(), r.n_poles.into(), r.value.into(), r.pct_error.into()])?;
    }
    let name = geometry_name(&problem);
    Ok(Outcome { tables: vec![(format!("convergence_{name}"), table)], verdicts: Vec::new() })
}

pub fn cmd_roots(args: &ProblemArgs, count: usize, stamp: bool) -> Result<Outcome> {
    let problem = args.problem()?;
    let roots = crate::roots::find_roots(&problem, count)?;
    let scaled = roots.scaled_residuals();
    let mut table = BenchmarkTable::new(&["index", "beta", "residual", "scaled_residual", "s_slow", "s_fast"]);
    header(&mut table, "roots", &problem, stamp);
    table.meta("scaled_residual", "|g|/(1+|g'|)");
    for (i, &beta) in roots.roots.iter().enumerate() {
        let pair = crate::model::pole_pair(beta, problem.eps)?;
        let fast = pair.poles.get(1).map_or(Cell::Empty, |p| p.s.into());
        table.push(vec![
            (i + 1).into(),
            beta.into(),
            roots.residuals[i].into(),
            scaled[i].into(),
            pair.poles[0].s.into(),
            fast,
        ])?;
    }
    let worst = scaled.iter().fold(0.0f64, |m, &r| m.max(r));
    let verdicts = vec![Verdict {
        name: "root residuals below 1e-12".into(),
        pass: roots.len() == count && worst <= 1e-12,
        detail: format!("{} roots, worst scaled residual {worst:.3e}", roots.len()),
    }];
    let name = geometry_name(&problem);
    Ok(Outcome { tables: vec![(format!("roots_{name}"), table)], verdicts })
}

/// Steady values used by the shell summary lines.
pub fn shell_steady_currents(x1: f64, x2: f64) -> Result<(f64, f64)> {
    let (u1, _) = spherical::steady_profile(x1, x1, x2)?;
    let (u2, _) = spherical::steady_profile(x2, x1, x2)?;
    Ok((2.0 * u1 - 1.0, 2.0 * u2))
}
