use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forerunner_cli::commands::{self, Context, Outcome, SnapshotSolver, TraceSolver};
use forerunner_cli::config::{parse_float_list, Config};
use forerunner_cli::figures::figure;
use forerunner_core::analysis::ScanSolver;
use forerunner_core::Error;

/// Datasets for transient forerunners of the Klein-Gordon and Schrodinger
/// equations driven by a below-cutoff source switched on at t = 0.
#[derive(Parser)]
#[command(name = "forerunner", version)]
struct Cli {
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

/// Configuration keys; each flag overrides the file value.
#[derive(Args)]
struct Settings {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    series_tol: Option<f64>,
    #[arg(long, global = true)]
    series_n_max: Option<usize>,
    #[arg(long, global = true)]
    scan_n_max: Option<usize>,
    #[arg(long, global = true)]
    scan_dt: Option<f64>,
    #[arg(long, global = true)]
    kg_dx: Option<f64>,
    #[arg(long, global = true)]
    nr_dx: Option<f64>,
    #[arg(long, global = true)]
    omega_av_delta: Option<f64>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceKind {
    RelSeries,
    NrW,
    RelFdtd,
    NrFdtd,
    Saddle,
}

#[derive(Clone, Copy, ValueEnum)]
enum SnapshotKind {
    RelSeries,
    NrW,
    Saddle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanKind {
    Rel,
    Nr,
}

impl From<ScanKind> for ScanSolver {
    fn from(k: ScanKind) -> Self {
        match k {
            ScanKind::Rel => ScanSolver::Relativistic,
            ScanKind::Nr => ScanSolver::Nonrelativistic,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Field history at one position.
    Trace {
        #[arg(long, value_enum)]
        solver: TraceKind,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        omega0: f64,
        #[arg(long)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        dt: f64,
        /// Append the instantaneous frequency column.
        #[arg(long)]
        omega_av: bool,
    },
    /// Field profile at one time.
    Snapshot {
        #[arg(long, value_enum, default_value = "rel-series")]
        solver: SnapshotKind,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        omega0: f64,
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        x1: f64,
        #[arg(long)]
        dx: f64,
    },
    /// Saddle-pole report: magnitudes, envelopes, extremum times, margins,
    /// tau and the pole-to-saddle ratio.
    Forerunner {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        omega0: f64,
        /// Evaluation time; defaults to tau.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Series, oracle and Laplace cross-checks; exit status 1 on failure.
    Validate,
    /// Dataset behind one figure.
    Fig {
        #[arg(long)]
        id: u32,
    },
    /// Arrival time of the lower-envelope maximum over positions.
    ScanBasin {
        #[arg(long)]
        omega0: f64,
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        x1: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "rel")]
        solver: ScanKind,
    },
    /// Basin-bottom arrival time against 1/kappa0^2 with a linear fit.
    FitTpmin {
        /// Comma-separated carrier frequencies.
        #[arg(long)]
        omega0_list: String,
        #[arg(long, value_enum, default_value = "rel")]
        solver: ScanKind,
    },
}

impl Settings {
    fn resolve(&self) -> Outcome<Config> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Config::parse(&text)?
            }
            None => Config::default(),
        };
        let opt = |v: Option<f64>, slot: &mut f64| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        opt(self.series_tol, &mut cfg.series_tol);
        opt(self.scan_dt, &mut cfg.scan_dt);
        opt(self.kg_dx, &mut cfg.kg_dx);
        opt(self.nr_dx, &mut cfg.nr_dx);
        opt(self.omega_av_delta, &mut cfg.omega_av_delta);
        if let Some(n) = self.series_n_max {
            cfg.series_n_max = n;
        }
        if let Some(n) = self.scan_n_max {
            cfg.scan_n_max = n;
        }
        if let Some(d) = &self.output_dir {
            cfg.output_dir = d.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Outcome<Vec<PathBuf>> {
    let ctx = Context::new(cli.settings.resolve()?)?;
    match cli.command {
        Command::Trace {
            solver,
            x,
            omega0,
            t0,
            t1,
            dt,
            omega_av,
        } => {
            let solver = match solver {
                TraceKind::RelSeries => TraceSolver::RelSeries,
                TraceKind::NrW => TraceSolver::NrW,
                TraceKind::RelFdtd => TraceSolver::RelFdtd,
                TraceKind::NrFdtd => TraceSolver::NrFdtd,
                TraceKind::Saddle => TraceSolver::Saddle,
            };
            Ok(vec![commands::trace(&ctx, solver, x, omega0, t0, t1, dt, omega_av)?])
        }
        Command::Snapshot {
            solver,
            t,
            omega0,
            x0,
            x1,
            dx,
        } => {
            let solver = match solver {
                SnapshotKind::RelSeries => SnapshotSolver::RelSeries,
                SnapshotKind::NrW => SnapshotSolver::NrW,
                SnapshotKind::Saddle => SnapshotSolver::Saddle,
            };
            Ok(vec![commands::snapshot(&ctx, solver, t, omega0, x0, x1, dx)?])
        }
        Command::Forerunner { x, omega0, t } => Ok(vec![commands::forerunner(&ctx, x, omega0, t)?]),
        Command::Validate => {
            let (path, checks) = commands::validate(&ctx)?;
            for c in &checks {
                let tag = if c.passed { "ok  " } else { "FAIL" };
                eprintln!("{tag}  {}: {:.3e} (tolerance {:.1e})", c.name, c.value, c.tolerance);
            }
            match commands::validation_failure(&checks) {
                Some(f) => Err(f),
                None => Ok(vec![path]),
            }
        }
        Command::Fig { id } => figure(&ctx, id),
        Command::ScanBasin {
            omega0,
            x0,
            x1,
            n,
            solver,
        } => commands::scan_basin(&ctx, omega0, x0, x1, n, solver.into()),
        Command::FitTpmin { omega0_list, solver } => {
            let list = parse_float_list(&omega0_list)?;
            commands::fit_tpmin(&ctx, &list, solver.into())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
