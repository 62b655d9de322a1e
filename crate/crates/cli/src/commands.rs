//! Subcommand bodies. Each writes its datasets into the configured output
//! directory and returns the paths it wrote.

use std::path::PathBuf;

use forerunner_core::analysis::{
    basin_minimum, basin_scan, laplace_check, omega_av_numeric, tpmin_vs_kappa, BasinEntry, BasinMinimum,
    NonrelExact, RelSeries, SaddleModel, ScanOptions, ScanSolver, TpminFit, Waveform,
};
use forerunner_core::asymptotics::{
    density_envelopes, envelope_extremum_times, pole_saddle_ratio, psi_saddle, transient_time_numeric,
    transient_time_paper, validity_margins, EnvelopeExtrema,
};
use forerunner_core::dispersion::{kappa0, traversal_time};
use forerunner_core::exact::{psi_rel, psi_rel_pole_form, SeriesSettings};
use forerunner_core::fdtd::{evolve_kg, evolve_schrodinger, trace_error, GridSpec, Solver};
use forerunner_core::{Dispersion, Error, SourceSpec};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::Config;
use crate::output::{sample_row, write_csv, write_json, SAMPLE_HEADER};
use crate::Failure;

pub type Outcome<T> = std::result::Result<T, Failure>;

/// Field model behind `trace`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSolver {
    RelSeries,
    NrW,
    RelFdtd,
    NrFdtd,
    Saddle,
}

impl TraceSolver {
    pub fn name(self) -> &'static str {
        match self {
            TraceSolver::RelSeries => "rel-series",
            TraceSolver::NrW => "nr-w",
            TraceSolver::RelFdtd => "rel-fdtd",
            TraceSolver::NrFdtd => "nr-fdtd",
            TraceSolver::Saddle => "saddle",
        }
    }
}

/// Shared state of one invocation.
pub struct Context {
    pub cfg: Config,
}

impl Context {
    pub fn new(cfg: Config) -> Outcome<Self> {
        cfg.validate()?;
        Ok(Context { cfg })
    }

    pub fn series(&self) -> SeriesSettings {
        SeriesSettings {
            rel_tol: self.cfg.series_tol,
            n_max: self.cfg.series_n_max,
        }
    }

    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            dt: self.cfg.scan_dt,
            series: SeriesSettings {
                rel_tol: self.cfg.series_tol,
                n_max: self.cfg.scan_n_max,
            },
            ..ScanOptions::default()
        }
    }

    /// Path of an output file, creating the directory on first use.
    pub fn path(&self, name: &str) -> Outcome<PathBuf> {
        std::fs::create_dir_all(&self.cfg.output_dir)?;
        Ok(self.cfg.output_dir.join(name))
    }

    pub fn rel(&self, x: f64, src: SourceSpec) -> RelSeries {
        RelSeries {
            x,
            src,
            settings: self.series(),
        }
    }
}

/// Instantaneous frequency, with density nodes mapped to NaN.
pub fn omega_av_or_nan(wave: &dyn Waveform, t: f64, delta: f64) -> Outcome<f64> {
    match omega_av_numeric(wave, t, delta) {
        Ok(v) => Ok(v),
        Err(Error::UndefinedFrequency { .. }) => Ok(f64::NAN),
        Err(e) => Err(e.into()),
    }
}

fn times(t0: f64, t1: f64, dt: f64) -> Outcome<Vec<f64>> {
    Ok(forerunner_core::analysis::uniform_times(t0, t1, dt)?)
}

fn sample_wave(wave: &dyn Waveform, ts: &[f64], with_omega: bool, delta: f64) -> Outcome<Vec<Vec<f64>>> {
    ts.iter()
        .map(|&t| {
            let a = wave.amplitude(t)?;
            let w = if with_omega {
                Some(omega_av_or_nan(wave, t, delta)?)
            } else {
                None
            };
            Ok(sample_row(wave.x(), t, a, w))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn trace(
    ctx: &Context,
    solver: TraceSolver,
    x: f64,
    omega0: f64,
    t0: f64,
    t1: f64,
    dt: f64,
    with_omega: bool,
) -> Outcome<PathBuf> {
    let src = SourceSpec::new(omega0)?;
    let ts = times(t0, t1, dt)?;
    let delta = ctx.cfg.omega_av_delta;
    // room for the difference quotient past the last sample
    let t_max = t1 + 2.0 * delta;
    let rows = match solver {
        TraceSolver::RelSeries => sample_wave(&ctx.rel(x, src), &ts, with_omega, delta)?,
        TraceSolver::NrW => sample_wave(&NonrelExact { x, src }, &ts, with_omega, delta)?,
        TraceSolver::Saddle => sample_wave(&SaddleModel { x, src }, &ts, with_omega, delta)?,
        TraceSolver::RelFdtd => {
            let grid = GridSpec::relativistic(ctx.cfg.kg_dx, t_max, vec![x]);
            let tr = evolve_kg(src, &grid)?.remove(0);
            sample_wave(&tr, &ts, with_omega, delta)?
        }
        TraceSolver::NrFdtd => {
            let grid = GridSpec::schrodinger(ctx.cfg.nr_dx, t_max, vec![x]);
            let tr = evolve_schrodinger(src, &grid)?.remove(0);
            sample_wave(&tr, &ts, with_omega, delta)?
        }
    };
    let mut header = SAMPLE_HEADER.to_vec();
    if with_omega {
        header.push("omega_av");
    }
    let path = ctx.path(&format!("trace_{}_x{x}_w{omega0}.csv", solver.name()))?;
    write_csv(&path, &header, &rows)?;
    Ok(path)
}

/// Field model behind `snapshot`; FDTD runs record probes only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotSolver {
    RelSeries,
    NrW,
    Saddle,
}

pub fn snapshot(
    ctx: &Context,
    solver: SnapshotSolver,
    t: f64,
    omega0: f64,
    x0: f64,
    x1: f64,
    dx: f64,
) -> Outcome<PathBuf> {
    let src = SourceSpec::new(omega0)?;
    let xs = times(x0, x1, dx)?;
    let rows = xs
        .iter()
        .map(|&x| {
            let a = match solver {
                SnapshotSolver::RelSeries => ctx.rel(x, src).amplitude(t)?,
                SnapshotSolver::NrW => NonrelExact { x, src }.amplitude(t)?,
                SnapshotSolver::Saddle => SaddleModel { x, src }.amplitude(t)?,
            };
            Ok(sample_row(x, t, a, None))
        })
        .collect::<Outcome<Vec<_>>>()?;
    let name = match solver {
        SnapshotSolver::RelSeries => "rel-series",
        SnapshotSolver::NrW => "nr-w",
        SnapshotSolver::Saddle => "saddle",
    };
    let path = ctx.path(&format!("snapshot_{name}_t{t}_w{omega0}.csv"))?;
    write_csv(&path, &SAMPLE_HEADER, &rows)?;
    Ok(path)
}

#[derive(Debug, Serialize)]
pub struct ForerunnerReport {
    pub x: f64,
    pub omega0: f64,
    pub kappa0: f64,
    pub tau: f64,
    /// Time at which the field quantities below are evaluated.
    pub t: f64,
    pub pole_modulus: f64,
    pub saddle_plus_modulus: f64,
    pub saddle_minus_modulus: f64,
    pub total_modulus: f64,
    pub upper_envelope: f64,
    pub lower_envelope: f64,
    pub ratio: f64,
    pub margin_positive: f64,
    pub margin_negative: f64,
    /// Envelope extremum times in units of tau.
    pub extremum_times: EnvelopeExtrema,
    pub transient_time_paper: Option<f64>,
    pub transient_time_numeric: Option<f64>,
    /// Why a transient time is missing.
    pub notes: Vec<String>,
}

pub fn forerunner_report(x: f64, omega0: f64, t: Option<f64>) -> Outcome<ForerunnerReport> {
    let src = SourceSpec::new(omega0)?;
    let tau = traversal_time(x, src, Dispersion::Relativistic)?;
    let t = t.unwrap_or(tau);
    let parts = psi_saddle(x, t, src)?;
    let (upper, lower) = density_envelopes(x, t, src)?;
    let (mp, mm) = validity_margins(x, src);
    let mut notes = Vec::new();
    let mut keep = |r: forerunner_core::Result<f64>, what: &str| match r {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            None
        }
    };
    let paper = keep(transient_time_paper(x, src), "transient_time_paper");
    let numeric = keep(transient_time_numeric(x, src), "transient_time_numeric");
    Ok(ForerunnerReport {
        x,
        omega0,
        kappa0: kappa0(src, Dispersion::Relativistic),
        tau,
        t,
        pole_modulus: parts.pole.norm(),
        saddle_plus_modulus: parts.saddle_plus.norm(),
        saddle_minus_modulus: parts.saddle_minus.norm(),
        total_modulus: parts.total.norm(),
        upper_envelope: upper,
        lower_envelope: lower,
        ratio: pole_saddle_ratio(x, t, src)?,
        margin_positive: mp,
        margin_negative: mm,
        extremum_times: envelope_extremum_times(src),
        transient_time_paper: paper,
        transient_time_numeric: numeric,
        notes,
    })
}

pub fn forerunner(ctx: &Context, x: f64, omega0: f64, t: Option<f64>) -> Outcome<PathBuf> {
    let report = forerunner_report(x, omega0, t)?;
    let path = ctx.path(&format!("forerunner_x{x}_w{omega0}.json"))?;
    write_json(&path, &report)?;
    Ok(path)
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn check(name: &str, value: f64, tolerance: f64) -> Check {
    Check {
        name: name.to_string(),
        value,
        tolerance,
        passed: value <= tolerance,
    }
}

/// Runs the series, pole-form, FDTD-oracle and Laplace cross-checks.
pub fn validation_checks(ctx: &Context) -> Outcome<Vec<Check>> {
    let s = ctx.series();
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for x in [1.0, 10.0] {
        for w in [0.3, 0.9] {
            let src = SourceSpec::new(w)?;
            for dt in [0.5, 5.0, 20.0] {
                let t = x + dt;
                let a = psi_rel(x, t, src, &s)?.amplitude;
                worst = worst.max((a - psi_rel_pole_form(x, t, src)?).norm());
            }
        }
    }
    out.push(check("series vs pole form", worst, 1e-8));

    let mut worst = 0.0f64;
    for x in [0.1, 1.0, 10.0] {
        for w in [0.1, 0.5, 0.99] {
            let d = psi_rel(x, x, SourceSpec::new(w)?, &s)?.density;
            worst = worst.max((d - 1.0).abs());
        }
    }
    out.push(check("density at the front", worst, 0.0));

    let src = SourceSpec::new(0.9)?;
    let grid = GridSpec::relativistic(ctx.cfg.kg_dx, 20.0, vec![1.0]);
    let e = trace_error(Solver::KleinGordon, src, &evolve_kg(src, &grid)?, 0.0)?;
    out.push(check("Klein-Gordon FDTD vs series", e, 1e-3));

    let src = SourceSpec::new(0.5)?;
    let grid = GridSpec::schrodinger(ctx.cfg.nr_dx, 30.0, vec![2.0]);
    let e = trace_error(Solver::Schrodinger, src, &evolve_schrodinger(src, &grid)?, 0.1)?;
    out.push(check("Schrodinger FDTD vs w-function", e, 2e-3));

    let mut worst = 0.0f64;
    for x in [0.5, 1.0, 2.0] {
        for sv in [Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0)] {
            for w in [0.3, 0.9] {
                worst = worst.max(laplace_check(x, sv, SourceSpec::new(w)?, None)?.residual);
            }
        }
    }
    out.push(check("Laplace-domain identity", worst, 1e-6));
    Ok(out)
}

/// Writes the check report and returns it with its path.
pub fn validate(ctx: &Context) -> Outcome<(PathBuf, Vec<Check>)> {
    let checks = validation_checks(ctx)?;
    let path = ctx.path("validate.json")?;
    write_json(&path, &checks)?;
    Ok((path, checks))
}

/// Validation failure naming the failed checks, if any.
pub fn validation_failure(checks: &[Check]) -> Option<Failure> {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    (!failed.is_empty()).then(|| Failure::Validation(failed.join(", ")))
}

#[derive(Debug, Serialize)]
pub struct BasinReport {
    pub omega0: f64,
    pub solver: ScanSolver,
    pub entries: Vec<BasinEntry>,
    pub minimum: Option<BasinMinimum>,
}

pub fn basin_report(ctx: &Context, omega0: f64, xs: &[f64], solver: ScanSolver) -> Outcome<BasinReport> {
    let src = SourceSpec::new(omega0)?;
    let entries = basin_scan(src, xs, solver, &ctx.scan_options())?;
    Ok(BasinReport {
        omega0,
        solver,
        minimum: basin_minimum(&entries),
        entries,
    })
}

pub fn basin_rows(report: &BasinReport) -> Vec<Vec<f64>> {
    report
        .entries
        .iter()
        .map(|e| vec![e.x, e.t_arrival.unwrap_or(f64::NAN), e.value.unwrap_or(f64::NAN)])
        .collect()
}

/// `n` evenly spaced positions from `x0` to `x1` inclusive.
pub fn linspace(x0: f64, x1: f64, n: usize) -> Outcome<Vec<f64>> {
    if n == 0 || !(x0.is_finite() && x1.is_finite()) || x1 < x0 || (n == 1 && x1 != x0) {
        return Err(Error::Config(format!("bad position grid: {x0}..{x1} with {n} points")).into());
    }
    if n == 1 {
        return Ok(vec![x0]);
    }
    Ok((0..n).map(|i| x0 + (x1 - x0) * i as f64 / (n - 1) as f64).collect())
}

pub fn scan_basin(
    ctx: &Context,
    omega0: f64,
    x0: f64,
    x1: f64,
    n: usize,
    solver: ScanSolver,
) -> Outcome<Vec<PathBuf>> {
    let report = basin_report(ctx, omega0, &linspace(x0, x1, n)?, solver)?;
    let tag = match solver {
        ScanSolver::Relativistic => "rel",
        ScanSolver::Nonrelativistic => "nr",
    };
    let csv = ctx.path(&format!("basin_{tag}_w{omega0}.csv"))?;
    write_csv(&csv, &["x", "t_arrival", "value"], &basin_rows(&report))?;
    let json = ctx.path(&format!("basin_{tag}_w{omega0}.json"))?;
    write_json(&json, &report)?;
    Ok(vec![csv, json])
}

pub fn tpmin_rows(fit: &TpminFit) -> Vec<Vec<f64>> {
    fit.points
        .iter()
        .map(|p| vec![p.omega0, p.inv_kappa0_sq, p.t_p_min, p.x_at_min])
        .collect()
}

pub const TPMIN_HEADER: [&str; 4] = ["omega0", "inv_kappa0_sq", "t_p_min", "x_at_min"];

pub fn fit_tpmin(ctx: &Context, omega0_list: &[f64], solver: ScanSolver) -> Outcome<Vec<PathBuf>> {
    let fit = tpmin_vs_kappa(omega0_list, solver, &ctx.scan_options())?;
    let csv = ctx.path("tpmin.csv")?;
    write_csv(&csv, &TPMIN_HEADER, &tpmin_rows(&fit))?;
    let json = ctx.path("tpmin.json")?;
    write_json(&json, &fit)?;
    Ok(vec![csv, json])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(1.0, 3.0, 3).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(linspace(2.0, 2.0, 1).unwrap(), vec![2.0]);
        assert!(linspace(1.0, 3.0, 0).is_err());
        assert!(linspace(3.0, 1.0, 4).is_err());
        assert!(linspace(1.0, 3.0, 1).is_err());
    }

    #[test]
    fn report_at_tau_has_unit_ratio_scale() {
        let r = forerunner_report(10.0, 0.99, None).unwrap();
        assert!((r.t - r.tau).abs() < 1e-12);
        assert!(r.pole_modulus > 0.0);
        assert!(r.upper_envelope >= r.lower_envelope);
        assert!(r.transient_time_paper.is_some());
        // at x = 10, omega0 = 0.99 the ratio reaches one at tau itself
        assert!((r.transient_time_numeric.unwrap() - r.tau).abs() < 1e-6 * r.tau);
    }

    #[test]
    fn node_maps_to_nan() {
        let src = SourceSpec::new(0.5).unwrap();
        let w = RelSeries::new(5.0, src);
        assert!(omega_av_or_nan(&w, 1.0, 1e-3).unwrap().is_nan());
    }
}
