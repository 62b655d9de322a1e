//! Datasets behind the figures, at the parameters quoted in their captions.
//!
//! | id | content |
//! |----|---------|
//! | 1 | steepest-descent paths, x = 1, t = 1.5, omega0 = 0.85 |
//! | 2 | saddle densities at x = 100, omega0 = 0.99 |
//! | 3 | density envelopes at x = 100, omega0 = 0.99, 0.97, 0.5 |
//! | 4 | envelope extremum times / tau against omega0 |
//! | 5 | exact and one-term front densities at x = 10, omega0 = 0.99 |
//! | 6 | densities and omega_av at x = 0.1 |
//! | 7 | arrival-time basin at omega0 = 0.98 |
//! | 8 | t_p_min against 1/kappa0^2, omega0 from 0.95 to 0.999 |
//! | 9 | density and omega_av at x = 100, omega0 = 0.5 |

use std::path::PathBuf;

use forerunner_core::analysis::{tpmin_vs_kappa, NonrelExact, ScanSolver, Waveform};
use forerunner_core::asymptotics::{density_envelopes, envelope_extremum_times, psi_saddle, sdp_contour};
use forerunner_core::dispersion::{kappa0, traversal_time};
use forerunner_core::exact::{psi_nonrel, psi_rel_front};
use forerunner_core::{Dispersion, Error, SourceSpec};
use serde::Serialize;

use crate::commands::{basin_report, linspace, omega_av_or_nan, tpmin_rows, Context, Outcome, TPMIN_HEADER};
use crate::output::{write_csv, write_json};

pub const FIGURE_IDS: [u32; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

const REL: Dispersion = Dispersion::Relativistic;

fn src(w: f64) -> Outcome<SourceSpec> {
    Ok(SourceSpec::new(w)?)
}

fn csv(ctx: &Context, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Outcome<PathBuf> {
    let path = ctx.path(name)?;
    write_csv(&path, header, rows)?;
    Ok(path)
}

/// Writes the dataset of figure `id`.
pub fn figure(ctx: &Context, id: u32) -> Outcome<Vec<PathBuf>> {
    match id {
        1 => sdp(ctx),
        2 => saddle_densities(ctx),
        3 => envelopes(ctx),
        4 => extremum_times(ctx),
        5 => front(ctx),
        6 => small_x(ctx),
        7 => basin(ctx),
        8 => tpmin(ctx),
        9 => far_field(ctx),
        _ => Err(Error::Config(format!("unknown figure id {id}; known ids are 1 to 9")).into()),
    }
}

#[derive(Serialize)]
struct SdpMarkers {
    x: f64,
    t: f64,
    omega0: f64,
    omega_s: f64,
    inv_omega_s: f64,
    asymptotes: (f64, f64),
    skipped: usize,
}

fn sdp(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let (x, t, w) = (1.0, 1.5, 0.85);
    let c = sdp_contour(x, t, 400)?;
    let rows: Vec<Vec<f64>> = c
        .plus
        .iter()
        .map(|z| vec![1.0, z.re, z.im])
        .chain(c.minus.iter().map(|z| vec![-1.0, z.re, z.im]))
        .collect();
    let a = csv(ctx, "fig1_sdp.csv", &["saddle", "re", "im"], &rows)?;
    let b = ctx.path("fig1_sdp.json")?;
    write_json(
        &b,
        &SdpMarkers {
            x,
            t,
            omega0: w,
            omega_s: c.omega_s,
            inv_omega_s: 1.0 / c.omega_s,
            asymptotes: c.asymptotes,
            skipped: c.skipped,
        },
    )?;
    Ok(vec![a, b])
}

fn saddle_densities(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let (x, s) = (100.0, src(0.99)?);
    let tau = traversal_time(x, s, REL)?;
    let rows = linspace(x + 0.5, 2.0 * tau, 4000)?
        .into_iter()
        .map(|t| {
            let p = psi_saddle(x, t, s)?;
            let nr = psi_nonrel(x, t, s)?.density;
            Ok(vec![
                t,
                p.saddle_plus.norm_sqr(),
                p.saddle_minus.norm_sqr(),
                (p.saddle_plus + p.saddle_minus).norm_sqr(),
                nr,
            ])
        })
        .collect::<Outcome<Vec<_>>>()?;
    let header = ["t", "saddle_plus", "saddle_minus", "saddle_sum", "nonrel"];
    Ok(vec![csv(ctx, "fig2_saddle_densities.csv", &header, &rows)?])
}

fn envelopes(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let x = 100.0;
    let mut rows = Vec::new();
    for w in [0.99, 0.97, 0.5] {
        let s = src(w)?;
        let tau = traversal_time(x, s, REL)?;
        for t in linspace(x + 0.05, 3.0 * tau, 2000)? {
            let (u, l) = density_envelopes(x, t, s)?;
            rows.push(vec![w, t, t / tau, u, l]);
        }
    }
    let header = ["omega0", "t", "t_over_tau", "upper", "lower"];
    Ok(vec![csv(ctx, "fig3_envelopes.csv", &header, &rows)?])
}

fn extremum_times(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let rows = (1..200)
        .map(|i| {
            let w = i as f64 * 0.005;
            let e = envelope_extremum_times(src(w)?);
            let v = |x: forerunner_core::asymptotics::ExtremumTime| x.value().unwrap_or(f64::NAN);
            Ok(vec![
                w,
                e.kappa0,
                v(e.t_max_x_upper),
                v(e.t_min_x_upper),
                v(e.t_max_t_upper),
                v(e.t_min_t_upper),
                v(e.t_max_x_lower),
                v(e.t_max_t_lower),
            ])
        })
        .collect::<Outcome<Vec<_>>>()?;
    let header = [
        "omega0",
        "kappa0",
        "t_max_x_upper",
        "t_min_x_upper",
        "t_max_t_upper",
        "t_min_t_upper",
        "t_max_x_lower",
        "t_max_t_lower",
    ];
    Ok(vec![csv(ctx, "fig4_extremum_times.csv", &header, &rows)?])
}

fn front(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let (x, s) = (10.0, src(0.99)?);
    let wave = ctx.rel(x, s);
    let rows = linspace(x, x + 10.0, 2001)?
        .into_iter()
        .map(|t| Ok(vec![t, wave.amplitude(t)?.norm_sqr(), psi_rel_front(x, t, s)?.norm_sqr()]))
        .collect::<Outcome<Vec<_>>>()?;
    Ok(vec![csv(ctx, "fig5_front.csv", &["t", "exact", "one_term"], &rows)?])
}

fn small_x(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let x = 0.1;
    let delta = ctx.cfg.omega_av_delta;
    let ts = linspace(0.01, 20.0, 2000)?;
    let mut dens = Vec::new();
    for w in [0.99, 0.8, 0.1] {
        let s = src(w)?;
        let (rel, nr) = (ctx.rel(x, s), NonrelExact { x, src: s });
        for &t in &ts {
            dens.push(vec![w, t, rel.amplitude(t)?.norm_sqr(), nr.amplitude(t)?.norm_sqr()]);
        }
    }
    let mut freq = Vec::new();
    for w in [0.99, 0.1] {
        let s = src(w)?;
        let (rel, nr) = (ctx.rel(x, s), NonrelExact { x, src: s });
        for &t in &ts {
            freq.push(vec![w, t, omega_av_or_nan(&rel, t, delta)?, omega_av_or_nan(&nr, t, delta)?]);
        }
    }
    Ok(vec![
        csv(ctx, "fig6_density.csv", &["omega0", "t", "rel", "nonrel"], &dens)?,
        csv(ctx, "fig6_omega_av.csv", &["omega0", "t", "rel", "nonrel"], &freq)?,
    ])
}

fn basin(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let w = 0.98;
    let xs = linspace(0.5, 60.0, 24)?;
    let rel = basin_report(ctx, w, &xs, ScanSolver::Relativistic)?;
    let nr = basin_report(ctx, w, &xs, ScanSolver::Nonrelativistic)?;
    let rows: Vec<Vec<f64>> = rel
        .entries
        .iter()
        .zip(&nr.entries)
        .map(|(a, b)| {
            vec![
                a.x,
                a.t_arrival.unwrap_or(f64::NAN),
                b.t_arrival.unwrap_or(f64::NAN),
            ]
        })
        .collect();
    let a = csv(ctx, "fig7_basin.csv", &["x", "t_rel", "t_nonrel"], &rows)?;
    let b = ctx.path("fig7_basin.json")?;
    write_json(&b, &[rel, nr])?;
    Ok(vec![a, b])
}

fn tpmin(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let ws = [0.95, 0.96, 0.97, 0.98, 0.99, 0.995, 0.999];
    let fit = tpmin_vs_kappa(&ws, ScanSolver::Relativistic, &ctx.scan_options())?;
    let a = csv(ctx, "fig8_tpmin.csv", &TPMIN_HEADER, &tpmin_rows(&fit))?;
    let b = ctx.path("fig8_tpmin.json")?;
    write_json(&b, &fit)?;
    Ok(vec![a, b])
}

fn far_field(ctx: &Context) -> Outcome<Vec<PathBuf>> {
    let (x, s) = (100.0, src(0.5)?);
    let delta = ctx.cfg.omega_av_delta;
    let (rel, nr) = (ctx.rel(x, s), NonrelExact { x, src: s });
    let stationary = (-2.0 * kappa0(s, REL) * x).exp();
    let rows = linspace(x + 0.1, 4.0 * x, 3000)?
        .into_iter()
        .map(|t| {
            Ok(vec![
                t,
                rel.amplitude(t)?.norm_sqr(),
                omega_av_or_nan(&rel, t, delta)?,
                omega_av_or_nan(&nr, t, delta)?,
                stationary,
            ])
        })
        .collect::<Outcome<Vec<_>>>()?;
    let header = ["t", "density", "omega_av", "omega_av_nonrel", "stationary_density"];
    Ok(vec![csv(ctx, "fig9_far_field.csv", &header, &rows)?])
}
