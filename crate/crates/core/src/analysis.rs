//! Diagnostics on computed fields: instantaneous frequency, density
//! extrema and envelopes, arrival-time scans, and the Laplace-domain check.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::psi_saddle;
use crate::dispersion::{kappa0, Dispersion, SourceSpec};
use crate::error::{ensure_finite, Error, Result};
use crate::exact::{psi_nonrel, psi_rel, SeriesSettings};
use crate::fdtd::ProbeTrace;

/// Field history at a fixed position, evaluable at any time.
pub trait Waveform: Sync {
    fn x(&self) -> f64;
    fn amplitude(&self, t: f64) -> Result<Complex64>;
    /// Time before which the field vanishes identically.
    fn onset(&self) -> f64;
}

/// Exact relativistic field at position `x`.
#[derive(Debug, Clone, Copy)]
pub struct RelSeries {
    pub x: f64,
    pub src: SourceSpec,
    pub settings: SeriesSettings,
}

impl RelSeries {
    pub fn new(x: f64, src: SourceSpec) -> Self {
        RelSeries {
            x,
            src,
            settings: SeriesSettings::default(),
        }
    }
}

impl Waveform for RelSeries {
    fn x(&self) -> f64 {
        self.x
    }
    fn amplitude(&self, t: f64) -> Result<Complex64> {
        Ok(psi_rel(self.x, t, self.src, &self.settings)?.amplitude)
    }
    fn onset(&self) -> f64 {
        self.x
    }
}

/// Exact nonrelativistic field at position `x`.
#[derive(Debug, Clone, Copy)]
pub struct NonrelExact {
    pub x: f64,
    pub src: SourceSpec,
}

impl Waveform for NonrelExact {
    fn x(&self) -> f64 {
        self.x
    }
    fn amplitude(&self, t: f64) -> Result<Complex64> {
        Ok(psi_nonrel(self.x, t, self.src)?.amplitude)
    }
    fn onset(&self) -> f64 {
        0.0
    }
}

/// Saddle-pole approximation at position `x`; zero up to the front.
#[derive(Debug, Clone, Copy)]
pub struct SaddleModel {
    pub x: f64,
    pub src: SourceSpec,
}

impl Waveform for SaddleModel {
    fn x(&self) -> f64 {
        self.x
    }
    fn amplitude(&self, t: f64) -> Result<Complex64> {
        if t <= self.x {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(psi_saddle(self.x, t, self.src)?.total)
    }
    fn onset(&self) -> f64 {
        self.x
    }
}

impl Waveform for ProbeTrace {
    fn x(&self) -> f64 {
        self.x
    }
    fn amplitude(&self, t: f64) -> Result<Complex64> {
        self.interpolate(t).ok_or_else(|| {
            Error::domain(format!("time {t} outside the recorded trace at x = {}", self.x))
        })
    }
    fn onset(&self) -> f64 {
        // first recorded non-zero sample
        let k = self.amplitudes.iter().position(|a| a.norm() > 0.0);
        match k {
            Some(0) | None => self.times.first().copied().unwrap_or(0.0),
            Some(k) => self.times[k - 1],
        }
    }
}

/// Modulus below which the phase of the field is considered undefined.
pub const NODE_THRESHOLD: f64 = 1e-12;

/// Instantaneous frequency `-Im[psi_t / psi]` by finite differences.
///
/// The step starts at `delta` and is halved until two successive estimates
/// agree to 1e-4 relative. The centered difference is replaced by a
/// one-sided second-order one when `t - delta` would reach back before the
/// onset of the field.
pub fn omega_av_numeric(wave: &dyn Waveform, t: f64, delta: f64) -> Result<f64> {
    ensure_finite("t", t)?;
    ensure_finite("delta", delta)?;
    if delta <= 0.0 {
        return Err(Error::domain(format!("delta must be > 0, got {delta}")));
    }
    let psi = wave.amplitude(t)?;
    let modulus = psi.norm();
    if modulus <= NODE_THRESHOLD {
        return Err(Error::UndefinedFrequency { t, modulus });
    }
    let estimate = |h: f64| -> Result<f64> {
        let d = if t - h >= wave.onset() {
            (wave.amplitude(t + h)? - wave.amplitude(t - h)?) / (2.0 * h)
        } else {
            (-3.0 * psi + 4.0 * wave.amplitude(t + h)? - wave.amplitude(t + 2.0 * h)?) / (2.0 * h)
        };
        Ok(-(d / psi).im)
    };
    let mut h = delta;
    let mut prev = estimate(h)?;
    for _ in 0..40 {
        h *= 0.5;
        let cur = estimate(h)?;
        if (cur - prev).abs() <= 1e-4 * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Convergence {
        terms: 40,
        last_term: h,
    })
}

/// Densities of a field sampled at increasing times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensitySeries {
    pub x: f64,
    pub times: Vec<f64>,
    pub densities: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
}

impl DensitySeries {
    pub fn new(x: f64, times: Vec<f64>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if times.len() != amplitudes.len() {
            return Err(Error::domain("times and amplitudes differ in length"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("times must be strictly increasing"));
        }
        let densities = amplitudes.iter().map(|a| a.norm_sqr()).collect();
        Ok(DensitySeries {
            x,
            times,
            densities,
            amplitudes,
        })
    }

    /// Evaluates the waveform at every time, in parallel.
    pub fn sample(wave: &dyn Waveform, times: Vec<f64>) -> Result<Self> {
        let amplitudes = times
            .par_iter()
            .map(|&t| wave.amplitude(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(wave.x(), times, amplitudes)
    }

    /// Uniform samples `t0, t0 + dt, ...` up to and including `t1`.
    pub fn sample_uniform(wave: &dyn Waveform, t0: f64, t1: f64, dt: f64) -> Result<Self> {
        Self::sample(wave, uniform_times(t0, t1, dt)?)
    }

    pub fn from_trace(trace: &ProbeTrace) -> Result<Self> {
        Self::new(trace.x, trace.times.clone(), trace.amplitudes.clone())
    }
}

/// Grid `t0, t0 + dt, ...` not exceeding `t1` by more than roundoff.
pub fn uniform_times(t0: f64, t1: f64, dt: f64) -> Result<Vec<f64>> {
    ensure_finite("t0", t0)?;
    ensure_finite("t1", t1)?;
    if !(dt > 0.0 && dt.is_finite()) || t1 < t0 {
        return Err(Error::domain(format!(
            "bad time grid: t0 = {t0}, t1 = {t1}, dt = {dt}"
        )));
    }
    let n = ((t1 - t0) / dt + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| t0 + k as f64 * dt).collect())
}

/// A located extremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub maxima: Vec<Extremum>,
    pub minima: Vec<Extremum>,
    /// Highest local maximum of the sequence of density maxima.
    pub upper_env_max: Option<Extremum>,
    /// Highest local maximum of the sequence of density minima.
    pub lower_env_max: Option<Extremum>,
}

// Vertex of the parabola through three points.
fn parabola_vertex(t: [f64; 3], y: [f64; 3]) -> Extremum {
    let (d1, d2) = (t[1] - t[0], t[2] - t[1]);
    let s1 = (y[1] - y[0]) / d1;
    let s2 = (y[2] - y[1]) / d2;
    let a = (s2 - s1) / (t[2] - t[0]);
    if a == 0.0 {
        return Extremum { t: t[1], value: y[1] };
    }
    // derivative of the interpolant: s1 + a (2 tau - t0 - t1)
    let tv = 0.5 * (t[0] + t[1]) - s1 / (2.0 * a);
    let tv = tv.clamp(t[0], t[2]);
    let value = y[0] + s1 * (tv - t[0]) + a * (tv - t[0]) * (tv - t[1]);
    Extremum { t: tv, value }
}

/// Local extrema of `y(t)`, refined by quadratic interpolation. Plateaus
/// count once, at their first sample.
fn local_extrema(t: &[f64], y: &[f64], maxima: bool) -> Vec<Extremum> {
    let s = if maxima { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    let n = y.len();
    let mut i = 1;
    while i + 1 < n {
        if s * (y[i] - y[i - 1]) > 0.0 {
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && s * (y[i] - y[j + 1]) > 0.0 {
                let e = if j == i {
                    parabola_vertex([t[i - 1], t[i], t[i + 1]], [y[i - 1], y[i], y[i + 1]])
                } else {
                    Extremum { t: t[i], value: y[i] }
                };
                out.push(e);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

fn highest_local_max(seq: &[Extremum]) -> Option<Extremum> {
    let t: Vec<f64> = seq.iter().map(|e| e.t).collect();
    let y: Vec<f64> = seq.iter().map(|e| e.value).collect();
    local_extrema(&t, &y, true)
        .into_iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
}

/// Locates density maxima and minima and the maxima of their envelopes.
pub fn find_density_peaks(series: &DensitySeries) -> Result<EnvelopeReport> {
    if series.times.len() < 5 {
        return Err(Error::domain(format!(
            "need at least 5 samples, got {}",
            series.times.len()
        )));
    }
    let maxima = local_extrema(&series.times, &series.densities, true);
    let minima = local_extrema(&series.times, &series.densities, false);
    let upper_env_max = if maxima.len() >= 2 {
        highest_local_max(&maxima)
    } else {
        None
    };
    let lower_env_max = if minima.len() >= 2 && maxima.len() >= 2 {
        highest_local_max(&minima)
    } else {
        None
    };
    Ok(EnvelopeReport {
        maxima,
        minima,
        upper_env_max,
        lower_env_max,
    })
}

/// Which closed form a scan evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanSolver {
    Relativistic,
    Nonrelativistic,
}

impl ScanSolver {
    fn dispersion(self) -> Dispersion {
        match self {
            ScanSolver::Relativistic => Dispersion::Relativistic,
            ScanSolver::Nonrelativistic => Dispersion::Nonrelativistic,
        }
    }
}

/// Sampling controls of [`basin_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Time step of the density samples.
    pub dt: f64,
    /// Largest window, as a multiple of the initial one, before giving up.
    pub max_growth: f64,
    /// Series control; scans reach `eta` of several thousand, so the term
    /// cap is raised above the pointwise default.
    pub series: SeriesSettings,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            dt: 0.02,
            max_growth: 16.0,
            series: SeriesSettings {
                n_max: 50_000,
                ..SeriesSettings::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasinEntry {
    pub x: f64,
    /// Arrival time of the lower-envelope maximum (relativistic) or of the
    /// first density maximum (nonrelativistic, whose first forerunner is a
    /// single hump without interference minima).
    pub t_arrival: Option<f64>,
    pub value: Option<f64>,
    /// Why no arrival time was extracted.
    pub failure: Option<String>,
}

fn lower_envelope_arrival(
    src: SourceSpec,
    x: f64,
    solver: ScanSolver,
    opts: &ScanOptions,
) -> Result<Option<Extremum>> {
    let k = kappa0(src, solver.dispersion());
    let tau = x / k;
    let start = match solver {
        ScanSolver::Relativistic => x,
        ScanSolver::Nonrelativistic => 0.0,
    } + opts.dt;
    let base = 3.0 * tau + 4.0 / (k * k) + 30.0;
    let mut span = base;
    let mut times = uniform_times(start, start + span, opts.dt)?;
    let wave: Box<dyn Waveform> = match solver {
        ScanSolver::Relativistic => Box::new(RelSeries {
            x,
            src,
            settings: opts.series,
        }),
        ScanSolver::Nonrelativistic => Box::new(NonrelExact { x, src }),
    };
    let mut series = DensitySeries::sample(wave.as_ref(), times.clone())?;
    loop {
        let report = find_density_peaks(&series)?;
        let settled = match solver {
            // the maximum must be followed by at least two minima to be trusted
            ScanSolver::Relativistic => report
                .lower_env_max
                .filter(|e| report.minima.iter().filter(|m| m.t > e.t).count() >= 2),
            ScanSolver::Nonrelativistic => report.maxima.first().copied(),
        };
        if settled.is_some() || span >= base * opts.max_growth {
            return Ok(settled);
        }
        let extra = uniform_times(start + span + opts.dt, start + 2.0 * span, opts.dt)?;
        span *= 2.0;
        let more = DensitySeries::sample(wave.as_ref(), extra.clone())?;
        times.extend(extra);
        let mut amplitudes = series.amplitudes;
        amplitudes.extend(more.amplitudes);
        series = DensitySeries::new(x, times.clone(), amplitudes)?;
    }
}

/// Arrival time of the forerunner at each position. Positions where no
/// arrival could be extracted are flagged and the scan continues.
pub fn basin_scan(
    src: SourceSpec,
    x_grid: &[f64],
    solver: ScanSolver,
    opts: &ScanOptions,
) -> Result<Vec<BasinEntry>> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::domain(format!("scan step must be > 0, got {}", opts.dt)));
    }
    for &x in x_grid {
        ensure_finite("x", x)?;
        if x <= 0.0 {
            return Err(Error::domain(format!("scan positions must be > 0, got {x}")));
        }
    }
    x_grid
        .iter()
        .map(|&x| match lower_envelope_arrival(src, x, solver, opts) {
            Ok(Some(e)) => Ok(BasinEntry {
                x,
                t_arrival: Some(e.t),
                value: Some(e.value),
                failure: None,
            }),
            Ok(None) => Ok(BasinEntry {
                x,
                t_arrival: None,
                value: None,
                failure: Some("no lower-envelope maximum".into()),
            }),
            Err(e @ (Error::Convergence { .. } | Error::Range(_))) => Ok(BasinEntry {
                x,
                t_arrival: None,
                value: None,
                failure: Some(e.to_string()),
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// Bottom of an arrival-time basin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasinMinimum {
    pub x: f64,
    pub t_arrival: f64,
}

/// Bottom of the basin: smallest arrival time, refined by a parabola
/// through the neighbouring scan points. `None` unless the minimum is
/// interior to the scanned positions.
pub fn basin_minimum(entries: &[BasinEntry]) -> Option<BasinMinimum> {
    let pts: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|e| e.t_arrival.map(|t| (e.x, t)))
        .collect();
    let (k, _) = pts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
    if k == 0 || k + 1 == pts.len() {
        return None;
    }
    let v = parabola_vertex(
        [pts[k - 1].0, pts[k].0, pts[k + 1].0],
        [pts[k - 1].1, pts[k].1, pts[k + 1].1],
    );
    Some(BasinMinimum {
        x: v.t,
        t_arrival: v.value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TpminPoint {
    pub omega0: f64,
    pub inv_kappa0_sq: f64,
    pub t_p_min: f64,
    pub x_at_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TpminFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: Vec<TpminPoint>,
    /// Frequencies left out, with the reason.
    pub excluded: Vec<(f64, String)>,
}

/// Positions scanned for one carrier: the basin sits at `x ~ 0.4 / kappa0`.
pub fn basin_grid(src: SourceSpec, solver: ScanSolver, n: usize) -> Vec<f64> {
    let k = kappa0(src, solver.dispersion());
    (0..n)
        .map(|i| (0.1 + 1.1 * i as f64 / (n.max(2) - 1) as f64) / k)
        .collect()
}

/// Basin-bottom arrival time against `1 / kappa0^2`, with a least-squares
/// line through the points.
pub fn tpmin_vs_kappa(omega0_list: &[f64], solver: ScanSolver, opts: &ScanOptions) -> Result<TpminFit> {
    if omega0_list.len() < 5 {
        return Err(Error::domain(format!(
            "need at least 5 frequencies, got {}",
            omega0_list.len()
        )));
    }
    let mut sorted = omega0_list.to_vec();
    sorted.sort_by(f64::total_cmp);
    let results: Vec<(f64, Result<Option<TpminPoint>>)> = sorted
        .par_iter()
        .map(|&w| {
            let r = (|| {
                let src = SourceSpec::new(w)?;
                let grid = basin_grid(src, solver, 12);
                let entries = basin_scan(src, &grid, solver, opts)?;
                let k = kappa0(src, solver.dispersion());
                Ok(basin_minimum(&entries).map(|m| TpminPoint {
                    omega0: w,
                    inv_kappa0_sq: 1.0 / (k * k),
                    t_p_min: m.t_arrival,
                    x_at_min: m.x,
                }))
            })();
            (w, r)
        })
        .collect();
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for (w, r) in results {
        match r {
            Ok(Some(p)) => points.push(p),
            Ok(None) => excluded.push((w, "basin has no interior minimum".to_string())),
            Err(e) if e.is_configuration() => return Err(e),
            Err(e) => excluded.push((w, e.to_string())),
        }
    }
    if points.len() < 3 {
        return Err(Error::Fit(format!(
            "only {} frequencies produced a basin minimum",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.inv_kappa0_sq).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.t_p_min).collect();
    let (slope, intercept, r2) = linear_fit(&xs, &ys)?;
    Ok(TpminFit {
        slope,
        intercept,
        r2,
        points,
        excluded,
    })
}

/// Least-squares line `y = slope x + intercept` and its coefficient of
/// determination.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(Error::Fit("need at least two paired points".into()));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r2))
}

/// Outcome of the Laplace-domain identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceReport {
    pub integral: Complex64,
    pub target: Complex64,
    pub residual: f64,
    pub horizon: f64,
    /// Bound on the integral beyond the horizon.
    pub tail_bound: f64,
}

/// Largest tail the horizon may leave out.
pub const LAPLACE_TAIL_TOLERANCE: f64 = 1e-9;
const LAPLACE_QUAD_TOLERANCE: f64 = 1e-11;
// bound on |psi_rel| used for the tail estimate
const FIELD_BOUND: f64 = 2.0;

/// Integrates `psi_rel(x, t) exp(-s t)` over `[x, horizon]` and compares it
/// with the transform `exp(-p x) / (s + i omega0)`, `p = sqrt(s^2 + 1)`,
/// `Re p > 0`. Without a horizon one is chosen so the neglected tail stays
/// below [`LAPLACE_TAIL_TOLERANCE`].
pub fn laplace_check(x: f64, s: Complex64, src: SourceSpec, horizon: Option<f64>) -> Result<LaplaceReport> {
    ensure_finite("x", x)?;
    ensure_finite("Re s", s.re)?;
    ensure_finite("Im s", s.im)?;
    if x < 0.0 {
        return Err(Error::domain(format!("position must be >= 0, got {x}")));
    }
    if s.re <= 0.0 {
        return Err(Error::domain(format!("Re s must be > 0, got {}", s.re)));
    }
    let auto = x + (FIELD_BOUND / (LAPLACE_TAIL_TOLERANCE * s.re)).ln() / s.re;
    let horizon = horizon.unwrap_or(auto);
    let tail_bound = FIELD_BOUND * (-s.re * horizon).exp() / s.re;
    if !(horizon > x) || tail_bound > LAPLACE_TAIL_TOLERANCE {
        return Err(Error::Horizon {
            tail_bound,
            tolerance: LAPLACE_TAIL_TOLERANCE,
        });
    }
    let settings = SeriesSettings::default();
    let f = |t: f64| -> Result<Complex64> {
        Ok(psi_rel(x, t, src, &settings)?.amplitude * (-s * t).exp())
    };
    // panels no longer than a quarter of the fastest oscillation period
    let freq = 1.0 + s.im.abs() + src.omega0();
    let panel = (std::f64::consts::FRAC_PI_2 / freq).min(1.0);
    let n = ((horizon - x) / panel).ceil().max(1.0) as usize;
    let h = (horizon - x) / n as f64;
    let integral = (0..n)
        .into_par_iter()
        .map(|k| {
            let a = x + k as f64 * h;
            adaptive_gk(&f, a, a + h, LAPLACE_QUAD_TOLERANCE / n as f64, 30)
        })
        .try_reduce(|| Complex64::new(0.0, 0.0), |a, b| Ok(a + b))?;
    let p = (s * s + 1.0).sqrt();
    let p = if p.re < 0.0 { -p } else { p };
    let target = (-p * x).exp() / (s + Complex64::new(0.0, src.omega0()));
    Ok(LaplaceReport {
        integral,
        target,
        residual: (integral - target).norm(),
        horizon,
        tail_bound,
    })
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

// 7-point Gauss / 15-point Kronrod pair; returns (Kronrod value, error estimate).
fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * GAUSS_WEIGHTS[3];
    for j in 0..7 {
        let d = h * GK_NODES[j];
        let pair = f(c - d)? + f(c + d)?;
        kronrod += pair * GK_WEIGHTS[j];
        if j % 2 == 1 {
            gauss += pair * GAUSS_WEIGHTS[j / 2];
        }
    }
    Ok((kronrod * h, ((kronrod - gauss) * h).norm()))
}

fn adaptive_gk<F>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let (v, err) = gk15(f, a, b)?;
    if err <= tol.max(1e-15 * v.norm()) {
        return Ok(v);
    }
    if depth == 0 {
        return Err(Error::Convergence {
            terms: 0,
            last_term: err,
        });
    }
    let m = 0.5 * (a + b);
    Ok(adaptive_gk(f, a, m, 0.5 * tol, depth - 1)? + adaptive_gk(f, m, b, 0.5 * tol, depth - 1)?)
}
