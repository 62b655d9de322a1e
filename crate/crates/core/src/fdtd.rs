//! Time-domain reference solvers on a uniform grid.
//!
//! The Klein-Gordon equation `psi_tt - psi_xx + psi = 0` is advanced either
//! on the characteristic grid `dt = dx` or with the plain three-level
//! leapfrog stencil; the Schrodinger equation
//! `i psi_t = -psi_xx / 2 + psi` with the trapezoidal (Crank-Nicolson) rule.
//! Both start from rest and pin `psi(0, t) = exp(-i omega0 t)` for `t >= 0`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::SourceSpec;
use crate::error::{Error, Result};
use crate::exact::{psi_nonrel, psi_rel, SeriesSettings};

/// Cells per step above which the leapfrog sweep is split across threads.
const PARALLEL_CELLS: usize = 1 << 14;

/// Tail level at `0.9 L` above which a Schrodinger run is rejected.
pub const TAIL_LIMIT: f64 = 1e-6;

/// Klein-Gordon discretization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum KgScheme {
    /// Diamond scheme on the light-cone grid (`courant = 1`). The front
    /// `x = t` falls on grid points and carries its exact value 1; the cell
    /// whose diamond straddles the front integrates the mass term over the
    /// inside half only. Second order up to the front.
    #[default]
    Characteristic,
    /// `psi^{n+1} = 2 psi^n - psi^{n-1} + r^2 D2 psi^n - dt^2 psi^n` for any
    /// stable `r`. The jump at the front smears over many cells and the
    /// error behind it is first order.
    Leapfrog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dx: f64,
    /// `dt = courant * dx`.
    pub courant: f64,
    pub domain_length: f64,
    pub t_max: f64,
    pub probes: Vec<f64>,
    #[serde(default)]
    pub scheme: KgScheme,
    #[serde(default)]
    pub far_boundary: FarBoundary,
}

/// Far-end condition of the Schrodinger grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FarBoundary {
    /// Exact discrete transparent condition for the Crank-Nicolson scheme:
    /// the far cell is tied to the history of its neighbour by the
    /// convolution that the zero-data exterior problem imposes.
    #[default]
    Transparent,
    /// `psi = 0` at the far end with the field at `0.9 L` monitored against
    /// [`TAIL_LIMIT`].
    Zero,
}

impl GridSpec {
    /// Relativistic grid on the characteristic scheme with a domain just
    /// long enough that nothing reaches the far boundary before `t_max`.
    pub fn relativistic(dx: f64, t_max: f64, probes: Vec<f64>) -> Self {
        let reach = probes.iter().cloned().fold(t_max, f64::max);
        GridSpec {
            dx,
            courant: 1.0,
            domain_length: reach + 10.0 * dx,
            t_max,
            probes,
            scheme: KgScheme::Characteristic,
            far_boundary: FarBoundary::default(),
        }
    }

    /// Relativistic grid on the plain leapfrog scheme with Courant number 0.5.
    pub fn leapfrog(dx: f64, t_max: f64, probes: Vec<f64>) -> Self {
        GridSpec {
            courant: 0.5,
            scheme: KgScheme::Leapfrog,
            ..Self::relativistic(dx, t_max, probes)
        }
    }

    /// Schrodinger grid with `dt = dx` and domain
    /// `max probe + 6 sqrt(t_max) + 20`.
    pub fn schrodinger(dx: f64, t_max: f64, probes: Vec<f64>) -> Self {
        let far = probes.iter().cloned().fold(0.0, f64::max);
        GridSpec {
            dx,
            courant: 1.0,
            domain_length: far + 6.0 * t_max.max(0.0).sqrt() + 20.0,
            t_max,
            probes,
            scheme: KgScheme::default(),
            far_boundary: FarBoundary::default(),
        }
    }

    pub fn dt(&self) -> f64 {
        self.courant * self.dx
    }

    /// Same grid with `dx` (and so `dt`) divided by `factor`.
    pub fn refined(&self, factor: f64) -> Self {
        GridSpec {
            dx: self.dx / factor,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.dx > 0.0 && self.dx.is_finite()) {
            return bad(format!("dx must be > 0, got {}", self.dx));
        }
        if !(self.courant > 0.0 && self.courant.is_finite()) {
            return bad(format!("courant number must be > 0, got {}", self.courant));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("t_max must be > 0, got {}", self.t_max));
        }
        if !(self.domain_length > self.dx && self.domain_length.is_finite()) {
            return bad(format!("domain length {} too short", self.domain_length));
        }
        if self.probes.is_empty() {
            return bad("at least one probe is required".into());
        }
        for &p in &self.probes {
            if !(p > 0.0 && p < self.domain_length) {
                return bad(format!(
                    "probe {p} outside (0, {})",
                    self.domain_length
                ));
            }
        }
        Ok(())
    }

    fn cells(&self) -> usize {
        (self.domain_length / self.dx).ceil() as usize
    }

    fn steps(&self) -> usize {
        (self.t_max / self.dt() - 1e-9).ceil() as usize
    }
}

/// Field history at one position, sampled every time step from `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeTrace {
    pub x: f64,
    pub times: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
}

impl ProbeTrace {
    pub fn dt(&self) -> f64 {
        if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }

    /// Cubic Lagrange interpolation in time; zero before the first sample.
    pub fn interpolate(&self, t: f64) -> Option<Complex64> {
        let n = self.times.len();
        if n < 4 || !t.is_finite() {
            return None;
        }
        let dt = self.dt();
        let t0 = self.times[0];
        if t < t0 {
            return Some(Complex64::new(0.0, 0.0));
        }
        let s = (t - t0) / dt;
        if s > (n - 1) as f64 + 1e-9 {
            return None;
        }
        let i = (s.floor() as usize).clamp(1, n - 3) - 1;
        let u = s - i as f64;
        let nodes = [0.0, 1.0, 2.0, 3.0];
        let mut v = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (u - nodes[b]) / (nodes[a] - nodes[b]);
                }
            }
            v += self.amplitudes[i + a] * w;
        }
        Some(v)
    }
}

struct Probe {
    cell: usize,
    frac: f64,
}

fn probe_cells(grid: &GridSpec, cells: usize) -> Vec<Probe> {
    grid.probes
        .iter()
        .map(|&p| {
            let s = p / grid.dx;
            let near = s.round();
            if (s - near).abs() < 1e-9 {
                Probe {
                    cell: near as usize,
                    frac: 0.0,
                }
            } else {
                let c = (s.floor() as usize).min(cells - 1);
                Probe {
                    cell: c,
                    frac: s - c as f64,
                }
            }
        })
        .collect()
}

fn sample(field: &[Complex64], p: &Probe) -> Complex64 {
    if p.frac == 0.0 {
        field[p.cell]
    } else {
        field[p.cell] * (1.0 - p.frac) + field[p.cell + 1] * p.frac
    }
}

fn new_traces(grid: &GridSpec, steps: usize) -> Vec<ProbeTrace> {
    grid.probes
        .iter()
        .map(|&x| ProbeTrace {
            x,
            times: Vec::with_capacity(steps + 1),
            amplitudes: Vec::with_capacity(steps + 1),
        })
        .collect()
}

fn record(traces: &mut [ProbeTrace], probes: &[Probe], field: &[Complex64], t: f64, step: usize) -> Result<()> {
    for (tr, p) in traces.iter_mut().zip(probes) {
        let v = sample(field, p);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        tr.times.push(t);
        tr.amplitudes.push(v);
    }
    Ok(())
}

/// Integrates the Klein-Gordon equation with the grid's scheme.
///
/// Cells ahead of the discrete light cone are never touched, so the field
/// there stays exactly zero; the domain only needs to reach `t_max`.
pub fn evolve_kg(src: SourceSpec, grid: &GridSpec) -> Result<Vec<ProbeTrace>> {
    grid.validate()?;
    let r = grid.courant;
    let dt = grid.dt();
    match grid.scheme {
        KgScheme::Characteristic => {
            if r != 1.0 {
                return Err(Error::Config(format!(
                    "characteristic scheme needs courant = 1, got {r}"
                )));
            }
        }
        KgScheme::Leapfrog => {
            if r > 1.0 {
                return Err(Error::Config(format!("courant number {r} exceeds 1")));
            }
            if r * r + dt * dt / 4.0 > 1.0 {
                return Err(Error::Config(format!(
                    "leapfrog unstable: courant^2 + dt^2/4 = {} > 1",
                    r * r + dt * dt / 4.0
                )));
            }
        }
    }
    if grid.domain_length < grid.t_max {
        return Err(Error::Config(format!(
            "domain length {} shorter than t_max {}",
            grid.domain_length, grid.t_max
        )));
    }
    let cells = grid.cells();
    let steps = grid.steps();
    let probes = probe_cells(grid, cells);
    let w0 = src.omega0();
    let r2 = r * r;
    let m = dt * dt;
    let half_m = 0.5 * m;

    let mut prev = vec![Complex64::new(0.0, 0.0); cells + 1];
    let mut cur = prev.clone();
    let mut next = prev.clone();
    cur[0] = Complex64::new(1.0, 0.0);

    let mut traces = new_traces(grid, steps);
    record(&mut traces, &probes, &cur, 0.0, 0)?;

    for n in 0..steps {
        // after step n the support is cells 0..=n+1
        let active = (n + 1).min(cells - 1);
        match grid.scheme {
            KgScheme::Leapfrog => {
                let update = |j: usize, out: &mut Complex64| {
                    *out = 2.0 * cur[j] - prev[j]
                        + r2 * (cur[j + 1] - 2.0 * cur[j] + cur[j - 1])
                        - m * cur[j];
                };
                sweep(&mut next[1..=active], 1, update);
            }
            KgScheme::Characteristic => {
                // full diamonds behind the front
                let full = n.min(active + 1).saturating_sub(1);
                let update = |j: usize, out: &mut Complex64| {
                    let side = cur[j + 1] + cur[j - 1];
                    *out = side - prev[j] - half_m * side;
                };
                if full >= 1 {
                    sweep(&mut next[1..=full], 1, update);
                }
                if n >= 1 && n <= active {
                    // diamond cut in half by the front
                    next[n] = cur[n + 1] + cur[n - 1] - prev[n]
                        - 0.5 * half_m * (cur[n - 1] + cur[n]);
                }
                if n < active {
                    next[n + 1] = Complex64::new(1.0, 0.0);
                }
            }
        }
        let t = (n + 1) as f64 * dt;
        next[0] = Complex64::from_polar(1.0, -w0 * t);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        record(&mut traces, &probes, &cur, t, n + 1)?;
    }
    Ok(traces)
}

fn sweep<F>(out: &mut [Complex64], first: usize, update: F)
where
    F: Fn(usize, &mut Complex64) + Sync,
{
    if out.len() > PARALLEL_CELLS {
        out.par_iter_mut()
            .enumerate()
            .for_each(|(i, o)| update(i + first, o));
    } else {
        for (i, o) in out.iter_mut().enumerate() {
            update(i + first, o);
        }
    }
}

/// Number of leading Crank-Nicolson steps replaced by two backward-Euler
/// half steps each. Damps the undamped high-frequency ringing that the
/// switch-on at `t = 0` would otherwise leave behind.
const STARTUP_STEPS: usize = 2;

/// Constant tridiagonal system factored once for repeated Thomas solves.
struct Tridiagonal {
    sub: Vec<Complex64>,
    c_prime: Vec<Complex64>,
    inv_denom: Vec<Complex64>,
}

impl Tridiagonal {
    fn new(sub: Vec<Complex64>, main: &[Complex64], sup: &[Complex64]) -> Self {
        let n = main.len();
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_denom = vec![Complex64::new(0.0, 0.0); n];
        inv_denom[0] = 1.0 / main[0];
        c_prime[0] = sup[0] * inv_denom[0];
        for k in 1..n {
            inv_denom[k] = 1.0 / (main[k] - sub[k] * c_prime[k - 1]);
            c_prime[k] = sup[k] * inv_denom[k];
        }
        Tridiagonal {
            sub,
            c_prime,
            inv_denom,
        }
    }

    fn solve(&self, d: &mut [Complex64]) {
        let n = d.len();
        d[0] *= self.inv_denom[0];
        for k in 1..n {
            d[k] = (d[k] - self.sub[k] * d[k - 1]) * self.inv_denom[k];
        }
        for k in (0..n - 1).rev() {
            let next = d[k + 1];
            d[k] -= self.c_prime[k] * next;
        }
    }
}

/// Crank-Nicolson integration of the Schrodinger equation. With
/// [`FarBoundary::Zero`] a run whose tail at `0.9 L` exceeds [`TAIL_LIMIT`]
/// fails with a contamination error.
pub fn evolve_schrodinger(src: SourceSpec, grid: &GridSpec) -> Result<Vec<ProbeTrace>> {
    grid.validate()?;
    let dt = grid.dt();
    let dx = grid.dx;
    let cells = grid.cells();
    if cells < 3 {
        return Err(Error::Config("domain must span at least 3 cells".into()));
    }
    let steps = grid.steps();
    let probes = probe_cells(grid, cells);
    let monitor = ((0.9 * grid.domain_length / dx).round() as usize).min(cells - 1);
    let w0 = src.omega0();
    let transparent = grid.far_boundary == FarBoundary::Transparent;
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);

    // Crank-Nicolson: (I + i dt/2 H) psi^{n+1} = (I - i dt/2 H) psi^n,
    // H = -D2/2 + 1. The startup uses (I + i dt/2 H) psi = psi_old.
    let off = -i * dt / (4.0 * dx * dx);
    let diag = 1.0 + i * dt / 2.0 * (1.0 / (dx * dx) + 1.0);
    let rhs_off = -off;
    let rhs_diag = 2.0 - diag;

    // Unknowns are cells 1..=cells with a transparent end, 1..cells otherwise.
    let unknowns = if transparent { cells } else { cells - 1 };
    let kernel = if transparent {
        transparent_kernel(dx, dt, steps)
    } else {
        Vec::new()
    };
    let startup = Tridiagonal::new(vec![off; cells - 1], &vec![diag; cells - 1], &vec![off; cells - 1]);
    let mut sub = vec![off; unknowns];
    let mut main = vec![diag; unknowns];
    let mut sup = vec![off; unknowns];
    if transparent {
        // last row: psi_J - g_0 psi_{J-1} = history
        sub[unknowns - 1] = -kernel[0];
        main[unknowns - 1] = Complex64::new(1.0, 0.0);
        sup[unknowns - 1] = zero;
    }
    let system = Tridiagonal::new(sub, &main, &sup);

    let mut psi = vec![zero; cells + 1];
    psi[0] = Complex64::new(1.0, 0.0);
    let mut d = vec![zero; unknowns];
    // history of the cell next to the far end, oldest first
    let mut inner_history: Vec<Complex64> = Vec::with_capacity(steps + 1);
    inner_history.push(psi[cells - 1]);

    let mut traces = new_traces(grid, steps);
    record(&mut traces, &probes, &psi, 0.0, 0)?;

    for n in 0..steps {
        let m = n + 1;
        let t = m as f64 * dt;
        if n < STARTUP_STEPS {
            // the field has not reached the far end yet; keep it at zero
            for half in 1..=2 {
                let th = (n as f64 + 0.5 * half as f64) * dt;
                let left = Complex64::from_polar(1.0, -w0 * th);
                let d = &mut d[..cells - 1];
                d.copy_from_slice(&psi[1..cells]);
                d[0] -= off * left;
                startup.solve(d);
                psi[0] = left;
                psi[1..cells].copy_from_slice(d);
                psi[cells] = zero;
            }
        } else {
            let left = Complex64::from_polar(1.0, -w0 * t);
            for k in 0..cells - 1 {
                let j = k + 1;
                d[k] = rhs_diag * psi[j] + rhs_off * (psi[j + 1] + psi[j - 1]);
            }
            if transparent {
                let mut h = -psi[cells];
                for (g, past) in kernel[1..=m].iter().zip(inner_history.iter().rev()) {
                    h += g * past;
                }
                d[unknowns - 1] = h;
            }
            d[0] -= off * left;
            system.solve(&mut d);
            psi[0] = left;
            psi[1..=unknowns].copy_from_slice(&d);
        }
        inner_history.push(psi[cells - 1]);
        if !transparent {
            let tail = psi[monitor].norm();
            if tail > TAIL_LIMIT {
                return Err(Error::Contamination { t, amplitude: tail });
            }
        }
        record(&mut traces, &probes, &psi, t, m)?;
    }
    Ok(traces)
}

/// Coefficients `g_k` of the discrete transparent condition
/// `psi^m_J + psi^{m-1}_J = sum_k g_k psi^{m-k}_{J-1}`.
///
/// In the exterior the Z-transformed scheme reads
/// `D2 psi = c(w) psi` with `w = 1/z` and
/// `c = [2 dx^2 (1 + w) - 4i (dx^2/dt) (1 - w)] / (1 + w)`, so each step
/// outward multiplies by the decaying root `alpha` of
/// `alpha + 1/alpha = 2 + c`. The kernel is the power series of
/// `(1 + w) alpha(w)`.
pub(crate) fn transparent_kernel(dx: f64, dt: f64, len: usize) -> Vec<Complex64> {
    let r = dx * dx / dt;
    let a = Complex64::new(2.0 * dx * dx, -4.0 * r);
    let b = Complex64::new(2.0 * dx * dx, 4.0 * r);
    let q0 = a * (a + 4.0);
    let q1 = a * (b + 4.0) + b * (a + 4.0);
    let q2 = b * (b + 4.0);
    let (p, q) = (q1 / q0, q2 / q0);

    let mut root = q0.sqrt();
    if (1.0 + a / 2.0 - root / 2.0).norm() > 1.0 {
        root = -root;
    }

    // h = sqrt(1 + p w + q w^2) as a power series
    let n = len + 1;
    let mut h = vec![Complex64::new(0.0, 0.0); n.max(2)];
    h[0] = Complex64::new(1.0, 0.0);
    h[1] = p / 2.0;
    for k in 1..n - 1 {
        let kf = k as f64;
        h[k + 1] = (p * (1.0 - 2.0 * kf) * h[k] - 2.0 * q * (kf - 2.0) * h[k - 1])
            / (2.0 * (kf + 1.0));
    }
    let mut g: Vec<Complex64> = h.iter().map(|v| -0.5 * root * v).collect();
    g[0] += 1.0 + a / 2.0;
    g[1] += 1.0 + b / 2.0;
    g.truncate(n);
    g
}

/// Which time-domain solver a convergence study exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Solver {
    KleinGordon,
    Schrodinger,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub max_error: f64,
    /// `log2(e_{k-1} / e_k)`; absent on the coarsest level.
    pub observed_order: Option<f64>,
}

/// Largest deviation of the traces from the matching closed-form solution
/// over samples with `t - x >= exclude`.
pub fn trace_error(solver: Solver, src: SourceSpec, traces: &[ProbeTrace], exclude: f64) -> Result<f64> {
    let settings = SeriesSettings::default();
    let mut worst = 0.0f64;
    for tr in traces {
        let start = tr.x + exclude;
        let e = tr
            .times
            .par_iter()
            .zip(tr.amplitudes.par_iter())
            .filter(|(t, _)| **t >= start)
            .map(|(&t, &a)| {
                let exact = match solver {
                    Solver::KleinGordon => psi_rel(tr.x, t, src, &settings)?,
                    Solver::Schrodinger => psi_nonrel(tr.x, t, src)?,
                };
                Ok((a - exact.amplitude).norm())
            })
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
        worst = worst.max(e);
    }
    Ok(worst)
}

/// Runs the solver on `levels` successively halved grids and reports the
/// error against the closed form at each level.
pub fn convergence_report(
    solver: Solver,
    src: SourceSpec,
    base_grid: &GridSpec,
    levels: usize,
    exclude: f64,
) -> Result<Vec<ConvergenceRow>> {
    if levels < 2 {
        return Err(Error::Config(format!("need at least 2 levels, got {levels}")));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    for k in 0..levels {
        let grid = base_grid.refined((1u64 << k) as f64);
        let traces = match solver {
            Solver::KleinGordon => evolve_kg(src, &grid)?,
            Solver::Schrodinger => evolve_schrodinger(src, &grid)?,
        };
        let max_error = trace_error(solver, src, &traces, exclude)?;
        let observed_order = rows.last().map(|r| (r.max_error / max_error).log2());
        rows.push(ConvergenceRow {
            dx: grid.dx,
            max_error,
            observed_order,
        });
    }
    Ok(rows)
}
