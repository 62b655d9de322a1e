//! Saddle-pole asymptotics of the relativistic field for large `x`.
//!
//! Far from the source the field splits into a stationary pole term and two
//! saddle contributions at `+-omega_s`, with `omega_s = t / eta`. The
//! interference of the saddles sets the density pattern of the first
//! forerunner; its envelopes, extremum times and instantaneous frequency
//! follow in closed form.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{kappa0, traversal_time, Dispersion, SourceSpec};
use crate::error::{ensure_finite, Error, Result};

const REL: Dispersion = Dispersion::Relativistic;

fn check_cone(x: f64, t: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    ensure_finite("t", t)?;
    if !(x > 0.0 && t > x) {
        return Err(Error::domain(format!(
            "saddle quantities need t > x > 0, got x = {x}, t = {t}"
        )));
    }
    Ok(((t - x) * (t + x)).sqrt())
}

/// Saddle frequency `omega_s = t / sqrt(t^2 - x^2)`.
pub fn saddle_frequency(x: f64, t: f64) -> Result<f64> {
    let eta = check_cone(x, t)?;
    Ok(t / eta)
}

/// Which saddle a steepest-descent path belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Saddle {
    Positive,
    Negative,
}

impl Saddle {
    fn sign(self) -> f64 {
        match self {
            Saddle::Positive => 1.0,
            Saddle::Negative => -1.0,
        }
    }
}

/// Imaginary part of the steepest-descent path through the given saddle at
/// real frequency `omega_r`. `None` outside the asymptotes, where the
/// radicand is not positive.
pub fn sdp_imag(omega_r: f64, omega_s: f64, saddle: Saddle) -> Option<f64> {
    let s = saddle.sign();
    let radicand = (omega_s * omega_s - 1.0) * (-omega_r * omega_r + 2.0 * s * omega_r * omega_s - 1.0);
    if !(radicand > 0.0) {
        return None;
    }
    Some(-(s * omega_r * omega_s - 1.0) * (s * omega_r - omega_s) / radicand.sqrt())
}

/// Sampled steepest-descent paths through both saddles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SdpContour {
    pub omega_s: f64,
    /// Real-axis positions of the two asymptotes of the positive path; the
    /// negative path mirrors them.
    pub asymptotes: (f64, f64),
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
    /// Samples dropped because the radicand was not positive.
    pub skipped: usize,
}

pub fn sdp_contour(x: f64, t: f64, n_samples: usize) -> Result<SdpContour> {
    let omega_s = saddle_frequency(x, t)?;
    if n_samples < 3 {
        return Err(Error::domain(format!("need at least 3 samples, got {n_samples}")));
    }
    let half_width = (omega_s * omega_s - 1.0).sqrt();
    let (lo, hi) = (omega_s - half_width, omega_s + half_width);
    // interior points only: the path runs off to infinity at the asymptotes
    let mut grid: Vec<f64> = (1..=n_samples)
        .map(|k| lo + (hi - lo) * k as f64 / (n_samples + 1) as f64)
        .collect();
    grid.push(omega_s);
    grid.push(1.0 / omega_s);
    grid.sort_by(f64::total_cmp);

    let mut skipped = 0;
    let mut plus = Vec::with_capacity(grid.len());
    let mut minus = Vec::with_capacity(grid.len());
    for &wr in &grid {
        match sdp_imag(wr, omega_s, Saddle::Positive) {
            Some(wi) => plus.push(Complex64::new(wr, wi)),
            None => skipped += 1,
        }
        match sdp_imag(-wr, omega_s, Saddle::Negative) {
            Some(wi) => minus.push(Complex64::new(-wr, wi)),
            None => skipped += 1,
        }
    }
    minus.reverse();
    Ok(SdpContour {
        omega_s,
        asymptotes: (lo, hi),
        plus,
        minus,
        skipped,
    })
}

/// Pole and saddle contributions of the asymptotic field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleParts {
    pub pole: Complex64,
    pub saddle_plus: Complex64,
    pub saddle_minus: Complex64,
    pub total: Complex64,
}

/// Saddle-pole approximation. The pole term switches on at `t >= tau`
/// (included at `t = tau`). Each saddle carries the stationary-phase factor
/// `x / (t sqrt(2 pi eta))`; the positive saddle uses the branch
/// `sqrt(-i) = exp(-i pi/4)` and the negative saddle `sqrt(+i) = -exp(i pi/4)`,
/// the branch for which the two-saddle density shows `+sin(2 eta)`.
pub fn psi_saddle(x: f64, t: f64, src: SourceSpec) -> Result<SaddleParts> {
    let eta = check_cone(x, t)?;
    let w0 = src.omega0();
    let k = kappa0(src, REL);
    let tau = x / k;
    let pole = if t >= tau {
        Complex64::from_polar((-k * x).exp(), -w0 * t)
    } else {
        Complex64::new(0.0, 0.0)
    };
    let ws = t / eta;
    let a = x / (t * (2.0 * PI * eta).sqrt()) * ws;
    let i = Complex64::i();
    let saddle_plus =
        i * Complex64::from_polar(a / (ws - w0), -FRAC_PI_4 - eta);
    let saddle_minus =
        i * Complex64::from_polar(-a / (ws + w0), FRAC_PI_4 + eta);
    Ok(SaddleParts {
        pole,
        saddle_plus,
        saddle_minus,
        total: pole + saddle_plus + saddle_minus,
    })
}

/// Validity margins of the saddle-pole split at `t = tau`:
/// `x omega0 kappa0` for the positive saddle and
/// `x omega0 (1 + omega0^2)^2 / kappa0^3` for the negative one.
pub fn validity_margins(x: f64, src: SourceSpec) -> (f64, f64) {
    let w = src.omega0();
    let k = kappa0(src, REL);
    let u = 1.0 + w * w;
    (x * w * k, x * w * u * u / (k * k * k))
}

/// Pole-to-saddle ratio
/// `R = pi exp(-2 kappa0 x) (t^2 eta / x^2) (1 - omega0 eta / t^2) Theta(t - tau)`.
pub fn pole_saddle_ratio(x: f64, t: f64, src: SourceSpec) -> Result<f64> {
    let eta = check_cone(x, t)?;
    let k = kappa0(src, REL);
    if t < x / k {
        return Ok(0.0);
    }
    let w = src.omega0();
    let log_mag = PI.ln() - 2.0 * k * x + 2.0 * t.ln() + eta.ln() - 2.0 * x.ln();
    Ok(log_mag.exp() * (1.0 - w * eta / (t * t)))
}

/// Closed-form transient time
/// `exp(2 kappa0 x / 3) x^(2/3) / ((2 pi)^(1/3) (1 - omega0)^(2/3))`.
pub fn transient_time_paper(x: f64, src: SourceSpec) -> Result<f64> {
    ensure_finite("x", x)?;
    if x <= 0.0 {
        return Err(Error::domain(format!("position must be > 0, got {x}")));
    }
    let w = src.omega0();
    let k = kappa0(src, REL);
    let exponent = 2.0 * k * x / 3.0;
    let log_value =
        exponent + 2.0 / 3.0 * x.ln() - (2.0 * PI).ln() / 3.0 - 2.0 / 3.0 * (1.0 - w).ln();
    let v = log_value.exp();
    if !v.is_finite() {
        return Err(Error::Range(format!(
            "transient time overflows: exponent 2 kappa0 x / 3 = {exponent}"
        )));
    }
    Ok(v)
}

/// Default search horizon of [`transient_time_numeric`], in units of tau.
pub const TRANSIENT_HORIZON: f64 = 1e4;

/// First time `t >= tau` at which the pole term overtakes the positive
/// saddle, `R(x, t) = 1`, searched up to `1e4 tau`.
pub fn transient_time_numeric(x: f64, src: SourceSpec) -> Result<f64> {
    transient_time_numeric_within(x, src, TRANSIENT_HORIZON)
}

/// As [`transient_time_numeric`] with the horizon given in units of tau.
pub fn transient_time_numeric_within(x: f64, src: SourceSpec, horizon: f64) -> Result<f64> {
    ensure_finite("horizon", horizon)?;
    if horizon < 1.0 {
        return Err(Error::domain(format!("horizon must be >= 1 tau, got {horizon}")));
    }
    let tau = traversal_time(x, src, REL)?;
    let r = |t: f64| pole_saddle_ratio(x, t, src);
    if r(tau)? >= 1.0 {
        return Ok(tau);
    }
    let t_end = tau * horizon;
    if !t_end.is_finite() || r(t_end)? < 1.0 {
        return Err(Error::NotFound(format!(
            "pole-saddle ratio stays below 1 up to {horizon} tau (t = {t_end:e})"
        )));
    }
    let (mut lo, mut hi) = (tau.ln(), t_end.ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if r(mid.exp())? >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(hi.exp())
}

fn envelope_base(x: f64, t: f64, src: SourceSpec) -> Result<(f64, f64)> {
    let eta = check_cone(x, t)?;
    let k = kappa0(src, REL);
    let w = src.omega0();
    let g = (t * k / x).powi(2) + w * w;
    Ok((eta, g))
}

/// Two-saddle density
/// `[t^2 + omega0^2 eta^2 + x^2 (t^2/tau^2 + omega0^2) sin 2eta] / [pi eta x^2 (t^2/tau^2 + omega0^2)^2]`.
pub fn density_saddle(x: f64, t: f64, src: SourceSpec) -> Result<f64> {
    let (eta, g) = envelope_base(x, t, src)?;
    let w = src.omega0();
    let num = t * t + w * w * eta * eta + x * x * g * (2.0 * eta).sin();
    Ok(num / (PI * eta * x * x * g * g))
}

/// Half the distance between the density envelopes,
/// `x^2 / [pi eta (t^2 - omega0^2 eta^2)]`.
pub fn oscillation_amplitude(x: f64, t: f64, src: SourceSpec) -> Result<f64> {
    let eta = check_cone(x, t)?;
    let w = src.omega0();
    let d = t * t - w * w * eta * eta;
    if !(d > 0.0) {
        return Err(Error::domain(format!(
            "oscillation amplitude undefined: t^2 - omega0^2 eta^2 = {d}"
        )));
    }
    Ok(x * x / (PI * eta * d))
}

/// Upper and lower envelopes of the two-saddle density.
pub fn density_envelopes(x: f64, t: f64, src: SourceSpec) -> Result<(f64, f64)> {
    let (eta, g) = envelope_base(x, t, src)?;
    let w = src.omega0();
    let d = PI * x * x * g * g;
    Ok((2.0 * t * t / (eta * d), 2.0 * w * w * eta / d))
}

/// One extremum-time formula evaluated for a given carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremumTime {
    /// Formula value in units of tau; `None` when its discriminant is negative.
    pub raw: Option<f64>,
    /// Whether the time lies inside the causal cone (value > kappa0).
    pub causal: bool,
}

impl ExtremumTime {
    fn new(raw: Option<f64>, k: f64) -> Self {
        ExtremumTime {
            raw,
            causal: raw.is_some_and(|v| v > k),
        }
    }

    fn absent() -> Self {
        ExtremumTime {
            raw: None,
            causal: false,
        }
    }

    pub fn feasible(&self) -> bool {
        self.raw.is_some() && self.causal
    }

    /// Value in units of tau when feasible.
    pub fn value(&self) -> Option<f64> {
        self.raw.filter(|_| self.causal)
    }
}

/// Extremum times of the density envelopes in units of tau. "Temporal"
/// extrema are at fixed x, "spatial" ones at fixed t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeExtrema {
    pub kappa0: f64,
    pub t_max_x_lower: ExtremumTime,
    pub t_max_t_lower: ExtremumTime,
    pub t_max_t_upper: ExtremumTime,
    pub t_min_t_upper: ExtremumTime,
    pub t_max_x_upper: ExtremumTime,
    pub t_min_x_upper: ExtremumTime,
}

#[derive(Clone, Copy)]
enum Along {
    Time,
    Space,
}

// Sign of the second derivative of the upper envelope at a stationary point
// given in units of tau. Envelopes are invariant under the joint scaling
// (x, t) -> (a x, a t), so x = 1 (temporal) or t = 1 (spatial) suffices.
fn upper_curvature(v: f64, src: SourceSpec, along: Along) -> Option<f64> {
    let k = kappa0(src, REL);
    let f = |x: f64, t: f64| density_envelopes(x, t, src).ok().map(|e| e.0);
    let (x, t) = match along {
        Along::Time => (1.0, v / k),
        Along::Space => (k / v, 1.0),
    };
    let h = 1e-4 * match along {
        Along::Time => t - x,
        Along::Space => t - x,
    }
    .min(1e-3);
    let (a, b, c) = match along {
        Along::Time => (f(x, t - h)?, f(x, t)?, f(x, t + h)?),
        Along::Space => (f(x - h, t)?, f(x, t)?, f(x + h, t)?),
    };
    Some(a - 2.0 * b + c)
}

fn root_pair(pre: f64, b: f64, disc: f64) -> (Option<f64>, Option<f64>) {
    if disc < 0.0 {
        return (None, None);
    }
    let s = disc.sqrt();
    let r = |v: f64| if v > 0.0 { Some(pre * v.sqrt()) } else { None };
    (r(b + s), r(b - s))
}

/// Evaluates the four extremum-time formulas, in units of tau:
///
/// ```text
/// t_max^{x,L} = 1/2 [3 - w^2 + sqrt(9(1 + w^4) - 14 w^2)]^(1/2)
/// t_max^{t,L} = sqrt((4 - 3 w^2) / 3)
/// t^{t,U}     = 6^(-1/2) [2 - w^2 +- sqrt(4 - 28 w^2 + 25 w^4)]^(1/2)
/// t^{x,U}     = 1/2 [1 + w^2 +- sqrt(1 - 22 w^2 + 25 w^4)]^(1/2)
/// ```
///
/// Upper-envelope roots are sorted into maximum and minimum by the sign of
/// the envelope curvature, and are feasible only inside the causal cone.
pub fn envelope_extremum_times(src: SourceSpec) -> EnvelopeExtrema {
    let w = src.omega0();
    let u = w * w;
    let k = kappa0(src, REL);

    let x_lower = 0.5 * (3.0 - u + (9.0 * (1.0 + u * u) - 14.0 * u).sqrt()).sqrt();
    let t_lower = ((4.0 - 3.0 * u) / 3.0).sqrt();

    let classify = |pair: (Option<f64>, Option<f64>), along: Along| {
        let mut max = ExtremumTime::absent();
        let mut min = ExtremumTime::absent();
        for v in [pair.0, pair.1].into_iter().flatten() {
            let e = ExtremumTime::new(Some(v), k);
            match upper_curvature(v, src, along) {
                Some(c) if c < 0.0 => max = e,
                Some(_) => min = e,
                // outside the cone the envelope is undefined; keep the
                // formula's own labelling
                None => {
                    if max.raw.is_none() {
                        max = e;
                    } else {
                        min = e;
                    }
                }
            }
        }
        (max, min)
    };

    let t_pair = root_pair(1.0 / 6f64.sqrt(), 2.0 - u, 4.0 - 28.0 * u + 25.0 * u * u);
    let x_pair = root_pair(0.5, 1.0 + u, 1.0 - 22.0 * u + 25.0 * u * u);
    let (t_max_t_upper, t_min_t_upper) = classify(t_pair, Along::Time);
    let (t_max_x_upper, t_min_x_upper) = classify(x_pair, Along::Space);

    EnvelopeExtrema {
        kappa0: k,
        t_max_x_lower: ExtremumTime::new(Some(x_lower), k),
        t_max_t_lower: ExtremumTime::new(Some(t_lower), k),
        t_max_t_upper,
        t_min_t_upper,
        t_max_x_upper,
        t_min_x_upper,
    }
}

/// Instantaneous frequency of the two-saddle field and its envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaAv {
    pub value: f64,
    pub upper: f64,
    pub lower: f64,
}

/// Closed-form instantaneous frequency of the two-saddle field,
///
/// ```text
/// w0 (-2 t^2 eta + x^2 cos 2eta) / (eta [-t^2 - w0^2 eta^2 + (-t^2 + w0^2 eta^2) sin 2eta])
/// ```
///
/// with envelopes `t^2 / (w0 eta^2)` and `w0`.
pub fn omega_av_saddle(x: f64, t: f64, src: SourceSpec) -> Result<OmegaAv> {
    let eta = check_cone(x, t)?;
    let w = src.omega0();
    let (s2, c2) = (2.0 * eta).sin_cos();
    let a = t * t;
    let b = w * w * eta * eta;
    let bracket = -a - b + (-a + b) * s2;
    if bracket.abs() <= 1e-12 * (a + b) {
        return Err(Error::Singular(format!(
            "instantaneous-frequency denominator vanishes at x = {x}, t = {t}"
        )));
    }
    let value = w * (-2.0 * a * eta + x * x * c2) / (eta * bracket);
    Ok(OmegaAv {
        value,
        upper: a / (w * eta * eta),
        lower: w,
    })
}
