//! Closed-form time-domain solutions for the switched-on source.
//!
//! The relativistic field is the Bessel series in inverse powers of `xi`
//!
//! ```text
//! psi = J0(eta) + sum_{n>=1} (-i/xi)^n (z+^n + z-^n) J_n(eta),   t > x
//! ```
//!
//! with `xi = sqrt((t+x)/(t-x))`, `eta = sqrt(t^2 - x^2)` and
//! `z+- = omega0 +- i kappa0`. The nonrelativistic field is a pair of
//! Faddeeva functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{kappa0, pole_roots, Dispersion, SourceSpec};
use crate::error::{ensure_finite, Error, Result};
use crate::specfun::{bessel_j_seq, faddeeva_w};

/// Truncation control for the relativistic Bessel series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSettings {
    pub rel_tol: f64,
    pub n_max: usize,
}

impl Default for SeriesSettings {
    fn default() -> Self {
        SeriesSettings {
            rel_tol: 1e-13,
            n_max: 2000,
        }
    }
}

impl SeriesSettings {
    pub fn new(rel_tol: f64, n_max: usize) -> Result<Self> {
        let s = SeriesSettings { rel_tol, n_max };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::domain(format!(
                "series tolerance must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if self.n_max == 0 {
            return Err(Error::domain("series term cap must be >= 1"));
        }
        Ok(())
    }
}

/// Variables of the region inside the causal cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontVariables {
    pub xi: f64,
    pub eta: f64,
    pub z_plus: Complex64,
    pub z_minus: Complex64,
}

pub fn front_variables(x: f64, t: f64, src: SourceSpec) -> Result<FrontVariables> {
    ensure_finite("x", x)?;
    ensure_finite("t", t)?;
    if !(x > 0.0 && t > x) {
        return Err(Error::domain(format!(
            "front variables need t > x > 0, got x = {x}, t = {t}"
        )));
    }
    let (z_plus, z_minus) = pole_roots(src);
    Ok(FrontVariables {
        xi: ((t + x) / (t - x)).sqrt(),
        eta: ((t - x) * (t + x)).sqrt(),
        z_plus,
        z_minus,
    })
}

/// Field value at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub x: f64,
    pub t: f64,
    pub amplitude: Complex64,
    pub density: f64,
}

impl WaveSample {
    pub fn new(x: f64, t: f64, amplitude: Complex64) -> Self {
        WaveSample {
            x,
            t,
            amplitude,
            density: amplitude.norm_sqr(),
        }
    }
}

fn check_point(x: f64, t: f64) -> Result<()> {
    ensure_finite("x", x)?;
    ensure_finite("t", t)?;
    if x < 0.0 {
        return Err(Error::domain(format!("position must be >= 0, got {x}")));
    }
    Ok(())
}

/// Exact relativistic field.
pub fn psi_rel(x: f64, t: f64, src: SourceSpec, settings: &SeriesSettings) -> Result<WaveSample> {
    check_point(x, t)?;
    settings.validate()?;
    let amplitude = if t < x {
        Complex64::new(0.0, 0.0)
    } else if t == x {
        Complex64::new(1.0, 0.0)
    } else if x == 0.0 {
        Complex64::from_polar(1.0, -src.omega0() * t)
    } else {
        let fv = front_variables(x, t, src)?;
        inverse_xi_series(fv.xi, fv.eta, fv.z_plus, settings)?
    };
    Ok(WaveSample::new(x, t, amplitude))
}

// Order past which both the xi^-n factor and the Bessel decay have pushed
// terms well below the tolerance.
fn initial_order(xi: f64, eta: f64, rel_tol: f64) -> usize {
    let by_bessel = eta + 12.0 * eta.cbrt() + 20.0;
    let ln_xi = xi.ln();
    let by_xi = if ln_xi > 0.0 {
        (100.0 / rel_tol).ln() / ln_xi
    } else {
        f64::INFINITY
    };
    (by_bessel.min(by_xi) + 10.0).ceil() as usize
}

fn inverse_xi_series(
    xi: f64,
    eta: f64,
    z_plus: Complex64,
    settings: &SeriesSettings,
) -> Result<Complex64> {
    let mut cap = initial_order(xi, eta, settings.rel_tol).clamp(1, settings.n_max);
    loop {
        let j = bessel_j_seq(cap, eta)?.values;
        match sum_inverse_xi(&j, xi, z_plus, settings.rel_tol) {
            Ok(v) => return Ok(v),
            Err(last_term) => {
                if cap >= settings.n_max {
                    return Err(Error::Convergence {
                        terms: cap,
                        last_term,
                    });
                }
                cap = (2 * cap).min(settings.n_max);
            }
        }
    }
}

// Sums the series over the supplied Bessel values. Returns the last term
// bound when three consecutive terms below tolerance were not reached.
fn sum_inverse_xi(j: &[f64], xi: f64, z_plus: Complex64, rel_tol: f64) -> std::result::Result<Complex64, f64> {
    let inv_xi = 1.0 / xi;
    let step = Complex64::new(0.0, -inv_xi);
    let mut sum = Complex64::new(j[0], 0.0);
    let mut factor = Complex64::new(1.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    let mut inv_xi_n = 1.0;
    let mut quiet = 0;
    let mut bound = f64::INFINITY;
    for &jn in &j[1..] {
        factor *= step;
        zn *= z_plus;
        inv_xi_n *= inv_xi;
        // z+^n + z-^n = 2 Re z+^n on the unit circle
        sum += factor * (2.0 * zn.re * jn);
        bound = 2.0 * inv_xi_n * jn.abs();
        if bound <= rel_tol * sum.norm() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(bound)
}

/// Relativistic field from the pole form: the two exponentials
/// `exp(-+kappa0 x - i omega0 t)` plus `J0(eta)` minus the two series in
/// positive powers of `xi`. Mathematically identical to [`psi_rel`] but
/// suffers cancellation of order `exp((t + x) / 2)`; kept as a cross-check.
pub fn psi_rel_pole_form(x: f64, t: f64, src: SourceSpec) -> Result<Complex64> {
    let fv = front_variables(x, t, src)?;
    let k = kappa0(src, Dispersion::Relativistic);
    let carrier = Complex64::from_polar(1.0, -src.omega0() * t);
    let exponentials = carrier * ((-k * x).exp() + (k * x).exp());

    let mut cap = (std::f64::consts::E * (t + x) / 2.0 + 40.0).ceil() as usize;
    loop {
        let j = bessel_j_seq(cap, fv.eta)?.values;
        let mut sums = Complex64::new(0.0, 0.0);
        let mut tail = 0.0f64;
        let mut peak = 0.0f64;
        for z in [fv.z_plus, fv.z_minus] {
            // xi / (i z) = -i xi conj(z) because |z| = 1
            let q = Complex64::new(0.0, -fv.xi) * z.conj();
            let mut qn = Complex64::new(1.0, 0.0);
            for &jn in &j {
                let term = qn * jn;
                peak = peak.max(term.norm());
                sums += term;
                qn *= q;
            }
            tail = tail.max((qn / q).norm() * j[cap].abs());
        }
        if tail <= 1e-18 * peak.max(1.0) {
            return Ok(exponentials + j[0] - sums);
        }
        if cap > 100_000 {
            return Err(Error::Convergence {
                terms: cap,
                last_term: tail,
            });
        }
        cap *= 2;
    }
}

/// One-term approximation near the causal front:
/// `J0(eta) - 2 i omega0 J1(eta) / xi`.
pub fn psi_rel_front(x: f64, t: f64, src: SourceSpec) -> Result<Complex64> {
    check_front_args(x, t)?;
    if t == x {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let fv = front_variables(x, t, src)?;
    let j = bessel_j_seq(1, fv.eta)?.values;
    Ok(Complex64::new(j[0], -2.0 * src.omega0() * j[1] / fv.xi))
}

/// The printed variant of the one-term front approximation,
/// `J0(eta) - 2 i omega0 J1(eta) / eta`. Its density at `t = x` is
/// `1 + omega0^2` rather than 1; exposed for comparison only.
pub fn psi_rel_front_paper(x: f64, t: f64, src: SourceSpec) -> Result<Complex64> {
    check_front_args(x, t)?;
    let w = src.omega0();
    if t == x {
        return Ok(Complex64::new(1.0, -w));
    }
    let fv = front_variables(x, t, src)?;
    let j = bessel_j_seq(1, fv.eta)?.values;
    Ok(Complex64::new(j[0], -2.0 * w * j[1] / fv.eta))
}

/// First-order expansion about the front:
/// `1 - (t - x) [(t + x)/4 + i omega0]`.
pub fn psi_rel_front_linear(x: f64, t: f64, src: SourceSpec) -> Complex64 {
    let d = t - x;
    Complex64::new(1.0 - d * (t + x) / 4.0, -d * src.omega0())
}

fn check_front_args(x: f64, t: f64) -> Result<()> {
    check_point(x, t)?;
    if !(x > 0.0 && t >= x) {
        return Err(Error::domain(format!(
            "front approximation needs t >= x > 0, got x = {x}, t = {t}"
        )));
    }
    Ok(())
}

/// Exact nonrelativistic field
/// `1/2 exp(-it) exp(i x^2 / 2t) [w(y+) + w(y-)]`,
/// `y+- = i exp(-i pi/4) (2t)^(-1/2) (x -+ k0 t)`, `k0 = i kappa0`.
pub fn psi_nonrel(x: f64, t: f64, src: SourceSpec) -> Result<WaveSample> {
    check_point(x, t)?;
    if t <= 0.0 {
        return Ok(WaveSample::new(x, t, Complex64::new(0.0, 0.0)));
    }
    let k = kappa0(src, Dispersion::Nonrelativistic);
    // i exp(-i pi/4) = exp(i pi/4)
    let c = Complex64::from_polar((0.5 / t).sqrt(), std::f64::consts::FRAC_PI_4);
    let y_plus = c * Complex64::new(x, -k * t);
    let y_minus = c * Complex64::new(x, k * t);
    let pair = faddeeva_w(y_plus)? + faddeeva_w(y_minus)?;
    let phase = x * x / (2.0 * t) - t;
    let amplitude = 0.5 * Complex64::from_polar(1.0, phase) * pair;
    if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
        return Err(Error::Range(format!("nonrelativistic field overflow at x = {x}, t = {t}")));
    }
    Ok(WaveSample::new(x, t, amplitude))
}

/// Scaling map of the nonrelativistic solutions:
/// `(x, t, Omega0) -> (sqrt(alpha) x, alpha t, Omega0 / alpha)`, under which
/// `exp(it) psi` is invariant (`Omega0 = omega0 - 1`).
pub fn scale_nonrel(x: f64, t: f64, shifted_omega0: f64, alpha: f64) -> Result<(f64, f64, f64)> {
    ensure_finite("alpha", alpha)?;
    if alpha <= 0.0 {
        return Err(Error::domain(format!("scale factor must be > 0, got {alpha}")));
    }
    Ok((alpha.sqrt() * x, alpha * t, shifted_omega0 / alpha))
}

/// Density of the asymptotic stationary wave, `exp(-2 kappa0 x)`.
pub fn stationary_density(x: f64, src: SourceSpec, d: Dispersion) -> f64 {
    (-2.0 * kappa0(src, d) * x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src(w: f64) -> SourceSpec {
        SourceSpec::new(w).unwrap()
    }

    #[test]
    fn causal_region_and_front() {
        let s = SeriesSettings::default();
        let before = psi_rel(5.0, 4.9, src(0.5), &s).unwrap();
        assert_eq!(before.amplitude, Complex64::new(0.0, 0.0));
        let at = psi_rel(5.0, 5.0, src(0.5), &s).unwrap();
        assert_eq!(at.amplitude, Complex64::new(1.0, 0.0));
        assert_eq!(at.density, 1.0);
    }

    #[test]
    fn boundary_is_carrier() {
        let s = SeriesSettings::default();
        let v = psi_rel(0.0, 3.0, src(0.3), &s).unwrap();
        assert!((v.amplitude - Complex64::from_polar(1.0, -0.9)).norm() < 1e-15);
    }

    #[test]
    fn front_variable_examples() {
        let fv = front_variables(1.0, 2.0, src(0.6)).unwrap();
        assert!((fv.xi - 3f64.sqrt()).abs() < 1e-15);
        assert!((fv.eta - 3f64.sqrt()).abs() < 1e-15);
        assert!((fv.z_plus - Complex64::new(0.6, 0.8)).norm() < 1e-15);
        assert!(((fv.z_plus * fv.z_minus) - 1.0).norm() < 1e-14);

        let x = 10.0;
        let fv = front_variables(x, x + 1e-13 * x, src(0.6)).unwrap();
        assert!(fv.eta < 1e-5 && fv.xi > 1e6);
        assert!(front_variables(1.0, 1.0, src(0.6)).is_err());
    }

    #[test]
    fn settings_validation() {
        assert!(SeriesSettings::new(0.0, 10).is_err());
        assert!(SeriesSettings::new(1e-2, 10).is_err());
        assert!(SeriesSettings::new(1e-8, 0).is_err());
        assert!(SeriesSettings::new(1e-8, 10).is_ok());
    }

    #[test]
    fn truncation_cap_reports_convergence_error() {
        let s = SeriesSettings::new(1e-12, 50).unwrap();
        let err = psi_rel(10.0, 5000.0, src(0.99), &s).unwrap_err();
        match err {
            Error::Convergence { terms, last_term } => {
                assert_eq!(terms, 50);
                assert!(last_term > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn front_forms_at_front() {
        assert_eq!(psi_rel_front(3.0, 3.0, src(0.4)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(psi_rel_front_linear(3.0, 3.0, src(0.4)), Complex64::new(1.0, 0.0));
        let p = psi_rel_front_paper(3.0, 3.0, src(0.4)).unwrap();
        assert!((p.norm_sqr() - 1.16).abs() < 1e-15);
    }

    #[test]
    fn nonrel_before_onset_is_zero() {
        let v = psi_nonrel(1.0, -0.5, src(0.5)).unwrap();
        assert_eq!(v.amplitude, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn scaling_map() {
        assert_eq!(scale_nonrel(2.0, 3.0, -0.5, 1.0).unwrap(), (2.0, 3.0, -0.5));
        assert_eq!(scale_nonrel(2.0, 3.0, -0.5, 4.0).unwrap(), (4.0, 12.0, -0.125));
        assert!(scale_nonrel(2.0, 3.0, -0.5, 0.0).is_err());
    }

    #[test]
    fn stationary_examples() {
        assert_eq!(stationary_density(0.0, src(0.3), Dispersion::Relativistic), 1.0);
        let r = stationary_density(0.1, src(0.1), Dispersion::Relativistic);
        let n = stationary_density(0.1, src(0.1), Dispersion::Nonrelativistic);
        assert!((r - (-0.2 * 0.99f64.sqrt()).exp()).abs() < 1e-15);
        assert!((n - (-0.2 * 1.8f64.sqrt()).exp()).abs() < 1e-15);
        assert!(r > n);
        assert!((r - 0.81955).abs() < 1e-4 && (n - 0.76466).abs() < 1e-4);
    }
}
