//! Dispersion relations, branch conventions and characteristic scales.
//!
//! Everything is dimensionless: frequencies in units of the cutoff, lengths
//! and times in the matching natural units (see [`PhysicalSystem`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dispersion {
    /// `omega^2 = 1 + k^2`
    Relativistic,
    /// `omega = 1 + k^2 / 2`
    Nonrelativistic,
}

/// Carrier frequency of the switched-on source `exp(-i omega0 t) Theta(t)`.
///
/// Only below-cutoff carriers, `0 < omega0 < 1`, can be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    omega0: f64,
}

impl SourceSpec {
    pub fn new(omega0: f64) -> Result<Self> {
        ensure_finite("omega0", omega0)?;
        if !(omega0 > 0.0 && omega0 < 1.0) {
            return Err(Error::domain(format!(
                "carrier frequency must lie in (0, 1), got {omega0}"
            )));
        }
        Ok(SourceSpec { omega0 })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }
}

/// Wavenumber on the physical sheet: outgoing for propagating frequencies,
/// `Im k > 0` (decaying) for evanescent ones.
pub fn wavenumber(omega: f64, d: Dispersion) -> Result<Complex64> {
    ensure_finite("omega", omega)?;
    let k = match d {
        Dispersion::Relativistic => {
            let q = omega * omega - 1.0;
            if q >= 0.0 {
                Complex64::new(omega.signum() * q.sqrt(), 0.0)
            } else {
                Complex64::new(0.0, (-q).sqrt())
            }
        }
        Dispersion::Nonrelativistic => {
            let q = 2.0 * (omega - 1.0);
            if q >= 0.0 {
                Complex64::new(q.sqrt(), 0.0)
            } else {
                Complex64::new(0.0, (-q).sqrt())
            }
        }
    };
    Ok(k)
}

/// Decay constant of the stationary evanescent wave.
pub fn kappa0(src: SourceSpec, d: Dispersion) -> f64 {
    let w = src.omega0;
    match d {
        // (1 - w)(1 + w) keeps precision as w -> 1
        Dispersion::Relativistic => ((1.0 - w) * (1.0 + w)).sqrt(),
        Dispersion::Nonrelativistic => (2.0 * (1.0 - w)).sqrt(),
    }
}

/// Traversal (Buttiker-Landauer) time `tau = x / kappa0`.
pub fn traversal_time(x: f64, src: SourceSpec, d: Dispersion) -> Result<f64> {
    ensure_finite("x", x)?;
    if x <= 0.0 {
        return Err(Error::domain(format!("position must be > 0, got {x}")));
    }
    Ok(x / kappa0(src, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalesReport {
    pub kappa0: f64,
    pub tau: f64,
    pub penetration_length: f64,
}

pub fn scales(x: f64, src: SourceSpec, d: Dispersion) -> Result<ScalesReport> {
    let k = kappa0(src, d);
    Ok(ScalesReport {
        kappa0: k,
        tau: traversal_time(x, src, d)?,
        penetration_length: 1.0 / k,
    })
}

/// Roots `z+- = omega0 +- i kappa0` of the relativistic pole pair. Both lie
/// on the unit circle and `z+ z- = 1`.
pub fn pole_roots(src: SourceSpec) -> (Complex64, Complex64) {
    let k = kappa0(src, Dispersion::Relativistic);
    (
        Complex64::new(src.omega0, k),
        Complex64::new(src.omega0, -k),
    )
}

/// Physical systems whose field equation reduces to the dimensionless
/// Klein-Gordon form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhysicalSystem {
    /// Spin-0 particle of rest mass `m0`.
    KleinGordonParticle { m0: f64, c: f64, hbar: f64 },
    /// Hollow waveguide mode with transverse eigenvalue `lambda`.
    Waveguide { lambda: f64, c: f64 },
}

impl PhysicalSystem {
    fn validate(&self) -> Result<()> {
        let params: &[(&str, f64)] = match self {
            PhysicalSystem::KleinGordonParticle { m0, c, hbar } => {
                &[("m0", *m0), ("c", *c), ("hbar", *hbar)]
            }
            PhysicalSystem::Waveguide { lambda, c } => &[("lambda", *lambda), ("c", *c)],
        };
        for &(name, v) in params {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    // (length scale, time scale) multipliers
    fn factors(&self) -> (f64, f64) {
        match *self {
            PhysicalSystem::KleinGordonParticle { m0, c, hbar } => {
                (m0 * c / hbar, m0 * c * c / hbar)
            }
            PhysicalSystem::Waveguide { lambda, c } => (lambda, lambda * c),
        }
    }

    /// Dimensional position and time to the dimensionless `(x, t)`.
    pub fn to_dimensionless(&self, position: f64, time: f64) -> Result<(f64, f64)> {
        self.validate()?;
        let (fx, ft) = self.factors();
        Ok((position * fx, time * ft))
    }

    pub fn from_dimensionless(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        self.validate()?;
        let (fx, ft) = self.factors();
        Ok((x / fx, t / ft))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_examples() {
        let rel = Dispersion::Relativistic;
        let nr = Dispersion::Nonrelativistic;
        assert_eq!(wavenumber(1.0, rel).unwrap(), Complex64::new(0.0, 0.0));
        let k = wavenumber(0.5, rel).unwrap();
        assert!((k - Complex64::new(0.0, 0.8660254037844386)).norm() < 1e-16);
        assert_eq!(wavenumber(0.5, nr).unwrap(), Complex64::new(0.0, 1.0));
        // outgoing branch below -1
        assert!(wavenumber(-2.0, rel).unwrap().re < 0.0);
        assert!(wavenumber(f64::NAN, rel).is_err());
    }

    #[test]
    fn kappa_examples() {
        let s = SourceSpec::new(0.99).unwrap();
        assert!((kappa0(s, Dispersion::Relativistic) - 0.14106735979665883).abs() < 1e-15);
        assert!((kappa0(s, Dispersion::Nonrelativistic) - 0.1414213562373095).abs() < 1e-15);
        let s = SourceSpec::new(1e-12).unwrap();
        assert!((kappa0(s, Dispersion::Relativistic) - 1.0).abs() < 1e-11);
        assert!((kappa0(s, Dispersion::Nonrelativistic) - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn source_outside_band_rejected() {
        for w in [0.0, 1.0, -0.3, 1.2, f64::NAN] {
            assert!(matches!(SourceSpec::new(w), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn traversal_examples() {
        let s = SourceSpec::new(0.99).unwrap();
        let tau = traversal_time(100.0, s, Dispersion::Relativistic).unwrap();
        assert!((tau - 100.0 / 0.14106735979665883).abs() < 1e-10);
        assert!((tau - 708.8822).abs() < 1e-3);
        let s = SourceSpec::new(0.5).unwrap();
        assert_eq!(traversal_time(10.0, s, Dispersion::Nonrelativistic).unwrap(), 10.0);
        assert!(traversal_time(0.0, s, Dispersion::Relativistic).is_err());
    }

    #[test]
    fn physical_mappings() {
        let wg = PhysicalSystem::Waveguide { lambda: 1.0, c: 1.0 };
        assert_eq!(wg.to_dimensionless(1.0, 1.0).unwrap(), (1.0, 1.0));
        let kg = PhysicalSystem::KleinGordonParticle { m0: 2.0, c: 1.0, hbar: 1.0 };
        assert_eq!(kg.to_dimensionless(3.0, 5.0).unwrap(), (6.0, 10.0));
        let bad = PhysicalSystem::Waveguide { lambda: 0.0, c: 1.0 };
        assert!(bad.to_dimensionless(1.0, 1.0).is_err());
    }
}
