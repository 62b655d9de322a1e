use num_complex::Complex64;

use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_573_9;
const MAX_COMPONENT: f64 = 0.5e154;
const MAX_EXP: f64 = 708.503_061_461_606;
const MAX_TRIG_ARG: f64 = 3.537_118_876_014_22e15;

/// Faddeeva function `w(z) = exp(-z^2) erfc(-iz)`.
///
/// The first quadrant is evaluated directly: a Taylor series inside a small
/// ellipse around the origin, Gautschi's truncated-Taylor continued fraction
/// in the middle zone and the plain Laplace continued fraction far out. The
/// other quadrants follow from `w(-conj z) = conj w(z)` and the reflection
/// `w(-z) = 2 exp(-z^2) - w(z)`; when `exp(-z^2)` would overflow in the lower
/// half-plane a range error is returned.
pub fn faddeeva_w(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("faddeeva argument must be finite, got {z}")));
    }
    let xabs = z.re.abs();
    let yabs = z.im.abs();
    if xabs > MAX_COMPONENT || yabs > MAX_COMPONENT {
        return Err(Error::Range(format!("faddeeva argument {z} too large")));
    }

    let xs = xabs / 6.3;
    let ys = yabs / 4.4;
    let mut qrho = xs * xs + ys * ys;
    let xquad = xabs * xabs - yabs * yabs;
    let yquad = 2.0 * xabs * yabs;

    let near_origin = qrho < 0.085264;
    let (mut u, mut v);
    // exp(-z^2) for the first-quadrant point, kept for the reflection step.
    let mut expz2 = (0.0, 0.0);
    if near_origin {
        qrho = (1.0 - 0.85 * ys) * qrho.sqrt();
        let n = (6.0 + 72.0 * qrho).round() as i32;
        let mut j = 2 * n + 1;
        let mut xsum = 1.0 / j as f64;
        let mut ysum = 0.0;
        for i in (1..=n).rev() {
            j -= 2;
            let fi = i as f64;
            let xaux = (xsum * xquad - ysum * yquad) / fi;
            ysum = (xsum * yquad + ysum * xquad) / fi;
            xsum = xaux + 1.0 / j as f64;
        }
        let u1 = -TWO_OVER_SQRT_PI * (xsum * yabs + ysum * xabs) + 1.0;
        let v1 = TWO_OVER_SQRT_PI * (xsum * xabs - ysum * yabs);
        let daux = (-xquad).exp();
        let u2 = daux * yquad.cos();
        let v2 = -daux * yquad.sin();
        expz2 = (u2, v2);
        u = u1 * u2 - v1 * v2;
        v = u1 * v2 + v1 * u2;
    } else {
        let (h, kapn, nu) = if qrho > 1.0 {
            let q = qrho.sqrt();
            (0.0, 0, (3.0 + 1442.0 / (26.0 * q + 77.0)) as i32)
        } else {
            let q = (1.0 - ys) * (1.0 - qrho).sqrt();
            (
                1.88 * q,
                (7.0 + 34.0 * q).round() as i32,
                (16.0 + 26.0 * q).round() as i32,
            )
        };
        let h2 = 2.0 * h;
        let shifted = h > 0.0;
        let mut qlambda = if shifted { h2.powi(kapn) } else { 0.0 };
        let (mut rx, mut ry, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0);
        for n in (0..=nu).rev() {
            let np1 = (n + 1) as f64;
            let tx = yabs + h + np1 * rx;
            let ty = xabs - np1 * ry;
            let c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if shifted && n <= kapn {
                let tx = qlambda + sx;
                let new_sx = rx * tx - ry * sy;
                sy = ry * tx + rx * sy;
                sx = new_sx;
                qlambda /= h2;
            }
        }
        if shifted {
            u = TWO_OVER_SQRT_PI * sx;
            v = TWO_OVER_SQRT_PI * sy;
        } else {
            u = TWO_OVER_SQRT_PI * rx;
            v = TWO_OVER_SQRT_PI * ry;
        }
        if yabs == 0.0 {
            u = (-xabs * xabs).exp();
        }
    }

    if z.im < 0.0 {
        let (u2, v2) = if near_origin {
            (2.0 * expz2.0, 2.0 * expz2.1)
        } else {
            let growth = -xquad;
            if yquad > MAX_TRIG_ARG || growth > MAX_EXP {
                return Err(Error::Range(format!(
                    "w({z}) overflows: exp(-z^2) has exponent {growth:.3}"
                )));
            }
            let w1 = 2.0 * growth.exp();
            (w1 * yquad.cos(), -w1 * yquad.sin())
        };
        u = u2 - u;
        v = v2 - v;
        if z.re > 0.0 {
            v = -v;
        }
    } else if z.re < 0.0 {
        v = -v;
    }
    Ok(Complex64::new(u, v))
}
