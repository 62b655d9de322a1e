//! Arbitrary-precision reference evaluations, independent of the library's
//! fast paths. Values are held as fixed-point `BigInt`s scaled by `2^bits`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

fn to_fixed(x: f64, bits: u32) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let raw = x.to_bits();
    let exp = ((raw >> 52) & 0x7ff) as i64;
    let mut mant = (raw & ((1u64 << 52) - 1)) as i64;
    let e = if exp == 0 {
        -1074
    } else {
        mant |= 1 << 52;
        exp - 1075
    };
    let m = BigInt::from(if x < 0.0 { -mant } else { mant });
    let shift = e + bits as i64;
    if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    }
}

fn to_f64(v: &BigInt, bits: u32) -> f64 {
    let nbits = v.bits() as i64;
    let drop = (nbits - 62).max(0);
    let top = (v >> drop as usize).to_f64().unwrap();
    top * 2f64.powi((drop - bits as i64) as i32)
}

fn mul(a: &BigInt, b: &BigInt, bits: u32) -> BigInt {
    (a * b) >> bits as usize
}

/// `J_n(x)` from the ascending power series with enough guard bits to absorb
/// the cancellation between terms.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    assert!(x >= 0.0);
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let bits = 160 + (1.5 * x) as u32 + 4 * n;
    let half = to_fixed(0.5 * x, bits);
    let q = mul(&half, &half, bits);
    let mut term = BigInt::from(1) << bits as usize;
    for k in 1..=n {
        term = mul(&term, &half, bits) / BigInt::from(k);
    }
    let mut sum = term.clone();
    let mut m: u64 = 0;
    loop {
        m += 1;
        term = -mul(&term, &q, bits) / BigInt::from(m * (m + n as u64));
        if term.is_zero() {
            break;
        }
        sum += &term;
        if (m as f64) > x && term.abs().bits() < 8 {
            break;
        }
    }
    to_f64(&sum, bits)
}

fn pi_fixed(bits: u32) -> BigInt {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    fn atan_inv(k: u64, bits: u32) -> BigInt {
        let one = BigInt::from(1) << bits as usize;
        let k2 = BigInt::from(k * k);
        let mut power = &one / BigInt::from(k);
        let mut sum = power.clone();
        let mut n: u64 = 1;
        loop {
            power = -(power / &k2);
            if power.is_zero() {
                break;
            }
            sum += &power / BigInt::from(2 * n + 1);
            n += 1;
        }
        sum
    }
    BigInt::from(16) * atan_inv(5, bits) - BigInt::from(4) * atan_inv(239, bits)
}

/// `w(z)` from its Maclaurin series `sum (iz)^n / Gamma(n/2 + 1)`.
pub fn faddeeva_w(z: Complex64) -> Complex64 {
    let r2 = z.norm_sqr();
    let bits = 200 + (2.0 * r2) as u32;
    let one = BigInt::from(1) << bits as usize;
    let pi = pi_fixed(bits + 8) >> 8usize;
    let sqrt_pi = (&pi << bits as usize).sqrt();

    let zr = to_fixed(z.re, bits);
    let zi = to_fixed(z.im, bits);
    // -z^2
    let nz2r = -(mul(&zr, &zr, bits) - mul(&zi, &zi, bits));
    let nz2i = -(BigInt::from(2) * mul(&zr, &zi, bits));
    let cmul = |ar: &BigInt, ai: &BigInt, br: &BigInt, bi: &BigInt| {
        (
            mul(ar, br, bits) - mul(ai, bi, bits),
            mul(ar, bi, bits) + mul(ai, br, bits),
        )
    };

    // even part: sum (-z^2)^k / k!
    let (mut er, mut ei) = (one.clone(), BigInt::zero());
    let (mut sr, mut si) = (one.clone(), BigInt::zero());
    let mut k: u64 = 0;
    let max_terms = (20.0 + 4.0 * r2) as u64;
    while k < max_terms {
        k += 1;
        let (tr, ti) = cmul(&er, &ei, &nz2r, &nz2i);
        er = tr / BigInt::from(k);
        ei = ti / BigInt::from(k);
        if er.is_zero() && ei.is_zero() {
            break;
        }
        sr += &er;
        si += &ei;
    }

    // odd part: sum (iz)^(2k+1) 2^(k+1) / ((2k+1)!! sqrt(pi))
    let two_over_sqrt_pi = (BigInt::from(2) << (2 * bits) as usize) / &sqrt_pi;
    // iz = (-zi, zr)
    let (mut or, mut oi) = (
        mul(&(-&zi), &two_over_sqrt_pi, bits),
        mul(&zr, &two_over_sqrt_pi, bits),
    );
    sr += &or;
    si += &oi;
    k = 0;
    while k < max_terms {
        let (tr, ti) = cmul(&or, &oi, &nz2r, &nz2i);
        or = BigInt::from(2) * tr / BigInt::from(2 * k + 3);
        oi = BigInt::from(2) * ti / BigInt::from(2 * k + 3);
        k += 1;
        if or.is_zero() && oi.is_zero() {
            break;
        }
        sr += &or;
        si += &oi;
    }
    Complex64::new(to_f64(&sr, bits), to_f64(&si, bits))
}

/// Far-field asymptotic expansion of `w(z)` for `Im z >= 0`, summed up to the
/// smallest term.
pub fn faddeeva_w_asymptotic(z: Complex64) -> Complex64 {
    assert!(z.im >= 0.0 && z.norm() > 20.0);
    let inv2z2 = 1.0 / (2.0 * z * z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut n = 1.0;
    loop {
        let next = term * (2.0 * n - 1.0) * inv2z2;
        if next.norm() >= term.norm() || next.norm() < 1e-20 * sum.norm() {
            sum += next;
            break;
        }
        sum += next;
        term = next;
        n += 1.0;
    }
    let frac_1_sqrt_pi = 0.564_189_583_547_756_3;
    Complex64::new(0.0, frac_1_sqrt_pi) / z * sum
}
