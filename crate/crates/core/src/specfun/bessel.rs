use crate::error::{ensure_finite, Error, Result};

/// Bessel functions `J_0(x) ..= J_{order_max}(x)` at a single argument.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselSequence {
    pub order_max: usize,
    pub argument: f64,
    pub values: Vec<f64>,
}

impl BesselSequence {
    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }
}

/// `J_n(x)` for integer `n >= 0` and real `x >= 0`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    let seq = bessel_j_seq(n as usize, x)?;
    Ok(seq.values[n as usize])
}

/// `J_0(x) ..= J_{n_max}(x)`.
///
/// Uses the ascending series for `x <= 1` and Miller's downward recurrence,
/// normalised with `J_0 + 2 (J_2 + J_4 + ...) = 1`, otherwise. The downward
/// direction is the stable one for the minimal solution, so orders far above
/// `x` keep full relative accuracy.
pub fn bessel_j_seq(n_max: usize, x: f64) -> Result<BesselSequence> {
    ensure_finite("bessel argument", x)?;
    if x < 0.0 {
        return Err(Error::domain(format!("bessel argument must be >= 0, got {x}")));
    }
    let values = if x == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        v
    } else if x <= 1.0 {
        ascending_series(n_max, x)
    } else {
        miller(n_max, x)
    };
    Ok(BesselSequence {
        order_max: n_max,
        argument: x,
        values,
    })
}

fn ascending_series(n_max: usize, x: f64) -> Vec<f64> {
    let half = 0.5 * x;
    let q = -half * half;
    let mut lead = 1.0; // (x/2)^n / n!
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            lead *= half / n as f64;
        }
        let mut term = lead;
        let mut sum = lead;
        let mut m = 1.0;
        while term.abs() > f64::EPSILON * 1e-3 * sum.abs() && m < 200.0 {
            term *= q / (m * (m + n as f64));
            sum += term;
            m += 1.0;
        }
        out.push(sum);
    }
    out
}

// log10 of the rough magnitude envelope |J_n(x)| ~ 1/sqrt(2 pi n) (e x / 2n)^n.
fn envelope_log10(n: f64, x: f64) -> f64 {
    0.5 * (6.28 * n).log10() - n * (1.36 * x / n).log10()
}

// Secant search for the order at which envelope_log10 drops to -target.
fn order_at_envelope(x: f64, start: f64, target: f64) -> f64 {
    let mut n0 = start;
    let mut f0 = envelope_log10(n0, x) - target;
    let mut n1 = n0 + 5.0;
    let mut f1 = envelope_log10(n1, x) - target;
    for _ in 0..40 {
        if f1 == f0 {
            break;
        }
        let nn = (n1 - (n1 - n0) / (1.0 - f0 / f1)).max(1.0);
        let f = envelope_log10(nn, x) - target;
        if (nn - n1).abs() < 1.0 {
            return nn;
        }
        n0 = n1;
        f0 = f1;
        n1 = nn;
        f1 = f;
    }
    n1
}

// Starting order for the backward recurrence so that all of J_0..J_n_max
// carry `digits` significant digits.
fn start_order(x: f64, n_max: usize, digits: f64) -> usize {
    let n = (n_max as f64).max(1.0);
    let env = envelope_log10(n, x);
    let (target, start) = if env <= 0.5 * digits {
        (digits, (1.1 * x).floor() + 1.0)
    } else {
        (0.5 * digits + env, n)
    };
    let nn = order_at_envelope(x, start, target);
    (nn.max(n) as usize) + 20
}

fn miller(n_max: usize, x: f64) -> Vec<f64> {
    const BIG: f64 = 1e250;
    // Orders whose magnitude lies far below the representable range are zero.
    let cutoff = order_at_envelope(x, (1.1 * x).floor() + 1.0, 305.0) as usize;
    let needed = n_max.min(cutoff.max(1));
    let start = start_order(x, needed, 17.0);

    let mut values = vec![0.0; n_max + 1];
    let mut next = 0.0; // f_{k+1}
    let mut cur = 1e-280; // f_k
    let mut even_sum = 0.0;
    let two_over_x = 2.0 / x;
    for k in (0..=start).rev() {
        if k <= n_max {
            values[k] = cur;
        }
        if k % 2 == 0 && k > 0 {
            even_sum += cur;
        }
        if k == 0 {
            break;
        }
        let prev = two_over_x * k as f64 * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > BIG {
            let s = 1.0 / BIG;
            cur *= s;
            next *= s;
            even_sum *= s;
            for v in &mut values[k.min(n_max + 1)..] {
                *v *= s;
            }
        }
    }
    let norm = values[0] + 2.0 * even_sum;
    for v in &mut values {
        *v /= norm;
    }
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        let s = bessel_j_seq(2, 0.0).unwrap();
        assert_eq!(s.values, vec![1.0, 0.0, 0.0]);
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(bessel_j(0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(3, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(3, f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn known_values() {
        let j11 = bessel_j(1, 1.0).unwrap();
        assert!((j11 - 0.4400505857449335).abs() < 1e-15);
        let j25 = bessel_j(2, 5.0).unwrap();
        assert!((j25 - 0.04656511627775222).abs() / 0.0466 < 1e-12);
    }

    #[test]
    fn bounded_by_one() {
        for &x in &[0.3, 2.0, 17.5, 250.0] {
            let s = bessel_j_seq(80, x).unwrap();
            assert!(s.values.iter().all(|v| v.abs() <= 1.0));
        }
    }

    #[test]
    fn huge_orders_underflow_quietly() {
        let s = bessel_j_seq(400, 3.0).unwrap();
        assert!(s.values[400] == 0.0 || s.values[400].abs() < 1e-300);
        assert!(s.values.iter().all(|v| v.is_finite()));
    }
}
