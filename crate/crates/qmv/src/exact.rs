//! Exact arbitrary-precision rational scalars and small helpers around them.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always stored in lowest terms with a positive
/// denominator (guaranteed by the backing implementation).
pub type Rat = BigRational;

/// Rational from an integer pair.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from an integer.
pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Binomial coefficient C(n, k) as an exact integer; zero outside 0 <= k <= n.
pub fn binomial(n: usize, k: isize) -> BigInt {
    if k < 0 || k as usize > n {
        return BigInt::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// n! as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Rational -> f64, robust for numerators/denominators far beyond f64 range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let num = r.numer();
    let den = r.denom();
    if num.is_zero() {
        return 0.0;
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Shift both below 2^63 so the i64 conversion is exact enough.
    let sn = (nb - 62).max(0);
    let sd = (db - 62).max(0);
    let n2 = (num >> sn).to_f64().unwrap_or(f64::NAN);
    let d2 = (den >> sd).to_f64().unwrap_or(f64::NAN);
    let scale = sn - sd;
    if scale > 1023 {
        return if num.sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    if scale < -1023 {
        return 0.0;
    }
    (n2 / d2) * 2f64.powi(scale as i32)
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Renders in the "p/q" wire format, integers without the "/1".
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest rational with denominator <= `max_den`, via continued fractions.
/// Returns `None` if nothing within `tol` exists at that denominator budget.
pub fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut v = x.abs();
    // Convergents p/q of the continued-fraction expansion.
    let (mut p0, mut q0, mut p1, mut q1) = (1u128, 0u128, v.floor() as u128, 1u128);
    v -= v.floor();
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x.abs()).abs() <= tol {
            break;
        }
        if v.abs() < f64::EPSILON {
            break;
        }
        v = 1.0 / v;
        let a = v.floor();
        if a >= u64::MAX as f64 {
            break;
        }
        v -= a;
        let a = a as u128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let candidate = Rat::new(BigInt::from(p1), BigInt::from(q1));
    let candidate = if negative { -candidate } else { candidate };
    if (rat_to_f64(&candidate) - x).abs() <= tol {
        Some(candidate)
    } else {
        None
    }
}
