//! Exact rational helpers shared by the effect computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Parses a plain or exponent-form decimal string (`"0.13"`, `"-2"`,
/// `"1e-3"`, `"3/10"`) into an exact rational.
pub fn decimal_to_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (body, exp) = match t.split_once(['e', 'E']) {
        Some((b, e)) => (b, e.parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (sign, body) = match body.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    let mantissa: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let scale = frac_part.len() as i32 - exp;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(mantissa * sign);
    if scale > 0 {
        value /= BigRational::from_integer(ten.pow(scale as u32));
    } else if scale < 0 {
        value *= BigRational::from_integer(ten.pow((-scale) as u32));
    }
    Some(value)
}

/// Converts a rational to the nearest `f64`.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a high-precision quotient for huge numerators.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational from an `f64` (binary expansion). `None` for non-finite.
pub fn from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn ratio_u64(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_within(r: &BigRational, target: &BigRational, tol: f64) -> bool {
    let diff = (r - target).abs();
    to_f64(&diff) <= tol
}
