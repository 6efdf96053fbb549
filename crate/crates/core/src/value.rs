//! Exact ordered values: fixed-point decimals or ordinal categories.
//!
//! Tie detection is the heart of every computation in this crate, so values
//! are never stored as binary floating point. A numeric value is an integer
//! mantissa at a per-dataset decimal scale; an ordinal value is an index into
//! a per-dataset category list. Comparison is integer comparison.

use crate::error::{Error, Result};

/// Largest number of decimal places a numeric scale may declare.
pub const MAX_DECIMALS: u8 = 9;

/// Mantissas beyond this magnitude are rejected so that rank sums and pair
/// counts stay exact in native integer arithmetic.
pub const MAX_ABS_MANTISSA: i64 = 1_000_000_000_000_000; // 10^15

/// A single outcome on its dataset's scale: the decimal mantissa for numeric
/// scales, or the 0-based category index for ordinal scales.
///
/// The scale itself lives on the owning [`Sample`](crate::Sample),
/// [`DiscreteDistribution`](crate::DiscreteDistribution) or
/// [`Dataset`](crate::Dataset); values from different scales never meet
/// except through operations that check scale compatibility first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedValue(i64);

impl OrderedValue {
    pub fn new(raw: i64) -> Self {
        OrderedValue(raw)
    }

    /// The raw mantissa or category index.
    pub fn raw(self) -> i64 {
        self.0
    }
}

/// The shared value scale of one dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scale {
    /// Signed decimals with exactly `decimals` places after the point.
    Numeric { decimals: u8 },
    /// Ordered categories compared by list position.
    Ordinal { categories: Vec<String> },
}

impl Scale {
    pub fn numeric(decimals: u8) -> Result<Self> {
        if decimals > MAX_DECIMALS {
            return Err(Error::InvalidConfig(format!(
                "numeric scale supports at most {MAX_DECIMALS} decimals, got {decimals}"
            )));
        }
        Ok(Scale::Numeric { decimals })
    }

    pub fn ordinal<S: Into<String>>(categories: Vec<S>) -> Result<Self> {
        let categories: Vec<String> = categories.into_iter().map(Into::into).collect();
        if categories.is_empty() {
            return Err(Error::InvalidConfig("ordinal scale needs at least one category".into()));
        }
        for (i, c) in categories.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidConfig("ordinal category names must be non-empty".into()));
            }
            if categories[..i].contains(c) {
                return Err(Error::InvalidConfig(format!("duplicate ordinal category '{c}'")));
            }
        }
        Ok(Scale::Ordinal { categories })
    }

    /// Parses a scale spec: `numeric(D)` with D in 0..=9, or
    /// `ordinal([c1,c2,...])` with categories in rank order.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(inner) = spec.strip_prefix("numeric(").and_then(|s| s.strip_suffix(')')) {
            let decimals: u8 = inner
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("invalid decimal count '{inner}' in scale spec")))?;
            return Scale::numeric(decimals);
        }
        if let Some(inner) = spec.strip_prefix("ordinal([").and_then(|s| s.strip_suffix("])")) {
            let cats: Vec<String> = inner.split(',').map(|c| c.trim().to_string()).collect();
            return Scale::ordinal(cats);
        }
        Err(Error::InvalidConfig(format!(
            "invalid scale spec '{spec}': expected numeric(D) or ordinal([c1,...,ck])"
        )))
    }

    /// Renders the spec string accepted by [`Scale::parse_spec`].
    pub fn spec_string(&self) -> String {
        match self {
            Scale::Numeric { decimals } => format!("numeric({decimals})"),
            Scale::Ordinal { categories } => format!("ordinal([{}])", categories.join(",")),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Scale::Numeric { .. })
    }

    /// Parses one cell of text into a value on this scale.
    ///
    /// Numeric cells must be plain decimals with at most the declared number
    /// of places; ordinal cells must match a declared category verbatim.
    pub fn parse_cell(&self, text: &str) -> std::result::Result<OrderedValue, String> {
        match self {
            Scale::Numeric { decimals } => parse_decimal_cell(text, *decimals),
            Scale::Ordinal { categories } => match categories.iter().position(|c| c == text) {
                Some(i) => Ok(OrderedValue(i as i64)),
                None => Err(format!("unknown ordinal category '{text}'")),
            },
        }
    }

    /// Renders a value of this scale, inverse of [`Scale::parse_cell`].
    pub fn format_value(&self, v: OrderedValue) -> String {
        match self {
            Scale::Numeric { decimals } => format_mantissa(v.0, *decimals),
            Scale::Ordinal { categories } => categories
                .get(v.0 as usize)
                .cloned()
                .unwrap_or_else(|| format!("<category {}>", v.0)),
        }
    }

    /// Checks that a raw value is representable on this scale.
    pub fn check_value(&self, v: OrderedValue) -> Result<()> {
        match self {
            Scale::Numeric { .. } => {
                if v.0.abs() > MAX_ABS_MANTISSA {
                    return Err(Error::InvalidInput(format!(
                        "mantissa {} exceeds the supported magnitude 10^15",
                        v.0
                    )));
                }
            }
            Scale::Ordinal { categories } => {
                if v.0 < 0 || v.0 as usize >= categories.len() {
                    return Err(Error::InvalidInput(format!(
                        "category index {} out of range for {} categories",
                        v.0,
                        categories.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Errors unless `other` is the same kind and, for ordinals, the same
    /// category list.
    pub fn ensure_compatible(&self, other: &Scale) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ScaleMismatch {
                left: self.spec_string(),
                right: other.spec_string(),
            })
        }
    }
}

pub(crate) fn pow10(n: u8) -> i64 {
    10_i64.pow(n as u32)
}

fn parse_decimal_cell(text: &str, decimals: u8) -> std::result::Result<OrderedValue, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty value cell".into());
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1_i64, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("unparseable numeric value '{text}'"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("unparseable numeric value '{text}'"));
    }
    if frac_part.len() > decimals as usize {
        return Err(format!(
            "decimal precision exceeded: '{text}' has {} places, scale allows {decimals}",
            frac_part.len()
        ));
    }
    let mut mantissa: i64 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        mantissa = mantissa
            .checked_mul(10)
            .and_then(|m| m.checked_add((b - b'0') as i64))
            .ok_or_else(|| format!("value '{text}' out of range"))?;
    }
    let pad = decimals as usize - frac_part.len();
    for _ in 0..pad {
        mantissa = mantissa.checked_mul(10).ok_or_else(|| format!("value '{text}' out of range"))?;
    }
    if mantissa > MAX_ABS_MANTISSA {
        return Err(format!("value '{text}' exceeds the supported magnitude 10^15"));
    }
    Ok(OrderedValue(sign * mantissa))
}

fn format_mantissa(mantissa: i64, decimals: u8) -> String {
    if decimals == 0 {
        return mantissa.to_string();
    }
    let p = pow10(decimals);
    let sign = if mantissa < 0 { "-" } else { "" };
    let abs = mantissa.unsigned_abs();
    let int = abs / p as u64;
    let frac = abs % p as u64;
    format!("{sign}{int}.{frac:0width$}", width = decimals as usize)
}

/// Rescales a mantissa from `from` decimals to `to` decimals.
///
/// Widening is exact; narrowing rounds half away from zero.
pub(crate) fn rescale_mantissa(m: i64, from: u8, to: u8) -> Result<i64> {
    use std::cmp::Ordering;
    let out = match from.cmp(&to) {
        Ordering::Equal => m,
        Ordering::Less => m
            .checked_mul(pow10(to - from))
            .ok_or_else(|| Error::InvalidInput(format!("value {m} overflows at {to} decimals")))?,
        Ordering::Greater => {
            let p = pow10(from - to);
            let q = m / p;
            let r = (m % p).abs();
            if 2 * r >= p {
                q + m.signum()
            } else {
                q
            }
        }
    };
    if out.abs() > MAX_ABS_MANTISSA {
        return Err(Error::InvalidInput(format!("rescaled value {out} exceeds the supported magnitude 10^15")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats_numeric_cells() {
        let s = Scale::numeric(1).unwrap();
        assert_eq!(s.parse_cell("1.7").unwrap().raw(), 17);
        assert_eq!(s.parse_cell("-0.3").unwrap().raw(), -3);
        assert_eq!(s.parse_cell("4").unwrap().raw(), 40);
        assert_eq!(s.format_value(OrderedValue::new(17)), "1.7");
        assert_eq!(s.format_value(OrderedValue::new(-3)), "-0.3");
        assert_eq!(s.format_value(OrderedValue::new(40)), "4.0");
    }

    #[test]
    fn rejects_excess_precision() {
        let s = Scale::numeric(1).unwrap();
        let err = s.parse_cell("1.75").unwrap_err();
        assert!(err.contains("decimal precision exceeded"), "{err}");
    }

    #[test]
    fn rejects_garbage_cells() {
        let s = Scale::numeric(2).unwrap();
        assert!(s.parse_cell("abc").is_err());
        assert!(s.parse_cell("1.2.3").is_err());
        assert!(s.parse_cell("").is_err());
        assert!(s.parse_cell(".").is_err());
    }

    #[test]
    fn ordinal_cells_match_verbatim() {
        let s = Scale::ordinal(vec!["low", "mid", "high"]).unwrap();
        assert_eq!(s.parse_cell("mid").unwrap().raw(), 1);
        assert!(s.parse_cell("Mid").is_err());
        assert_eq!(s.format_value(OrderedValue::new(2)), "high");
    }

    #[test]
    fn scale_spec_round_trips() {
        for spec in ["numeric(0)", "numeric(9)", "ordinal([a,b,c])"] {
            let s = Scale::parse_spec(spec).unwrap();
            assert_eq!(s.spec_string(), spec);
        }
        assert!(Scale::parse_spec("numeric(10)").is_err());
        assert!(Scale::parse_spec("float(2)").is_err());
    }

    #[test]
    fn comparison_agrees_with_rational_value() {
        // mantissa comparison == comparison of mantissa * 10^-d
        let a = OrderedValue::new(17); // 1.7
        let b = OrderedValue::new(140); // 14.0
        assert!(a < b);
        assert_eq!(OrderedValue::new(20).cmp(&OrderedValue::new(20)), std::cmp::Ordering::Equal);
    }

    #[test]
    fn rescale_rounds_half_away_from_zero() {
        assert_eq!(rescale_mantissa(17, 1, 0).unwrap(), 2); // 1.7 -> 2
        assert_eq!(rescale_mantissa(14, 1, 0).unwrap(), 1); // 1.4 -> 1
        assert_eq!(rescale_mantissa(15, 1, 0).unwrap(), 2); // 1.5 -> 2
        assert_eq!(rescale_mantissa(-15, 1, 0).unwrap(), -2); // -1.5 -> -2
        assert_eq!(rescale_mantissa(3, 0, 2).unwrap(), 300);
    }
}
