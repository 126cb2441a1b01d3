//! Money scalars.
//!
//! Every measure that carries money (external utility, item and itemset
//! utility, TU, TWU, remaining utility) is generic over [`Utility`]. Counts
//! (quantities and supports) are always plain integers.
//!
//! Integer types are the intended representation: amounts are stored in the
//! smallest currency unit so threshold comparisons are exact. `f64` and
//! `Ratio<i64>` are supported for callers that already hold fractional
//! amounts.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

pub trait Utility: Num + Copy + PartialOrd + Sum + Debug + Display + Send + Sync + 'static {
    /// Lifts a count (quantity or support) into money units.
    fn from_count(count: u64) -> Self;

    /// `fraction × total`, rounded up for integer money.
    fn fraction_of(total: Self, fraction: f64) -> Self;

    /// Parses a decimal token, scaling it by `10^scale`.
    ///
    /// Integer types reject tokens with more fractional digits than `scale`.
    fn parse_money(token: &str, scale: u32) -> Option<Self>;

    /// Inverse of [`Utility::parse_money`].
    fn format_money(self, scale: u32) -> String;

    /// `self / divisor` when it is an exact positive integer.
    fn exact_quotient(self, divisor: Self) -> Option<u64>;

    fn to_f64(self) -> f64;

    fn is_positive(self) -> bool {
        self > Self::zero()
    }
}

/// Splits `[-]int[.frac]` and returns the value scaled by `10^scale` as an
/// exact integer.
fn parse_scaled_i128(token: &str, scale: u32) -> Option<i128> {
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
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
    let frac_digits = frac_part.len() as u32;
    if frac_digits > scale {
        // Only trailing zeros may be dropped.
        if frac_part[scale as usize..].bytes().any(|b| b != b'0') {
            return None;
        }
    }
    let kept = &frac_part[..frac_part.len().min(scale as usize)];
    let mut value: i128 = 0;
    for b in int_part.bytes().chain(kept.bytes()) {
        value = value.checked_mul(10)?.checked_add((b - b'0') as i128)?;
    }
    let pad = scale - kept.len() as u32;
    value = value.checked_mul(10i128.checked_pow(pad)?)?;
    Some(if negative { -value } else { value })
}

fn format_scaled_i128(value: i128, scale: u32) -> String {
    if scale == 0 {
        return value.to_string();
    }
    let unit = 10i128.pow(scale);
    let sign = if value < 0 { "-" } else { "" };
    let abs = value.unsigned_abs();
    let unit = unit as u128;
    format!("{sign}{}.{:0width$}", abs / unit, abs % unit, width = scale as usize)
}

macro_rules! integer_utility {
    ($($t:ty),*) => {$(
        impl Utility for $t {
            fn from_count(count: u64) -> Self {
                count as $t
            }

            fn fraction_of(total: Self, fraction: f64) -> Self {
                (fraction * total as f64).ceil() as $t
            }

            fn parse_money(token: &str, scale: u32) -> Option<Self> {
                parse_scaled_i128(token, scale).and_then(|v| <$t>::try_from(v).ok())
            }

            fn format_money(self, scale: u32) -> String {
                format_scaled_i128(self as i128, scale)
            }

            fn exact_quotient(self, divisor: Self) -> Option<u64> {
                if divisor <= 0 as $t || self <= 0 as $t || self % divisor != 0 as $t {
                    return None;
                }
                u64::try_from(self / divisor).ok()
            }

            fn to_f64(self) -> f64 {
                self as f64
            }
        }
    )*};
}

integer_utility!(u32, u64, u128, i64);

impl Utility for f64 {
    fn from_count(count: u64) -> Self {
        count as f64
    }

    fn fraction_of(total: Self, fraction: f64) -> Self {
        fraction * total
    }

    fn parse_money(token: &str, scale: u32) -> Option<Self> {
        let v: f64 = token.parse().ok()?;
        v.is_finite().then(|| v * 10f64.powi(scale as i32))
    }

    fn format_money(self, scale: u32) -> String {
        (self / 10f64.powi(scale as i32)).to_string()
    }

    fn exact_quotient(self, divisor: Self) -> Option<u64> {
        if divisor <= 0.0 || self <= 0.0 {
            return None;
        }
        let q = (self / divisor).round();
        ((q * divisor - self).abs() <= 1e-9 * self.abs().max(1.0)).then_some(q as u64)
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Utility for Ratio<i64> {
    fn from_count(count: u64) -> Self {
        Ratio::from_integer(count as i64)
    }

    fn fraction_of(total: Self, fraction: f64) -> Self {
        Ratio::approximate_float(fraction).unwrap_or_else(|| Ratio::from_integer(0)) * total
    }

    fn parse_money(token: &str, scale: u32) -> Option<Self> {
        let unit = Ratio::from_integer(10i64.checked_pow(scale)?);
        if let Some((n, d)) = token.split_once('/') {
            let (n, d): (i64, i64) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
            return (d != 0).then(|| Ratio::new(n, d) * unit);
        }
        let digits = token.split_once('.').map_or(0, |(_, f)| f.len() as u32);
        let scaled = parse_scaled_i128(token, digits)?;
        let scaled = i64::try_from(scaled).ok()?;
        Some(Ratio::new(scaled, 10i64.checked_pow(digits)?) * unit)
    }

    fn format_money(self, scale: u32) -> String {
        (self / Ratio::from_integer(10i64.pow(scale))).to_string()
    }

    fn exact_quotient(self, divisor: Self) -> Option<u64> {
        if divisor <= Ratio::from_integer(0) || self <= Ratio::from_integer(0) {
            return None;
        }
        let q = self / divisor;
        q.is_integer().then(|| q.to_integer() as u64)
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}
