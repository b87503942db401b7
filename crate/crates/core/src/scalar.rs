//! Numeric backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`], which is
//! implemented for `f64` (float mode) and [`Rational`] (exact mode). The
//! linear algebra over finite fields never touches these values; they only
//! drive comparisons, the foliation maps and the matching costs.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact.
    const EXACT: bool;
    /// Name used in reports (`"float"` or `"rational"`).
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(value: i64) -> Self;
    /// Converts a finite double. Exact for rationals.
    fn from_f64(value: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Parses decimal text (`-1.25`, `3e-2`) or a fraction (`7/3`).
    fn parse_str(text: &str) -> Result<Self>;
    /// `p`-th root of a nonnegative value; `None` when not representable.
    fn nth_root(&self, p: u32) -> Option<Self>;
    fn is_finite(&self) -> bool;
    fn total_cmp(&self, other: &Self) -> Ordering;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn powi(&self, p: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..p {
            acc = acc * self.clone();
        }
        acc
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_i64(2)
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a.total_cmp(b) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if b.total_cmp(a) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// Serializes for JSON/CSV output.
    fn to_json(&self) -> serde_json::Value;
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const MODE: &'static str = "float";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(value: i64) -> Self {
        value as f64
    }
    fn from_f64(value: f64) -> Option<Self> {
        value.is_finite().then_some(value)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn parse_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let value = match text.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num.trim().parse().map_err(|_| Error::parse_number(text))?;
                let den: f64 = den.trim().parse().map_err(|_| Error::parse_number(text))?;
                num / den
            }
            None => text.parse().map_err(|_| Error::parse_number(text))?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::parse_number(text))
        }
    }
    fn nth_root(&self, p: u32) -> Option<Self> {
        if *self < 0.0 || p == 0 {
            return None;
        }
        Some(match p {
            1 => *self,
            2 => self.sqrt(),
            3 => self.cbrt(),
            _ => self.powf(1.0 / p as f64),
        })
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const MODE: &'static str = "rational";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
    fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn parse_str(text: &str) -> Result<Self> {
        parse_rational(text.trim()).ok_or_else(|| Error::parse_number(text))
    }
    fn nth_root(&self, p: u32) -> Option<Self> {
        if self.is_negative() || p == 0 {
            return None;
        }
        if p == 1 {
            return Some(self.clone());
        }
        let exact_root = |n: &BigInt| {
            let r = n.nth_root(p);
            (num_traits::pow(r.clone(), p as usize) == *n).then_some(r)
        };
        let num = exact_root(self.numer())?;
        let den = exact_root(self.denom())?;
        Some(BigRational::new(num, den))
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            if let Some(v) = self.numer().to_i64() {
                return serde_json::json!(v);
            }
        }
        serde_json::Value::String(self.to_string())
    }
}

fn parse_rational(text: &str) -> Option<Rational> {
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_rational(num.trim())?;
        let den = parse_rational(den.trim())?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().ok()?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// A value in `[0, ∞]` or `ℝ ∪ {∞}`: used both for death coordinates of
/// diagram points and for distances.
#[derive(Clone, Debug, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

/// Distances take values in the extended nonnegative reals.
pub type ExtendedReal<T> = Extended<T>;

impl<T: Scalar> Extended<T> {
    pub fn zero() -> Self {
        Extended::Finite(T::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.to_f64(),
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn cmp_ext(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.total_cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.cmp_ext(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other.cmp_ext(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Multiplies by a positive finite factor; `∞ · c = ∞`.
    pub fn scale(&self, factor: &T) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(v.clone() * factor.clone()),
            Extended::Infinite => Extended::Infinite,
        }
    }

    /// Absolute difference under `∞ − y = ∞` (y finite) and `∞ − ∞ = 0`.
    pub fn abs_diff(&self, other: &Self) -> Self {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => {
                Extended::Finite((a.clone() - b.clone()).abs())
            }
            (Extended::Infinite, Extended::Infinite) => Extended::zero(),
            _ => Extended::Infinite,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Extended::Finite(v) => v.to_json(),
            Extended::Infinite => serde_json::Value::String("inf".into()),
        }
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if matches!(t, "inf" | "+inf" | "Inf" | "infinity" | "∞") {
            Ok(Extended::Infinite)
        } else {
            T::parse_str(t).map(Extended::Finite)
        }
    }
}

impl<T: Scalar> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_ext(other))
    }
}

impl<T: Display> Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Componentwise `a ⪯ b`.
pub fn weakly_below<T: Scalar>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Componentwise `a ≺ b` (strict in every coordinate).
pub fn strictly_below<T: Scalar>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x < y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(Rational::parse_str("0.1").unwrap(), q(1, 10));
        assert_eq!(Rational::parse_str("-1.25e1").unwrap(), q(-25, 2));
        assert_eq!(Rational::parse_str("3e-2").unwrap(), q(3, 100));
        assert_eq!(Rational::parse_str("7/3").unwrap(), q(7, 3));
        assert_eq!(Rational::parse_str(".5").unwrap(), q(1, 2));
        assert!(Rational::parse_str("1/0").is_err());
        assert!(Rational::parse_str("abc").is_err());
        assert!(Rational::parse_str("").is_err());
        assert_eq!(f64::parse_str("1/4").unwrap(), 0.25);
        assert!(f64::parse_str("nan").is_err());
    }

    #[test]
    fn rational_roots_are_exact_or_absent() {
        assert_eq!(q(25, 4).nth_root(2), Some(q(5, 2)));
        assert_eq!(q(27, 8).nth_root(3), Some(q(3, 2)));
        assert_eq!(q(2, 1).nth_root(2), None);
        assert_eq!(q(-1, 1).nth_root(2), None);
    }

    #[test]
    fn extended_conventions() {
        let inf: Extended<f64> = Extended::Infinite;
        let three = Extended::Finite(3.0);
        assert_eq!(inf.abs_diff(&inf), Extended::Finite(0.0));
        assert_eq!(inf.abs_diff(&three), Extended::Infinite);
        assert_eq!(three.clone().min(inf.clone()), three);
        assert_eq!(three.clone().max(inf.clone()), inf);
        assert_eq!(inf.scale(&0.5), Extended::Infinite);
        assert_eq!(inf.to_string(), "inf");
        assert_eq!(
            Extended::<f64>::parse_str("inf").unwrap(),
            Extended::Infinite
        );
    }
}
