//! Exact rational scalars and the `Scalar` abstraction shared by the float
//! and exact computation paths.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always held in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Lower parameters within this distance of a non-positive integer are
/// treated as poles in floating-point mode.
pub const EPS_POLE: f64 = 1e-8;

/// Arithmetic needed by the series and recurrence code, implemented for
/// `f64` (float mode) and [`Rational`] (exact mode).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    /// Exact zero test for rationals; `|x| <= EPS_POLE` for floats.
    fn is_negligible(&self) -> bool;

    /// The integer this value equals (exactly, or within `EPS_POLE` for floats).
    fn as_integer(&self) -> Option<i64>;

    fn to_f64(&self) -> f64;

    /// Whether the value is a non-positive integer, i.e. a pole of `(x)_n` in
    /// a denominator.
    fn is_nonpositive_integer(&self) -> bool {
        matches!(self.as_integer(), Some(k) if k <= 0)
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= EPS_POLE
    }

    fn as_integer(&self) -> Option<i64> {
        if !self.is_finite() {
            return None;
        }
        let r = self.round();
        if (self - r).abs() <= EPS_POLE && r.abs() < 9.0e15 {
            Some(r as i64)
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Build `p/q` from machine integers. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact rational value of a finite `f64`.
pub fn from_f64_exact(x: f64) -> Result<Rational, Error> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

/// Parse `p/q`, an integer, or a decimal such as `-1.25e-3` into an exact
/// rational. Decimals are converted digit-for-digit, never through `f64`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim().replace('−', "-");
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim().trim_start_matches('+'))
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q = BigInt::from_str(q.trim().trim_start_matches('+'))
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(&t).ok_or_else(|| Error::Parse(format!("cannot parse {s:?} as a rational")))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&digits).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let mut denom = BigInt::one();
    let ten = BigInt::from(10u8);
    if scale >= 0 {
        numer *= num_traits::pow(ten, scale as usize);
    } else {
        denom = num_traits::pow(ten, (-scale) as usize);
    }
    if negative {
        numer = -numer;
    }
    Some(Rational::new(numer, denom))
}

/// Parse a real parameter for float mode; accepts the same syntax as
/// [`parse_rational`] plus anything `f64::from_str` understands.
pub fn parse_real(s: &str) -> Result<f64, Error> {
    match parse_rational(s) {
        Ok(r) => Ok(Scalar::to_f64(&r)),
        Err(_) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("cannot parse {s:?} as a real"))),
    }
}

/// `2x` as an integer, when it is one. The excluded-parameter provisos are
/// all conditions on `2a`.
pub(crate) fn twice_as_integer<T: Scalar>(x: &T) -> Option<i64> {
    let two = T::from_i64(2);
    (two * x.clone()).as_integer()
}

/// Format a rational as `p/q`, or `p` when integral.
pub fn to_fraction_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-2.5").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("1.5E2").unwrap(), ratio(150, 1));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("−1/2").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn decimal_0_1_is_not_the_binary_double() {
        let tenth = parse_rational("0.1").unwrap();
        assert_eq!(tenth, ratio(1, 10));
        assert_ne!(tenth, from_f64_exact(0.1).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn canonical_form() {
        let z = ratio(0, -7);
        assert_eq!(z.numer(), &BigInt::zero());
        assert_eq!(z.denom(), &BigInt::one());
        let r = ratio(4, -6);
        assert_eq!(to_fraction_string(&r), "-2/3");
    }

    #[test]
    fn float_integer_guard() {
        assert_eq!((-2.0 + 1e-9).as_integer(), Some(-2));
        assert_eq!((-2.0 + 1e-6).as_integer(), None);
        assert!((0.0f64).is_nonpositive_integer());
        assert!(!(1.0f64).is_nonpositive_integer());
        assert!(ratio(-3, 1).is_nonpositive_integer());
        assert!(!ratio(-1, 2).is_nonpositive_integer());
    }
}
