//! Exact rational arithmetic.
//!
//! Every tally, comparison figure, place number and load is a [`Rational`].
//! Values are kept in canonical reduced form, so equality is structural and
//! ties are detected exactly.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed rational with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in canonical form. Fails on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Rational> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `floor(100 x) / 100`, the two-decimal truncation used by the statute.
    pub fn truncate_2dec(&self) -> Result<Rational> {
        if self.is_negative() {
            return Err(Error::Domain(format!(
                "two-decimal truncation of negative value {self}"
            )));
        }
        let hundred = BigInt::from(100);
        let scaled = (self.numer() * &hundred).div_floor(self.denom());
        Ok(Rational(BigRational::new(scaled, hundred)))
    }

    pub fn min(self, other: Rational) -> Rational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Nearest `f64`, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with four significant digits, correctly rounded
    /// (half away from zero), trailing fractional zeros removed.
    pub fn approx(&self) -> String {
        self.approx_digits(4)
    }

    pub fn approx_digits(&self, digits: u32) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let x = self.0.abs();
        let ten = BigInt::from(10);
        // Exponent e with 10^e <= x < 10^(e+1).
        let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
        let pow10 = |k: i64| -> BigRational {
            if k >= 0 {
                BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
            }
        };
        while x < pow10(e) {
            e -= 1;
        }
        while x >= pow10(e + 1) {
            e += 1;
        }
        let shift = digits as i64 - 1 - e;
        let scaled = &x * pow10(shift);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut n = (scaled + half).floor().to_integer();
        let mut exp = e;
        if n >= num_traits::pow(ten.clone(), digits as usize) {
            n /= &ten;
            exp += 1;
        }
        let digits_str = n.to_string();
        let point = exp + 1;
        let body = if point >= digits_str.len() as i64 {
            let zeros = "0".repeat((point - digits_str.len() as i64) as usize);
            format!("{digits_str}{zeros}")
        } else if point > 0 {
            let (a, b) = digits_str.split_at(point as usize);
            format!("{a}.{b}")
        } else {
            format!("0.{}{}", "0".repeat((-point) as usize), digits_str)
        };
        let body = if body.contains('.') {
            body.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            body
        };
        format!("{sign}{body}")
    }
}

/// Total order on rationals, by exact cross multiplication.
pub fn cmp(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

/// Convenience constructor for tests and fixtures; panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("nonzero denominator")
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational::from_integer(n as u64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `7`, `-3/4` and finite decimals such as `0.275`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("not a rational number: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
            if !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let mut n: BigInt = digits.parse().map_err(|_| bad())?;
            if negative {
                n = -n;
            }
            let d = num_traits::pow(BigInt::from(10), frac.len());
            return Rational::new(n, d);
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $atr<Rational> for Rational {
            fn $amethod(&mut self, rhs: Rational) {
                (self.0).$amethod(rhs.0);
            }
        }
        impl<'a> $atr<&'a Rational> for Rational {
            fn $amethod(&mut self, rhs: &'a Rational) {
                (self.0).$amethod(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Serialized as `{"num": n, "den": d}` with exact integers.
impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let num: serde_json::Number = self.numer().to_string().parse().map_err(serde::ser::Error::custom)?;
        let den: serde_json::Number = self.denom().to_string().parse().map_err(serde::ser::Error::custom)?;
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &num)?;
        st.serialize_field("den", &den)?;
        st.end()
    }
}

/// Accepts `{"num": n, "den": d}`, a JSON integer, or a string such as `"3/2"`.
impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = <serde_json::Value as serde::Deserialize>::deserialize(d)?;
        let int = |v: &serde_json::Value| -> std::result::Result<BigInt, D::Error> {
            match v {
                serde_json::Value::Number(n) => n.to_string().parse().map_err(D::Error::custom),
                serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
                _ => Err(D::Error::custom("expected an integer")),
            }
        };
        match &v {
            serde_json::Value::Object(m) => {
                let num = int(m.get("num").ok_or_else(|| D::Error::custom("missing num"))?)?;
                let den = int(m.get("den").ok_or_else(|| D::Error::custom("missing den"))?)?;
                Rational::new(num, den).map_err(D::Error::custom)
            }
            serde_json::Value::Number(_) => Ok(Rational::from_integer(int(&v)?)),
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            _ => Err(D::Error::custom("expected a rational")),
        }
    }
}

/// Where divisions are rounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoundingPolicy {
    #[default]
    Exact,
    /// Every division result truncated to two decimals (law mode).
    TruncateTwoDecimals,
}

impl RoundingPolicy {
    /// Applies the policy to a nonnegative quotient.
    pub fn apply(self, x: Rational) -> Result<Rational> {
        match self {
            RoundingPolicy::Exact => Ok(x),
            RoundingPolicy::TruncateTwoDecimals => x.truncate_2dec(),
        }
    }
}

impl FromStr for RoundingPolicy {
    type Err = Error;

    /// `exact` or `law2dec`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RoundingPolicy::Exact),
            "law2dec" => Ok(RoundingPolicy::TruncateTwoDecimals),
            _ => Err(Error::Invalid(format!("unknown rounding '{s}' (exact|law2dec)"))),
        }
    }
}
