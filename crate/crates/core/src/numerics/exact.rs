use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational, always in lowest terms with a positive denominator.
///
/// Holds probabilities as well as probability-scale quantities such as
/// normalizers and likelihood ratios, which may exceed one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    /// `numer / denom`; fails on a zero denominator.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::pre("zero denominator"));
        }
        Ok(ExactProb(BigRational::new(numer.into(), denom)))
    }

    /// `numer / denom` for machine integers. Panics on a zero denominator.
    pub fn ratio(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "zero denominator");
        ExactProb(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactProb(BigRational::from_integer(v.into()))
    }

    /// `1 / v` for a positive big integer.
    pub fn recip_of(v: &BigUint) -> Self {
        assert!(!v.is_zero(), "reciprocal of zero");
        ExactProb(BigRational::new(BigInt::one(), BigInt::from(v.clone())))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactProb(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::pre("reciprocal of zero"));
        }
        Ok(ExactProb(self.0.recip()))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i32) -> Self {
        ExactProb(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn pow_u(&self, exp: u64) -> Self {
        let e = i32::try_from(exp).expect("exponent fits in i32");
        self.pow(e)
    }

    /// `floor(self * scale)` for a non-negative value.
    pub fn floor_scaled(&self, scale: u64) -> BigInt {
        (self.0.numer() * BigInt::from(scale)) / self.0.denom()
    }

    /// Natural log, `-inf` for zero. Accurate for values far outside the `f64` range.
    pub fn ln(&self) -> f64 {
        assert!(!self.is_negative(), "log of a negative value");
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_big(self.0.numer().magnitude()) - ln_big(self.0.denom().magnitude())
    }

    pub fn log2(&self) -> f64 {
        self.ln() / std::f64::consts::LN_2
    }

    /// Nearest `f64`; underflows to zero and overflows to infinity like a float would.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            let l = self.ln();
            if self.is_negative() {
                -l.exp()
            } else {
                l.exp()
            }
        })
    }

    pub fn to_log(&self) -> LogProb {
        LogProb::new_unchecked(self.ln())
    }

    /// Exact conversion of a decimal literal such as `0.25`, `1e-3` or a fraction `1/3`.
    pub fn parse_decimal(s: &str) -> Result<Self> {
        s.parse()
    }
}

/// ln of a big unsigned integer without overflowing `f64`.
pub fn ln_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactProb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::config(format!("not a rational number: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return ExactProb::new(n, d).map_err(|_| bad());
        }
        // decimal with optional exponent
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, mantissa) = match mantissa.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if neg {
            numer = -numer;
        }
        let scale = exp - frac_part.len() as i32;
        let ten = BigRational::from_integer(BigInt::from(10));
        let value = BigRational::from_integer(numer) * num_traits::Pow::pow(&ten, scale);
        Ok(ExactProb(value))
    }
}

impl Serialize for ExactProb {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactProb {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
            Float(f64),
        }
        let parsed = match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse(),
            Repr::Int(i) => Ok(ExactProb::from_integer(i)),
            // shortest round-trip decimal, so 0.1 means 1/10
            Repr::Float(f) => format!("{f:?}").parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactProb {
            type Output = ExactProb;
            fn $m(self, rhs: ExactProb) -> ExactProb {
                ExactProb(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactProb> for ExactProb {
            type Output = ExactProb;
            fn $m(self, rhs: &'a ExactProb) -> ExactProb {
                ExactProb(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactProb> for &'a ExactProb {
            type Output = ExactProb;
            fn $m(self, rhs: &'a ExactProb) -> ExactProb {
                ExactProb((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<ExactProb> for &'a ExactProb {
            type Output = ExactProb;
            fn $m(self, rhs: ExactProb) -> ExactProb {
                ExactProb((&self.0).$m(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactProb {
    type Output = ExactProb;
    fn neg(self) -> ExactProb {
        ExactProb(-self.0)
    }
}

impl Sum for ExactProb {
    fn sum<I: Iterator<Item = ExactProb>>(iter: I) -> Self {
        iter.fold(ExactProb::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a ExactProb> for ExactProb {
    fn sum<I: Iterator<Item = &'a ExactProb>>(iter: I) -> Self {
        iter.fold(ExactProb::zero(), |a, b| a + b)
    }
}

impl Product for ExactProb {
    fn product<I: Iterator<Item = ExactProb>>(iter: I) -> Self {
        iter.fold(ExactProb::one(), |a, b| a * b)
    }
}

impl From<u64> for ExactProb {
    fn from(v: u64) -> Self {
        ExactProb::from_integer(v)
    }
}

impl From<BigUint> for ExactProb {
    fn from(v: BigUint) -> Self {
        ExactProb::from_integer(BigInt::from_biguint(Sign::Plus, v))
    }
}

/// A natural-log probability in `[-inf, 0]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogProb(f64);

impl LogProb {
    /// Rejects positive values beyond a small rounding allowance and NaN.
    pub fn new(ln_value: f64) -> Result<Self> {
        if ln_value.is_nan() || ln_value > 1e-12 {
            return Err(Error::pre(format!("{ln_value} is not a log-probability")));
        }
        Ok(LogProb(ln_value.min(0.0)))
    }

    pub(crate) fn new_unchecked(ln_value: f64) -> Self {
        LogProb(ln_value)
    }

    pub fn zero() -> Self {
        LogProb(f64::NEG_INFINITY)
    }

    pub fn one() -> Self {
        LogProb(0.0)
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }

    pub fn bits(self) -> f64 {
        -self.0 / std::f64::consts::LN_2
    }
}

/// `ln(sum(exp(v)))` summed in the given order.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + s.ln()
}
