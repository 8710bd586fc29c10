//! Exact rational numbers for payoffs, fees and payments.
//!
//! Values are stored in canonical reduced form with a positive denominator.
//! The textual form is `p` for integers and `p/q` otherwise; floating-point
//! literals are rejected on parse so that exactness survives every boundary.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseRationalError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self, ParseRationalError> {
        if denominator == 0 {
            return Err(ParseRationalError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        )))
    }

    pub fn integer(value: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
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

    /// Arithmetic mean of two values.
    pub fn midpoint(&self, other: &Rational) -> Rational {
        Rational((&self.0 + &other.0) / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn max_of(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering rounded half-up to `places` digits, trailing zeros trimmed.
    pub fn to_decimal_string(&self, places: u32) -> String {
        let scale = BigInt::from(10u32).pow(places);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let rounded = if scaled.is_negative() {
            -((-scaled) + half).floor()
        } else {
            (scaled + half).floor()
        };
        let digits = rounded.to_integer();
        let negative = digits.is_negative();
        let abs = digits.abs();
        let int_part = &abs / &scale;
        let frac_part = &abs % &scale;
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if places > 0 && !frac_part.is_zero() {
            let frac = format!("{:0>width$}", frac_part.to_string(), width = places as usize);
            out.push('.');
            out.push_str(frac.trim_end_matches('0'));
        }
        out
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

fn parse_integer(text: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    text.parse::<BigInt>()
        .map_err(|_| ParseRationalError::Malformed(whole.to_string()))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        if text.contains(['.', 'e', 'E']) {
            return Err(ParseRationalError::FloatLiteral(text.to_string()));
        }
        match text.split_once('/') {
            None => Ok(Rational(BigRational::from_integer(parse_integer(text, text)?))),
            Some((num, den)) => {
                let num = parse_integer(num.trim(), text)?;
                let den = parse_integer(den.trim(), text)?;
                if den.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator);
                }
                Ok(Rational(BigRational::new(num, den)))
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::integer(value)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0
            .partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(r("4"), Rational::integer(4));
        assert_eq!(r("-7"), Rational::integer(-7));
        assert_eq!(r("6/4"), Rational::new(3, 2).unwrap());
        assert_eq!(r("3/-6").to_string(), "-1/2");
        assert_eq!(r(" 10 / 5 ").to_string(), "2");
    }

    #[test]
    fn rejects_float_literals() {
        assert!(matches!(
            "0.5".parse::<Rational>(),
            Err(ParseRationalError::FloatLiteral(_))
        ));
        assert!(matches!(
            "1e3".parse::<Rational>(),
            Err(ParseRationalError::FloatLiteral(_))
        ));
        assert!(matches!(
            "1/0".parse::<Rational>(),
            Err(ParseRationalError::ZeroDenominator)
        ));
        assert!("abc".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
    }

    #[test]
    fn canonical_form_has_positive_denominator() {
        let x = Rational::new(4, -6).unwrap();
        assert_eq!(x.numerator(), &BigInt::from(-2));
        assert_eq!(x.denominator(), &BigInt::from(3));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rational::new(9, 16).unwrap().to_decimal_string(2), "0.56");
        assert_eq!(Rational::new(5625, 100).unwrap().to_decimal_string(2), "56.25");
        assert_eq!(Rational::new(50, 3).unwrap().to_decimal_string(2), "16.67");
        assert_eq!(Rational::integer(25).to_decimal_string(2), "25");
        assert_eq!(Rational::new(-1, 3).unwrap().to_decimal_string(2), "-0.33");
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = Rational::new(1, 3).unwrap();
        let sum = &third + &third + &third;
        assert_eq!(sum, Rational::one());
        assert_eq!(&sum - &third, Rational::new(2, 3).unwrap());
        assert_eq!(-(third.clone() * Rational::integer(3)), Rational::integer(-1));
        assert_eq!(Rational::integer(2).midpoint(&Rational::integer(3)), r("5/2"));
    }

    #[test]
    fn serde_uses_exact_strings() {
        let x = r("7/3");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"7/3\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
