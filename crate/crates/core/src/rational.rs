//! Exact rational arithmetic for density thresholds and certificate
//! inequalities.
//!
//! Every numeric claim a certificate makes (`|E| <= (1+eps)|V|`, extra-edge
//! ratios, hitting-set bounds) is stated and checked over these exact
//! rationals; floating point never decides a comparison.

use num_rational::Ratio;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    /// Builds `num/den`, reduced. `den` must be nonzero.
    pub fn new(num: i64, den: i64) -> Result<Self, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Smallest integer >= self.
    pub fn ceil_int(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    /// Largest integer <= self.
    pub fn floor_int(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Result<Self, RationalError> {
        if self.numer() == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Parses "p", "p/q", or "-p/q".
    pub fn parse(s: &str) -> Result<Self, RationalError> {
        let s = s.trim();
        match s.split_once('/') {
            None => {
                let n = s.parse::<i64>().map_err(|_| RationalError::Parse(s.to_string()))?;
                Ok(Self::from_integer(n))
            }
            Some((p, q)) => {
                let p = p.trim().parse::<i64>().map_err(|_| RationalError::Parse(s.to_string()))?;
                let q = q.trim().parse::<i64>().map_err(|_| RationalError::Parse(s.to_string()))?;
                Self::new(p, q)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: i64,
    den: i64,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RationalRepr { num: self.numer(), den: self.denom() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RationalRepr::deserialize(deserializer)?;
        Rational::new(repr.num, repr.den).map_err(|e| D::Error::custom(e.to_string()))
    }
}
