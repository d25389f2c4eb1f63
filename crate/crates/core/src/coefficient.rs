use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Exact signed integer coefficient. Zero always carries the `+` sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coefficient(BigInt);

impl Coefficient {
    pub fn zero() -> Coefficient {
        Coefficient(BigInt::zero())
    }

    pub fn new(value: BigInt) -> Coefficient {
        Coefficient(value)
    }

    pub fn from_parts(sign: Sign, magnitude: BigUint) -> Coefficient {
        let value = BigInt::from(magnitude);
        match sign {
            Sign::Plus => Coefficient(value),
            Sign::Minus => Coefficient(-value),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn sign(&self) -> Sign {
        if self.0.sign() == BigSign::Minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn magnitude(&self) -> BigUint {
        self.0.magnitude().clone()
    }

    pub fn abs(&self) -> Coefficient {
        Coefficient(self.0.abs())
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn into_value(self) -> BigInt {
        self.0
    }

    pub fn to_i64(&self) -> Option<i64> {
        num_traits::ToPrimitive::to_i64(&self.0)
    }

    /// Accepts an optional `+`/`-` and leading zeros.
    pub fn parse_lenient(text: &str) -> Result<Coefficient> {
        let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidArgument(format!("not an integer: {text:?}")));
        }
        let magnitude: BigInt = digits.parse().expect("validated digits");
        Ok(Coefficient(if text.starts_with('-') {
            -magnitude
        } else {
            magnitude
        }))
    }
}

/// Strict decimal form: optional `-`, no `+`, no leading zeros, no `-0`.
impl FromStr for Coefficient {
    type Err = Error;

    fn from_str(text: &str) -> Result<Coefficient> {
        let digits = text.strip_prefix('-').unwrap_or(text);
        let well_formed = !digits.is_empty()
            && digits.bytes().all(|b| b.is_ascii_digit())
            && (digits == "0" || !digits.starts_with('0'))
            && !(text.starts_with('-') && digits == "0");
        if !well_formed {
            return Err(Error::InvalidArgument(format!(
                "not a canonical integer: {text:?}"
            )));
        }
        Coefficient::parse_lenient(text)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Coefficient {
    fn from(v: i64) -> Coefficient {
        Coefficient(BigInt::from(v))
    }
}

impl From<i32> for Coefficient {
    fn from(v: i32) -> Coefficient {
        Coefficient(BigInt::from(v))
    }
}

impl From<BigInt> for Coefficient {
    fn from(v: BigInt) -> Coefficient {
        Coefficient(v)
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        Coefficient(-self.0)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        Coefficient(-&self.0)
    }
}
