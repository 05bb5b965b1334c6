//! The scalar used everywhere: an exact fraction over arbitrary-precision integers.
//!
//! `BigRational` already keeps itself in canonical form (positive denominator, reduced),
//! so this module only adds literal parsing and the string encoding used by score files.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("empty numeric literal")]
    Empty,
    #[error("malformed numeric literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses a signed integer, a `p/q` fraction or a terminating decimal, exactly.
pub fn parse_rational(text: &str) -> Result<Rational, LiteralError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(LiteralError::Empty);
    }
    let malformed = || LiteralError::Malformed(t.to_string());
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        if !is_digits(num) || !is_digits(den) {
            return Err(malformed());
        }
        let den: BigInt = den.parse().map_err(|_| malformed())?;
        if den.is_zero() {
            return Err(LiteralError::ZeroDenominator(t.to_string()));
        }
        Rational::new(num.parse().map_err(|_| malformed())?, den)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if !(is_digits(whole) || whole.is_empty() && is_digits(frac)) || !is_digits(frac) {
            return Err(malformed());
        }
        let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| malformed())?;
        let scale = num_traits::pow(BigInt::from(10u8), frac.len());
        Rational::new(digits, scale)
    } else {
        if !is_digits(body) {
            return Err(malformed());
        }
        Rational::from_integer(body.parse().map_err(|_| malformed())?)
    };
    Ok(if negative { -value } else { value })
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn to_canonical_string(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_str {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_canonical_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => s.serialize_some(&to_canonical_string(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(D::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&to_canonical_string(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        }
    }
}
