//! Rational scalars.
//!
//! `Rat` is `num_rational::BigRational`, which already keeps numerator and
//! denominator coprime with a positive denominator. This module adds the
//! `"p/q"` text form used by every file format.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_from_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `"p/q"`, with `"/q"` omitted for integers.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => Ok(Rat::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Integer value of `x` if it has denominator one and fits in `i64`.
pub fn as_i64(x: &Rat) -> Option<i64> {
    if !x.denom().is_one() {
        return None;
    }
    i64::try_from(x.numer()).ok()
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn pow_rat(x: &Rat, e: u32) -> Rat {
    num_traits::pow(x.clone(), e as usize)
}

/// Number of bits of the larger of |numerator| and denominator.
pub fn bit_length(x: &Rat) -> u64 {
    x.numer().abs().bits().max(x.denom().bits())
}

/// Serde adapter for a single `Rat` stored as a string.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = RatText::deserialize(d)?;
        s.into_rat().map_err(serde::de::Error::custom)
    }

    /// Accepts either `"p/q"` or a bare JSON integer.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RatText {
        Text(String),
        Int(i64),
    }

    impl RatText {
        pub(crate) fn into_rat(self) -> Result<Rat> {
            match self {
                RatText::Text(s) => parse_rat(&s),
                RatText::Int(n) => Ok(rat(n)),
            }
        }
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod serde_rat_vec {
    use super::serde_rat::RatText;
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rat(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let raw = Vec::<RatText>::deserialize(d)?;
        raw.into_iter()
            .map(|t| t.into_rat().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for a row-major `Vec<Vec<Rat>>`.
pub mod serde_rat_matrix {
    use super::serde_rat::RatText;
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rat>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(format_rat).collect()).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rat>>, D::Error> {
        let raw = Vec::<Vec<RatText>>::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|t| t.into_rat().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
