//! Exact rationals and their `[num, den]` wire form.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn to_pair(r: &Rational) -> [i64; 2] {
    [*r.numer(), *r.denom()]
}

/// Accepts `[num, den]` or a bare integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Int(i64),
    Pair([i64; 2]),
}

impl RationalJson {
    pub fn to_rational(self) -> Result<Rational, String> {
        match self {
            RationalJson::Int(n) => Ok(int(n)),
            RationalJson::Pair([_, 0]) => Err("zero denominator".to_string()),
            RationalJson::Pair([n, d]) => Ok(Rational::new(n, d)),
        }
    }
}

/// `#[serde(with = "crate::rational::pair")]` support for `Rational` fields.
pub mod pair {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_pair(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        RationalJson::deserialize(d)?
            .to_rational()
            .map_err(serde::de::Error::custom)
    }
}

/// Same as [`pair`] for lists.
pub mod pairs {
    use super::*;

    pub fn serialize<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        rs.iter().map(to_pair).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<RationalJson>::deserialize(d)?
            .into_iter()
            .map(|r| r.to_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}
