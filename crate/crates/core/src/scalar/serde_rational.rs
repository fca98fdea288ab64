//! Serde adapters writing exact rationals as `"p/q"` strings.

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serializer};

use super::{format_rational, parse_rational};

pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let text = String::deserialize(d)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}

pub mod pairs {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(
        pairs: &[(BigRational, BigRational)],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        pairs
            .iter()
            .map(|(a, b)| [format_rational(a), format_rational(b)])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(BigRational, BigRational)>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[a, b]| {
                Ok((
                    parse_rational(a).map_err(serde::de::Error::custom)?,
                    parse_rational(b).map_err(serde::de::Error::custom)?,
                ))
            })
            .collect()
    }
}
