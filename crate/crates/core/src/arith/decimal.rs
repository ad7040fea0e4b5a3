//! Serde adapters that write big integers as decimal strings.

use std::fmt::Display;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
where
    T: FromStr,
    T::Err: Display,
    D: Deserializer<'de>,
{
    let s = String::deserialize(d)?;
    s.parse().map_err(D::Error::custom)
}

pub mod option {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(ToString::to_string).serialize(s)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(D::Error::custom))
            .transpose()
    }
}

/// `[(prime, exponent)]` as `[["prime", exponent]]`.
pub mod pairs {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &[(T, u32)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(p, e)| (p.to_string(), *e))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<(T, u32)>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<(String, u32)>::deserialize(d)?
            .into_iter()
            .map(|(p, e)| Ok((p.parse().map_err(D::Error::custom)?, e)))
            .collect()
    }
}
