//! Serde adapters for floats that may be infinite.
//!
//! JSON has no infinity, so `inf`/`-inf` are written as strings. On input the
//! strings `"inf"`, `"infinity"`, `"gamma*"` and decimal strings are
//! accepted alongside plain numbers.

use serde::{Deserialize, Deserializer, Serializer};

use crate::verify::constants::GAMMA_STAR;

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Num(f64),
    Str(String),
}

pub fn parse_extended(s: &str) -> Option<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        "gamma*" | "gamma_star" => Some(GAMMA_STAR),
        "nan" => Some(f64::NAN),
        other => other.parse().ok(),
    }
}

fn from_raw<E: serde::de::Error>(raw: Raw) -> Result<f64, E> {
    match raw {
        Raw::Num(x) => Ok(x),
        Raw::Str(s) => parse_extended(&s).ok_or_else(|| E::custom(format!("not a number: {s:?}"))),
    }
}

pub mod f64_ext {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_raw(Raw::deserialize(d)?)
    }
}

pub mod opt_f64_ext {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => super::f64_ext::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Option::<Raw>::deserialize(d)? {
            Some(raw) => from_raw(raw).map(Some),
            None => Ok(None),
        }
    }
}

pub mod vec_f64_ext {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        struct Wrap(f64);
        impl serde::Serialize for Wrap {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                super::f64_ext::serialize(&self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&Wrap(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Raw>::deserialize(d)?.into_iter().map(from_raw).collect()
    }
}
