//! serde adapters for arbitrary-precision integers (emitted as plain JSON
//! numbers) and small file-loading helpers.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{bigint_from_json, bigint_to_json};

pub mod big {
    use super::*;
    use num_bigint::BigInt;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        bigint_to_json(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let v = Value::deserialize(d)?;
        bigint_from_json(&v).map_err(serde::de::Error::custom)
    }
}

pub mod big_vec {
    use super::*;
    use num_bigint::BigInt;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        Value::Array(xs.iter().map(bigint_to_json).collect()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let v = Value::deserialize(d)?;
        let arr = v
            .as_array()
            .ok_or_else(|| serde::de::Error::custom("expected an array of integers"))?;
        arr.iter()
            .map(|x| bigint_from_json(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod big_map {
    use super::*;
    use crate::label::Label;
    use num_bigint::BigInt;
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        xs: &BTreeMap<Label, BigInt>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let map: serde_json::Map<String, Value> = xs
            .iter()
            .map(|(k, v)| (k.to_string(), bigint_to_json(v)))
            .collect();
        Value::Object(map).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<Label, BigInt>, D::Error> {
        let v = Value::deserialize(d)?;
        let obj = v
            .as_object()
            .ok_or_else(|| serde::de::Error::custom("expected an object of integers"))?;
        obj.iter()
            .map(|(k, x)| {
                bigint_from_json(x)
                    .map(|b| (Label::new(k.clone()), b))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline. Field order follows struct
/// declaration order and maps are ordered, so output is deterministic.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
