//! JSON helpers shared by the file formats.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

/// Integers are written as JSON numbers when they fit in an `i64`, and as
/// decimal strings otherwise.
pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    struct IntVisitor;

    impl<'de> Visitor<'de> for IntVisitor {
        type Value = BigInt;
        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an integer or a decimal string")
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(BigInt::from(v))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(BigInt::from(v))
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            v.parse().map_err(|_| E::custom(format!("invalid integer {v:?}")))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct JsonInt(#[serde(with = "bigint")] pub BigInt);

pub fn to_json_ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

pub fn from_json_ints(v: Vec<JsonInt>) -> Vec<BigInt> {
    v.into_iter().map(|x| x.0).collect()
}

/// Canonical pretty JSON: field order follows the struct definitions.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
