//! Serde helpers: integers travel as JSON numbers when they fit in 64 bits and
//! as decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::zlinalg::IntMatrix;

pub(crate) fn big_to_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub(crate) fn value_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::invalid(format!("expected an integer, found {n}")))
            }
        }
        Value::String(s) => {
            s.trim().parse::<BigInt>().map_err(|_| Error::invalid(format!("expected an integer, found {s:?}")))
        }
        other => Err(Error::invalid(format!("expected an integer, found {other}"))),
    }
}

pub(crate) fn matrix_to_value(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(big_to_value).collect())).collect())
}

/// Parses a row-major array of arrays; `cols_hint` fixes the width of an
/// empty matrix.
pub(crate) fn value_to_matrix(v: &Value, cols_hint: Option<usize>) -> Result<IntMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::invalid("matrix must be an array of rows"))?;
    let cols = match rows.first() {
        Some(r) => r.as_array().ok_or_else(|| Error::invalid("matrix row must be an array"))?.len(),
        None => cols_hint.unwrap_or(0),
    };
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| Error::invalid("matrix row must be an array"))?;
        if r.len() != cols {
            return Err(Error::invalid("matrix rows have differing lengths"));
        }
        out.push(r.iter().map(value_to_big).collect::<Result<Vec<_>>>()?);
    }
    IntMatrix::from_big_rows(out, cols)
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_value(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        value_to_matrix(&v, None).map_err(D::Error::custom)
    }
}

pub(crate) mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        Value::Array(v.iter().map(big_to_value).collect()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let v = Vec::<Value>::deserialize(d)?;
        v.iter().map(value_to_big).collect::<Result<Vec<_>>>().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_roundtrip_with_big_entries() {
        let huge: BigInt = "123456789012345678901234567890".parse().unwrap();
        let mut m = IntMatrix::from_rows(&[[1, -2], [3, 4]]);
        m.set(1, 1, huge);
        let text = serde_json::to_string(&m).unwrap();
        let back: IntMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
