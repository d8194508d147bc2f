//! Small helpers for moving big integers through JSON.
//!
//! Integers within the 53-bit safe range are emitted as JSON numbers,
//! anything larger as a decimal string. Readers accept both forms.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

const SAFE_MAX: i64 = (1i64 << 53) - 1;

pub fn int_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) if x.abs() <= SAFE_MAX => Value::from(x),
        _ => Value::String(v.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::Json(format!("not an integer: {n}"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Json(format!("not an integer: {s:?}"))),
        other => Err(Error::Json(format!("expected integer, found {other}"))),
    }
}

pub fn ints_to_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn ints_from_json(v: &Value) -> Result<Vec<BigInt>> {
    as_array(v)?.iter().map(int_from_json).collect()
}

pub fn as_array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Json(format!("expected array, found {v}")))
}

pub fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Json(format!("expected object, found {v}")))
}

pub fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Json(format!("missing field {key:?}")))
}

pub fn as_usize(v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::Json(format!("expected natural number, found {v}")))
}

pub fn as_u64(v: &Value) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::Json(format!("expected natural number, found {v}")))
}

pub fn as_bool(v: &Value) -> Result<bool> {
    v.as_bool()
        .ok_or_else(|| Error::Json(format!("expected boolean, found {v}")))
}
