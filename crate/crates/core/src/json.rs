//! Matrix encoding shared by the ensemble and POVM file formats: a matrix is
//! a row-major array of rows, each entry a `[re, im]` pair.
//!
//! Decoding walks a `serde_json::Value` by hand so errors can name the exact
//! field path (`entries[2].matrix[0][1]`).

use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

pub(crate) fn parse_error(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

pub(crate) fn encode_matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|z| Value::Array(vec![number(z.re), number(z.im)]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub(crate) fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    let map = obj.as_object().ok_or_else(|| parse_error(path, "expected an object"))?;
    map.get(key)
        .ok_or_else(|| parse_error(&join(path, key), "missing field"))
}

pub(crate) fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub(crate) fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| parse_error(path, format!("expected a number, found {v}")))
}

pub(crate) fn as_count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| parse_error(path, format!("expected a non-negative integer, found {v}")))
}

pub(crate) fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_error(path, "expected an array"))
}

/// Decodes a matrix and checks it is `dim x dim`. Shape problems are
/// validation errors; wrong JSON types are parse errors.
pub(crate) fn decode_square(v: &Value, dim: usize, path: &str) -> Result<ComplexMatrix> {
    let rows = as_array(v, path)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries = as_array(row, &row_path)?;
        let mut parsed = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            let e_path = format!("{row_path}[{j}]");
            let pair = as_array(e, &e_path)?;
            if pair.len() != 2 {
                return Err(parse_error(&e_path, "expected a [re, im] pair"));
            }
            let re = as_f64(&pair[0], &format!("{e_path}[0]"))?;
            let im = as_f64(&pair[1], &format!("{e_path}[1]"))?;
            parsed.push(C64::new(re, im));
        }
        if parsed.len() != dim {
            return Err(Error::Validation {
                path: row_path,
                message: format!("row has {} entries, expected dim = {dim}", parsed.len()),
            });
        }
        out.push(parsed);
    }
    if out.len() != dim {
        return Err(Error::Validation {
            path: path.to_string(),
            message: format!("matrix has {} rows, expected dim = {dim}", out.len()),
        });
    }
    ComplexMatrix::from_rows(&out)
}

pub(crate) fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_error("", e.to_string()))
}
