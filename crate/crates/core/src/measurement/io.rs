//! POVM files: `{"dim": d, "operators": [matrix, ...]}` with the same matrix
//! encoding as ensemble files.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{as_array, as_count, decode_square, encode_matrix, field, parse_document};
use crate::measurement::Povm;

pub fn povm_to_json(m: &Povm) -> String {
    let ops: Vec<Value> = m.operators().iter().map(encode_matrix).collect();
    serde_json::to_string_pretty(&json!({"dim": m.dim(), "operators": ops})).expect("finite values serialise")
}

pub fn povm_from_json(text: &str) -> Result<Povm> {
    let doc = parse_document(text)?;
    let dim = as_count(field(&doc, "dim", "")?, "dim")?;
    let ops = as_array(field(&doc, "operators", "")?, "operators")?;
    let mut operators = Vec::with_capacity(ops.len());
    for (i, op) in ops.iter().enumerate() {
        operators.push(decode_square(op, dim, &format!("operators[{i}]"))?);
    }
    Povm::new(operators).map_err(|e| Error::Validation {
        path: "operators".into(),
        message: e.to_string(),
    })
}

pub fn load_povm(path: impl AsRef<Path>) -> Result<Povm> {
    povm_from_json(&fs::read_to_string(path)?)
}

pub fn save_povm(m: &Povm, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, povm_to_json(m))?;
    Ok(())
}
