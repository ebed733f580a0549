//! JSON persistence:
//!
//! ```json
//! {"dim": 2, "entries": [{"prob": 0.5, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}]}
//! ```

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::ensemble::{ensemble_from_matrices, Ensemble};
use crate::error::{Error, Result};
use crate::json::{as_array, as_count, as_f64, decode_square, encode_matrix, field, parse_document};

pub fn ensemble_to_json(e: &Ensemble) -> String {
    let entries: Vec<Value> = e
        .iter()
        .map(|(p, s)| json!({"prob": p, "matrix": encode_matrix(s.matrix())}))
        .collect();
    let doc = json!({"dim": e.dim(), "entries": entries});
    serde_json::to_string_pretty(&doc).expect("finite values serialise")
}

pub fn ensemble_from_json(text: &str) -> Result<Ensemble> {
    let doc = parse_document(text)?;
    let dim = as_count(field(&doc, "dim", "")?, "dim")?;
    let entries = as_array(field(&doc, "entries", "")?, "entries")?;
    if entries.is_empty() {
        return Err(Error::Validation {
            path: "entries".into(),
            message: "ensemble must contain at least one entry".into(),
        });
    }
    let mut raw = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        let base = format!("entries[{i}]");
        let prob = as_f64(field(entry, "prob", &base)?, &format!("{base}.prob"))?;
        let matrix = decode_square(field(entry, "matrix", &base)?, dim, &format!("{base}.matrix"))?;
        raw.push((prob, matrix));
    }
    ensemble_from_matrices(raw).map_err(|e| match e {
        Error::BadState { index, reason } => Error::Validation {
            path: format!("entries[{index}].matrix"),
            message: reason,
        },
        Error::BadPriors(message) => Error::Validation {
            path: "entries[*].prob".into(),
            message,
        },
        other => other,
    })
}

pub fn load_ensemble(path: impl AsRef<Path>) -> Result<Ensemble> {
    ensemble_from_json(&fs::read_to_string(path)?)
}

pub fn save_ensemble(e: &Ensemble, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, ensemble_to_json(e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{random_mixed_ensemble, PriorKind};

    #[test]
    fn roundtrip_is_exact() {
        let e = random_mixed_ensemble(3, 3, PriorKind::Dirichlet, 5);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.json");
        save_ensemble(&e, &path).unwrap();
        let back = load_ensemble(&path).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn accepts_integer_literals() {
        let text = r#"{"dim": 2, "entries": [
            {"prob": 1, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}
        ]}"#;
        let e = ensemble_from_json(text).unwrap();
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn malformed_names_field() {
        let text = r#"{"dim": 2, "entries": [
            {"prob": 0.5, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]},
            {"matrix": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]}
        ]}"#;
        match ensemble_from_json(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "entries[1].prob"),
            other => panic!("unexpected {other:?}"),
        }
        let text = r#"{"dim": 2, "entries": [{"prob": 1, "matrix": [[[1, 0], [0, "x"]], [[0, 0], [0, 0]]]}]}"#;
        match ensemble_from_json(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "entries[0].matrix[0][1][1]"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(ensemble_from_json("{not json"), Err(Error::Parse { .. })));
    }

    #[test]
    fn dim_mismatch_is_validation_error() {
        let text = r#"{"dim": 3, "entries": [{"prob": 1, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}]}"#;
        match ensemble_from_json(text) {
            Err(Error::Validation { path, .. }) => assert!(path.starts_with("entries[0].matrix")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_state_and_priors_report_paths() {
        let text = r#"{"dim": 2, "entries": [
            {"prob": 0.5, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]},
            {"prob": 0.5, "matrix": [[[0.9, 0], [0, 0]], [[0, 0], [0, 0]]]}
        ]}"#;
        match ensemble_from_json(text) {
            Err(Error::Validation { path, .. }) => assert_eq!(path, "entries[1].matrix"),
            other => panic!("unexpected {other:?}"),
        }
        let text = r#"{"dim": 2, "entries": [
            {"prob": 0.6, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]},
            {"prob": 0.6, "matrix": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]}
        ]}"#;
        match ensemble_from_json(text) {
            Err(Error::Validation { path, .. }) => assert_eq!(path, "entries[*].prob"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
