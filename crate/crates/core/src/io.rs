//! JSON readers for groups, pointed G-sets and integer matrices.

use std::path::Path;
use std::sync::Arc;

use num::BigInt;
use serde_json::Value;
use thiserror::Error;

use crate::group_rep::{FiniteGroup, GroupError, PointedGSet};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}")]
    Read { path: String, source: std::io::Error },
    #[error("{path} is not valid JSON")]
    Json { path: String, source: serde_json::Error },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub fn read_json(path: &Path) -> Result<Value, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| InputError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn malformed(what: &str, v: &Value) -> InputError {
    InputError::Malformed(format!("{what}: {v}"))
}

fn name_of(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Resolves a table entry given either as an index or as an element name.
fn entry(v: &Value, names: &[String]) -> Option<usize> {
    match v {
        Value::Number(n) => n.as_u64().map(|i| i as usize).filter(|&i| i < names.len()),
        Value::String(s) => names.iter().position(|x| x == s),
        _ => None,
    }
}

/// `{"elements": [...], "mul": [[...]], "name": "..."}`, table entries
/// by index or by element name. `{"cyclic": n}` is accepted as shorthand.
pub fn group_from_json(v: &Value) -> Result<Arc<FiniteGroup>, InputError> {
    if let Some(n) = v.get("cyclic").and_then(Value::as_u64) {
        if n == 0 {
            return Err(malformed("cyclic group of order 0", v));
        }
        return Ok(Arc::new(FiniteGroup::cyclic(n as usize)));
    }
    let names: Vec<String> = v
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("group needs an element list", v))?
        .iter()
        .map(|e| name_of(e).ok_or_else(|| malformed("element id", e)))
        .collect::<Result<_, _>>()?;
    let mul = v
        .get("mul")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("group needs a mul table", v))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| malformed("mul row", row))?
                .iter()
                .map(|x| entry(x, &names).ok_or_else(|| malformed("mul entry", x)))
                .collect::<Result<Vec<usize>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let name = v.get("name").and_then(Value::as_str).unwrap_or("G");
    Ok(Arc::new(FiniteGroup::from_table(name, names, mul)?))
}

/// `{"elements": [...], "basepoint": "*", "action": [[...]]}`; without an
/// action the group acts trivially.
pub fn gset_from_json(v: &Value, group: Arc<FiniteGroup>) -> Result<PointedGSet, InputError> {
    let names: Vec<String> = v
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("pointed set needs an element list", v))?
        .iter()
        .map(|e| name_of(e).ok_or_else(|| malformed("element id", e)))
        .collect::<Result<_, _>>()?;
    let base = v.get("basepoint").ok_or_else(|| malformed("pointed set needs a basepoint", v))?;
    let basepoint = entry(base, &names).ok_or_else(|| malformed("basepoint", base))?;
    match v.get("action") {
        None => Ok(PointedGSet::plain(names, basepoint, group)),
        Some(table) => {
            let action = action_table(table, &names)?;
            Ok(PointedGSet::new(names, basepoint, group, action)?)
        }
    }
}

/// A `|G| × |X|` table of images, by index or by name.
pub fn action_table(v: &Value, names: &[String]) -> Result<Vec<Vec<usize>>, InputError> {
    v.as_array()
        .ok_or_else(|| malformed("action table", v))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| malformed("action row", row))?
                .iter()
                .map(|x| entry(x, names).ok_or_else(|| malformed("action entry", x)))
                .collect()
        })
        .collect()
}

/// `{"rows": [[ints]]}`, returned with the column count.
pub fn int_matrix_from_json(v: &Value) -> Result<(Vec<Vec<BigInt>>, usize), InputError> {
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("matrix file needs \"rows\"", v))?;
    let parsed: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| malformed("matrix row", r))?
                .iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| malformed("integer entry", x)),
                    Value::String(s) => s.parse::<BigInt>().map_err(|_| malformed("integer entry", x)),
                    _ => Err(malformed("integer entry", x)),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let cols = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(InputError::Malformed("ragged matrix".into()));
    }
    Ok((parsed, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn group_by_names_or_indices() {
        let by_name = json!({"name": "C2", "elements": ["e", "g"], "mul": [["e", "g"], ["g", "e"]]});
        let by_index = json!({"elements": ["e", "g"], "mul": [[0, 1], [1, 0]]});
        assert_eq!(group_from_json(&by_name).unwrap().order(), 2);
        assert_eq!(group_from_json(&by_index).unwrap().inv(1), 1);
        assert_eq!(group_from_json(&json!({"cyclic": 3})).unwrap().order(), 3);
        assert!(group_from_json(&json!({"elements": ["e"], "mul": [[1]]})).is_err());
    }

    #[test]
    fn matrices() {
        let (m, cols) = int_matrix_from_json(&json!({"rows": [[2, 4], [6, 8]]})).unwrap();
        assert_eq!(cols, 2);
        assert_eq!(m[1][0], BigInt::from(6));
        assert!(int_matrix_from_json(&json!({"rows": [[1], [1, 2]]})).is_err());
    }
}
