//! Building monoids from JSON definitions discriminated on `"kind"`.

use std::sync::Arc;

use serde_json::Value;

use super::smash::DEFAULT_SMASH_BUDGET;
use super::{
    GrassmannQ, GroupSubset, IntervalMonoid, Monoid, MonoidError, PointedSetMonoid, SmashMonoid, TableMonoid,
    WedgeLabel,
};
use crate::group_rep::{FiniteGroup, OrthogonalRep};
use crate::io::{action_table, group_from_json, gset_from_json, InputError};
use crate::linalg::QMatrix;
use crate::rational::{from_json, Q};

fn spec_err(e: impl ToString) -> MonoidError {
    MonoidError::Spec(e.to_string())
}

impl From<InputError> for MonoidError {
    fn from(e: InputError) -> Self {
        spec_err(e)
    }
}

fn group_of(v: &Value) -> Result<Arc<FiniteGroup>, MonoidError> {
    match v.get("group") {
        Some(g) => Ok(group_from_json(g)?),
        None => Ok(Arc::new(FiniteGroup::trivial())),
    }
}

fn int_vector(v: &Value) -> Result<Vec<i64>, MonoidError> {
    match v {
        Value::Number(n) => n.as_i64().map(|x| vec![x]).ok_or_else(|| spec_err(v)),
        Value::Array(xs) => xs.iter().map(|x| x.as_i64().ok_or_else(|| spec_err(x))).collect(),
        _ => Err(spec_err(format!("not an integer vector: {v}"))),
    }
}

fn names(v: &Value, key: &str) -> Result<Vec<String>, MonoidError> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| spec_err(format!("missing \"{key}\"")))?
        .iter()
        .map(|e| match e {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(spec_err(e)),
        })
        .collect()
}

fn q_matrix(v: &Value, n: usize) -> Result<QMatrix, MonoidError> {
    let rows = v.as_array().ok_or_else(|| spec_err(v))?;
    let parsed = rows
        .iter()
        .map(|r| {
            let r = r.as_array().filter(|r| r.len() == n).ok_or_else(|| spec_err(r))?;
            r.iter().map(|x| from_json(x).map_err(spec_err)).collect::<Result<Vec<Q>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if parsed.len() != n {
        return Err(spec_err("representation matrices must be n × n"));
    }
    Ok(QMatrix::from_rows(parsed, n))
}

pub fn monoid_from_json(v: &Value) -> Result<Monoid, MonoidError> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| spec_err("monoid definition needs a \"kind\""))?;
    match kind {
        "group_subset" => {
            let moduli = match v.get("moduli") {
                Some(m) => int_vector(m)?,
                None => Vec::new(),
            };
            let rank = v.get("rank").and_then(Value::as_u64).unwrap_or(0) as usize;
            let subset = v
                .get("subset")
                .and_then(Value::as_array)
                .ok_or_else(|| spec_err("group_subset needs \"subset\""))?
                .iter()
                .map(int_vector)
                .collect::<Result<Vec<_>, _>>()?;
            let mut m = GroupSubset::new(rank, moduli, subset.clone())?;
            if let Some(bad) = v.get("unsummable") {
                let tuples = bad
                    .as_array()
                    .ok_or_else(|| spec_err(bad))?
                    .iter()
                    .map(|t| t.as_array().ok_or_else(|| spec_err(t))?.iter().map(int_vector).collect())
                    .collect::<Result<Vec<Vec<Vec<i64>>>, _>>()?;
                m = m.with_unsummable(tuples)?;
            }
            if let Some(action) = v.get("action") {
                let labels: Vec<String> = subset.iter().map(|x| format!("{x:?}")).collect();
                let table = action_table(action, &labels)?;
                m = m.with_action(group_of(v)?, table)?;
            }
            Ok(Arc::new(m))
        }
        "pointed_set" => Ok(Arc::new(PointedSetMonoid::new(gset_from_json(v, group_of(v)?)?))),
        "grassmann" => {
            let n = v
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| spec_err("grassmann needs \"n\""))? as usize;
            match v.get("rep") {
                None => Ok(Arc::new(GrassmannQ::new(n))),
                Some(r) => {
                    let mats = r
                        .as_array()
                        .ok_or_else(|| spec_err(r))?
                        .iter()
                        .map(|m| q_matrix(m, n))
                        .collect::<Result<Vec<_>, _>>()?;
                    let rep = OrthogonalRep::new(group_of(v)?, mats).map_err(spec_err)?;
                    Ok(Arc::new(GrassmannQ::with_rep(rep)))
                }
            }
        }
        "interval" => Ok(Arc::new(IntervalMonoid)),
        "smash" => {
            let left = monoid_from_json(v.get("left").ok_or_else(|| spec_err("smash needs \"left\""))?)?;
            let right = monoid_from_json(v.get("right").ok_or_else(|| spec_err("smash needs \"right\""))?)?;
            let budget = v.get("budget").and_then(Value::as_u64).map_or(DEFAULT_SMASH_BUDGET, |b| b as usize);
            Ok(Arc::new(SmashMonoid::new(left, right)?.with_budget(budget)))
        }
        "wedge_label" => {
            let m = monoid_from_json(v.get("m").ok_or_else(|| spec_err("wedge_label needs \"m\""))?)?;
            let xv = v.get("x").ok_or_else(|| spec_err("wedge_label needs \"x\""))?;
            let group = match (xv.get("group"), m.group()) {
                (Some(g), _) => group_from_json(g)?,
                (None, Some(g)) => g,
                (None, None) => Arc::new(FiniteGroup::trivial()),
            };
            let x = gset_from_json(xv, group)?;
            Ok(Arc::new(WedgeLabel::new(x, m)?))
        }
        "table" => Ok(Arc::new(parse_table(v)?)),
        other => Err(spec_err(format!("unknown monoid kind {other:?}"))),
    }
}

/// Reads a table monoid definition, for the operations that need the
/// concrete table (bar constructions).
pub fn table_from_json(v: &Value) -> Result<TableMonoid, MonoidError> {
    if v.get("kind").and_then(Value::as_str) != Some("table") {
        return Err(spec_err("expected a monoid of kind \"table\""));
    }
    parse_table(v)
}

fn parse_table(v: &Value) -> Result<TableMonoid, MonoidError> {
    let elems = names(v, "elements")?;
    let zero_name = v
        .get("zero")
        .map(|z| match z {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .ok_or_else(|| spec_err("table needs \"zero\""))?;
    let zero = elems
        .iter()
        .position(|x| *x == zero_name)
        .ok_or_else(|| spec_err("zero not among elements"))?;
    let rows = v
        .get("table")
        .and_then(Value::as_array)
        .ok_or_else(|| spec_err("table needs \"table\""))?;
    let table = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| spec_err(r))?
                .iter()
                .map(|x| match x {
                    Value::Null => Ok(None),
                    Value::String(s) => elems.iter().position(|e| e == s).map(Some).ok_or_else(|| spec_err(x)),
                    Value::Number(n) => {
                        let s = n.to_string();
                        elems.iter().position(|e| *e == s).map(Some).ok_or_else(|| spec_err(x))
                    }
                    _ => Err(spec_err(x)),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut m = TableMonoid::new(elems.clone(), zero, table)?;
    if let Some(action) = v.get("action") {
        let table = action_table(action, &elems)?;
        m = m.with_action(group_of(v)?, table)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::Elem;
    use serde_json::json;

    #[test]
    fn loads_every_kind() {
        let defs = [
            json!({"kind": "group_subset", "rank": 1, "subset": [0, 1, 2, 3]}),
            json!({"kind": "pointed_set", "elements": ["*", "a", "b"], "basepoint": "*"}),
            json!({"kind": "grassmann", "n": 3}),
            json!({"kind": "interval"}),
            json!({"kind": "smash", "left": {"kind": "interval"}, "right": {"kind": "group_subset", "moduli": [2], "subset": [0, 1]}}),
            json!({"kind": "wedge_label", "x": {"elements": ["*", "a", "b"], "basepoint": "*"},
                   "m": {"kind": "group_subset", "moduli": [2], "subset": [0, 1]}}),
            json!({"kind": "table", "elements": ["0", "1", "inf"], "zero": "0",
                   "table": [["0", "1", "inf"], ["1", "inf", "inf"], ["inf", "inf", "inf"]]}),
        ];
        for d in &defs {
            monoid_from_json(d).unwrap();
        }
        assert!(monoid_from_json(&json!({"kind": "nope"})).is_err());
    }

    #[test]
    fn group_subset_with_negation_action() {
        let m = monoid_from_json(&json!({
            "kind": "group_subset", "rank": 1, "subset": [-1, 0, 1],
            "group": {"cyclic": 2}, "action": [[0, 1, 2], [2, 1, 0]]
        }))
        .unwrap();
        assert_eq!(m.act(1, &Elem::Int(vec![1])), Elem::Int(vec![-1]));
    }

    #[test]
    fn table_reader_round_trips() {
        let t = table_from_json(&json!({"kind": "table", "elements": ["0", "1"], "zero": "0",
                                        "table": [["0", "1"], ["1", "0"]]}))
        .unwrap();
        assert_eq!(t.op(1, 1), Some(0));
    }
}
