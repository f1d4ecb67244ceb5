//! String configurations: configurations labeled in `I(ℝ) ∧ M`, so each
//! particle `v` carries a nonempty interval set `P` and a label `a`, read
//! as the strings `{v} × J` for the components `J` of `P`.
//!
//! This module has the maps between strings and particles (`λ`, `γ`, `ρ`),
//! the inversion `τ ∧ 1`, the path catalog and its continuity certificate,
//! and the structural maps used for wedges and induced G-sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::One;
use serde_json::Value;
use thiserror::Error;

use crate::config::{make_config, ConfigError, IsometryGadget, LabeledConfig, Particle};
use crate::group_rep::UniverseStage;
use crate::interval::{normalize, Interval, IntervalError, IntervalSet};
use crate::linalg::scale;
use crate::monoid::{Elem, IntervalMonoid, Monoid, MonoidError, PartialMonoid, SmashMonoid};
use crate::rational::{format_vec, from_json, frac, q, Q, QVec};

pub mod corpus;
pub mod metric;
pub mod path;
pub mod structural;

pub use metric::{cluster_distance, config_distance, MatchReport};
pub use path::{certify_continuity, grouplike_certificate, ContinuityReport, PathSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StringError {
    #[error("configuration is not in I₊: {0}")]
    NotPlus(String),
    #[error("label is not an (intervals, element) pair: {0}")]
    NotAString(String),
    #[error("parameter {0} outside [0, 1]")]
    OutOfRange(String),
    #[error("particles {0} and {1} collide at t = {2}")]
    Collision(usize, usize, String),
    #[error("strings over one point disagree: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// `I(ℝ) ∧ M`, the label monoid of string configurations.
pub fn string_monoid(m: Monoid) -> Result<SmashMonoid, MonoidError> {
    SmashMonoid::new(Arc::new(IntervalMonoid), m)
}

pub fn string_label(p: IntervalSet, a: Elem) -> Elem {
    Elem::pair(Elem::Intervals(p), a)
}

/// Splits a string label into its interval set and `M`-label.
pub fn split_label(label: &Elem) -> Result<(&IntervalSet, &Elem), StringError> {
    match label.as_pair() {
        Some((Elem::Intervals(p), a)) => Ok((p, a)),
        _ => Err(StringError::NotAString(format!("{label:?}"))),
    }
}

/// One record per interval component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StringRecord {
    pub point: QVec,
    pub interval: Interval,
    pub label: Elem,
}

pub fn flatten(sc: &LabeledConfig) -> Result<Vec<StringRecord>, StringError> {
    let mut out = Vec::new();
    for (v, label) in sc.particles() {
        let (p, a) = split_label(label)?;
        for j in p.components() {
            out.push(StringRecord {
                point: v.clone(),
                interval: j.clone(),
                label: a.clone(),
            });
        }
    }
    Ok(out)
}

/// Regroups strings by their point. Strings over one point must share the
/// label and have disjoint intervals.
pub fn unflatten(
    stage: Arc<UniverseStage>,
    strings: Vec<StringRecord>,
    sm: &SmashMonoid,
) -> Result<LabeledConfig, StringError> {
    let mut grouped: BTreeMap<QVec, (Vec<Interval>, Elem)> = BTreeMap::new();
    for s in strings {
        let entry = grouped.entry(s.point.clone()).or_insert_with(|| (Vec::new(), s.label.clone()));
        if entry.1 != s.label {
            return Err(StringError::Inconsistent(format_vec(&s.point).join(", ")));
        }
        entry.0.push(s.interval);
    }
    let raw = grouped
        .into_iter()
        .map(|(v, (js, a))| Ok((v, string_label(normalize(js)?, a))))
        .collect::<Result<Vec<Particle>, StringError>>()?;
    Ok(make_config(stage, raw, sm)?)
}

/// Every interval component closed.
pub fn is_plus(sc: &LabeledConfig) -> Result<bool, StringError> {
    for (_, label) in sc.particles() {
        if !split_label(label)?.0.is_plus() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_plus(sc: &LabeledConfig) -> Result<(), StringError> {
    if is_plus(sc)? {
        Ok(())
    } else {
        Err(StringError::NotPlus(format!("{} particles", sc.len())))
    }
}

/// The inclusion `I₊(V, M) → I(V, M)`, after checking membership.
pub fn rho(sc: &LabeledConfig) -> Result<LabeledConfig, StringError> {
    require_plus(sc)?;
    Ok(sc.clone())
}

/// Midpoint of a closed interval.
pub fn midpoint(j: &Interval) -> Q {
    (j.lo() + j.hi()) / q(2)
}

/// `λ`: the string `{v} × [a, b]` labeled `x` becomes the particle
/// `l(v, e((a+b)/2))` labeled `x`, at the doubled stage.
pub fn lambda(sc: &LabeledConfig, gadget: &IsometryGadget, m: &dyn PartialMonoid) -> Result<LabeledConfig, StringError> {
    require_plus(sc)?;
    check_stage(sc, gadget)?;
    let raw = flatten(sc)?
        .into_iter()
        .map(|s| (gadget.l(&s.point, &scale(&midpoint(&s.interval), gadget.e())), s.label))
        .collect();
    Ok(make_config(gadget.stage_out().clone(), raw, m)?)
}

/// `γ`: each particle `(v, a)` becomes the string `{v} × [−1, 1]`.
pub fn gamma(config: &LabeledConfig, sm: &SmashMonoid) -> Result<LabeledConfig, StringError> {
    let unit = IntervalSet::closed(-Q::one(), Q::one());
    let raw = config
        .particles()
        .iter()
        .map(|(v, a)| (v.clone(), string_label(unit.clone(), a.clone())))
        .collect();
    Ok(make_config(config.stage().clone(), raw, sm)?)
}

/// `τ ∧ 1`: every label `(P, a)` becomes `(τP, a)`.
pub fn tau_inv(sc: &LabeledConfig, sm: &SmashMonoid) -> Result<LabeledConfig, StringError> {
    map_intervals(sc, sm, |p| Ok(p.tau()?))
}

/// Applies `f` to every interval set, erasing particles left empty.
pub fn map_intervals(
    sc: &LabeledConfig,
    sm: &SmashMonoid,
    f: impl Fn(&IntervalSet) -> Result<IntervalSet, StringError>,
) -> Result<LabeledConfig, StringError> {
    let raw = sc
        .particles()
        .iter()
        .map(|(v, label)| {
            let (p, a) = split_label(label)?;
            Ok((v.clone(), sm.pair(Elem::Intervals(f(p)?), a.clone())))
        })
        .collect::<Result<Vec<Particle>, StringError>>()?;
    Ok(make_config(sc.stage().clone(), raw, sm)?)
}

fn check_stage(sc: &LabeledConfig, gadget: &IsometryGadget) -> Result<(), StringError> {
    if sc.stage().same_as(gadget.stage_in()) {
        Ok(())
    } else {
        Err(ConfigError::StageMismatch.into())
    }
}

/// Reads `{"particles": [{"point": [...], "intervals": [...], "label": a}]}`.
pub fn string_config_from_json(
    v: &Value,
    stage: Arc<UniverseStage>,
    sm: &SmashMonoid,
) -> Result<LabeledConfig, StringError> {
    let bad = |what: &str| StringError::Config(ConfigError::Malformed(what.to_string()));
    let list = v
        .get("particles")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("needs a \"particles\" list"))?;
    let mut raw = Vec::with_capacity(list.len());
    for item in list {
        let point = item
            .get("point")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("particle needs a \"point\""))?
            .iter()
            .map(|x| from_json(x).map_err(|e| bad(&e.to_string())))
            .collect::<Result<QVec, _>>()?;
        let p: IntervalSet = serde_json::from_value(item.get("intervals").cloned().unwrap_or(Value::Null))
            .map_err(|e| bad(&format!("intervals: {e}")))?;
        let a = sm.right().parse_elem(item.get("label").ok_or_else(|| bad("particle needs a \"label\""))?)?;
        raw.push((point, sm.pair(Elem::Intervals(p), a)));
    }
    Ok(make_config(stage, raw, sm)?)
}

/// `𝓘_t([a, b]) = [ta − (1−t), tb + (1−t)]`.
pub fn stretch(j: &Interval, t: &Q) -> Interval {
    let s = Q::one() - t;
    Interval::closed(t * j.lo() - &s, t * j.hi() + &s)
}

/// `t ↦ 2t − 1` on `[½, 1]` and `t ↦ 2t` on `[0, ½]`.
pub(crate) fn double(t: &Q) -> Q {
    if *t <= frac(1, 2) {
        q(2) * t
    } else {
        q(2) * t - Q::one()
    }
}
