//! Structure maps of string configurations labeled in `X ∧ M`.
//!
//! Labels have the shape `(P, (x, a))` with `P` an interval set, `x` a
//! non-basepoint of the pointed G-set `X` and `a ∈ M`.

use std::collections::BTreeMap;

use super::{split_label, string_label, StringError};
use crate::config::{hopf_mul, psi_embedding, ConfigError, IsometryGadget, LabeledConfig};
use crate::group_rep::{coset_gset, PointedGSet};
use crate::monoid::Elem;

/// The `X`-coordinate and `M`-label of a string label over `X ∧ M`.
fn split_point(label: &Elem) -> Result<(usize, &Elem), StringError> {
    let (_, inner) = split_label(label)?;
    match inner.as_pair() {
        Some((Elem::Point(x), a)) => Ok((*x, a)),
        _ => Err(StringError::NotAString(format!("{inner:?} is not a point label"))),
    }
}

/// Replaces the `X`-coordinate of every label through `f`; `None` drops
/// the particle.
pub fn reindex_points(
    sc: &LabeledConfig,
    f: impl Fn(usize) -> Option<usize>,
) -> Result<LabeledConfig, StringError> {
    for (_, label) in sc.particles() {
        split_point(label)?;
    }
    Ok(sc.filter_map_labels(|label| {
        let (p, _) = split_label(label).ok()?;
        let (x, a) = split_point(label).ok()?;
        f(x).map(|y| string_label(p.clone(), Elem::pair(Elem::Point(y), a.clone())))
    }))
}

fn invert(map: &[usize]) -> BTreeMap<usize, usize> {
    map.iter().enumerate().skip(1).map(|(i, &w)| (w, i)).collect()
}

/// Splits a configuration over `(X ∨ Y) ∧ M` into its parts over `X ∧ M`
/// and `Y ∧ M`.
pub fn c3_pair(
    sc: &LabeledConfig,
    x: &PointedGSet,
    y: &PointedGSet,
) -> Result<(LabeledConfig, LabeledConfig), StringError> {
    let (_, from_x, from_y) = PointedGSet::wedge(x, y).map_err(ConfigError::from)?;
    let (back_x, back_y) = (invert(&from_x), invert(&from_y));
    let left = reindex_points(sc, |w| back_x.get(&w).copied())?;
    let right = reindex_points(sc, |w| back_y.get(&w).copied())?;
    Ok((left, right))
}

/// The inverse direction: both parts are pushed into `X ∨ Y` and added
/// with the Hopf multiplication, landing at the doubled stage.
pub fn c3_merge(
    left: &LabeledConfig,
    right: &LabeledConfig,
    x: &PointedGSet,
    y: &PointedGSet,
    gadget: &IsometryGadget,
) -> Result<LabeledConfig, StringError> {
    let (_, from_x, from_y) = PointedGSet::wedge(x, y).map_err(ConfigError::from)?;
    let l = reindex_points(left, |i| Some(from_x[i]))?;
    let r = reindex_points(right, |j| Some(from_y[j]))?;
    Ok(hopf_mul(&l, &r, gadget)?)
}

/// The induced-set map: an assignment `gH ↦ c(gH)` of configurations over
/// `X ∧ M` becomes one configuration over `(G/H₊ ∧ X) ∧ M`. A particle
/// `ξ` of `c(gH)` is placed at `l(u_{gH}, ξ)`, where `u_{gH}` is the
/// indicator of `gH` in the first copy, and its point `x` becomes the pair
/// `gH ∧ x`.
///
/// Cosets are numbered as in [`coset_gset`], starting at 1.
pub fn c4_rho(
    assignment: &BTreeMap<usize, LabeledConfig>,
    h: &[usize],
    x: &PointedGSet,
    gadget: &IsometryGadget,
) -> Result<LabeledConfig, StringError> {
    let group = gadget.stage_in().group().clone();
    let (cosets, _) = coset_gset(group, h).map_err(ConfigError::from)?;
    let embed = psi_embedding(&cosets, gadget.stage_in())?;
    let mut raw = Vec::new();
    for (&coset, config) in assignment {
        if !config.stage().same_as(gadget.stage_in()) {
            return Err(ConfigError::StageMismatch.into());
        }
        let u = embed
            .get(coset)
            .and_then(Option::as_ref)
            .ok_or_else(|| ConfigError::Malformed(format!("no coset {coset}")))?;
        for (v, label) in config.particles() {
            let (p, _) = split_label(label)?;
            let (point, a) = split_point(label)?;
            let s = PointedGSet::smash_index(&cosets, x, coset, point);
            raw.push((gadget.l(u, v), string_label(p.clone(), Elem::pair(Elem::Point(s), a.clone()))));
        }
    }
    raw.sort();
    if raw.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(ConfigError::Malformed("two particles of one coset coincide".into()).into());
    }
    Ok(raw
        .into_iter()
        .fold(LabeledConfig::empty(gadget.stage_out().clone()), |c, (v, a)| c.with_particle(v, a)))
}

/// The canonical pairing back: the part of `c4_rho` lying over the coset
/// `coset`, with points `gH ∧ x` read as `x`. Positions stay at the
/// doubled stage.
pub fn c4_evaluate(
    sc: &LabeledConfig,
    coset: usize,
    h: &[usize],
    x: &PointedGSet,
) -> Result<LabeledConfig, StringError> {
    let (cosets, _) = coset_gset(sc.stage().group().clone(), h).map_err(ConfigError::from)?;
    let back: BTreeMap<usize, usize> = x
        .non_basepoints()
        .map(|i| (PointedGSet::smash_index(&cosets, x, coset, i), i))
        .collect();
    reindex_points(sc, |s| back.get(&s).copied())
}
