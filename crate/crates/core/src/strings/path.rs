//! A closed catalog of explicit paths of configurations, each with exact
//! formulas, declared endpoints and an a priori Lipschitz bound for the
//! cluster distance.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::metric::cluster_distance;
use super::{double, flatten, gamma, lambda, map_intervals, midpoint, split_label, stretch, tau_inv, unflatten};
use super::{StringError, StringRecord};
use crate::config::{config_partial_sum, hopf_mul, make_config, IsometryGadget, LabeledConfig, Particle};
use crate::interval::{h_t, union_partial, vanish_path, MonotoneMap};
use crate::linalg::{add, scale, sub};
use crate::monoid::{Monoid, SmashMonoid};
use crate::rational::{format_q, frac, q, to_f64, Q, QVec};

/// What every path needs: the label monoid `M`, `I(ℝ) ∧ M`, and the gadget.
#[derive(Debug, Clone)]
pub struct PathContext {
    pub m: Monoid,
    pub sm: Arc<SmashMonoid>,
    pub gadget: Arc<IsometryGadget>,
}

#[derive(Debug, Clone)]
pub enum PathSpec {
    /// `(γλ)_t` on a string configuration in `I₊`, from `γλ(x)` to `x`.
    GammaLambda { ctx: PathContext, sc: LabeledConfig },
    /// `(λγ)_t(x) = l_t(x)`, from `λγ(x)` to `x`.
    LambdaGamma { ctx: PathContext, x: LabeledConfig },
    /// `μ(I(α_t)x, τI(α_t)x)`, from `μ(x, τx)` to `μ(h₁x)`.
    Ht { ctx: PathContext, sc: LabeledConfig },
    /// Labelwise vanishing of `Σh₁`, from `(I(α)P ∪ τI(α)P, a)` to `∅`.
    Vanish { ctx: PathContext, sc: LabeledConfig },
    /// Straight-line motion; with `merge_at_end` particles meeting at
    /// `t = 1` are summed.
    LinearIsotopy {
        labels: Monoid,
        stage: Arc<crate::group_rep::UniverseStage>,
        moves: Vec<(QVec, QVec, crate::monoid::Elem)>,
        merge_at_end: bool,
    },
    /// Equal-length pieces run one after another.
    Concat { name: String, parts: Vec<PathSpec> },
}

impl PathContext {
    pub fn new(m: Monoid, stage: Arc<crate::group_rep::UniverseStage>) -> Result<Self, StringError> {
        Ok(PathContext {
            sm: Arc::new(super::string_monoid(m.clone())?),
            m,
            gadget: Arc::new(IsometryGadget::new(stage)),
        })
    }
}

fn check_t(t: &Q) -> Result<(), StringError> {
    if t.is_negative() || *t > Q::one() {
        Err(StringError::OutOfRange(format_q(t)))
    } else {
        Ok(())
    }
}

fn alpha_image(sc: &LabeledConfig, sm: &SmashMonoid, t: &Q) -> Result<LabeledConfig, StringError> {
    map_intervals(sc, sm, |p| Ok(p.pushforward(&MonotoneMap::AlphaT(t.clone()))?))
}

fn l1(v: &[Q]) -> Q {
    v.iter().fold(Q::zero(), |acc, x| acc + x.abs())
}

impl PathSpec {
    pub fn kind(&self) -> String {
        match self {
            PathSpec::GammaLambda { .. } => "GammaLambda".into(),
            PathSpec::LambdaGamma { .. } => "LambdaGamma".into(),
            PathSpec::Ht { .. } => "Ht".into(),
            PathSpec::Vanish { .. } => "Vanish".into(),
            PathSpec::LinearIsotopy { .. } => "LinearIsotopy".into(),
            PathSpec::Concat { name, .. } => name.clone(),
        }
    }

    /// Label monoid of the configurations along the path.
    pub fn labels(&self) -> Monoid {
        match self {
            PathSpec::LambdaGamma { ctx, .. } => ctx.m.clone(),
            PathSpec::GammaLambda { ctx, .. } | PathSpec::Ht { ctx, .. } | PathSpec::Vanish { ctx, .. } => {
                ctx.sm.clone()
            }
            PathSpec::LinearIsotopy { labels, .. } => labels.clone(),
            PathSpec::Concat { parts, .. } => parts[0].labels(),
        }
    }

    pub fn eval(&self, t: &Q) -> Result<LabeledConfig, StringError> {
        check_t(t)?;
        match self {
            PathSpec::GammaLambda { ctx, sc } => {
                let g = &ctx.gadget;
                if *t <= frac(1, 2) {
                    let s = double(t);
                    let shrink = Q::one() - &s;
                    let strings = flatten(sc)?
                        .into_iter()
                        .map(|r| {
                            let e_s = scale(&(&shrink * midpoint(&r.interval)), g.e());
                            StringRecord {
                                point: g.l(&r.point, &e_s),
                                interval: stretch(&r.interval, &s),
                                label: r.label,
                            }
                        })
                        .collect();
                    unflatten(g.stage_out().clone(), strings, &ctx.sm)
                } else {
                    let lt = g.path_matrix(&double(t));
                    let raw = sc.particles().iter().map(|(v, a)| (lt.apply(v), a.clone())).collect();
                    Ok(make_config(g.stage_out().clone(), raw, ctx.sm.as_ref())?)
                }
            }
            PathSpec::LambdaGamma { ctx, x } => {
                let lt = ctx.gadget.path_matrix(t);
                let raw = x.particles().iter().map(|(v, a)| (lt.apply(v), a.clone())).collect();
                Ok(make_config(ctx.gadget.stage_out().clone(), raw, ctx.m.as_ref())?)
            }
            PathSpec::Ht { ctx, sc } => {
                let moved = alpha_image(sc, &ctx.sm, t)?;
                let mirror = tau_inv(&moved, &ctx.sm)?;
                Ok(hopf_mul(&moved, &mirror, &ctx.gadget)?)
            }
            PathSpec::Vanish { ctx, sc } => map_intervals(sc, &ctx.sm, |p| Ok(vanish_path(p, t)?)),
            PathSpec::LinearIsotopy {
                labels,
                stage,
                moves,
                merge_at_end,
            } => {
                if let Some((i, j, at)) = self.collision() {
                    if at <= *t {
                        return Err(StringError::Collision(i, j, format_q(&at)));
                    }
                }
                let raw: Vec<Particle> = moves
                    .iter()
                    .map(|(a, b, label)| (add(a, &scale(t, &sub(b, a))), label.clone()))
                    .collect();
                if *merge_at_end && t.is_one() {
                    let singles = raw
                        .into_iter()
                        .map(|p| make_config(stage.clone(), vec![p], labels.as_ref()))
                        .collect::<Result<Vec<_>, _>>()?;
                    if singles.is_empty() {
                        return Ok(LabeledConfig::empty(stage.clone()));
                    }
                    config_partial_sum(&singles, labels.as_ref())?
                        .ok_or_else(|| StringError::Collision(0, 0, "1 (labels not summable)".into()))
                } else {
                    Ok(make_config(stage.clone(), raw, labels.as_ref())?)
                }
            }
            PathSpec::Concat { parts, .. } => {
                let n = parts.len();
                let scaled = t * q(n as i64);
                let i = num::ToPrimitive::to_usize(&scaled.floor().to_integer()).unwrap_or(n).min(n - 1);
                parts[i].eval(&(scaled - q(i as i64)))
            }
        }
    }

    /// The configurations the path is declared to join, computed from the
    /// defining maps rather than from the path formula.
    pub fn endpoints(&self) -> Result<(LabeledConfig, LabeledConfig), StringError> {
        match self {
            PathSpec::GammaLambda { ctx, sc } => {
                let start = gamma(&lambda(sc, &ctx.gadget, ctx.m.as_ref())?, &ctx.sm)?;
                Ok((start, sc.pad_into(ctx.gadget.stage_out())))
            }
            PathSpec::LambdaGamma { ctx, x } => {
                let start = lambda(&gamma(x, &ctx.sm)?, &ctx.gadget, ctx.m.as_ref())?;
                Ok((start, x.pad_into(ctx.gadget.stage_out())))
            }
            PathSpec::Ht { ctx, sc } => {
                let start = hopf_mul(sc, &tau_inv(sc, &ctx.sm)?, &ctx.gadget)?;
                let first = map_intervals(sc, &ctx.sm, |p| Ok(h_t(p, &Q::one())?.0))?;
                let second = map_intervals(sc, &ctx.sm, |p| Ok(h_t(p, &Q::one())?.1))?;
                Ok((start, hopf_mul(&first, &second, &ctx.gadget)?))
            }
            PathSpec::Vanish { ctx, sc } => {
                let start = map_intervals(sc, &ctx.sm, |p| {
                    let (a, b) = h_t(p, &Q::one())?;
                    Ok(union_partial(&[a, b]).expect("h₁ has disjoint coordinates"))
                })?;
                Ok((start, LabeledConfig::empty(sc.stage().clone())))
            }
            PathSpec::LinearIsotopy { .. } => Ok((self.eval(&Q::zero())?, self.eval(&Q::one())?)),
            PathSpec::Concat { parts, .. } => {
                Ok((parts[0].endpoints()?.0, parts[parts.len() - 1].endpoints()?.1))
            }
        }
    }

    /// Whether consecutive pieces of a concatenation meet exactly.
    pub fn joints_match(&self) -> Result<bool, StringError> {
        match self {
            PathSpec::Concat { parts, .. } => {
                for w in parts.windows(2) {
                    if w[0].eval(&Q::one())? != w[1].eval(&Q::zero())? || !w[1].joints_match()? {
                        return Ok(false);
                    }
                }
                parts[0].joints_match()
            }
            _ => Ok(true),
        }
    }

    /// First pair of particles of a linear isotopy to meet, and when.
    /// Meeting at `t = 1` is allowed when merging there.
    pub fn collision(&self) -> Option<(usize, usize, Q)> {
        let PathSpec::LinearIsotopy { moves, merge_at_end, .. } = self else {
            return None;
        };
        let mut first: Option<(usize, usize, Q)> = None;
        for i in 0..moves.len() {
            for j in i + 1..moves.len() {
                // a + t·d = 0 coordinatewise
                let a = sub(&moves[i].0, &moves[j].0);
                let d = sub(&sub(&moves[i].1, &moves[i].0), &sub(&moves[j].1, &moves[j].0));
                let mut when: Option<Q> = None;
                let mut never = false;
                for (ak, dk) in a.iter().zip(&d) {
                    if dk.is_zero() {
                        never |= !ak.is_zero();
                    } else {
                        let tk = -ak / dk;
                        match &when {
                            Some(w) if *w != tk => never = true,
                            _ => when = Some(tk),
                        }
                    }
                }
                let t = match (never, when) {
                    (true, _) => continue,
                    (false, Some(t)) => t,
                    (false, None) => Q::zero(),
                };
                let allowed = *merge_at_end && t.is_one();
                if !t.is_negative() && t <= Q::one() && !allowed && first.as_ref().is_none_or(|f| t < f.2) {
                    first = Some((i, j, t));
                }
            }
        }
        first
    }

    /// An upper bound for `d(F(t), F(t′)) / |t − t′|` read off the formulas.
    pub fn lipschitz_bound(&self) -> Result<Q, StringError> {
        Ok(match self {
            PathSpec::GammaLambda { ctx, sc } => {
                let e1 = l1(ctx.gadget.e());
                let first = flatten(sc)?.iter().fold(Q::zero(), |acc, r| {
                    let j = &r.interval;
                    acc + q(2) * (midpoint(j).abs() * &e1 + (j.lo() + q(1)).abs() + (j.hi() - q(1)).abs())
                });
                let second = sc.particles().iter().fold(Q::zero(), |acc, (v, _)| acc + q(8) * l1(v));
                first.max(second)
            }
            PathSpec::LambdaGamma { x, .. } => x.particles().iter().fold(Q::zero(), |acc, (v, _)| acc + q(4) * l1(v)),
            PathSpec::Ht { sc, .. } => {
                let mut total = Q::zero();
                for (_, label) in sc.particles() {
                    for j in split_label(label)?.0.components() {
                        total += q(2) * (j.lo().abs() + j.hi().abs() + q(2));
                    }
                }
                total
            }
            PathSpec::Vanish { sc, .. } => {
                let mut count = 0;
                for (_, label) in sc.particles() {
                    count += split_label(label)?.0.len();
                }
                q(4 * count as i64)
            }
            PathSpec::LinearIsotopy { moves, .. } => {
                moves.iter().fold(Q::zero(), |acc, (a, b, _)| acc + l1(&sub(b, a)))
            }
            PathSpec::Concat { parts, .. } => {
                let n = q(parts.len() as i64);
                let mut best = Q::zero();
                for p in parts {
                    best = best.max(&n * p.lipschitz_bound()?);
                }
                best
            }
        })
    }
}

/// Sum of the compactly supported Euler characteristics of the interval
/// labels; zero for configurations without interval labels.
pub fn total_euler(c: &LabeledConfig) -> i64 {
    c.particles()
        .iter()
        .filter_map(|(_, label)| split_label(label).ok())
        .map(|(p, _)| p.euler_char())
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub lipschitz: String,
    pub max_ratio: String,
    pub max_ratio_f64: f64,
    pub endpoint_ok: bool,
    pub audit_ok: bool,
    pub collision: Option<String>,
    pub pass: bool,
}

/// Samples the path on the grid `i/N`, compares the endpoints with the
/// declared ones, bounds consecutive cluster distances by `L/N`, and checks
/// that the total Euler characteristic of the labels never changes (only
/// half-open pieces may disappear). `L` defaults to the formula bound.
pub fn certify_continuity(path: &PathSpec, n: usize, l: Option<Q>) -> ContinuityReport {
    assert!(n >= 2, "at least two samples");
    let kind = path.kind();
    let fail = |reason: String| ContinuityReport {
        kind: kind.clone(),
        n,
        lipschitz: "n/a".into(),
        max_ratio: "n/a".into(),
        max_ratio_f64: f64::INFINITY,
        endpoint_ok: false,
        audit_ok: false,
        collision: Some(reason),
        pass: false,
    };
    let bound = match l.map_or_else(|| path.lipschitz_bound(), Ok) {
        Ok(b) => b,
        Err(e) => return fail(e.to_string()),
    };
    let samples: Result<Vec<LabeledConfig>, StringError> =
        (0..=n).into_par_iter().map(|i| path.eval(&frac(i as i64, n as i64))).collect();
    let samples = match samples {
        Ok(s) => s,
        Err(e) => return fail(e.to_string()),
    };
    let collision = path.collision().map(|(i, j, t)| format!("particles {i} and {j} meet at t = {}", format_q(&t)));
    let endpoint_ok = match (path.endpoints(), path.joints_match()) {
        (Ok((a, b)), Ok(joints)) => samples[0] == a && samples[n] == b && joints,
        _ => false,
    };
    let ratios: Vec<Q> = samples
        .par_windows(2)
        .map(|w| cluster_distance(&w[0], &w[1]) * q(n as i64))
        .collect();
    let max_ratio = ratios.into_iter().max().unwrap_or_else(Q::zero);
    let chi = total_euler(&samples[0]);
    let audit_ok = samples.iter().all(|c| total_euler(c) == chi);
    let pass = endpoint_ok && audit_ok && collision.is_none() && max_ratio <= bound;
    ContinuityReport {
        kind,
        n,
        lipschitz: format_q(&bound),
        max_ratio: format_q(&max_ratio),
        max_ratio_f64: to_f64(&max_ratio),
        endpoint_ok,
        audit_ok,
        collision,
        pass,
    }
}

/// A path from `μ(x, τx)` to `∅` in three pieces: `Ht` moves the labels to
/// `(I(α)P, a)` and `(τI(α)P, a)`; a linear isotopy brings each such pair
/// to the common point `l(3/2·e, v)` and sums it; `Vanish` removes the sum.
pub fn grouplike_certificate(sc: &LabeledConfig, ctx: &PathContext) -> Result<PathSpec, StringError> {
    let g = &ctx.gadget;
    let at = |k: Q, v: &[Q]| g.l(&scale(&k, g.e()), v);
    let mut moves = Vec::new();
    let mut meeting: BTreeMap<QVec, crate::monoid::Elem> = BTreeMap::new();
    for (v, label) in sc.particles() {
        let (p, a) = split_label(label)?;
        let (first, second) = h_t(p, &Q::one())?;
        let mid = at(frac(3, 2), v);
        moves.push((at(q(1), v), mid.clone(), ctx.sm.pair(crate::monoid::Elem::Intervals(first), a.clone())));
        moves.push((at(q(2), v), mid.clone(), ctx.sm.pair(crate::monoid::Elem::Intervals(second), a.clone())));
        meeting.insert(mid, label.clone());
    }
    let merged = make_config(g.stage_out().clone(), meeting.into_iter().collect(), ctx.sm.as_ref())?;
    Ok(PathSpec::Concat {
        name: "InverseCertificate".into(),
        parts: vec![
            PathSpec::Ht {
                ctx: ctx.clone(),
                sc: sc.clone(),
            },
            PathSpec::LinearIsotopy {
                labels: ctx.sm.clone(),
                stage: g.stage_out().clone(),
                moves,
                merge_at_end: true,
            },
            PathSpec::Vanish {
                ctx: ctx.clone(),
                sc: merged,
            },
        ],
    })
}
