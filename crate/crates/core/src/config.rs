//! Labeled configurations at a finite universe stage: finitely many
//! distinct points of `V` carrying nonzero labels in a partial monoid.
//!
//! Also the structure maps `δ_p` and `ψ`, the Hopf multiplication built
//! from `ψ`, and the isometry gadget `l`, `l_t` they rely on.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};
use rand::{Rng, RngCore};
use serde_json::{json, Value};
use thiserror::Error;

use crate::group_rep::{regular_rep, GroupError, PointedGSet, UniverseStage};
use crate::linalg::QMatrix;
use crate::monoid::{Elem, MonoidError, PartialMonoid};
use crate::rational::{format_vec, from_json, q, Q, QVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("two particles at {0:?} with nonzero labels")]
    DuplicatePoint(Vec<String>),
    #[error("configurations live at different stages")]
    StageMismatch,
    #[error("point of dimension {got} at a stage of dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("label monoid and stage are acted on by different groups")]
    GroupMismatch,
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed configuration: {0}")]
    Malformed(String),
}

pub type Particle = (QVec, Elem);

/// Particles are kept sorted by point so that equal configurations compare
/// equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledConfig {
    stage: Arc<UniverseStage>,
    particles: Vec<Particle>,
}

impl LabeledConfig {
    pub fn empty(stage: Arc<UniverseStage>) -> Self {
        LabeledConfig {
            stage,
            particles: Vec::new(),
        }
    }

    pub fn stage(&self) -> &Arc<UniverseStage> {
        &self.stage
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn label_at(&self, point: &[Q]) -> Option<&Elem> {
        self.particles
            .binary_search_by(|(p, _)| p.as_slice().cmp(point))
            .ok()
            .map(|i| &self.particles[i].1)
    }

    /// Labels in point order.
    pub fn labels(&self) -> Vec<&Elem> {
        self.particles.iter().map(|(_, a)| a).collect()
    }

    /// Labels as a sorted multiset.
    pub fn label_multiset(&self) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.particles.iter().map(|(_, a)| a.clone()).collect();
        out.sort();
        out
    }

    /// The same configuration at a larger stage, by zero-padding points.
    pub fn pad_into(&self, target: &Arc<UniverseStage>) -> LabeledConfig {
        let particles = self
            .particles
            .iter()
            .map(|(p, a)| (self.stage.pad_into(p, target), a.clone()))
            .collect();
        LabeledConfig {
            stage: target.clone(),
            particles,
        }
    }

    /// Relabels every particle, erasing those whose new label is zero.
    pub fn map_labels(&self, m: &dyn PartialMonoid, f: impl Fn(&Elem) -> Elem) -> LabeledConfig {
        let particles = self
            .particles
            .iter()
            .map(|(p, a)| (p.clone(), f(a)))
            .filter(|(_, a)| !m.is_zero(a))
            .collect();
        LabeledConfig {
            stage: self.stage.clone(),
            particles,
        }
    }

    /// Adds a particle, replacing whatever sat at the same point.
    pub fn with_particle(mut self, point: QVec, label: Elem) -> LabeledConfig {
        match self.particles.binary_search_by(|(p, _)| p.cmp(&point)) {
            Ok(i) => self.particles[i].1 = label,
            Err(i) => self.particles.insert(i, (point, label)),
        }
        self
    }

    /// Replaces labels without moving points; `None` drops the particle.
    pub fn filter_map_labels(&self, f: impl Fn(&Elem) -> Option<Elem>) -> LabeledConfig {
        let particles = self
            .particles
            .iter()
            .filter_map(|(p, a)| f(a).map(|b| (p.clone(), b)))
            .collect();
        LabeledConfig {
            stage: self.stage.clone(),
            particles,
        }
    }

    pub fn to_json(&self, m: &dyn PartialMonoid) -> Value {
        json!({
            "copies": self.stage.copies(),
            "group": self.stage.group().name(),
            "particles": self.particles.iter().map(|(p, a)| json!({
                "point": format_vec(p),
                "label": m.render_elem(a),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Builds a configuration, erasing zero-labeled particles.
pub fn make_config(
    stage: Arc<UniverseStage>,
    raw: Vec<Particle>,
    m: &dyn PartialMonoid,
) -> Result<LabeledConfig, ConfigError> {
    let mut by_point: BTreeMap<QVec, Elem> = BTreeMap::new();
    for (p, a) in raw {
        if p.len() != stage.dim() {
            return Err(ConfigError::Dimension {
                expected: stage.dim(),
                got: p.len(),
            });
        }
        if !m.contains(&a) {
            return Err(MonoidError::NotInCarrier(m.render_elem(&a).to_string()).into());
        }
        if m.is_zero(&a) {
            continue;
        }
        if by_point.contains_key(&p) {
            return Err(ConfigError::DuplicatePoint(format_vec(&p)));
        }
        by_point.insert(p, a);
    }
    Ok(LabeledConfig {
        stage,
        particles: by_point.into_iter().collect(),
    })
}

/// Reads `{"particles": [{"point": [...], "label": ...}]}` at a given stage.
pub fn config_from_json(
    v: &Value,
    stage: Arc<UniverseStage>,
    m: &dyn PartialMonoid,
) -> Result<LabeledConfig, ConfigError> {
    let bad = |what: &str| ConfigError::Malformed(what.to_string());
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
        let label = m.parse_elem(item.get("label").ok_or_else(|| bad("particle needs a \"label\""))?)?;
        raw.push((point, label));
    }
    make_config(stage, raw, m)
}

/// The partial sum of configurations: labels at a shared point are summed
/// in `M`. `Ok(None)` when one of those label tuples is not summable.
pub fn config_partial_sum(
    tuple: &[LabeledConfig],
    m: &dyn PartialMonoid,
) -> Result<Option<LabeledConfig>, ConfigError> {
    let Some(first) = tuple.first() else {
        return Err(ConfigError::Malformed("empty tuple has no stage".into()));
    };
    if tuple.iter().any(|c| !c.stage.same_as(&first.stage)) {
        return Err(ConfigError::StageMismatch);
    }
    let mut by_point: BTreeMap<&QVec, Vec<Elem>> = BTreeMap::new();
    for c in tuple {
        for (p, a) in &c.particles {
            by_point.entry(p).or_default().push(a.clone());
        }
    }
    let mut particles = Vec::with_capacity(by_point.len());
    for (p, labels) in by_point {
        let total = if labels.len() == 1 {
            labels.into_iter().next()
        } else {
            m.sum(&labels)?
        };
        match total {
            None => return Ok(None),
            Some(a) if m.is_zero(&a) => {}
            Some(a) => particles.push((p.clone(), a)),
        }
    }
    Ok(Some(LabeledConfig {
        stage: first.stage.clone(),
        particles,
    }))
}

fn check_label_group(stage: &UniverseStage, m: &dyn PartialMonoid) -> Result<(), ConfigError> {
    match m.group() {
        Some(g) if g != *stage.group() => Err(ConfigError::GroupMismatch),
        _ => Ok(()),
    }
}

/// `g(c, a) = (gc, g a g⁻¹)`: the particle at `v` labeled `a` moves to
/// `g·v` with label `g·a`.
pub fn g_act(config: &LabeledConfig, g: usize, m: &dyn PartialMonoid) -> Result<LabeledConfig, ConfigError> {
    check_label_group(&config.stage, m)?;
    let mut particles = config
        .particles
        .iter()
        .map(|(p, a)| Ok((config.stage.act(g, p)?, m.act(g, a))))
        .collect::<Result<Vec<Particle>, GroupError>>()?;
    particles.sort();
    Ok(LabeledConfig {
        stage: config.stage.clone(),
        particles,
    })
}

/// Whether every element of `h` fixes the configuration.
pub fn is_fixed(config: &LabeledConfig, h: &[usize], m: &dyn PartialMonoid) -> Result<bool, ConfigError> {
    for &g in h {
        if g_act(config, g, m)? != *config {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `δ_p`: keeps the particles whose `P`-coordinate is `p` and projects
/// their labels to `M`. Labels are pairs `(Point(p), a)`.
pub fn delta_map(config: &LabeledConfig, p: &PointedGSet, point: usize) -> LabeledConfig {
    if point == p.basepoint() {
        return LabeledConfig::empty(config.stage.clone());
    }
    let particles = config
        .particles
        .iter()
        .filter_map(|(v, a)| match a.as_pair() {
            Some((Elem::Point(x), inner)) if *x == point => Some((v.clone(), inner.clone())),
            _ => None,
        })
        .collect();
    LabeledConfig {
        stage: config.stage.clone(),
        particles,
    }
}

/// The chosen `G`-linear isometry `l: V_k × V_k → V_{2k}`, `l(v, w) = (−w, v)`,
/// and the vector `e ∈ V_k^G` with value 1 on every coordinate of copy 0.
#[derive(Debug, Clone)]
pub struct IsometryGadget {
    stage_in: Arc<UniverseStage>,
    stage_out: Arc<UniverseStage>,
    matrix: QMatrix,
    e: QVec,
}

impl IsometryGadget {
    pub fn new(stage_in: Arc<UniverseStage>) -> Self {
        let n = stage_in.dim();
        let stage_out = Arc::new(regular_rep(stage_in.group().clone(), 2 * stage_in.copies()));
        let mut matrix = QMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            matrix.set(i, n + i, -Q::one());
            matrix.set(n + i, i, Q::one());
        }
        let mut e = vec![Q::zero(); n];
        for x in e.iter_mut().take(stage_in.group().order()) {
            *x = Q::one();
        }
        IsometryGadget {
            stage_in,
            stage_out,
            matrix,
            e,
        }
    }

    pub fn stage_in(&self) -> &Arc<UniverseStage> {
        &self.stage_in
    }

    pub fn stage_out(&self) -> &Arc<UniverseStage> {
        &self.stage_out
    }

    /// The matrix of `l` on the concatenation `(v, w)`.
    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn e(&self) -> &[Q] {
        &self.e
    }

    pub fn l(&self, v: &[Q], w: &[Q]) -> QVec {
        let mut vw = v.to_vec();
        vw.extend_from_slice(w);
        self.matrix.apply(&vw)
    }

    /// Orthonormal columns, `G`-linearity on every group element, and `e`
    /// in the fixed subspace. Returns the first failure.
    pub fn validate(&self) -> Result<(), String> {
        let m = &self.matrix;
        if !m.transpose().mul(m).is_identity() {
            return Err("l is not an isometry".into());
        }
        for g in 0..self.stage_in.group().order() {
            let gg = self.stage_in.rep().matrix(g).direct_sum(self.stage_in.rep().matrix(g));
            if m.mul(&gg) != self.stage_out.rep().matrix(g).mul(m) {
                return Err(format!("l does not commute with group element {g}"));
            }
            if self.stage_in.rep().matrix(g).apply(&self.e) != self.e {
                return Err(format!("e is moved by group element {g}"));
            }
        }
        Ok(())
    }

    /// `(cos, sin)` of the rotation at time `t`, through the rational
    /// parametrization with `s = 1 − t`.
    pub fn rotation(t: &Q) -> (Q, Q) {
        let s = Q::one() - t;
        let d = Q::one() + &s * &s;
        ((Q::one() - &s * &s) / &d, q(2) * &s / &d)
    }

    /// `l_t: V_k → V_{2k}` as a matrix; `l_1` pads, `l_0(v) = l(v, 0)`.
    pub fn path_matrix(&self, t: &Q) -> QMatrix {
        let n = self.stage_in.dim();
        let (c, s) = Self::rotation(t);
        let mut out = QMatrix::zeros(2 * n, n);
        for i in 0..n {
            out.set(i, i, c.clone());
            out.set(n + i, i, s.clone());
        }
        out
    }
}

/// `l_t(v)` for `t ∈ [0, 1]`.
pub fn isometry_path(gadget: &IsometryGadget, t: &Q, v: &[Q]) -> QVec {
    gadget.path_matrix(t).apply(v)
}

/// Where `ψ` sends the non-basepoint `p` of `P`, as a vector of `V_k`.
///
/// Orbits of `P − {*}` are numbered `j = 1, 2, …` in order of their least
/// element `p₀`. The point `x·p₀` goes to `j` times the indicator of the
/// coset `x·Stab(p₀)` in copy 0, which the regular representation permutes
/// exactly as `G` permutes the orbit. Fixed points land on multiples of `e`.
pub fn psi_embedding(p: &PointedGSet, stage: &UniverseStage) -> Result<Vec<Option<QVec>>, ConfigError> {
    let group = stage.group();
    let acts = p.group().order() > 1;
    if acts && p.group() != group {
        return Err(ConfigError::GroupMismatch);
    }
    let act = |g: usize, x: usize| if acts { p.act(g, x) } else { x };
    let mut out: Vec<Option<QVec>> = vec![None; p.len()];
    let mut orbit = 0i64;
    for p0 in p.non_basepoints() {
        if out[p0].is_some() {
            continue;
        }
        orbit += 1;
        for x in 0..group.order() {
            let target = act(x, p0);
            let mut v = vec![Q::zero(); stage.dim()];
            for h in 0..group.order() {
                if act(h, p0) == p0 {
                    v[group.mul(x, h)] = q(orbit);
                }
            }
            out[target] = Some(v);
        }
    }
    Ok(out)
}

/// `ψ`: the assignment `p ↦ f(p)` at stage `k` becomes one configuration at
/// stage `2k` with the particle `v` of `f(p)` placed at `l(u_p, v)` and
/// labeled `(p, a)`.
pub fn psi(
    p: &PointedGSet,
    assignment: &BTreeMap<usize, LabeledConfig>,
    gadget: &IsometryGadget,
) -> Result<LabeledConfig, ConfigError> {
    let embed = psi_embedding(p, gadget.stage_in())?;
    let mut particles = Vec::new();
    for (&point, config) in assignment {
        if !config.stage.same_as(gadget.stage_in()) {
            return Err(ConfigError::StageMismatch);
        }
        let Some(u) = embed.get(point).and_then(Option::as_ref) else {
            if config.is_empty() {
                continue;
            }
            return Err(ConfigError::Malformed(format!("no embedding for point {point}")));
        };
        for (v, a) in &config.particles {
            particles.push((gadget.l(u, v), Elem::pair(Elem::Point(point), a.clone())));
        }
    }
    particles.sort();
    debug_assert!(particles.windows(2).all(|w| w[0].0 != w[1].0), "l is injective");
    Ok(LabeledConfig {
        stage: gadget.stage_out().clone(),
        particles,
    })
}

/// `μ(x, y)`: `ψ` on `{1 ↦ x, 2 ↦ y}` followed by the fold `M ∨ M → M`.
pub fn hopf_mul(x: &LabeledConfig, y: &LabeledConfig, gadget: &IsometryGadget) -> Result<LabeledConfig, ConfigError> {
    let two = PointedGSet::standard(2);
    let assignment = BTreeMap::from([(1, x.clone()), (2, y.clone())]);
    let wedge = psi(&two, &assignment, gadget)?;
    let particles = wedge
        .particles
        .into_iter()
        .map(|(v, a)| match a.as_pair() {
            Some((_, inner)) => (v, inner.clone()),
            None => unreachable!("ψ labels are pairs"),
        })
        .collect();
    Ok(LabeledConfig {
        stage: wedge.stage,
        particles,
    })
}

/// A random configuration with integer coordinates in `[-2, 2]` and up to
/// `max_particles` nonzero sampled labels.
pub fn random_config(
    rng: &mut dyn RngCore,
    stage: Arc<UniverseStage>,
    m: &dyn PartialMonoid,
    max_particles: usize,
) -> LabeledConfig {
    let k = rng.gen_range(0..=max_particles);
    let mut by_point: BTreeMap<QVec, Elem> = BTreeMap::new();
    for _ in 0..k {
        let p: QVec = (0..stage.dim()).map(|_| q(rng.gen_range(-2..=2))).collect();
        let a = m.sample(rng);
        if !m.is_zero(&a) {
            by_point.insert(p, a);
        }
    }
    LabeledConfig {
        stage,
        particles: by_point.into_iter().collect(),
    }
}
