//! `X ∧ M` for a pointed G-set `X`: nonzero elements are pairs `(x, a)`.
//!
//! Summability is that of the smash product with `X` folded: pairs over
//! the same `x` may be combined through `M`, and the tuple is summable
//! when such contractions leave at most one pair. Requiring all `x` to
//! agree up front would break partition coherence as soon as `M` has
//! nontrivial sums to zero: `(x,1)+(x,1)+(y,1)` in `S⁰∨S⁰ ∧ ℤ/2` has
//! summable blocks `(x,1)+(x,1) = 0` and `(y,1)`.

use std::sync::Arc;

use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::{sample_nonzero, Elem, Monoid, MonoidError, PartialMonoid, PointedSetMonoid, SmashMonoid};
use crate::group_rep::{FiniteGroup, PointedGSet};

#[derive(Debug, Clone)]
pub struct WedgeLabel {
    x: PointedGSet,
    m: Monoid,
    smash: SmashMonoid,
}

/// The group acting on a product of two factors; they must agree when
/// both act nontrivially.
pub(crate) fn joint_group(
    a: Option<Arc<FiniteGroup>>,
    b: Option<Arc<FiniteGroup>>,
) -> Result<Option<Arc<FiniteGroup>>, MonoidError> {
    match (a, b) {
        (Some(a), Some(b)) if a != b => Err(MonoidError::Spec("factors are acted on by different groups".into())),
        (a, b) => Ok(a.or(b)),
    }
}

impl WedgeLabel {
    pub fn new(x: PointedGSet, m: Monoid) -> Result<Self, MonoidError> {
        let xg = (x.group().order() > 1).then(|| x.group().clone());
        joint_group(xg, m.group())?;
        let smash = SmashMonoid::new(Arc::new(PointedSetMonoid::new(x.clone())), m.clone())?;
        Ok(WedgeLabel { x, m, smash })
    }

    pub fn set(&self) -> &PointedGSet {
        &self.x
    }

    pub fn inner(&self) -> &Monoid {
        &self.m
    }

    /// `(x, a)`, or the basepoint when either coordinate is trivial.
    pub fn label(&self, x: usize, a: Elem) -> Elem {
        if x == self.x.basepoint() || self.m.is_zero(&a) {
            Elem::Base
        } else {
            Elem::pair(Elem::Point(x), a)
        }
    }

    fn split<'a>(&self, a: &'a Elem) -> Option<(usize, &'a Elem)> {
        match a.as_pair()? {
            (Elem::Point(x), m) => Some((*x, m)),
            _ => None,
        }
    }
}

impl PartialMonoid for WedgeLabel {
    fn name(&self) -> String {
        format!("wedge_label(X of {} points, {})", self.x.len(), self.m.name())
    }

    fn zero(&self) -> Elem {
        Elem::Base
    }

    fn contains(&self, a: &Elem) -> bool {
        match a {
            Elem::Base => true,
            other => self.split(other).is_some_and(|(x, m)| {
                x < self.x.len() && x != self.x.basepoint() && self.m.contains(m) && !self.m.is_zero(m)
            }),
        }
    }

    fn sum_unchecked(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError> {
        self.smash.sum_unchecked(tuple)
    }

    fn group(&self) -> Option<Arc<FiniteGroup>> {
        let xg = (self.x.group().order() > 1).then(|| self.x.group().clone());
        joint_group(xg, self.m.group()).ok().flatten()
    }

    fn act(&self, g: usize, a: &Elem) -> Elem {
        match self.split(a) {
            Some((x, m)) => {
                let gx = if self.x.group().order() > 1 { self.x.act(g, x) } else { x };
                self.label(gx, self.m.act(g, m))
            }
            None => a.clone(),
        }
    }

    fn carrier(&self) -> Option<Vec<Elem>> {
        let inner = self.m.carrier()?;
        let mut out = vec![Elem::Base];
        for x in self.x.non_basepoints() {
            for a in inner.iter().filter(|a| !self.m.is_zero(a)) {
                out.push(Elem::pair(Elem::Point(x), a.clone()));
            }
        }
        Some(out)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem {
        let points: Vec<usize> = self.x.non_basepoints().collect();
        if points.is_empty() || rng.gen_bool(0.15) {
            return Elem::Base;
        }
        let x = points[rng.gen_range(0..points.len())];
        match sample_nonzero(self.m.as_ref(), rng) {
            Some(a) => self.label(x, a),
            None => Elem::Base,
        }
    }

    fn parse_elem(&self, v: &Value) -> Result<Elem, MonoidError> {
        let err = || MonoidError::Parse(v.to_string());
        match v {
            Value::Null => Ok(Elem::Base),
            Value::Array(xs) if xs.len() == 2 => {
                let x = xs[0].as_str().and_then(|s| self.x.index_of(s)).ok_or_else(err)?;
                let a = self.m.parse_elem(&xs[1])?;
                Ok(self.label(x, a))
            }
            _ => Err(err()),
        }
    }

    fn render_elem(&self, a: &Elem) -> Value {
        match self.split(a) {
            Some((x, m)) if x < self.x.len() => json!([self.x.names()[x], self.m.render_elem(m)]),
            _ => Value::Null,
        }
    }
}
