//! A pointed G-set as a partial monoid: a tuple is summable when at most
//! one entry differs from the basepoint, and then sums to that entry.

use std::sync::Arc;

use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::{Elem, MonoidError, PartialMonoid};
use crate::group_rep::{FiniteGroup, PointedGSet};

#[derive(Debug, Clone)]
pub struct PointedSetMonoid {
    set: PointedGSet,
}

impl PointedSetMonoid {
    pub fn new(set: PointedGSet) -> Self {
        PointedSetMonoid { set }
    }

    pub fn set(&self) -> &PointedGSet {
        &self.set
    }
}

impl PartialMonoid for PointedSetMonoid {
    fn name(&self) -> String {
        format!("pointed_set({} elements)", self.set.len())
    }

    fn zero(&self) -> Elem {
        Elem::Point(self.set.basepoint())
    }

    fn contains(&self, a: &Elem) -> bool {
        matches!(a, Elem::Point(i) if *i < self.set.len())
    }

    fn sum_unchecked(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError> {
        let zero = self.zero();
        let mut moving = tuple.iter().filter(|a| **a != zero);
        match (moving.next(), moving.next()) {
            (None, _) => Ok(Some(zero)),
            (Some(a), None) => Ok(Some(a.clone())),
            _ => Ok(None),
        }
    }

    fn group(&self) -> Option<Arc<FiniteGroup>> {
        (self.set.group().order() > 1).then(|| self.set.group().clone())
    }

    fn act(&self, g: usize, a: &Elem) -> Elem {
        match a {
            Elem::Point(i) => Elem::Point(self.set.act(g, *i)),
            other => other.clone(),
        }
    }

    fn carrier(&self) -> Option<Vec<Elem>> {
        Some((0..self.set.len()).map(Elem::Point).collect())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem {
        Elem::Point(rng.gen_range(0..self.set.len()))
    }

    fn parse_elem(&self, v: &Value) -> Result<Elem, MonoidError> {
        v.as_str()
            .and_then(|s| self.set.index_of(s))
            .map(Elem::Point)
            .ok_or_else(|| MonoidError::Parse(v.to_string()))
    }

    fn render_elem(&self, a: &Elem) -> Value {
        match a {
            Elem::Point(i) if *i < self.set.len() => json!(self.set.names()[*i]),
            other => json!(format!("{other:?}")),
        }
    }
}
