//! `I(ℝ)` as a partial monoid: disjoint interval sets superimpose.

use rand::RngCore;
use serde_json::Value;

use super::{Elem, MonoidError, PartialMonoid};
use crate::interval::{random_cells, union_partial, IntervalSet};

#[derive(Debug, Clone, Default)]
pub struct IntervalMonoid;

impl PartialMonoid for IntervalMonoid {
    fn name(&self) -> String {
        "interval".into()
    }

    fn zero(&self) -> Elem {
        Elem::Intervals(IntervalSet::empty())
    }

    fn contains(&self, a: &Elem) -> bool {
        matches!(a, Elem::Intervals(_))
    }

    fn sum_unchecked(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError> {
        let sets: Vec<IntervalSet> = tuple
            .iter()
            .map(|a| a.as_intervals().cloned().ok_or_else(|| MonoidError::NotInCarrier(format!("{a:?}"))))
            .collect::<Result<_, _>>()?;
        Ok(union_partial(&sets).map(Elem::Intervals))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem {
        Elem::Intervals(random_cells(rng, 2, 5))
    }

    fn parse_elem(&self, v: &Value) -> Result<Elem, MonoidError> {
        serde_json::from_value::<IntervalSet>(v.clone())
            .map(Elem::Intervals)
            .map_err(|e| MonoidError::Parse(e.to_string()))
    }

    fn render_elem(&self, a: &Elem) -> Value {
        match a {
            Elem::Intervals(p) => serde_json::to_value(p).unwrap_or(Value::Null),
            other => Value::String(format!("{other:?}")),
        }
    }
}
