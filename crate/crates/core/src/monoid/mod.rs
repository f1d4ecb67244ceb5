//! Partial abelian monoids with a finite group action.
//!
//! n-ary summability is primitive: every constructor decides directly
//! whether a tuple can be summed, and [`check`] validates that these
//! predicates are coherent under partitions instead of assuming it.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use serde_json::Value;
use thiserror::Error;

use crate::group_rep::FiniteGroup;
use crate::interval::IntervalSet;
use crate::linalg::QMatrix;

pub mod check;
pub mod grassmann;
pub mod group_subset;
pub mod interval_pm;
pub mod pointed;
pub mod smash;
pub mod spec;
pub mod table;
pub mod wedge;

pub use check::{check_axioms, equivariance_check, AxiomConfig, AxiomReport, EquivarianceReport, Violation};
pub use grassmann::GrassmannQ;
pub use group_subset::GroupSubset;
pub use interval_pm::IntervalMonoid;
pub use pointed::PointedSetMonoid;
pub use smash::{SmashMonoid, SmashSearch};
pub use spec::monoid_from_json;
pub use table::TableMonoid;
pub use wedge::WedgeLabel;

/// An element of any of the bundled monoids. Each monoid only accepts the
/// shapes it produces; [`PartialMonoid::contains`] is the membership test.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    /// Basepoint of smash and wedge products.
    Base,
    /// A vector of an ambient abelian group `ℤ^r × ∏ℤ/mᵢ`.
    Int(Vec<i64>),
    /// Index into a finite carrier.
    Point(usize),
    /// Subspace of `ℚⁿ` as a reduced row echelon basis.
    Subspace(QMatrix),
    Intervals(IntervalSet),
    Pair(Box<Elem>, Box<Elem>),
}

impl Elem {
    pub fn pair(a: Elem, b: Elem) -> Elem {
        Elem::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_pair(&self) -> Option<(&Elem, &Elem)> {
        match self {
            Elem::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_intervals(&self) -> Option<&IntervalSet> {
        match self {
            Elem::Intervals(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("element {0} is not in the carrier")]
    NotInCarrier(String),
    #[error("summation search exceeded its budget after {explored} states")]
    BudgetExceeded { explored: usize },
    #[error("monoid {0} has an infinite carrier")]
    InfiniteCarrier(String),
    #[error("cannot parse element: {0}")]
    Parse(String),
    #[error("invalid monoid definition: {0}")]
    Spec(String),
}

pub trait PartialMonoid: fmt::Debug + Send + Sync {
    fn name(&self) -> String;

    fn zero(&self) -> Elem;

    fn is_zero(&self, a: &Elem) -> bool {
        *a == self.zero()
    }

    fn contains(&self, a: &Elem) -> bool;

    /// The partial sum of a tuple of carrier elements; `Ok(None)` when the
    /// tuple is not summable.
    fn sum_unchecked(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError>;

    /// [`PartialMonoid::sum_unchecked`] after a carrier membership check.
    fn sum(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError> {
        if let Some(bad) = tuple.iter().find(|a| !self.contains(a)) {
            return Err(MonoidError::NotInCarrier(self.render_elem(bad).to_string()));
        }
        self.sum_unchecked(tuple)
    }

    fn summable(&self, tuple: &[Elem]) -> Result<bool, MonoidError> {
        Ok(self.sum(tuple)?.is_some())
    }

    /// The acting group, if the action is not the trivial one.
    fn group(&self) -> Option<Arc<FiniteGroup>> {
        None
    }

    fn act(&self, _g: usize, a: &Elem) -> Elem {
        a.clone()
    }

    /// Every element, in a fixed order, when the carrier is finite.
    fn carrier(&self) -> Option<Vec<Elem>> {
        None
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem;

    fn parse_elem(&self, v: &Value) -> Result<Elem, MonoidError>;

    fn render_elem(&self, a: &Elem) -> Value;
}

pub type Monoid = Arc<dyn PartialMonoid>;

/// Nonzero carrier elements, or an error for infinite carriers.
pub fn nonzero_carrier(m: &dyn PartialMonoid) -> Result<Vec<Elem>, MonoidError> {
    let all = m.carrier().ok_or_else(|| MonoidError::InfiniteCarrier(m.name()))?;
    Ok(all.into_iter().filter(|a| !m.is_zero(a)).collect())
}

/// A group action on a finite carrier given by a table `g ↦ (i ↦ j)`.
/// Only the shape is validated here; the action laws are left to
/// [`equivariance_check`] so that broken tables can be reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAction {
    group: Arc<FiniteGroup>,
    table: Vec<Vec<usize>>,
}

impl FiniteAction {
    pub fn new(group: Arc<FiniteGroup>, table: Vec<Vec<usize>>, carrier_len: usize) -> Result<Self, MonoidError> {
        if table.len() != group.order() || table.iter().any(|r| r.len() != carrier_len) {
            return Err(MonoidError::Spec("action table must be |G| × |carrier|".into()));
        }
        if table.iter().flatten().any(|&x| x >= carrier_len) {
            return Err(MonoidError::Spec("action table entry out of range".into()));
        }
        Ok(FiniteAction { group, table })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn apply(&self, g: usize, i: usize) -> usize {
        self.table[g][i]
    }
}

/// Samples until a nonzero element turns up, giving up after a few tries.
pub fn sample_nonzero(m: &dyn PartialMonoid, rng: &mut dyn RngCore) -> Option<Elem> {
    (0..32).map(|_| m.sample(rng)).find(|a| !m.is_zero(a))
}
