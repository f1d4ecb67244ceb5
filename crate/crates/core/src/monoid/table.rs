//! A finite commutative partial monoid given by its addition table.
//! n-ary sums fold from the left, skipping the zero; a tuple is summable
//! when every step of the fold is defined.

use std::sync::Arc;

use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::{Elem, FiniteAction, MonoidError, PartialMonoid};
use crate::group_rep::FiniteGroup;

#[derive(Debug, Clone)]
pub struct TableMonoid {
    names: Vec<String>,
    zero: usize,
    table: Vec<Vec<Option<usize>>>,
    action: Option<FiniteAction>,
}

impl TableMonoid {
    /// Checks that `zero` is a two-sided unit and the table is symmetric.
    pub fn new(names: Vec<String>, zero: usize, table: Vec<Vec<Option<usize>>>) -> Result<Self, MonoidError> {
        let n = names.len();
        if zero >= n || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(MonoidError::Spec("table must be square over the element list".into()));
        }
        if table.iter().flatten().flatten().any(|&x| x >= n) {
            return Err(MonoidError::Spec("table entry out of range".into()));
        }
        for i in 0..n {
            if table[zero][i] != Some(i) {
                return Err(MonoidError::Spec(format!("{} is not a unit for {}", names[zero], names[i])));
            }
            for j in 0..n {
                if table[i][j] != table[j][i] {
                    return Err(MonoidError::Spec(format!("table is not symmetric at ({}, {})", names[i], names[j])));
                }
            }
        }
        Ok(TableMonoid {
            names,
            zero,
            table,
            action: None,
        })
    }

    /// `ℤ/n` as a total table.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| Some((a + b) % n)).collect()).collect();
        Self::new(names, 0, table).expect("cyclic table")
    }

    pub fn with_action(mut self, group: Arc<FiniteGroup>, table: Vec<Vec<usize>>) -> Result<Self, MonoidError> {
        self.action = Some(FiniteAction::new(group, table, self.names.len())?);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    pub fn op(&self, a: usize, b: usize) -> Option<usize> {
        self.table[a][b]
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().flatten().all(Option::is_some)
    }

    /// Associativity on all triples where both sides are defined, plus
    /// agreement of definedness.
    pub fn is_associative(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let left = self.op(a, b).and_then(|ab| self.op(ab, c));
                    let right = self.op(b, c).and_then(|bc| self.op(a, bc));
                    left == right
                })
            })
        })
    }
}

impl PartialMonoid for TableMonoid {
    fn name(&self) -> String {
        format!("table({})", self.names.join(","))
    }

    fn zero(&self) -> Elem {
        Elem::Point(self.zero)
    }

    fn contains(&self, a: &Elem) -> bool {
        matches!(a, Elem::Point(i) if *i < self.len())
    }

    fn sum_unchecked(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError> {
        let mut acc = self.zero;
        for a in tuple {
            let Elem::Point(i) = a else {
                return Err(MonoidError::NotInCarrier(format!("{a:?}")));
            };
            if *i == self.zero {
                continue;
            }
            match self.op(acc, *i) {
                Some(s) => acc = s,
                None => return Ok(None),
            }
        }
        Ok(Some(Elem::Point(acc)))
    }

    fn group(&self) -> Option<Arc<FiniteGroup>> {
        self.action.as_ref().map(|a| a.group().clone())
    }

    fn act(&self, g: usize, a: &Elem) -> Elem {
        match (&self.action, a) {
            (Some(act), Elem::Point(i)) => Elem::Point(act.apply(g, *i)),
            _ => a.clone(),
        }
    }

    fn carrier(&self) -> Option<Vec<Elem>> {
        Some((0..self.len()).map(Elem::Point).collect())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem {
        Elem::Point(rng.gen_range(0..self.len()))
    }

    fn parse_elem(&self, v: &Value) -> Result<Elem, MonoidError> {
        let name = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(MonoidError::Parse(v.to_string())),
        };
        self.names
            .iter()
            .position(|x| *x == name)
            .map(Elem::Point)
            .ok_or_else(|| MonoidError::Parse(v.to_string()))
    }

    fn render_elem(&self, a: &Elem) -> Value {
        match a {
            Elem::Point(i) if *i < self.len() => json!(self.names[*i]),
            other => json!(format!("{other:?}")),
        }
    }
}
