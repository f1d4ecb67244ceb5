//! A subset `M ∋ 0` of an abelian group `A = ℤ^r × ∏ℤ/mᵢ`; a tuple is
//! summable when its total lies in `M`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::{Elem, FiniteAction, MonoidError, PartialMonoid};
use crate::group_rep::FiniteGroup;

#[derive(Debug, Clone)]
pub struct GroupSubset {
    rank: usize,
    moduli: Vec<i64>,
    subset: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// Sorted index multisets declared unsummable on top of the membership rule.
    unsummable: BTreeSet<Vec<usize>>,
    action: Option<FiniteAction>,
}

impl GroupSubset {
    pub fn new(rank: usize, moduli: Vec<i64>, subset: Vec<Vec<i64>>) -> Result<Self, MonoidError> {
        if moduli.iter().any(|&m| m < 2) {
            return Err(MonoidError::Spec("moduli must be at least 2".into()));
        }
        let dim = rank + moduli.len();
        if dim == 0 {
            return Err(MonoidError::Spec("ambient group has no coordinates".into()));
        }
        let mut out = GroupSubset {
            rank,
            moduli,
            subset: Vec::new(),
            index: HashMap::new(),
            unsummable: BTreeSet::new(),
            action: None,
        };
        for v in subset {
            if v.len() != dim {
                return Err(MonoidError::Spec(format!("vector {v:?} is not of length {dim}")));
            }
            let v = out.reduce(v);
            if out.index.contains_key(&v) {
                return Err(MonoidError::Spec(format!("duplicate subset element {v:?}")));
            }
            out.index.insert(v.clone(), out.subset.len());
            out.subset.push(v);
        }
        if !out.index.contains_key(&vec![0; dim]) {
            return Err(MonoidError::Spec("subset must contain 0".into()));
        }
        Ok(out)
    }

    /// The whole finite group `∏ℤ/mᵢ`, every tuple summable.
    pub fn whole(moduli: Vec<i64>) -> Result<Self, MonoidError> {
        let mut elems: Vec<Vec<i64>> = vec![Vec::new()];
        for &m in &moduli {
            elems = elems
                .into_iter()
                .flat_map(|v| {
                    (0..m.max(0)).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        Self::new(0, moduli, elems)
    }

    /// Declares the listed tuples unsummable even when their total is in `M`.
    pub fn with_unsummable(mut self, tuples: Vec<Vec<Vec<i64>>>) -> Result<Self, MonoidError> {
        for t in tuples {
            let mut idx = Vec::with_capacity(t.len());
            for v in t {
                let v = self.reduce(v);
                let i = *self
                    .index
                    .get(&v)
                    .ok_or_else(|| MonoidError::Spec(format!("unsummable entry {v:?} not in subset")))?;
                idx.push(i);
            }
            idx.sort_unstable();
            self.unsummable.insert(idx);
        }
        Ok(self)
    }

    /// Action by permutations of the subset, listed in input order.
    pub fn with_action(mut self, group: Arc<FiniteGroup>, table: Vec<Vec<usize>>) -> Result<Self, MonoidError> {
        self.action = Some(FiniteAction::new(group, table, self.subset.len())?);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.rank + self.moduli.len()
    }

    fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (x, m) in v[self.rank..].iter_mut().zip(&self.moduli) {
            *x = x.rem_euclid(*m);
        }
        v
    }

    fn idx(&self, a: &Elem) -> Option<usize> {
        match a {
            Elem::Int(v) => self.index.get(v).copied(),
            _ => None,
        }
    }
}

impl PartialMonoid for GroupSubset {
    fn name(&self) -> String {
        format!("group_subset(rank {}, moduli {:?}, {} elements)", self.rank, self.moduli, self.subset.len())
    }

    fn zero(&self) -> Elem {
        Elem::Int(vec![0; self.dim()])
    }

    fn contains(&self, a: &Elem) -> bool {
        self.idx(a).is_some()
    }

    fn sum_unchecked(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError> {
        if !self.unsummable.is_empty() {
            let mut idx: Vec<usize> = tuple.iter().filter_map(|a| self.idx(a)).collect();
            idx.sort_unstable();
            if self.unsummable.contains(&idx) {
                return Ok(None);
            }
        }
        let mut total = vec![0i64; self.dim()];
        for a in tuple {
            let Elem::Int(v) = a else {
                return Err(MonoidError::NotInCarrier(format!("{a:?}")));
            };
            for (t, x) in total.iter_mut().zip(v) {
                *t += x;
            }
        }
        let total = self.reduce(total);
        Ok(self.index.contains_key(&total).then_some(Elem::Int(total)))
    }

    fn group(&self) -> Option<Arc<FiniteGroup>> {
        self.action.as_ref().map(|a| a.group().clone())
    }

    fn act(&self, g: usize, a: &Elem) -> Elem {
        match (&self.action, self.idx(a)) {
            (Some(act), Some(i)) => Elem::Int(self.subset[act.apply(g, i)].clone()),
            _ => a.clone(),
        }
    }

    fn carrier(&self) -> Option<Vec<Elem>> {
        Some(self.subset.iter().cloned().map(Elem::Int).collect())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem {
        Elem::Int(self.subset[rng.gen_range(0..self.subset.len())].clone())
    }

    fn parse_elem(&self, v: &Value) -> Result<Elem, MonoidError> {
        let raw: Vec<i64> = match v {
            Value::Number(n) if self.dim() == 1 => vec![n.as_i64().ok_or_else(|| MonoidError::Parse(v.to_string()))?],
            Value::Array(xs) => xs
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| MonoidError::Parse(v.to_string())))
                .collect::<Result<_, _>>()?,
            _ => return Err(MonoidError::Parse(v.to_string())),
        };
        if raw.len() != self.dim() {
            return Err(MonoidError::Parse(v.to_string()));
        }
        let e = Elem::Int(self.reduce(raw));
        if self.contains(&e) {
            Ok(e)
        } else {
            Err(MonoidError::NotInCarrier(v.to_string()))
        }
    }

    fn render_elem(&self, a: &Elem) -> Value {
        match a {
            Elem::Int(v) if v.len() == 1 => json!(v[0]),
            Elem::Int(v) => json!(v),
            other => json!(format!("{other:?}")),
        }
    }
}
