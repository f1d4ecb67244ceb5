//! The smash product `M ∧ N`. A tuple of pairs is summable when repeated
//! use of the distributivity relations
//!
//! ```text
//! (c₁,d) + ⋯ + (c_k,d) = (c₁+⋯+c_k, d)
//! (c,d₁) + ⋯ + (c,d_k) = (c, d₁+⋯+d_k)
//! ```
//!
//! contracts it to a single element. The rewriting is explored breadth
//! first over multiset states with memoization and an explicit budget.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::wedge::joint_group;
use super::{sample_nonzero, Elem, Monoid, MonoidError, PartialMonoid};
use crate::group_rep::FiniteGroup;

pub const DEFAULT_SMASH_BUDGET: usize = 20_000;

#[derive(Debug, Clone)]
pub struct SmashMonoid {
    left: Monoid,
    right: Monoid,
    budget: usize,
}

/// Outcome of a rewriting search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmashSearch {
    /// Distinct single-element states reached (`Base` for the empty state).
    pub terminals: BTreeSet<Elem>,
    pub explored: usize,
}

impl SmashSearch {
    pub fn is_confluent(&self) -> bool {
        self.terminals.len() <= 1
    }
}

type State = Vec<(Elem, Elem)>;

impl SmashMonoid {
    pub fn new(left: Monoid, right: Monoid) -> Result<Self, MonoidError> {
        joint_group(left.group(), right.group())?;
        Ok(SmashMonoid {
            left,
            right,
            budget: DEFAULT_SMASH_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn left(&self) -> &Monoid {
        &self.left
    }

    pub fn right(&self) -> &Monoid {
        &self.right
    }

    /// `(m, n)`, or the basepoint when either coordinate is zero.
    pub fn pair(&self, m: Elem, n: Elem) -> Elem {
        if self.left.is_zero(&m) || self.right.is_zero(&n) {
            Elem::Base
        } else {
            Elem::pair(m, n)
        }
    }

    /// Explores rewriting chains from `tuple`. With `exhaustive` false the
    /// search stops at the first single-element state.
    pub fn search(&self, tuple: &[Elem], exhaustive: bool) -> Result<SmashSearch, MonoidError> {
        let mut start: State = Vec::new();
        for a in tuple {
            match a {
                Elem::Base => {}
                Elem::Pair(m, n) => start.push(((**m).clone(), (**n).clone())),
                other => return Err(MonoidError::NotInCarrier(format!("{other:?}"))),
            }
        }
        start.sort();
        let mut terminals = BTreeSet::new();
        let mut seen: HashSet<State> = HashSet::from([start.clone()]);
        let mut queue: VecDeque<State> = VecDeque::from([start]);
        let mut explored = 0;
        while let Some(state) = queue.pop_front() {
            explored += 1;
            if explored > self.budget {
                return Err(MonoidError::BudgetExceeded { explored });
            }
            if state.len() <= 1 {
                terminals.insert(match state.first() {
                    None => Elem::Base,
                    Some((m, n)) => Elem::pair(m.clone(), n.clone()),
                });
                if !exhaustive {
                    break;
                }
                continue;
            }
            for next in self.successors(&state)? {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(SmashSearch { terminals, explored })
    }

    /// Tuples of length `≤ max_len` over the finite carrier whose rewriting
    /// chains end in more than one single element, as multisets.
    pub fn confluence_counterexamples(&self, max_len: usize) -> Result<Vec<(Vec<Elem>, BTreeSet<Elem>)>, MonoidError> {
        let carrier = super::nonzero_carrier(self)?;
        let mut out = Vec::new();
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|t| {
                    let from = t.last().copied().unwrap_or(0);
                    (from..carrier.len()).map(move |i| {
                        let mut u = t.clone();
                        u.push(i);
                        u
                    })
                })
                .collect();
            for idx in &layer {
                let tuple: Vec<Elem> = idx.iter().map(|&i| carrier[i].clone()).collect();
                let found = self.search(&tuple, true)?;
                if !found.is_confluent() {
                    out.push((tuple, found.terminals));
                }
            }
        }
        Ok(out)
    }

    fn successors(&self, state: &State) -> Result<Vec<State>, MonoidError> {
        let n = state.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            let chosen: Vec<&(Elem, Elem)> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &state[i]).collect();
            let rest = || -> State { (0..n).filter(|i| mask >> i & 1 == 0).map(|i| state[i].clone()).collect() };
            let push = |out: &mut Vec<State>, m: Elem, d: Elem| {
                let mut next = rest();
                if !self.left.is_zero(&m) && !self.right.is_zero(&d) {
                    next.push((m, d));
                }
                next.sort();
                out.push(next);
            };
            if chosen.iter().all(|p| p.1 == chosen[0].1) {
                let firsts: Vec<Elem> = chosen.iter().map(|p| p.0.clone()).collect();
                if let Some(s) = self.left.sum(&firsts)? {
                    push(&mut out, s, chosen[0].1.clone());
                }
            }
            if chosen.iter().all(|p| p.0 == chosen[0].0) {
                let seconds: Vec<Elem> = chosen.iter().map(|p| p.1.clone()).collect();
                if let Some(s) = self.right.sum(&seconds)? {
                    push(&mut out, chosen[0].0.clone(), s);
                }
            }
        }
        Ok(out)
    }
}

impl PartialMonoid for SmashMonoid {
    fn name(&self) -> String {
        format!("smash({}, {})", self.left.name(), self.right.name())
    }

    fn zero(&self) -> Elem {
        Elem::Base
    }

    fn contains(&self, a: &Elem) -> bool {
        match a {
            Elem::Base => true,
            Elem::Pair(m, n) => {
                self.left.contains(m) && self.right.contains(n) && !self.left.is_zero(m) && !self.right.is_zero(n)
            }
            _ => false,
        }
    }

    fn sum_unchecked(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError> {
        let found = self.search(tuple, false)?;
        Ok(found.terminals.into_iter().next())
    }

    fn group(&self) -> Option<Arc<FiniteGroup>> {
        joint_group(self.left.group(), self.right.group()).ok().flatten()
    }

    fn act(&self, g: usize, a: &Elem) -> Elem {
        match a {
            Elem::Pair(m, n) => self.pair(self.left.act(g, m), self.right.act(g, n)),
            other => other.clone(),
        }
    }

    fn carrier(&self) -> Option<Vec<Elem>> {
        let ls = self.left.carrier()?;
        let rs = self.right.carrier()?;
        let mut out = vec![Elem::Base];
        for m in ls.iter().filter(|m| !self.left.is_zero(m)) {
            for n in rs.iter().filter(|n| !self.right.is_zero(n)) {
                out.push(Elem::pair(m.clone(), n.clone()));
            }
        }
        Some(out)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem {
        if rng.gen_bool(0.1) {
            return Elem::Base;
        }
        match (sample_nonzero(self.left.as_ref(), rng), sample_nonzero(self.right.as_ref(), rng)) {
            (Some(m), Some(n)) => Elem::pair(m, n),
            _ => Elem::Base,
        }
    }

    fn parse_elem(&self, v: &Value) -> Result<Elem, MonoidError> {
        match v {
            Value::Null => Ok(Elem::Base),
            Value::Array(xs) if xs.len() == 2 => {
                Ok(self.pair(self.left.parse_elem(&xs[0])?, self.right.parse_elem(&xs[1])?))
            }
            _ => Err(MonoidError::Parse(v.to_string())),
        }
    }

    fn render_elem(&self, a: &Elem) -> Value {
        match a {
            Elem::Pair(m, n) => json!([self.left.render_elem(m), self.right.render_elem(n)]),
            _ => Value::Null,
        }
    }
}
