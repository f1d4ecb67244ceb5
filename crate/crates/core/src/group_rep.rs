//! Finite groups given by multiplication tables, their exact orthogonal
//! representations, finite stages of the universe (copies of the regular
//! representation) and finite pointed G-sets.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use num::One;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::QMatrix;
use crate::rational::{Q, QVec};

pub const DEFAULT_SUBGROUP_BOUND: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("element list {0:?} is not a subgroup")]
    NotASubgroup(Vec<usize>),
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("invalid G-set: {0}")]
    InvalidGSet(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    name: String,
    elements: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a multiplication table, checking every axiom by
    /// exhaustion. `mul[a][b]` is the index of `a·b`.
    pub fn from_table(
        name: impl Into<String>,
        elements: Vec<String>,
        mul: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let n = elements.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty element list".into()));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(GroupError::InvalidTable("table is not |G|×|G|".into()));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(GroupError::InvalidTable("entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails on ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[b][a] == identity && mul[a][b] == identity)
                .ok_or_else(|| {
                    GroupError::InvalidTable(format!("{} has no inverse", elements[a]))
                })?;
            inv.push(b);
        }
        Ok(FiniteGroup {
            name: name.into(),
            elements,
            mul,
            identity,
            inv,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// ℤ/n with elements `0..n` and addition mod n.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let elements = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z/{n}"), elements, mul).expect("cyclic table is a group")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let elements = (0..na * nb)
            .map(|i| format!("({},{})", a.elements[i / nb], b.elements[i % nb]))
            .collect();
        let mul = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul[x / nb][y / nb] * nb + b.mul[x % nb][y % nb])
                    .collect()
            })
            .collect();
        Self::from_table(format!("{}x{}", a.name, b.name), elements, mul)
            .expect("product of groups is a group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&x| x < self.order())
            && set.contains(&self.identity)
            && set
                .iter()
                .all(|&a| set.contains(&self.inv[a]) && set.iter().all(|&b| set.contains(&self.mul[a][b])))
    }

    pub fn subgroup(&self, elems: &[usize]) -> Result<Subgroup, GroupError> {
        if !self.is_subgroup(elems) {
            return Err(GroupError::NotASubgroup(elems.to_vec()));
        }
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        Ok(Subgroup {
            elements: set.into_iter().collect(),
        })
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order()).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: vec![self.identity],
        }
    }

    /// Smallest subgroup containing `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul[x][g];
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            elements: set.into_iter().collect(),
        }
    }

    /// All subgroups, ordered by size then lexicographically.
    pub fn subgroups(&self, bound: usize) -> Result<Vec<Subgroup>, GroupError> {
        if self.order() > bound {
            return Err(GroupError::TooLarge {
                order: self.order(),
                bound,
            });
        }
        let mut found: BTreeSet<Vec<usize>> = (0..self.order())
            .map(|g| self.generate(&[g]).elements)
            .collect();
        loop {
            let current: Vec<Vec<usize>> = found.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    let gens: Vec<usize> = a.iter().chain(b).copied().collect();
                    if found.insert(self.generate(&gens).elements) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().map(|elements| Subgroup { elements }).collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalRep {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<QMatrix>,
}

impl OrthogonalRep {
    /// Validates orthogonality and the homomorphism law on all pairs.
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<QMatrix>) -> Result<Self, GroupError> {
        if matrices.len() != group.order() {
            return Err(GroupError::InvalidRep("one matrix per group element required".into()));
        }
        let dim = matrices.first().map_or(0, |m| m.rows());
        for (g, m) in matrices.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(GroupError::InvalidRep(format!("matrix {g} is not {dim}×{dim}")));
            }
            if !m.is_orthogonal() {
                return Err(GroupError::InvalidRep(format!("matrix {g} is not orthogonal")));
            }
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if matrices[a].mul(&matrices[b]) != matrices[group.mul(a, b)] {
                    return Err(GroupError::InvalidRep(format!(
                        "homomorphism law fails on ({a}, {b})"
                    )));
                }
            }
        }
        Ok(OrthogonalRep {
            group,
            dim,
            matrices,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &QMatrix {
        &self.matrices[g]
    }

    pub fn act_vector(&self, g: usize, v: &[Q]) -> Result<QVec, GroupError> {
        if v.len() != self.dim {
            return Err(GroupError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(self.matrices[g].apply(v))
    }

    /// Reduced basis (as rows) of the vectors fixed by every element of `h`.
    pub fn fixed_subspace(&self, h: &[usize]) -> Result<QMatrix, GroupError> {
        if !self.group.is_subgroup(h) {
            return Err(GroupError::NotASubgroup(h.to_vec()));
        }
        let mut stacked = QMatrix::zeros(0, self.dim);
        let id = QMatrix::identity(self.dim);
        for &g in h {
            let m = &self.matrices[g];
            let mut diff = m.clone();
            for i in 0..self.dim {
                diff.set(i, i, m.get(i, i) - id.get(i, i));
            }
            stacked = stacked.vstack(&diff);
        }
        Ok(stacked.nullspace())
    }
}

/// The stage `k` of the universe: `k` copies of the regular representation.
/// Coordinate `c·|G| + h` is the basis vector `e_h` of copy `c`; stage `k`
/// sits inside stage `k+1` by zero-padding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseStage {
    copies: usize,
    rep: OrthogonalRep,
}

impl UniverseStage {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.rep.group()
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn rep(&self) -> &OrthogonalRep {
        &self.rep
    }

    pub fn act(&self, g: usize, v: &[Q]) -> Result<QVec, GroupError> {
        self.rep.act_vector(g, v)
    }

    /// Zero-pads `v` from this stage into `target` (which must be at least as large).
    pub fn pad_into(&self, v: &[Q], target: &UniverseStage) -> QVec {
        assert!(target.dim() >= self.dim() && target.group() == self.group());
        let mut out = v.to_vec();
        out.resize(target.dim(), num::Zero::zero());
        out
    }

    /// Same group, same number of copies.
    pub fn same_as(&self, other: &UniverseStage) -> bool {
        self.copies == other.copies && self.group() == other.group()
    }
}

pub fn regular_rep(group: Arc<FiniteGroup>, copies: usize) -> UniverseStage {
    assert!(copies >= 1, "a universe stage needs at least one copy");
    let n = group.order();
    let matrices = (0..n)
        .map(|g| {
            let mut block = QMatrix::zeros(n, n);
            for h in 0..n {
                block.set(group.mul(g, h), h, Q::one());
            }
            let mut m = block.clone();
            for _ in 1..copies {
                m = m.direct_sum(&block);
            }
            m
        })
        .collect();
    let rep = OrthogonalRep::new(group, matrices).expect("permutation matrices form an orthogonal rep");
    UniverseStage { copies, rep }
}

/// A finite pointed set with a basepoint-preserving action of a finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedGSet {
    names: Vec<String>,
    basepoint: usize,
    group: Arc<FiniteGroup>,
    /// `action[g][x]`
    action: Vec<Vec<usize>>,
}

impl PointedGSet {
    pub fn new(
        names: Vec<String>,
        basepoint: usize,
        group: Arc<FiniteGroup>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let n = names.len();
        if basepoint >= n {
            return Err(GroupError::InvalidGSet("basepoint out of range".into()));
        }
        if action.len() != group.order() || action.iter().any(|r| r.len() != n) {
            return Err(GroupError::InvalidGSet("action table is not |G|×|X|".into()));
        }
        if action.iter().flatten().any(|&x| x >= n) {
            return Err(GroupError::InvalidGSet("action entry out of range".into()));
        }
        let set = PointedGSet {
            names,
            basepoint,
            group,
            action,
        };
        if let Some(problem) = set.action_violation() {
            return Err(GroupError::InvalidGSet(problem));
        }
        Ok(set)
    }

    /// A pointed set with the trivial action of `group`.
    pub fn plain(names: Vec<String>, basepoint: usize, group: Arc<FiniteGroup>) -> Self {
        let n = names.len();
        let action = vec![(0..n).collect(); group.order()];
        Self::new(names, basepoint, group, action).expect("trivial action is an action")
    }

    /// `{*, 1, ..., n}` with trivial action of the trivial group.
    pub fn standard(n: usize) -> Self {
        let names = std::iter::once("*".to_string())
            .chain((1..=n).map(|i| i.to_string()))
            .collect();
        Self::plain(names, 0, Arc::new(FiniteGroup::trivial()))
    }

    /// First violated law of a pointed group action, if any.
    pub fn action_violation(&self) -> Option<String> {
        let g = &self.group;
        for x in 0..self.len() {
            if self.action[g.identity()][x] != x {
                return Some(format!("identity moves {}", self.names[x]));
            }
        }
        for a in 0..g.order() {
            if self.action[a][self.basepoint] != self.basepoint {
                return Some(format!("{} moves the basepoint", g.elements()[a]));
            }
            for b in 0..g.order() {
                for x in 0..self.len() {
                    if self.action[a][self.action[b][x]] != self.action[g.mul(a, b)][x] {
                        return Some(format!(
                            "g(hx) != (gh)x for g={}, h={}, x={}",
                            g.elements()[a],
                            g.elements()[b],
                            self.names[x]
                        ));
                    }
                }
            }
        }
        None
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

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn non_basepoints(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&x| x != self.basepoint)
    }

    /// `X ∨ Y`, returned with the index maps of the two summands.
    pub fn wedge(x: &PointedGSet, y: &PointedGSet) -> Result<(PointedGSet, Vec<usize>, Vec<usize>), GroupError> {
        if x.group != y.group {
            return Err(GroupError::InvalidGSet("wedge summands act through different groups".into()));
        }
        let mut names = vec!["*".to_string()];
        let mut from_x = vec![0; x.len()];
        let mut from_y = vec![0; y.len()];
        for i in x.non_basepoints() {
            from_x[i] = names.len();
            names.push(format!("{}.l", x.names[i]));
        }
        for j in y.non_basepoints() {
            from_y[j] = names.len();
            names.push(format!("{}.r", y.names[j]));
        }
        let action = (0..x.group.order())
            .map(|g| {
                let mut row = vec![0; names.len()];
                for i in x.non_basepoints() {
                    row[from_x[i]] = from_x[x.act(g, i)];
                }
                for j in y.non_basepoints() {
                    row[from_y[j]] = from_y[y.act(g, j)];
                }
                row
            })
            .collect();
        let w = PointedGSet::new(names, 0, x.group.clone(), action)?;
        Ok((w, from_x, from_y))
    }

    /// `X ∧ Y`; the pair `(i, j)` of non-basepoints has index
    /// `1 + rank(i)·|Y−*| + rank(j)`.
    pub fn smash(x: &PointedGSet, y: &PointedGSet) -> Result<PointedGSet, GroupError> {
        if x.group != y.group {
            return Err(GroupError::InvalidGSet("smash factors act through different groups".into()));
        }
        let xs: Vec<usize> = x.non_basepoints().collect();
        let ys: Vec<usize> = y.non_basepoints().collect();
        let index = |i: usize, j: usize| {
            let ri = xs.iter().position(|&a| a == i).unwrap();
            let rj = ys.iter().position(|&b| b == j).unwrap();
            1 + ri * ys.len() + rj
        };
        let mut names = vec!["*".to_string()];
        for &i in &xs {
            for &j in &ys {
                names.push(format!("{}^{}", x.names[i], y.names[j]));
            }
        }
        let action = (0..x.group.order())
            .map(|g| {
                let mut row = vec![0; names.len()];
                for &i in &xs {
                    for &j in &ys {
                        row[index(i, j)] = index(x.act(g, i), y.act(g, j));
                    }
                }
                row
            })
            .collect();
        PointedGSet::new(names, 0, x.group.clone(), action)
    }

    /// Index of the pair `(i, j)` inside [`PointedGSet::smash`]`(x, y)`.
    pub fn smash_index(x: &PointedGSet, y: &PointedGSet, i: usize, j: usize) -> usize {
        let ri = x.non_basepoints().position(|a| a == i).expect("non-basepoint");
        let rj = y.non_basepoints().position(|b| b == j).expect("non-basepoint");
        1 + ri * (y.len() - 1) + rj
    }
}

/// `G/H₊`: the left cosets of `h` plus a disjoint basepoint (index 0).
/// Coset `i ≥ 1` is listed by its smallest representative.
pub fn coset_gset(group: Arc<FiniteGroup>, h: &[usize]) -> Result<(PointedGSet, Vec<Vec<usize>>), GroupError> {
    let sub = group.subgroup(h)?;
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for g in 0..group.order() {
        if cosets.iter().any(|c| c.contains(&g)) {
            continue;
        }
        let mut c: Vec<usize> = sub.elements().iter().map(|&x| group.mul(g, x)).collect();
        c.sort_unstable();
        cosets.push(c);
    }
    let coset_of = |x: usize| 1 + cosets.iter().position(|c| c.contains(&x)).expect("cosets cover G");
    let mut names = vec!["*".to_string()];
    names.extend(cosets.iter().map(|c| format!("{}H", group.elements()[c[0]])));
    let action = (0..group.order())
        .map(|g| {
            let mut row = vec![0; cosets.len() + 1];
            for (i, c) in cosets.iter().enumerate() {
                row[i + 1] = coset_of(group.mul(g, c[0]));
            }
            row
        })
        .collect();
    let set = PointedGSet::new(names, 0, group, action)?;
    Ok((set, cosets))
}
