//! Integral homology of nerves of small finite categories, in low degrees.
//!
//! Chains are normalized: an `n`-simplex is a string of `n` composable
//! non-identity morphisms, and a face that composes two of them into an
//! identity is degenerate and dropped.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::{BigInt, One, Zero};
use serde::Serialize;

use super::snf::{smith_normal_form, AbelianGroup, IntMatrix};
use super::CompletionError;
use crate::monoid::{nonzero_carrier, Elem, PartialMonoid};

/// A finite category with identities left implicit.
pub trait FiniteCategory {
    fn objects(&self) -> usize;
    /// `(source, target)` of every non-identity morphism.
    fn morphisms(&self) -> &[(usize, usize)];
    /// Non-identity morphisms out of an object.
    fn out_of(&self, object: usize) -> &[usize];
    /// `g ∘ f`, or `None` when it is an identity.
    fn compose(&self, f: usize, g: usize) -> Result<Option<usize>, CompletionError>;
}

/// A sparse integer matrix kept by rows, with a column index.
struct Sparse {
    rows: Vec<BTreeMap<usize, i64>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Sparse {
    fn new(n_rows: usize, n_cols: usize) -> Self {
        Sparse {
            rows: vec![BTreeMap::new(); n_rows],
            cols: vec![BTreeSet::new(); n_cols],
        }
    }

    fn add(&mut self, r: usize, c: usize, x: i64) {
        let e = self.rows[r].entry(c).or_insert(0);
        *e += x;
        if *e == 0 {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.cols[c].insert(r);
        }
    }

    /// A unit entry, from the sparsest row that has one.
    fn unit_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if best.is_some_and(|(len, _, _)| row.len() >= len) {
                continue;
            }
            if let Some((&c, _)) = row.iter().find(|(_, x)| x.abs() == 1) {
                best = Some((row.len(), r, c));
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// `row[t] −= k·row[s]`; `None` on overflow, leaving `row[t]` intact.
    fn sub_row(&mut self, t: usize, s: usize, k: i64) -> Option<()> {
        let mut updated = self.rows[t].clone();
        for (&c, &x) in &self.rows[s] {
            let e = updated.entry(c).or_insert(0);
            *e = e.checked_sub(k.checked_mul(x)?)?;
        }
        let old: Vec<usize> = self.rows[t].keys().copied().collect();
        for c in old {
            self.cols[c].remove(&t);
        }
        updated.retain(|_, x| *x != 0);
        for &c in updated.keys() {
            self.cols[c].insert(t);
        }
        self.rows[t] = updated;
        Some(())
    }

    fn remove_row(&mut self, r: usize) {
        for c in std::mem::take(&mut self.rows[r]).into_keys() {
            self.cols[c].remove(&r);
        }
    }
}

/// Rank and invariant factors `> 1` of an integer matrix given by sparse
/// columns. Unit pivots are eliminated sparsely; what is left goes through
/// the dense Smith normal form.
pub fn elementary_divisors(n_rows: usize, columns: &[Vec<(usize, i64)>]) -> (usize, Vec<BigInt>) {
    // rows of the working matrix are the given columns (transposed)
    let mut m = Sparse::new(columns.len(), n_rows);
    for (j, col) in columns.iter().enumerate() {
        for &(i, x) in col {
            m.add(j, i, x);
        }
    }
    let mut rank = 0;
    'outer: while let Some((r, c)) = m.unit_pivot() {
        let p = m.rows[r][&c];
        let others: Vec<usize> = m.cols[c].iter().copied().filter(|&o| o != r).collect();
        for o in others {
            let k = m.rows[o][&c] * p;
            if m.sub_row(o, r, k).is_none() {
                break 'outer;
            }
        }
        m.remove_row(r);
        rank += 1;
    }
    let live_rows: Vec<usize> = (0..m.rows.len()).filter(|&r| !m.rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols.len()).filter(|&c| !m.cols[c].is_empty()).collect();
    if live_rows.is_empty() {
        return (rank, Vec::new());
    }
    let dense: IntMatrix = live_rows
        .iter()
        .map(|&r| live_cols.iter().map(|c| BigInt::from(*m.rows[r].get(c).unwrap_or(&0))).collect())
        .collect();
    let s = smith_normal_form(&dense, live_cols.len());
    let diag = s.diagonal();
    rank += diag.iter().filter(|x| !x.is_zero()).count();
    (rank, diag.into_iter().filter(|x| *x > BigInt::one()).collect())
}

/// Simplex counts and homology groups of a truncated nerve.
#[derive(Debug, Clone, Serialize)]
pub struct NerveHomology {
    /// Nondegenerate simplices in degrees `0..=top+1`.
    pub cells: Vec<usize>,
    /// `H_0, …, H_top`.
    pub homology: Vec<AbelianGroup>,
}

/// `H_0 … H_top` of the nerve, from chains in degrees up to `top + 1`.
/// Fails when more than `budget` simplices would be needed.
pub fn nerve_homology(
    cat: &dyn FiniteCategory,
    top: usize,
    budget: usize,
) -> Result<NerveHomology, CompletionError> {
    let mor = cat.morphisms();
    // simplices[n] for n ≥ 1 as strings of morphisms
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(), mor.iter().enumerate().map(|(i, _)| vec![i]).collect()];
    let mut total = cat.objects() + mor.len();
    for n in 2..=top + 1 {
        let mut next = Vec::new();
        for s in &simplices[n - 1] {
            let last = *s.last().expect("nonempty");
            for &g in cat.out_of(mor[last].1) {
                let mut t = s.clone();
                t.push(g);
                next.push(t);
                total += 1;
                if total > budget {
                    return Err(CompletionError::Bounds(format!(
                        "nerve needs more than {budget} simplices by degree {n}"
                    )));
                }
            }
        }
        simplices.push(next);
    }
    let index: Vec<HashMap<&[usize], usize>> = simplices
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
        .collect();
    let mut cells = vec![cat.objects()];
    cells.extend(simplices.iter().skip(1).map(Vec::len));

    // boundary of degree n as sparse columns into degree n − 1
    let mut boundaries: Vec<Vec<Vec<(usize, i64)>>> = vec![Vec::new()];
    for n in 1..=top + 1 {
        let mut cols = Vec::with_capacity(simplices[n].len());
        for s in &simplices[n] {
            let mut col: BTreeMap<usize, i64> = BTreeMap::new();
            let mut push = |i: usize, sign: i64| *col.entry(i).or_insert(0) += sign;
            if n == 1 {
                let (src, tgt) = mor[s[0]];
                push(tgt, 1);
                push(src, -1);
            } else {
                for i in 0..=n {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    let face: Option<Vec<usize>> = if i == 0 {
                        Some(s[1..].to_vec())
                    } else if i == n {
                        Some(s[..n - 1].to_vec())
                    } else {
                        cat.compose(s[i - 1], s[i])?.map(|h| {
                            let mut f = s[..i - 1].to_vec();
                            f.push(h);
                            f.extend_from_slice(&s[i + 1..]);
                            f
                        })
                    };
                    if let Some(f) = face {
                        let k = index[n - 1].get(f.as_slice()).copied().ok_or_else(|| {
                            CompletionError::Inconsistent(format!("face {f:?} is not a simplex"))
                        })?;
                        push(k, sign);
                    }
                }
            }
            cols.push(col.into_iter().filter(|(_, x)| *x != 0).collect());
        }
        boundaries.push(cols);
    }
    let mut ranks = vec![0usize];
    let mut torsions = vec![Vec::new()];
    for n in 1..=top + 1 {
        let (r, t) = elementary_divisors(cells[n - 1], &boundaries[n]);
        ranks.push(r);
        torsions.push(t);
    }
    let homology = (0..=top)
        .map(|n| AbelianGroup {
            rank: cells[n] - ranks[n] - ranks[n + 1],
            torsion: torsions[n + 1].clone(),
        })
        .collect();
    Ok(NerveHomology { cells, homology })
}

/// The category `𝒬(M)`: objects are tuples in `M^p` for `p ≤ p_bound`; a
/// morphism `(a₁,…,a_p) → (b₁,…,b_q)` is a map `θ` of index sets with
/// `b_j = Σ_{θ(i) = j} a_i`.
pub struct QCategory {
    objects: Vec<Vec<Elem>>,
    morphisms: Vec<(usize, usize)>,
    maps: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
    by_map: HashMap<(usize, usize, Vec<usize>), usize>,
}

fn all_maps(p: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..q).map(move |j| {
                    let mut m = m.clone();
                    m.push(j);
                    m
                })
            })
            .collect();
    }
    out
}

impl QCategory {
    pub fn new(m: &dyn PartialMonoid, p_bound: usize) -> Result<Self, CompletionError> {
        let mut carrier = vec![m.zero()];
        carrier.extend(nonzero_carrier(m)?);
        if carrier.len() > 5 || p_bound > 4 {
            return Err(CompletionError::Bounds(format!(
                "carrier of {} elements with tuples up to length {p_bound}; at most 5 and 4",
                carrier.len()
            )));
        }
        let mut objects: Vec<Vec<Elem>> = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..p_bound {
            layer = layer
                .into_iter()
                .flat_map(|t: Vec<Elem>| {
                    carrier.iter().map(move |a| {
                        let mut t = t.clone();
                        t.push(a.clone());
                        t
                    })
                })
                .collect();
            objects.extend(layer.iter().cloned());
        }
        let position: HashMap<Vec<Elem>, usize> = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        let mut cat = QCategory {
            morphisms: Vec::new(),
            maps: Vec::new(),
            out: vec![Vec::new(); objects.len()],
            by_map: HashMap::new(),
            objects: Vec::new(),
        };
        for (s, a) in objects.iter().enumerate() {
            for q in 0..=p_bound {
                for theta in all_maps(a.len(), q) {
                    if a.len() == q && theta.iter().enumerate().all(|(i, &j)| i == j) {
                        continue;
                    }
                    let mut b = Vec::with_capacity(q);
                    for j in 0..q {
                        let block: Vec<Elem> = (0..a.len()).filter(|&i| theta[i] == j).map(|i| a[i].clone()).collect();
                        match block.len() {
                            0 => b.push(m.zero()),
                            1 => b.push(block[0].clone()),
                            _ => match m.sum(&block)? {
                                Some(x) => b.push(x),
                                None => break,
                            },
                        }
                    }
                    if b.len() < q {
                        continue;
                    }
                    let t = position[&b];
                    let id = cat.morphisms.len();
                    cat.morphisms.push((s, t));
                    cat.by_map.insert((s, t, theta.clone()), id);
                    cat.maps.push(theta);
                    cat.out[s].push(id);
                }
            }
        }
        cat.objects = objects;
        Ok(cat)
    }

    pub fn object(&self, i: usize) -> &[Elem] {
        &self.objects[i]
    }
}

impl FiniteCategory for QCategory {
    fn objects(&self) -> usize {
        self.objects.len()
    }

    fn morphisms(&self) -> &[(usize, usize)] {
        &self.morphisms
    }

    fn out_of(&self, object: usize) -> &[usize] {
        &self.out[object]
    }

    fn compose(&self, f: usize, g: usize) -> Result<Option<usize>, CompletionError> {
        let src = self.morphisms[f].0;
        let map: Vec<usize> = self.maps[f].iter().map(|&j| self.maps[g][j]).collect();
        let tgt = self.morphisms[g].1;
        if src == tgt && map.iter().enumerate().all(|(i, &j)| i == j) {
            return Ok(None);
        }
        self.by_map
            .get(&(src, tgt, map))
            .copied()
            .map(Some)
            .ok_or_else(|| CompletionError::Inconsistent("composite violates the summation condition".into()))
    }
}

/// `H₀, H₁` of the nerve of `𝒬(M)` truncated at `p_bound`.
pub fn nerve_q_homology(m: &dyn PartialMonoid, p_bound: usize, budget: usize) -> Result<NerveHomology, CompletionError> {
    nerve_homology(&QCategory::new(m, p_bound)?, 1, budget)
}

/// A finite commutative monoid with every sum defined, as an addition
/// table on indices with `0` the unit.
#[derive(Debug, Clone)]
pub struct TotalMonoid {
    pub elements: Vec<Elem>,
    pub table: Vec<Vec<usize>>,
}

impl TotalMonoid {
    pub fn from_partial(m: &dyn PartialMonoid) -> Result<Self, CompletionError> {
        let mut elements = vec![m.zero()];
        elements.extend(nonzero_carrier(m)?);
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let s = m.sum(&[a.clone(), b.clone()])?.ok_or_else(|| {
                    CompletionError::Bounds(format!("{} is not total", m.name()))
                })?;
                table[i][j] = elements
                    .iter()
                    .position(|e| *e == s)
                    .ok_or_else(|| CompletionError::Inconsistent("sum outside the carrier".into()))?;
            }
        }
        Ok(TotalMonoid { elements, table })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The translation category `𝓑(A, A′)` of a homomorphism `f: A → A′`:
/// objects are elements `d′` of `A′`, and `d ∈ A` is a morphism
/// `d′ → f(d)·d′`. With `A′` the one-point monoid this is the one-object
/// category `BA`.
pub struct BarCategory {
    objects: usize,
    morphisms: Vec<(usize, usize)>,
    labels: Vec<usize>,
    out: Vec<Vec<usize>>,
    a: TotalMonoid,
}

impl BarCategory {
    pub fn new(a: TotalMonoid, a_prime: &TotalMonoid, f: &[usize]) -> Result<Self, CompletionError> {
        if f.len() != a.len() || f.iter().any(|&x| x >= a_prime.len()) || f[0] != 0 {
            return Err(CompletionError::Bounds("f must send A to A′ and the unit to the unit".into()));
        }
        for i in 0..a.len() {
            for j in 0..a.len() {
                if f[a.table[i][j]] != a_prime.table[f[i]][f[j]] {
                    return Err(CompletionError::Bounds("f is not additive".into()));
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut labels = Vec::new();
        let mut out = vec![Vec::new(); a_prime.len()];
        for src in 0..a_prime.len() {
            for d in 1..a.len() {
                out[src].push(morphisms.len());
                morphisms.push((src, a_prime.table[f[d]][src]));
                labels.push(d);
            }
        }
        Ok(BarCategory {
            objects: a_prime.len(),
            morphisms,
            labels,
            out,
            a,
        })
    }

    /// `BA` with its single object.
    pub fn one_object(a: TotalMonoid) -> Result<Self, CompletionError> {
        let point = TotalMonoid {
            elements: vec![Elem::Base],
            table: vec![vec![0]],
        };
        let f = vec![0; a.len()];
        Self::new(a, &point, &f)
    }
}

impl FiniteCategory for BarCategory {
    fn objects(&self) -> usize {
        self.objects
    }

    fn morphisms(&self) -> &[(usize, usize)] {
        &self.morphisms
    }

    fn out_of(&self, object: usize) -> &[usize] {
        &self.out[object]
    }

    fn compose(&self, f: usize, g: usize) -> Result<Option<usize>, CompletionError> {
        let d = self.a.table[self.labels[g]][self.labels[f]];
        if d == 0 {
            return Ok(None);
        }
        let src = self.morphisms[f].0;
        Ok(Some(self.out[src][d - 1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{GroupSubset, TableMonoid};

    const BUDGET: usize = 1_000_000;

    #[test]
    fn sparse_divisors_match_dense() {
        // columns of [[2, 0], [0, 3], [1, 1]]^T style input
        let cols = vec![vec![(0, 2), (1, 0)], vec![(1, 3)], vec![(0, 1), (1, 1)]];
        let (rank, torsion) = elementary_divisors(2, &cols);
        assert_eq!(rank, 2);
        assert!(torsion.is_empty());
        let (rank, torsion) = elementary_divisors(1, &[vec![(0, 2)], vec![(0, 4)]]);
        assert_eq!((rank, torsion), (1, vec![BigInt::from(2)]));
    }

    #[test]
    fn point_monoid_nerve_is_contractible() {
        let zero = GroupSubset::new(1, vec![], vec![vec![0]]).unwrap();
        let h = nerve_q_homology(&zero, 3, BUDGET).unwrap();
        assert_eq!(h.homology[0], AbelianGroup::free(1));
        assert!(h.homology[1].is_trivial());
    }

    /// Connected components by union-find over the morphisms.
    fn components(cat: &dyn FiniteCategory) -> usize {
        let mut parent: Vec<usize> = (0..cat.objects()).collect();
        fn root(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = root(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(s, t) in cat.morphisms() {
            let (a, b) = (root(&mut parent, s), root(&mut parent, t));
            parent[a] = b;
        }
        (0..cat.objects()).filter(|&x| root(&mut parent, x) == x).count()
    }

    #[test]
    fn z2_nerve_splits_by_total_sum() {
        // every morphism preserves the total of a tuple, and in ℤ/2 both
        // totals occur, so there are two components
        let cat = QCategory::new(&TableMonoid::cyclic(2), 3).unwrap();
        let h = nerve_homology(&cat, 1, BUDGET).unwrap();
        assert_eq!(h.cells[0], 15);
        assert_eq!(components(&cat), 2);
        assert_eq!(h.homology[0], AbelianGroup::free(2));
    }

    #[test]
    fn bar_constructions_of_z2() {
        let a = TotalMonoid::from_partial(&TableMonoid::cyclic(2)).unwrap();
        let one = nerve_homology(&BarCategory::one_object(a.clone()).unwrap(), 1, BUDGET).unwrap();
        assert_eq!(one.homology[1].to_string(), "Z/2");
        let id: Vec<usize> = (0..a.len()).collect();
        let two = nerve_homology(&BarCategory::new(a.clone(), &a, &id).unwrap(), 1, BUDGET).unwrap();
        assert_eq!(two.homology[0], AbelianGroup::free(1));
        assert!(two.homology[1].is_trivial());
    }

    #[test]
    fn trivial_monoid_bar_is_a_point() {
        let a = TotalMonoid::from_partial(&GroupSubset::new(1, vec![], vec![vec![0]]).unwrap()).unwrap();
        let h = nerve_homology(&BarCategory::one_object(a).unwrap(), 1, BUDGET).unwrap();
        assert_eq!(h.homology[0], AbelianGroup::free(1));
        assert!(h.homology[1].is_trivial());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            nerve_q_homology(&TableMonoid::cyclic(2), 3, 100),
            Err(CompletionError::Bounds(_))
        ));
    }
}
