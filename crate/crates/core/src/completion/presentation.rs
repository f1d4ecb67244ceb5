//! Commutative monoid presentations of component monoids and their
//! Grothendieck groups.

use std::collections::BTreeSet;

use num::{BigInt, Integer, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::snf::{group_from_smith, smith_normal_form, AbelianGroup, IntMatrix};
use super::CompletionError;
use crate::monoid::{nonzero_carrier, Elem, PartialMonoid};

/// Generators with relations `Σ lhs ≐ Σ rhs` between multisets of
/// generator indices, each side kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidPresentation {
    pub generators: Vec<Elem>,
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
    pub arity_bound: usize,
}

impl MonoidPresentation {
    pub fn generator_index(&self, a: &Elem) -> Option<usize> {
        self.generators.iter().position(|g| g == a)
    }

    /// One row `lhs − rhs` per relation.
    pub fn relation_matrix(&self) -> IntMatrix {
        self.relations
            .iter()
            .map(|(lhs, rhs)| {
                let mut row = vec![BigInt::zero(); self.generators.len()];
                for &i in lhs {
                    row[i] += 1;
                }
                for &i in rhs {
                    row[i] -= 1;
                }
                row
            })
            .collect()
    }

    pub fn to_json(&self, m: &dyn PartialMonoid) -> Value {
        let side = |s: &[usize]| s.iter().map(|&i| m.render_elem(&self.generators[i])).collect::<Vec<_>>();
        json!({
            "arity_bound": self.arity_bound,
            "generators": self.generators.iter().map(|g| m.render_elem(g)).collect::<Vec<_>>(),
            "relations": self.relations.iter().map(|(l, r)| json!([side(l), side(r)])).collect::<Vec<_>>(),
        })
    }
}

/// Multisets of size `k` over `0..n`, as sorted index lists.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Generators `M ∖ {0}`; one relation `[a₁] + ⋯ + [aₙ] ≐ [Σaᵢ]` for every
/// summable multiset with `2 ≤ n ≤ arity_bound`, the right side empty when
/// the sum is zero.
pub fn pi0_presentation(m: &dyn PartialMonoid, arity_bound: usize) -> Result<MonoidPresentation, CompletionError> {
    if arity_bound < 2 {
        return Err(CompletionError::Bounds("arity bound must be at least 2".into()));
    }
    let generators = nonzero_carrier(m)?;
    let mut relations = BTreeSet::new();
    for k in 2..=arity_bound {
        for idx in multisets(generators.len(), k) {
            let tuple: Vec<Elem> = idx.iter().map(|&i| generators[i].clone()).collect();
            if let Some(s) = m.sum(&tuple)? {
                let rhs = if m.is_zero(&s) {
                    Vec::new()
                } else {
                    vec![generators.iter().position(|g| *g == s).expect("sums stay in the carrier")]
                };
                relations.insert((idx, rhs));
            }
        }
    }
    Ok(MonoidPresentation {
        generators,
        relations: relations.into_iter().collect(),
        arity_bound,
    })
}

/// The Grothendieck group of a presentation together with the image of
/// every generator. Coordinates list the torsion summands first (reduced
/// modulo their order) and then the free ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub group: AbelianGroup,
    #[serde(skip)]
    pub images: Vec<Vec<BigInt>>,
}

impl Completion {
    /// Reduces a coordinate vector to its canonical representative.
    pub fn reduce(&self, mut x: Vec<BigInt>) -> Vec<BigInt> {
        for (xi, d) in x.iter_mut().zip(&self.group.torsion) {
            *xi = xi.mod_floor(d);
        }
        x
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.group.torsion.len() + self.group.rank]
    }

    /// The class of `Σ counts[i]·[generator i]`.
    pub fn class_of(&self, counts: &[BigInt]) -> Vec<BigInt> {
        let mut out = self.zero();
        for (c, img) in counts.iter().zip(&self.images) {
            for (o, y) in out.iter_mut().zip(img) {
                *o += c * y;
            }
        }
        self.reduce(out)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

/// Cokernel of the relation matrix, via Smith normal form `U·R·V = D`. In
/// the basis given by the columns of `V`, the relations become the rows of
/// `D`, so generator `j` has coordinates `row j of V`.
pub fn grothendieck_group(pres: &MonoidPresentation) -> Completion {
    let n = pres.generators.len();
    let r = pres.relation_matrix();
    let s = smith_normal_form(&r, n);
    let group = group_from_smith(&s, n);
    let diag = s.diagonal();
    let mut torsion_cols = Vec::new();
    let mut free_cols = Vec::new();
    for j in 0..n {
        match diag.get(j) {
            Some(d) if d.is_zero() => free_cols.push(j),
            None => free_cols.push(j),
            Some(d) if *d > BigInt::from(1) => torsion_cols.push(j),
            Some(_) => {}
        }
    }
    let keep: Vec<usize> = torsion_cols.into_iter().chain(free_cols).collect();
    let mut completion = Completion {
        group,
        images: Vec::new(),
    };
    completion.images = (0..n)
        .map(|j| completion.reduce(keep.iter().map(|&c| s.v[j][c].clone()).collect()))
        .collect();
    completion
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{GroupSubset, TableMonoid};

    fn absorbing() -> TableMonoid {
        let (z, o, i) = (Some(0), Some(1), Some(2));
        TableMonoid::new(
            vec!["0".into(), "1".into(), "inf".into()],
            0,
            vec![vec![z, o, i], vec![o, i, i], vec![i, i, i]],
        )
        .unwrap()
    }

    #[test]
    fn presentations_of_small_monoids() {
        let free = GroupSubset::new(1, vec![], vec![vec![0], vec![1]]).unwrap();
        let p = pi0_presentation(&free, 4).unwrap();
        assert_eq!(p.generators.len(), 1);
        assert!(p.relations.is_empty());
        assert_eq!(grothendieck_group(&p).group, AbelianGroup::free(1));

        let z2 = TableMonoid::cyclic(2);
        let p = pi0_presentation(&z2, 2).unwrap();
        assert_eq!(p.relations, vec![(vec![0, 0], vec![])]);
        assert_eq!(grothendieck_group(&p).group.to_string(), "Z/2");

        let p = pi0_presentation(&absorbing(), 2).unwrap();
        assert_eq!(p.relations, vec![(vec![0, 0], vec![1]), (vec![0, 1], vec![1]), (vec![1, 1], vec![1])]);
        assert!(grothendieck_group(&p).group.is_trivial());
    }

    #[test]
    fn generator_images_respect_relations() {
        let m = GroupSubset::whole(vec![2, 4]).unwrap();
        let p = pi0_presentation(&m, 3).unwrap();
        let c = grothendieck_group(&p);
        assert_eq!(c.group, AbelianGroup::finite_product(&[2, 4]));
        for (lhs, rhs) in &p.relations {
            let mut counts = vec![BigInt::zero(); p.generators.len()];
            for &i in lhs {
                counts[i] += 1;
            }
            for &i in rhs {
                counts[i] -= 1;
            }
            assert_eq!(c.class_of(&counts), c.zero());
        }
    }

    #[test]
    fn arity_bound_is_checked() {
        assert!(pi0_presentation(&TableMonoid::cyclic(2), 1).is_err());
    }
}
