//! Subspaces of `ℚⁿ` summed by orthogonal direct sum.

use std::sync::Arc;

use num::Zero;
use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::{Elem, MonoidError, PartialMonoid};
use crate::group_rep::{FiniteGroup, OrthogonalRep};
use crate::linalg::{dot, QMatrix};
use crate::rational::{format_vec, frac, from_json, q, Q};

#[derive(Debug, Clone)]
pub struct GrassmannQ {
    n: usize,
    rep: Option<OrthogonalRep>,
}

impl GrassmannQ {
    pub fn new(n: usize) -> Self {
        GrassmannQ { n, rep: None }
    }

    /// Subspaces of a representation space, acted on through the matrices.
    pub fn with_rep(rep: OrthogonalRep) -> Self {
        GrassmannQ { n: rep.dim(), rep: Some(rep) }
    }

    pub fn span(&self, rows: Vec<Vec<Q>>) -> Elem {
        Elem::Subspace(QMatrix::from_rows(rows, self.n).rref())
    }

    /// Orthonormal bases the sampler draws from: the standard one and two
    /// rational rotations of it.
    fn bases(&self) -> Vec<Vec<Vec<Q>>> {
        let n = self.n;
        let unit = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = q(1);
            v
        };
        let mut out = vec![(0..n).map(unit).collect::<Vec<_>>()];
        for start in 0..n.saturating_sub(1).min(2) {
            let mut basis: Vec<Vec<Q>> = (0..n).map(unit).collect();
            let (i, j) = (start, start + 1);
            basis[i] = vec![Q::zero(); n];
            basis[i][i] = frac(3, 5);
            basis[i][j] = frac(4, 5);
            basis[j] = vec![Q::zero(); n];
            basis[j][i] = frac(-4, 5);
            basis[j][j] = frac(3, 5);
            out.push(basis);
        }
        out
    }
}

impl PartialMonoid for GrassmannQ {
    fn name(&self) -> String {
        format!("grassmann(Q^{})", self.n)
    }

    fn zero(&self) -> Elem {
        Elem::Subspace(QMatrix::zeros(0, self.n))
    }

    fn contains(&self, a: &Elem) -> bool {
        matches!(a, Elem::Subspace(m) if m.cols() == self.n && m.rref() == *m)
    }

    fn sum_unchecked(&self, tuple: &[Elem]) -> Result<Option<Elem>, MonoidError> {
        let spaces: Vec<&QMatrix> = tuple
            .iter()
            .map(|a| match a {
                Elem::Subspace(m) => Ok(m),
                other => Err(MonoidError::NotInCarrier(format!("{other:?}"))),
            })
            .collect::<Result<_, _>>()?;
        for (i, a) in spaces.iter().enumerate() {
            for b in &spaces[i + 1..] {
                let orthogonal = a
                    .row_vecs()
                    .iter()
                    .all(|x| b.row_vecs().iter().all(|y| dot(x, y).is_zero()));
                if !orthogonal {
                    return Ok(None);
                }
            }
        }
        let stacked = spaces
            .iter()
            .fold(QMatrix::zeros(0, self.n), |acc, m| acc.vstack(m));
        Ok(Some(Elem::Subspace(stacked.rref())))
    }

    fn group(&self) -> Option<Arc<FiniteGroup>> {
        self.rep.as_ref().map(|r| r.group().clone())
    }

    fn act(&self, g: usize, a: &Elem) -> Elem {
        match (&self.rep, a) {
            (Some(rep), Elem::Subspace(m)) => {
                let rows = m.row_vecs().iter().map(|r| rep.matrix(g).apply(r)).collect();
                self.span(rows)
            }
            _ => a.clone(),
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem {
        let bases = self.bases();
        let basis = if rng.gen_bool(0.6) {
            &bases[0]
        } else {
            &bases[rng.gen_range(0..bases.len())]
        };
        let rows = basis.iter().filter(|_| rng.gen_bool(0.35)).cloned().collect();
        self.span(rows)
    }

    fn parse_elem(&self, v: &Value) -> Result<Elem, MonoidError> {
        let err = || MonoidError::Parse(v.to_string());
        let rows = v.as_array().ok_or_else(err)?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(err)?;
            if r.len() != self.n {
                return Err(err());
            }
            out.push(r.iter().map(from_json).collect::<Result<Vec<Q>, _>>().map_err(|_| err())?);
        }
        Ok(self.span(out))
    }

    fn render_elem(&self, a: &Elem) -> Value {
        match a {
            Elem::Subspace(m) => json!(m.row_vecs().iter().map(|r| format_vec(r)).collect::<Vec<_>>()),
            other => json!(format!("{other:?}")),
        }
    }
}
