//! Smith normal form over ℤ with unimodular certificates, and the finitely
//! generated abelian groups read off from it.

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Serialize, Serializer};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize) -> IntMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Fraction-free Gaussian elimination.
pub fn det_bareiss(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `U·A·V = D` with `D` diagonal, nonnegative and `d₁ | d₂ | ⋯`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    rows: usize,
    cols: usize,
}

impl SmithResult {
    /// Diagonal entries, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Every certificate condition, checked exactly against `a`.
    pub fn verify(&self, a: &IntMatrix) -> Result<(), String> {
        let uav = mat_mul(&mat_mul(&self.u, a, self.rows), &self.v, self.cols);
        if uav != self.d {
            return Err("U·A·V differs from D".into());
        }
        for (name, m) in [("U", &self.u), ("V", &self.v)] {
            if det_bareiss(m).abs() != BigInt::one() {
                return Err(format!("{name} is not unimodular"));
            }
        }
        for (i, row) in self.d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j && !x.is_zero() {
                    return Err(format!("off-diagonal entry at ({i}, {j})"));
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return Err("negative diagonal entry".into());
        }
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !ok {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        Ok(())
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// `row[i] += c·row[j]`
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                *x += c * y;
            }
        }
    }

    /// `col[i] += c·col[j]`
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let y = row[j].clone();
                row[i] += c * y;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -&*x;
            }
        }
    }
}

/// Smith normal form with deterministic pivoting: the nonzero entry of
/// least absolute value in the remaining block, first by row then by
/// column.
pub fn smith_normal_form(a: &IntMatrix, cols: usize) -> SmithResult {
    let rows = a.len();
    let mut w = Work {
        a: a.clone(),
        u: identity(rows),
        v: identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &w.a[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(w, rows, cols);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let c = -(&w.a[i][t] / &p);
                    w.add_row(i, t, &c);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let c = -(&w.a[t][j] / &p);
                    w.add_col(j, t, &c);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    finish(w, rows, cols)
}

fn finish(w: Work, rows: usize, cols: usize) -> SmithResult {
    SmithResult {
        u: w.u,
        d: w.a,
        v: w.v,
        rows,
        cols,
    }
}

fn big_strings<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

/// `ℤ^rank ⊕ ℤ/d₁ ⊕ ⋯` with `2 ≤ d₁ | d₂ | ⋯`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub rank: usize,
    #[serde(serialize_with = "big_strings")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// From invariant factors given in any order, ones dropped.
    pub fn from_factors(rank: usize, factors: &[i64]) -> Self {
        let mut torsion: Vec<BigInt> = factors.iter().filter(|&&d| d > 1).map(|&d| BigInt::from(d)).collect();
        torsion.sort();
        AbelianGroup { rank, torsion }
    }

    /// The invariant factor form of `ℤ/m₁ × ⋯ × ℤ/m_k`.
    pub fn finite_product(moduli: &[i64]) -> Self {
        let diag: IntMatrix = (0..moduli.len())
            .map(|i| (0..moduli.len()).map(|j| BigInt::from(if i == j { moduli[i] } else { 0 })).collect())
            .collect();
        cokernel(&diag, moduli.len())
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `ℤ^cols / (row span of a)`.
pub fn cokernel(a: &IntMatrix, cols: usize) -> AbelianGroup {
    group_from_smith(&smith_normal_form(a, cols), cols)
}

pub(crate) fn group_from_smith(s: &SmithResult, cols: usize) -> AbelianGroup {
    let diag = s.diagonal();
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    AbelianGroup {
        rank: cols - nonzero,
        torsion: diag.into_iter().filter(|x| *x > BigInt::one()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_example() {
        let a = to_big(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a, 2);
        s.verify(&a).unwrap();
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn diagonal_input_gets_divisibility_fixed() {
        let a = to_big(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a, 2);
        s.verify(&a).unwrap();
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let ordered = to_big(&[vec![1, 0], vec![0, 4]]);
        assert_eq!(smith_normal_form(&ordered, 2).d, ordered);
    }

    #[test]
    fn zero_and_empty_matrices() {
        let z = to_big(&[vec![0, 0, 0], vec![0, 0, 0]]);
        let s = smith_normal_form(&z, 3);
        assert_eq!(s.u, identity(2));
        assert_eq!(s.v, identity(3));
        s.verify(&z).unwrap();
        assert_eq!(cokernel(&Vec::new(), 2), AbelianGroup::free(2));
        assert_eq!(cokernel(&Vec::new(), 0), AbelianGroup::trivial());
    }

    #[test]
    fn bareiss_determinants() {
        assert_eq!(det_bareiss(&to_big(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(det_bareiss(&to_big(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]])), BigInt::from(4));
        assert_eq!(det_bareiss(&to_big(&[vec![1, 2], vec![2, 4]])), BigInt::zero());
    }

    #[test]
    fn group_names() {
        assert_eq!(AbelianGroup::finite_product(&[2, 3]).to_string(), "Z/6");
        assert_eq!(AbelianGroup::finite_product(&[2, 4]).to_string(), "Z/2 + Z/4");
        assert_eq!(AbelianGroup::from_factors(1, &[1, 2]).to_string(), "Z + Z/2");
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
    }
}
