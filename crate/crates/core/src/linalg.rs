//! Dense exact linear algebra over the rationals.

use num::{One, Zero};
use serde::{Serialize, Serializer};

use crate::rational::{format_vec, Q, QVec};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<QVec>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<QVec>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        QMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[QVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i][j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> QVec {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.data[i][j].is_one()
                    } else {
                        self.data[i][j].is_zero()
                    }
                })
            })
    }

    /// `QᵀQ = I`, exactly.
    pub fn is_orthogonal(&self) -> bool {
        self.rows == self.cols && self.transpose().mul(self).is_identity()
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &QMatrix) -> QMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] = self.data[i][j].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.data[self.rows + i][self.cols + j] = other.data[i][j].clone();
            }
        }
        out
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> QMatrix {
        let mut m = self.data.clone();
        let mut lead_row = 0;
        for col in 0..self.cols {
            if lead_row == m.len() {
                break;
            }
            let Some(p) = (lead_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(lead_row, p);
            let inv = m[lead_row][col].recip();
            for x in m[lead_row].iter_mut() {
                *x *= &inv;
            }
            let pivot = m[lead_row].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == lead_row || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
            lead_row += 1;
        }
        m.truncate(lead_row);
        QMatrix {
            rows: m.len(),
            cols: self.cols,
            data: m,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rows
    }

    /// Basis of `{v | self·v = 0}`, one basis vector per row, in reduced form.
    pub fn nullspace(&self) -> QMatrix {
        let r = self.rref();
        let pivots: Vec<usize> = r
            .data
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).expect("rref row is nonzero"))
            .collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (row, &p) in r.data.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            basis.push(v);
        }
        QMatrix::from_rows(basis, self.cols).rref()
    }

    /// Stacks the rows of `self` above the rows of `other`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix::from_rows(data, self.cols)
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.data.iter().map(|r| format_vec(r)).collect();
        rows.serialize(s)
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, v: &[Q]) -> QVec {
    v.iter().map(|x| c * x).collect()
}

pub fn zero_vec(n: usize) -> QVec {
    vec![Q::zero(); n]
}
