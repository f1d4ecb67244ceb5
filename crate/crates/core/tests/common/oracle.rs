//! Independent integer linear algebra used as test oracles: determinants
//! by rational elimination, Hermite reduction by gcd row operations, and
//! invariant factors as quotients of determinant divisors.
#![allow(dead_code)]

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub fn det_rational(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k].clone();
        for r in k + 1..n {
            let f = &m[r][k] / &m[k][k];
            for c in k..n {
                let v = &f * &m[k][c];
                m[r][c] -= v;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// `d_k` = gcd of all `k × k` minors, for `k = 1 … min(rows, cols)`.
pub fn determinant_divisors(a: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect()).collect();
                g = g.gcd(&det_rational(&minor));
            }
        }
        out.push(g);
    }
    out
}

/// Invariant factors `s_k = d_k / d_{k−1}`, zeros once the rank is reached.
pub fn invariant_factors(a: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let d = determinant_divisors(a, cols);
    let mut prev = BigInt::one();
    d.iter()
        .map(|dk| {
            if dk.is_zero() {
                BigInt::zero()
            } else {
                let s = dk / &prev;
                prev = dk.clone();
                s
            }
        })
        .collect()
}

/// Row Hermite reduction: the same row lattice with at most `cols`
/// nonzero rows, built only from unimodular gcd combinations of two rows.
pub fn hermite_rows(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut top = 0;
    for c in 0..cols {
        for r in top + 1..m.len() {
            if m[r][c].is_zero() {
                continue;
            }
            if m[top][c].is_zero() {
                m.swap(top, r);
                continue;
            }
            let e = m[top][c].extended_gcd(&m[r][c]);
            let (x, y) = (e.x, e.y);
            let (p, q) = (&m[top][c] / &e.gcd, &m[r][c] / &e.gcd);
            let (a_row, b_row) = (m[top].clone(), m[r].clone());
            // [[x, y], [−q, p]] has determinant xp + yq = 1
            for j in 0..cols {
                m[top][j] = &x * &a_row[j] + &y * &b_row[j];
                m[r][j] = -&q * &a_row[j] + &p * &b_row[j];
            }
        }
        if top < m.len() && !m[top][c].is_zero() {
            top += 1;
        }
    }
    m.truncate(top);
    for row in &m {
        assert!(row.iter().any(|x| !x.is_zero()));
    }
    m
}

/// `(rank, torsion)` of `ℤ^cols / rowspan(a)` from the oracles above.
pub fn cokernel(a: &[Vec<BigInt>], cols: usize) -> (usize, Vec<BigInt>) {
    let h = hermite_rows(a, cols);
    let s = invariant_factors(&h, cols);
    let r = s.iter().filter(|x| !x.is_zero()).count();
    let torsion = s.into_iter().filter(|x| x.abs() > BigInt::one()).map(|x| x.abs()).collect();
    (cols - r, torsion)
}

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

