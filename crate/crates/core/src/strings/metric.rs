//! Distances between configurations.
//!
//! [`config_distance`] is a minimum-cost one-to-one matching: a matched pair
//! with equal `M`-labels costs `|v − v′|₁ + |P △ P′|`, an unmatched particle
//! costs `|P|`. It is solved exhaustively for small inputs and by the
//! Hungarian method otherwise, in exact arithmetic.
//!
//! [`cluster_distance`] additionally lets several particles with pairwise
//! disjoint intervals be matched to one particle carrying their union. This
//! is what makes concatenation at a shared point (strings over one point
//! meeting, paired particles fusing) a continuous event.
//!
//! Particles whose label is not a string label count as carrying `[0, 1]`,
//! so they have mass 1 and never share a cluster.

use num::{Signed, Zero};
use serde::Serialize;

use super::split_label;
use crate::config::LabeledConfig;
use crate::interval::{symdiff_distance, IntervalSet};
use crate::monoid::Elem;
use crate::rational::{l1_distance, q, serde_q, Q, QVec};

/// Exhaustive search is used up to this many particles on either side.
pub const EXHAUSTIVE_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    /// `pairs[i]` is the particle of the second configuration matched to
    /// particle `i` of the first, if any.
    pub pairs: Vec<Option<usize>>,
    pub unmatched_right: Vec<usize>,
    #[serde(with = "serde_q")]
    pub cost: Q,
    pub solver: &'static str,
}

#[derive(Debug, Clone)]
struct Item {
    point: QVec,
    intervals: IntervalSet,
    key: Elem,
    mass: Q,
}

fn items(c: &LabeledConfig) -> Vec<Item> {
    c.particles()
        .iter()
        .map(|(v, label)| match split_label(label) {
            Ok((p, a)) => Item {
                point: v.clone(),
                intervals: p.clone(),
                key: a.clone(),
                mass: p.measure(),
            },
            Err(_) => Item {
                point: v.clone(),
                intervals: IntervalSet::closed(q(0), q(1)),
                key: label.clone(),
                mass: q(1),
            },
        })
        .collect()
}

fn pair_cost(a: &Item, b: &Item) -> Option<Q> {
    (a.key == b.key).then(|| l1_distance(&a.point, &b.point) + symdiff_distance(&a.intervals, &b.intervals))
}

fn report_cost(a: &[Item], b: &[Item], pairs: &[Option<usize>]) -> Q {
    let mut used = vec![false; b.len()];
    let mut total = Q::zero();
    for (i, p) in pairs.iter().enumerate() {
        match p {
            Some(j) => {
                used[*j] = true;
                total += pair_cost(&a[i], &b[*j]).expect("matched labels agree");
            }
            None => total += &a[i].mass,
        }
    }
    for (j, u) in used.iter().enumerate() {
        if !u {
            total += &b[j].mass;
        }
    }
    total
}

fn finish(a: &[Item], b: &[Item], pairs: Vec<Option<usize>>, solver: &'static str) -> MatchReport {
    let cost = report_cost(a, b, &pairs);
    let unmatched_right = (0..b.len()).filter(|j| !pairs.contains(&Some(*j))).collect();
    MatchReport {
        pairs,
        unmatched_right,
        cost,
        solver,
    }
}

fn brute(a: &[Item], b: &[Item]) -> Vec<Option<usize>> {
    fn go(
        i: usize,
        a: &[Item],
        b: &[Item],
        used: &mut Vec<bool>,
        cur: &mut Vec<Option<usize>>,
        best: &mut Option<(Q, Vec<Option<usize>>)>,
    ) {
        if i == a.len() {
            let c = report_cost(a, b, cur);
            if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                *best = Some((c, cur.clone()));
            }
            return;
        }
        cur.push(None);
        go(i + 1, a, b, used, cur, best);
        cur.pop();
        for j in 0..b.len() {
            if !used[j] && a[i].key == b[j].key {
                used[j] = true;
                cur.push(Some(j));
                go(i + 1, a, b, used, cur, best);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut best = None;
    go(0, a, b, &mut vec![false; b.len()], &mut Vec::new(), &mut best);
    best.map(|(_, p)| p).unwrap_or_default()
}

/// Minimum-cost perfect assignment on a square matrix (Hungarian method
/// with potentials). Returns the column of each row.
pub fn hungarian(cost: &[Vec<Q>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based arrays with a virtual column 0
    let mut u = vec![Q::zero(); n + 1];
    let mut v = vec![Q::zero(); n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Q>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta: Option<Q> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = &cost[i0 - 1][j - 1] - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let m = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| m < d) {
                    delta = Some(m.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0; n];
    for j in 1..=n {
        if row_of[j] > 0 {
            col_of[row_of[j] - 1] = j - 1;
        }
    }
    col_of
}

fn by_hungarian(a: &[Item], b: &[Item]) -> Vec<Option<usize>> {
    let (n, m) = (a.len(), b.len());
    let big: Q = a.iter().chain(b).fold(Q::zero(), |acc, x| acc + &x.mass) + q(1);
    let size = n + m;
    let mut cost = vec![vec![Q::zero(); size]; size];
    for (i, row) in cost.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = match (i < n, j < m) {
                (true, true) => pair_cost(&a[i], &b[j]).unwrap_or_else(|| big.clone()),
                (true, false) => a[i].mass.clone(),
                (false, true) => b[j].mass.clone(),
                (false, false) => Q::zero(),
            };
        }
    }
    let cols = hungarian(&cost);
    (0..n)
        .map(|i| {
            let j = cols[i];
            (j < m && a[i].key == b[j].key).then_some(j)
        })
        .collect()
}

/// Minimum-cost one-to-one matching distance.
pub fn config_distance(x: &LabeledConfig, y: &LabeledConfig) -> MatchReport {
    let (a, b) = (items(x), items(y));
    if a.len().max(b.len()) <= EXHAUSTIVE_LIMIT {
        finish(&a, &b, brute(&a, &b), "exhaustive")
    } else {
        finish(&a, &b, by_hungarian(&a, &b), "hungarian")
    }
}

/// The one-to-one distance forced through the Hungarian solver.
pub fn config_distance_hungarian(x: &LabeledConfig, y: &LabeledConfig) -> MatchReport {
    let (a, b) = (items(x), items(y));
    finish(&a, &b, by_hungarian(&a, &b), "hungarian")
}

/// The one-to-one distance forced through exhaustive search.
pub fn config_distance_exhaustive(x: &LabeledConfig, y: &LabeledConfig) -> MatchReport {
    let (a, b) = (items(x), items(y));
    finish(&a, &b, brute(&a, &b), "exhaustive")
}

/// Cost of sending every source to a cluster target or to nothing. A
/// cluster `S → q` costs `|Q △ ⋃S| + Σ|v_p − v_q|₁`, which splits as
/// `|Q|` plus `|P| − 2|P ∩ Q| + |v_p − v_q|₁` per source.
fn directed_cluster(src: &[Item], tgt: &[Item]) -> Q {
    let options: Vec<Vec<(Q, Option<usize>)>> = src
        .iter()
        .map(|p| {
            let mut opts: Vec<(Q, Option<usize>)> = vec![(p.mass.clone(), None)];
            for (j, t) in tgt.iter().enumerate() {
                if t.key == p.key {
                    let c = &p.mass - q(2) * p.intervals.intersection_measure(&t.intervals)
                        + l1_distance(&p.point, &t.point);
                    opts.push((c, Some(j)));
                }
            }
            opts.sort();
            opts
        })
        .collect();
    // suffix sums of the per-source minima bound what is left to pay
    let mut rest = vec![Q::zero(); src.len() + 1];
    for i in (0..src.len()).rev() {
        rest[i] = &rest[i + 1] + &options[i][0].0;
    }
    let base: Q = tgt.iter().fold(Q::zero(), |acc, t| acc + &t.mass);
    let mut best: Option<Q> = None;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); tgt.len()];

    fn go(
        i: usize,
        cur: Q,
        src: &[Item],
        options: &[Vec<(Q, Option<usize>)>],
        rest: &[Q],
        members: &mut Vec<Vec<usize>>,
        best: &mut Option<Q>,
    ) {
        if best.as_ref().is_some_and(|b| &cur + &rest[i] >= *b) {
            return;
        }
        if i == src.len() {
            *best = Some(cur);
            return;
        }
        for (c, target) in &options[i] {
            match target {
                None => go(i + 1, &cur + c, src, options, rest, members, best),
                Some(j) => {
                    if members[*j].iter().all(|&k| src[k].intervals.is_disjoint(&src[i].intervals)) {
                        members[*j].push(i);
                        go(i + 1, &cur + c, src, options, rest, members, best);
                        members[*j].pop();
                    }
                }
            }
        }
    }
    go(0, Q::zero(), src, &options, &rest, &mut members, &mut best);
    base + best.expect("sending everything to nothing is always feasible")
}

/// Cluster distance: the cheaper of the two directions.
pub fn cluster_distance(x: &LabeledConfig, y: &LabeledConfig) -> Q {
    let (a, b) = (items(x), items(y));
    let d = directed_cluster(&a, &b).min(directed_cluster(&b, &a));
    debug_assert!(!d.is_negative());
    d
}
