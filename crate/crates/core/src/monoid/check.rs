//! Exhaustive or seeded-random verification of the partial monoid laws
//! and of equivariance.
//!
//! Laws checked on every tuple `t`:
//! 1. the empty tuple sums to zero;
//! 2. a singleton sums to itself;
//! 3. for every partition of `t` into summable blocks, `t` is summable iff
//!    the tuple of block sums is, and then the totals agree.
//!
//! Commutativity (reversal and rotation of `t`) is checked alongside.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::{Elem, MonoidError, PartialMonoid};

pub const MAX_REPORTED_VIOLATIONS: usize = 25;

#[derive(Debug, Clone, Serialize)]
pub struct AxiomConfig {
    pub max_arity: usize,
    /// Exhaustive enumeration is used when `|carrier|^max_arity` is at most this.
    pub budget: usize,
    /// Number of random tuples otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            max_arity: 4,
            budget: 100_000,
            samples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub tuple: Vec<Value>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub monoid: String,
    pub mode: String,
    pub max_arity: usize,
    pub tuples_checked: usize,
    pub partitions_checked: usize,
    pub budget_exceeded: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivarianceReport {
    pub monoid: String,
    pub group: Option<String>,
    pub mode: String,
    pub checks: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

/// All set partitions of `0..n`, blocks in order of their least element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn grow(i: usize, n: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let mut blocks = vec![Vec::new(); max];
            for (idx, &b) in labels.iter().enumerate() {
                blocks[b].push(idx);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=max {
            labels.push(b);
            grow(i + 1, n, labels, max.max(b + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    grow(0, n, &mut Vec::new(), 0, &mut out);
    out
}

#[derive(Default)]
struct Findings {
    violations: Vec<Violation>,
    partitions: usize,
    budget_exceeded: usize,
}

impl Findings {
    fn merge(mut self, other: Findings) -> Findings {
        self.violations.extend(other.violations);
        self.partitions += other.partitions;
        self.budget_exceeded += other.budget_exceeded;
        self
    }
}

fn render(m: &dyn PartialMonoid, t: &[Elem]) -> Vec<Value> {
    t.iter().map(|a| m.render_elem(a)).collect()
}

fn check_tuple(m: &dyn PartialMonoid, t: &[Elem], partitions: &[Vec<Vec<Vec<usize>>>]) -> Findings {
    let mut f = Findings::default();
    match check_tuple_inner(m, t, partitions, &mut f) {
        Ok(()) => {}
        Err(MonoidError::BudgetExceeded { .. }) => f.budget_exceeded += 1,
        Err(e) => f.violations.push(Violation {
            axiom: "carrier".into(),
            tuple: render(m, t),
            detail: e.to_string(),
        }),
    }
    f
}

fn check_tuple_inner(
    m: &dyn PartialMonoid,
    t: &[Elem],
    partitions: &[Vec<Vec<Vec<usize>>>],
    f: &mut Findings,
) -> Result<(), MonoidError> {
    let mut violation = |axiom: &str, detail: String| {
        f.violations.push(Violation {
            axiom: axiom.into(),
            tuple: render(m, t),
            detail,
        })
    };
    let total = m.sum(t)?;
    match t.len() {
        0 => {
            if total.as_ref() != Some(&m.zero()) {
                violation("1", "empty tuple does not sum to zero".into());
            }
            return Ok(());
        }
        1 => {
            if total.as_ref() != Some(&t[0]) {
                violation("2", "singleton does not sum to itself".into());
            }
            return Ok(());
        }
        _ => {}
    }
    let mut reversed = t.to_vec();
    reversed.reverse();
    let mut rotated = t.to_vec();
    rotated.rotate_left(1);
    for perm in [reversed, rotated] {
        if m.sum(&perm)? != total {
            violation("commutativity", "reordering changes the sum".into());
        }
    }
    let mut count = 0;
    for blocks in &partitions[t.len()] {
        if blocks.len() == 1 || blocks.len() == t.len() {
            continue;
        }
        let mut sums = Vec::with_capacity(blocks.len());
        for b in blocks {
            let part: Vec<Elem> = b.iter().map(|&i| t[i].clone()).collect();
            match m.sum(&part)? {
                Some(s) => sums.push(s),
                None => break,
            }
        }
        if sums.len() < blocks.len() {
            continue;
        }
        count += 1;
        let nested = m.sum(&sums)?;
        match (&total, &nested) {
            (Some(a), Some(b)) if a != b => {
                violation("3", format!("partition {blocks:?} gives a different total"));
            }
            (Some(_), None) => violation("3", format!("tuple summable but block sums of {blocks:?} are not")),
            (None, Some(_)) => violation("3", format!("block sums of {blocks:?} summable but tuple is not")),
            _ => {}
        }
    }
    f.partitions += count;
    Ok(())
}

/// All tuples over `carrier` of each length `0..=max_arity`.
fn all_tuples(carrier: &[Elem], max_arity: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..max_arity {
        layer = layer
            .iter()
            .flat_map(|t| {
                carrier.iter().map(move |a| {
                    let mut u = t.clone();
                    u.push(a.clone());
                    u
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn exhaustive_size(carrier_len: usize, max_arity: usize) -> Option<usize> {
    carrier_len.checked_pow(max_arity as u32)
}

/// Deterministic random tuples: arities `0` and `1` once each per few
/// hundred samples, otherwise uniform in `2..=max_arity`.
fn random_tuples(m: &dyn PartialMonoid, cfg: &AxiomConfig) -> Vec<Vec<Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = vec![Vec::new()];
    for i in 0..cfg.samples {
        let n = if i % 200 == 0 { 1 } else { rng.gen_range(2..=cfg.max_arity.max(2)) };
        out.push((0..n).map(|_| m.sample(&mut rng)).collect());
    }
    out
}

pub fn check_axioms(m: &dyn PartialMonoid, cfg: &AxiomConfig) -> AxiomReport {
    let partitions: Vec<_> = (0..=cfg.max_arity.max(1)).map(set_partitions).collect();
    let carrier = m.carrier();
    let exhaustive = carrier
        .as_ref()
        .and_then(|c| exhaustive_size(c.len(), cfg.max_arity))
        .is_some_and(|n| n <= cfg.budget);
    let tuples = match (&carrier, exhaustive) {
        (Some(c), true) => all_tuples(c, cfg.max_arity),
        _ => random_tuples(m, cfg),
    };
    let findings = tuples
        .par_iter()
        .map(|t| check_tuple(m, t, &partitions))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Findings::default(), Findings::merge);
    let violation_count = findings.violations.len();
    let mut violations = findings.violations;
    violations.truncate(MAX_REPORTED_VIOLATIONS);
    AxiomReport {
        monoid: m.name(),
        mode: if exhaustive { "exhaustive" } else { "randomized" }.into(),
        max_arity: cfg.max_arity,
        tuples_checked: tuples.len(),
        partitions_checked: findings.partitions,
        budget_exceeded: findings.budget_exceeded,
        violation_count,
        pass: violation_count == 0,
        violations,
    }
}

fn check_action_tuple(m: &dyn PartialMonoid, t: &[Elem], order: usize) -> Result<Vec<Violation>, MonoidError> {
    let mut out = Vec::new();
    let total = m.sum(t)?;
    for g in 0..order {
        let moved: Vec<Elem> = t.iter().map(|a| m.act(g, a)).collect();
        if let Some(bad) = moved.iter().find(|a| !m.contains(a)) {
            out.push(Violation {
                axiom: "action".into(),
                tuple: render(m, t),
                detail: format!("g={g} leaves the carrier: {bad:?}"),
            });
            continue;
        }
        let image = m.sum(&moved)?;
        let expected = total.as_ref().map(|s| m.act(g, s));
        if image != expected {
            out.push(Violation {
                axiom: "equivariance".into(),
                tuple: render(m, t),
                detail: format!("g={g}: sum of translates differs from translate of sum"),
            });
        }
    }
    Ok(out)
}

/// Action laws (identity, composition, zero fixed) on elements, and
/// `g·Σt = Σ(g·t)` with matching summability on tuples.
pub fn equivariance_check(m: &dyn PartialMonoid, cfg: &AxiomConfig) -> EquivarianceReport {
    let Some(group) = m.group() else {
        return EquivarianceReport {
            monoid: m.name(),
            group: None,
            mode: "trivial action".into(),
            checks: 0,
            violation_count: 0,
            violations: Vec::new(),
            pass: true,
        };
    };
    let order = group.order();
    let arity = cfg.max_arity.min(3);
    let carrier = m.carrier();
    let exhaustive = carrier
        .as_ref()
        .and_then(|c| exhaustive_size(c.len(), arity))
        .is_some_and(|n| n.saturating_mul(order) <= cfg.budget);
    let sub_cfg = AxiomConfig {
        max_arity: arity,
        ..cfg.clone()
    };
    let tuples = match (&carrier, exhaustive) {
        (Some(c), true) => all_tuples(c, arity),
        _ => random_tuples(m, &sub_cfg),
    };
    let elements: Vec<Elem> = match &carrier {
        Some(c) => c.clone(),
        None => tuples.iter().flatten().take(500).cloned().collect(),
    };
    let mut violations = Vec::new();
    let zero = m.zero();
    for g in 0..order {
        if m.act(g, &zero) != zero {
            violations.push(Violation {
                axiom: "action".into(),
                tuple: vec![m.render_elem(&zero)],
                detail: format!("g={g} moves zero"),
            });
        }
    }
    for a in &elements {
        if m.act(group.identity(), a) != *a {
            violations.push(Violation {
                axiom: "action".into(),
                tuple: vec![m.render_elem(a)],
                detail: "identity acts nontrivially".into(),
            });
        }
        for g in 0..order {
            for h in 0..order {
                if m.act(g, &m.act(h, a)) != m.act(group.mul(g, h), a) {
                    violations.push(Violation {
                        axiom: "action".into(),
                        tuple: vec![m.render_elem(a)],
                        detail: format!("g(ha) != (gh)a for g={g}, h={h}"),
                    });
                }
            }
        }
    }
    let per_tuple: Vec<Vec<Violation>> = tuples
        .par_iter()
        .map(|t| check_action_tuple(m, t, order).unwrap_or_default())
        .collect();
    violations.extend(per_tuple.into_iter().flatten());
    let violation_count = violations.len();
    violations.truncate(MAX_REPORTED_VIOLATIONS);
    EquivarianceReport {
        monoid: m.name(),
        group: Some(group.name().to_string()),
        mode: if exhaustive { "exhaustive" } else { "randomized" }.into(),
        checks: elements.len() * order * order + tuples.len() * order,
        violation_count,
        pass: violation_count == 0,
        violations,
    }
}
