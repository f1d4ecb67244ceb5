//! Finite unions of bounded intervals with endpoint types: the partial
//! abelian monoid `I(ℝ)` under superimposition, its involution τ, the
//! compressions `α_t`, the homotopy `h_t` and the vanishing path.
//!
//! All endpoints are exact rationals.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_q, frac, parse_q, q, serde_q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("empty interval {0}")]
    Empty(String),
    #[error("intervals {0} and {1} overlap")]
    Overlap(String, String),
    #[error("components {0} and {1} share an endpoint; their mirrors would overlap")]
    NotSeparated(String, String),
    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(String),
    #[error("cannot read interval literal {0:?}")]
    Syntax(String),
    #[error("affine map with non-positive slope {0}")]
    NonIncreasing(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    #[serde(with = "serde_q")]
    lo: Q,
    #[serde(with = "serde_q")]
    hi: Q,
    lo_closed: bool,
    hi_closed: bool,
}

/// Either the four fields or a literal such as `"[0, 1/2)"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawInterval {
    Literal(String),
    Fields {
        #[serde(with = "serde_q")]
        lo: Q,
        #[serde(with = "serde_q")]
        hi: Q,
        lo_closed: bool,
        hi_closed: bool,
    },
}

impl TryFrom<RawInterval> for Interval {
    type Error = IntervalError;

    fn try_from(r: RawInterval) -> Result<Self, Self::Error> {
        match r {
            RawInterval::Literal(s) => s.parse(),
            RawInterval::Fields {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => Interval::new(lo, hi, lo_closed, hi_closed),
        }
    }
}

impl FromStr for Interval {
    type Err = IntervalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IntervalError::Syntax(s.to_string());
        let t = s.trim();
        let lo_closed = match t.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let hi_closed = match t.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let (lo, hi) = t[1..t.len() - 1].split_once(',').ok_or_else(bad)?;
        let lo = parse_q(lo.trim()).map_err(|_| bad())?;
        let hi = parse_q(hi.trim()).map_err(|_| bad())?;
        Interval::new(lo, hi, lo_closed, hi_closed)
    }
}

impl Interval {
    pub fn new(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Result<Self, IntervalError> {
        let ok = lo < hi || (lo == hi && lo_closed && hi_closed);
        let iv = Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        if ok {
            Ok(iv)
        } else {
            Err(IntervalError::Empty(iv.to_string()))
        }
    }

    pub fn closed(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, true, true).expect("closed interval needs lo <= hi")
    }

    pub fn open(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, false, false).expect("open interval needs lo < hi")
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn length(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    pub fn is_open(&self) -> bool {
        !self.lo_closed && !self.hi_closed
    }

    pub fn is_half_open(&self) -> bool {
        self.lo_closed != self.hi_closed
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    /// Point-set intersection test, endpoint types included.
    pub fn intersects(&self, other: &Interval) -> bool {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (&self.lo, self.lo_closed),
            Ordering::Less => (&other.lo, other.lo_closed),
            Ordering::Equal => (&self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (&self.hi, self.hi_closed),
            Ordering::Greater => (&other.hi, other.hi_closed),
            Ordering::Equal => (&self.hi, self.hi_closed && other.hi_closed),
        };
        lo < hi || (lo == hi && lo_closed && hi_closed)
    }

    /// τ: the mirror image with each endpoint type flipped, so that
    /// `τ[a,b] = (−b,−a)` and `τ[a,b) = [−b,−a)`. `None` for a single point.
    pub fn tau(&self) -> Option<Interval> {
        Interval::new(-self.hi.clone(), -self.lo.clone(), !self.hi_closed, !self.lo_closed).ok()
    }

    pub fn translate(&self, by: &Q) -> Interval {
        Interval {
            lo: &self.lo + by,
            hi: &self.hi + by,
            ..self.clone()
        }
    }

    fn sort_key(&self) -> (&Q, bool) {
        // closed-at-lo first: among disjoint intervals with equal lo only a
        // degenerate [a,a] can precede an (a, b⟩
        (&self.lo, !self.lo_closed)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            format_q(&self.lo),
            format_q(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// A canonical element of `I(ℝ)`: pairwise disjoint components sorted by
/// left endpoint, with every connected union already concatenated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IntervalSet {
    components: Vec<Interval>,
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<Interval>::deserialize(d)?;
        normalize(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.components.iter().map(Interval::to_string).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// Sorts, checks pairwise disjointness and concatenates touching
/// components whose shared endpoint belongs to exactly one of them.
pub fn normalize(raw: Vec<Interval>) -> Result<IntervalSet, IntervalError> {
    for (i, a) in raw.iter().enumerate() {
        for b in &raw[i + 1..] {
            if a.intersects(b) {
                return Err(IntervalError::Overlap(a.to_string(), b.to_string()));
            }
        }
    }
    let mut sorted = raw;
    sorted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        if let Some(last) = out.last_mut() {
            if last.hi == iv.lo && last.hi_closed != iv.lo_closed {
                last.hi = iv.hi;
                last.hi_closed = iv.hi_closed;
                continue;
            }
        }
        out.push(iv);
    }
    Ok(IntervalSet { components: out })
}

/// The partial sum of `I(ℝ)`: defined iff the members are pairwise disjoint.
pub fn union_partial(tuple: &[IntervalSet]) -> Option<IntervalSet> {
    let raw: Vec<Interval> = tuple.iter().flat_map(|p| p.components.iter().cloned()).collect();
    normalize(raw).ok()
}

/// `α(s) = (1 + s/(1+|s|))/2`, an order-preserving bijection `ℝ → (0,1)`.
pub fn alpha(s: &Q) -> Q {
    let half = frac(1, 2);
    (Q::one() + s / (Q::one() + s.abs())) * half
}

/// `α_t(s) = (1−t)s + t·α(s)`.
pub fn alpha_t(s: &Q, t: &Q) -> Q {
    (Q::one() - t) * s + t * alpha(s)
}

fn check_unit(t: &Q) -> Result<(), IntervalError> {
    if t.is_negative() || *t > Q::one() {
        Err(IntervalError::ParameterOutOfRange(format_q(t)))
    } else {
        Ok(())
    }
}

/// A strictly increasing map of the line.
#[derive(Debug, Clone, PartialEq)]
pub enum MonotoneMap {
    Affine { slope: Q, offset: Q },
    AlphaT(Q),
}

impl MonotoneMap {
    fn eval(&self, s: &Q) -> Q {
        match self {
            MonotoneMap::Affine { slope, offset } => slope * s + offset,
            MonotoneMap::AlphaT(t) => alpha_t(s, t),
        }
    }

    fn validate(&self) -> Result<(), IntervalError> {
        match self {
            MonotoneMap::Affine { slope, .. } if !slope.is_positive() => {
                Err(IntervalError::NonIncreasing(format_q(slope)))
            }
            MonotoneMap::AlphaT(t) => check_unit(t),
            _ => Ok(()),
        }
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn single(iv: Interval) -> Self {
        IntervalSet { components: vec![iv] }
    }

    pub fn closed(lo: Q, hi: Q) -> Self {
        Self::single(Interval::closed(lo, hi))
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.components
            .iter()
            .all(|a| other.components.iter().all(|b| !a.intersects(b)))
    }

    /// Every component closed: membership in `I(ℝ)₊`.
    pub fn is_plus(&self) -> bool {
        self.components.iter().all(Interval::is_closed)
    }

    /// No two components share an endpoint. This is the domain of τ: two
    /// components meeting at a point missing from both would have mirrors
    /// both containing the mirrored point.
    pub fn check_separated(&self) -> Result<(), IntervalError> {
        for w in self.components.windows(2) {
            if w[0].hi == w[1].lo {
                return Err(IntervalError::NotSeparated(w[0].to_string(), w[1].to_string()));
            }
        }
        Ok(())
    }

    pub fn is_separated(&self) -> bool {
        self.check_separated().is_ok()
    }

    /// `τ(J₁ ∪ ⋯ ∪ J_r) = τJ_r ∪ ⋯ ∪ τJ₁`. Degenerate points have empty
    /// mirrors and drop out.
    pub fn tau(&self) -> Result<IntervalSet, IntervalError> {
        self.check_separated()?;
        let raw: Vec<Interval> = self.components.iter().rev().filter_map(Interval::tau).collect();
        normalize(raw)
    }

    pub fn translate(&self, by: &Q) -> IntervalSet {
        IntervalSet {
            components: self.components.iter().map(|c| c.translate(by)).collect(),
        }
    }

    pub fn pushforward(&self, map: &MonotoneMap) -> Result<IntervalSet, IntervalError> {
        map.validate()?;
        let components = self
            .components
            .iter()
            .map(|c| Interval {
                lo: map.eval(&c.lo),
                hi: map.eval(&c.hi),
                lo_closed: c.lo_closed,
                hi_closed: c.hi_closed,
            })
            .collect();
        Ok(IntervalSet { components })
    }

    /// `(P⁺, P⁻)`: the closed components and the rest.
    pub fn split_closed(&self) -> (IntervalSet, IntervalSet) {
        let (plus, minus): (Vec<Interval>, Vec<Interval>) =
            self.components.iter().cloned().partition(Interval::is_closed);
        (IntervalSet { components: plus }, IntervalSet { components: minus })
    }

    pub fn measure(&self) -> Q {
        self.components.iter().fold(Q::zero(), |acc, c| acc + c.length())
    }

    /// Compactly supported Euler characteristic: closed components count
    /// `+1`, open ones `−1`, half-open ones `0`. Additive over disjoint
    /// unions, negated by τ, and unchanged when a half-open piece vanishes.
    pub fn euler_char(&self) -> i64 {
        self.components
            .iter()
            .map(|c| match (c.lo_closed, c.hi_closed) {
                (true, true) => 1,
                (false, false) => -1,
                _ => 0,
            })
            .sum()
    }

    fn breakpoints(&self, other: &IntervalSet) -> Vec<Q> {
        let mut pts: Vec<Q> = self
            .components
            .iter()
            .chain(&other.components)
            .flat_map(|c| [c.lo.clone(), c.hi.clone()])
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Lebesgue measure of the overlap; blind to endpoint types.
    pub fn intersection_measure(&self, other: &IntervalSet) -> Q {
        self.sweep(other, |a, b| a && b)
    }

    fn sweep(&self, other: &IntervalSet, keep: impl Fn(bool, bool) -> bool) -> Q {
        let pts = self.breakpoints(other);
        let two = q(2);
        pts.windows(2).fold(Q::zero(), |acc, w| {
            let mid = (&w[0] + &w[1]) / &two;
            if keep(self.contains(&mid), other.contains(&mid)) {
                acc + (&w[1] - &w[0])
            } else {
                acc
            }
        })
    }
}

/// Lebesgue measure of the symmetric difference, computed by endpoint sweep.
pub fn symdiff_distance(p: &IntervalSet, other: &IntervalSet) -> Q {
    p.sweep(other, |a, b| a != b)
}

/// `h_t(P) = (I(α_t)P, τ I(α_t)P)`.
pub fn h_t(p: &IntervalSet, t: &Q) -> Result<(IntervalSet, IntervalSet), IntervalError> {
    check_unit(t)?;
    let moved = p.pushforward(&MonotoneMap::AlphaT(t.clone()))?;
    let mirror = moved.tau()?;
    Ok((moved, mirror))
}

/// The contraction of `Σ h₁(P)` to `∅` at time `u ∈ [0,1]`.
///
/// Each component `J = ⟨a,b⟩` of `I(α)P ⊂ (0,1)` slides left while its
/// mirror `τJ` slides right. Before they meet (`u ≤ a`) both pieces are
/// present; afterwards they form one half-open interval from `u−b` to
/// `b−u`, closed on the right iff `J` is, which shrinks to nothing at `u = b`.
pub fn vanish_path(p: &IntervalSet, u: &Q) -> Result<IntervalSet, IntervalError> {
    check_unit(u)?;
    p.check_separated()?;
    let moved = p.pushforward(&MonotoneMap::AlphaT(Q::one()))?;
    let mut raw = Vec::new();
    for j in moved.components() {
        if u <= j.lo() {
            raw.push(j.translate(&-u.clone()));
            raw.push(j.tau().expect("α-image components are non-degenerate").translate(u));
        } else if u < j.hi() {
            let reach = j.hi() - u;
            raw.push(Interval::new(-reach.clone(), reach, !j.hi_closed, j.hi_closed)?);
        }
    }
    normalize(raw)
}

/// Random canonical separated set: `k ≤ max_components` components whose
/// endpoints are distinct multiples of `1/4` in `[-span, span]`.
pub fn random_separated<R: Rng + ?Sized>(rng: &mut R, max_components: usize, span: i64) -> IntervalSet {
    let k = rng.gen_range(0..=max_components);
    let slots = (8 * span) as usize;
    let mut picks: Vec<i64> = Vec::with_capacity(2 * k);
    while picks.len() < 2 * k.min(slots / 2) {
        let x = rng.gen_range(-4 * span..=4 * span);
        if !picks.contains(&x) {
            picks.push(x);
        }
    }
    picks.sort_unstable();
    let raw = picks
        .chunks(2)
        .map(|w| {
            let (lc, hc) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
            Interval::new(frac(w[0], 4), frac(w[1], 4), lc, hc).expect("lo < hi")
        })
        .collect();
    normalize(raw).expect("distinct sorted endpoints are disjoint")
}

/// Random set built from unit cells `[i, i+1]` of `[0, cells)`; adjacent
/// cells can touch, so concatenations and overlaps both occur.
pub fn random_cells<R: Rng + ?Sized>(rng: &mut R, max_components: usize, cells: i64) -> IntervalSet {
    let k = rng.gen_range(0..=max_components);
    let mut raw: Vec<Interval> = Vec::new();
    for _ in 0..k {
        let i = rng.gen_range(0..cells);
        let iv = Interval::new(q(i), q(i + 1), rng.gen_bool(0.5), rng.gen_bool(0.5)).expect("unit cell");
        if raw.iter().all(|r| !r.intersects(&iv)) {
            raw.push(iv);
        }
    }
    normalize(raw).expect("disjoint by construction")
}
