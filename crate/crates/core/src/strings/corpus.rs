//! The regression corpus: small deterministic string configurations in
//! `I₊` with at most four particles and two closed intervals each.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::path::PathContext;
use super::{split_label, string_label, StringError};
use crate::config::{make_config, LabeledConfig};
use crate::interval::{normalize, Interval, IntervalSet};
use crate::monoid::sample_nonzero;
use crate::rational::{frac, q, QVec};

pub const MAX_PARTICLES: usize = 4;
pub const MAX_INTERVALS: usize = 2;
const SEED: u64 = 0x5eed;

/// One or two disjoint closed intervals with endpoints in `½ℤ ∩ [−2, 2]`.
fn closed_intervals(rng: &mut ChaCha8Rng) -> IntervalSet {
    let k = rng.gen_range(1..=MAX_INTERVALS);
    let mut ends: Vec<i64> = Vec::new();
    while ends.len() < 2 * k {
        let x = rng.gen_range(-4..=4);
        if !ends.contains(&x) {
            ends.push(x);
        }
    }
    ends.sort_unstable();
    let raw = ends.chunks(2).map(|w| Interval::closed(frac(w[0], 2), frac(w[1], 2))).collect();
    normalize(raw).expect("distinct endpoints give disjoint intervals")
}

/// `count` configurations at the context's input stage. The first two are
/// fixed: the empty configuration and a single `[0, 1]` string at the
/// origin. Labels are sampled from `M`.
pub fn bundled_corpus(ctx: &PathContext, count: usize) -> Result<Vec<LabeledConfig>, StringError> {
    let stage = ctx.gadget.stage_in().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = vec![LabeledConfig::empty(stage.clone())];
    if let Some(a) = sample_nonzero(ctx.m.as_ref(), &mut rng) {
        let origin = vec![q(0); stage.dim()];
        let unit = string_label(IntervalSet::closed(q(0), q(1)), a);
        out.push(make_config(stage.clone(), vec![(origin, unit)], ctx.sm.as_ref())?);
    }
    while out.len() < count {
        let n = rng.gen_range(1..=MAX_PARTICLES);
        let mut raw = Vec::with_capacity(n);
        for _ in 0..n {
            let v: QVec = (0..stage.dim()).map(|_| q(rng.gen_range(-2..=2))).collect();
            if raw.iter().any(|(w, _)| *w == v) {
                continue;
            }
            let Some(a) = sample_nonzero(ctx.m.as_ref(), &mut rng) else {
                break;
            };
            raw.push((v, string_label(closed_intervals(&mut rng), a)));
        }
        out.push(make_config(stage.clone(), raw, ctx.sm.as_ref())?);
    }
    out.truncate(count);
    Ok(out)
}

/// Forgets the intervals: the particle configuration underneath.
pub fn underlying(sc: &LabeledConfig, ctx: &PathContext) -> Result<LabeledConfig, StringError> {
    let raw = sc
        .particles()
        .iter()
        .map(|(v, label)| Ok((v.clone(), split_label(label)?.1.clone())))
        .collect::<Result<Vec<_>, StringError>>()?;
    Ok(make_config(sc.stage().clone(), raw, ctx.m.as_ref())?)
}
