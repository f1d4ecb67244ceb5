//! The strings side at `π₀`: classes of string configurations in the
//! Grothendieck group of the label monoid.
//!
//! A particle labeled `(P, a)` contributes `χ(P)·[a]`, where `χ` counts
//! closed components `+1` and open ones `−1`. Closed strings are the
//! positive ones, and `τ` turns them into open ones, so mirrored strings
//! contribute the inverse class.

use num::BigInt;
use serde::Serialize;

use super::presentation::{grothendieck_group, pi0_presentation, Completion};
use super::snf::AbelianGroup;
use super::CompletionError;
use crate::config::{hopf_mul, LabeledConfig};
use crate::monoid::Elem;
use crate::rational::frac;
use crate::strings::corpus::underlying;
use crate::strings::path::PathContext;
use crate::strings::{gamma, grouplike_certificate, split_label, tau_inv};

#[derive(Debug, Clone, Serialize)]
pub struct Pi0Report {
    pub group: AbelianGroup,
    pub arity_bound: usize,
    pub corpus_size: usize,
    pub certificate_samples: usize,
    pub inverse_ok: bool,
    pub hopf_ok: bool,
    pub certificate_ok: bool,
    pub canonical_ok: bool,
    pub pass: bool,
    pub failures: Vec<String>,
}

fn generator_counts(completion: &Completion, gens: &[Elem], label: &Elem, weight: i64) -> Vec<BigInt> {
    let mut counts = vec![BigInt::from(0); completion.images.len()];
    if let Some(i) = gens.iter().position(|g| g == label) {
        counts[i] += weight;
    }
    counts
}

/// Class of a string configuration.
pub fn string_class(
    completion: &Completion,
    gens: &[Elem],
    sc: &LabeledConfig,
) -> Result<Vec<BigInt>, CompletionError> {
    let mut total = completion.zero();
    for (_, label) in sc.particles() {
        let (p, a) = split_label(label)?;
        let c = completion.class_of(&generator_counts(completion, gens, a, p.euler_char()));
        total = completion.add(&total, &c);
    }
    Ok(total)
}

/// Class of a particle configuration: the sum of its labels.
pub fn particle_class(completion: &Completion, gens: &[Elem], x: &LabeledConfig) -> Vec<BigInt> {
    x.particles().iter().fold(completion.zero(), |acc, (_, a)| {
        completion.add(&acc, &completion.class_of(&generator_counts(completion, gens, a, 1)))
    })
}

/// Checks on every corpus element `x`: `[x] + [τx] = 0`, additivity of
/// the Hopf multiplication on consecutive pairs, constancy of the class
/// along the inverse certificate at `samples + 1` grid points, and
/// `[γ(x̄)] = Σ labels` for the underlying particle configuration `x̄`.
pub fn strings_pi0_check(
    ctx: &PathContext,
    corpus: &[LabeledConfig],
    arity_bound: usize,
    samples: usize,
) -> Result<Pi0Report, CompletionError> {
    let pres = pi0_presentation(ctx.m.as_ref(), arity_bound)?;
    let k = grothendieck_group(&pres);
    let gens = &pres.generators;
    let mut failures = Vec::new();
    let (mut inverse_ok, mut hopf_ok, mut certificate_ok, mut canonical_ok) = (true, true, true, true);
    let zero = k.zero();
    for (i, x) in corpus.iter().enumerate() {
        let cx = string_class(&k, gens, x)?;
        let mirror = tau_inv(x, &ctx.sm)?;
        if k.add(&cx, &string_class(&k, gens, &mirror)?) != zero {
            inverse_ok = false;
            failures.push(format!("corpus[{i}]: [x] + [τx] ≠ 0"));
        }
        let y = &corpus[(i + 1) % corpus.len()];
        let product = hopf_mul(x, y, &ctx.gadget)?;
        if string_class(&k, gens, &product)? != k.add(&cx, &string_class(&k, gens, y)?) {
            hopf_ok = false;
            failures.push(format!("corpus[{i}]: [μ(x, y)] ≠ [x] + [y]"));
        }
        let path = grouplike_certificate(x, ctx)?;
        for s in 0..=samples {
            let t = frac(s as i64, samples.max(1) as i64);
            let Ok(c) = path.eval(&t) else { continue };
            if string_class(&k, gens, &c)? != zero {
                certificate_ok = false;
                failures.push(format!("corpus[{i}]: certificate class moves at t = {t}"));
                break;
            }
        }
        let bare = underlying(x, ctx)?;
        if string_class(&k, gens, &gamma(&bare, &ctx.sm)?)? != particle_class(&k, gens, &bare) {
            canonical_ok = false;
            failures.push(format!("corpus[{i}]: [γx] differs from the particle class"));
        }
    }
    Ok(Pi0Report {
        group: k.group.clone(),
        arity_bound,
        corpus_size: corpus.len(),
        certificate_samples: samples + 1,
        pass: inverse_ok && hopf_ok && certificate_ok && canonical_ok,
        inverse_ok,
        hopf_ok,
        certificate_ok,
        canonical_ok,
        failures,
    })
}
