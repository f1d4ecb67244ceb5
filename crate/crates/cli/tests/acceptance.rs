//! The acceptance gate. Each criterion runs at its stated size and
//! tolerance and prints one line; the test fails if any line is FAIL.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use labstrings::completion::homology::{nerve_homology, BarCategory, TotalMonoid};
use labstrings::completion::{grothendieck_group, pi0_presentation, smith_normal_form, strings_pi0_check, AbelianGroup};
use labstrings::config::{config_partial_sum, g_act, hopf_mul, IsometryGadget, LabeledConfig};
use labstrings::group_rep::{regular_rep, FiniteGroup, PointedGSet, UniverseStage};
use labstrings::interval::{h_t, normalize, union_partial, Interval, IntervalSet};
use labstrings::monoid::{
    check_axioms, AxiomConfig, GrassmannQ, GroupSubset, IntervalMonoid, Monoid, PartialMonoid, PointedSetMonoid,
    TableMonoid, WedgeLabel,
};
use labstrings::rational::{frac, parse_q, q, Q};
use labstrings::strings::corpus::{bundled_corpus, underlying, MAX_INTERVALS, MAX_PARTICLES};
use labstrings::strings::path::PathContext;
use labstrings::strings::{certify_continuity, gamma, grouplike_certificate, lambda, split_label, tau_inv, PathSpec};
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{:.2}s", took.as_secs_f64()))
}

fn zero_to_three() -> Monoid {
    Arc::new(GroupSubset::new(1, vec![], (0..4).map(|x| vec![x]).collect()).unwrap())
}

fn z2() -> Monoid {
    Arc::new(GroupSubset::whole(vec![2]).unwrap())
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let cfg = AxiomConfig {
        max_arity: 4,
        budget: 8usize.pow(4),
        samples: 10_000,
        seed: 0,
    };
    let cases: Vec<(Monoid, &str)> = vec![
        (zero_to_three(), "exhaustive"),
        (Arc::new(PointedSetMonoid::new(PointedGSet::standard(3))), "exhaustive"),
        (Arc::new(GrassmannQ::new(3)), "randomized"),
        (Arc::new(IntervalMonoid), "randomized"),
        (Arc::new(WedgeLabel::new(PointedGSet::standard(2), z2()).unwrap()), "exhaustive"),
    ];
    for (m, mode) in &cases {
        let r = check_axioms(m.as_ref(), &cfg);
        ensure(r.pass, || format!("{}: {:?}", r.monoid, r.violations.first()))?;
        ensure(r.budget_exceeded == 0, || format!("{}: rewriting budget exceeded", r.monoid))?;
        ensure(r.mode == *mode, || format!("{}: mode {}", r.monoid, r.mode))?;
        if *mode == "randomized" {
            ensure(r.tuples_checked > 10_000, || format!("{}: {} tuples", r.monoid, r.tuples_checked))?;
        }
    }
    within(start, Duration::from_secs(60)).map(|t| format!("5 monoids at arity 4 in {t}"))
}

/// Separated sets: distinct endpoints on `¼ℤ ∩ [−4, 4]`, random ends.
fn random_separated(rng: &mut ChaCha8Rng) -> IntervalSet {
    let k = rng.gen_range(0..=4);
    let mut ends: Vec<i64> = Vec::new();
    while ends.len() < 2 * k {
        let x = rng.gen_range(-16..=16);
        if !ends.contains(&x) {
            ends.push(x);
        }
    }
    ends.sort_unstable();
    let raw = ends
        .chunks(2)
        .map(|w| Interval::new(frac(w[0], 4), frac(w[1], 4), rng.gen(), rng.gen()).unwrap())
        .collect();
    normalize(raw).unwrap()
}

fn inside(p: &IntervalSet, lo: i64, hi: i64) -> bool {
    p.components().iter().all(|c| *c.lo() > q(lo) && *c.hi() < q(hi))
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let p = random_separated(&mut rng);
        let tp = p.tau().map_err(|e| e.to_string())?;
        ensure(tp.tau().map_err(|e| e.to_string())? == p, || format!("τ∘τ ≠ id on {p}"))?;
        let (a0, b0) = h_t(&p, &Q::zero()).map_err(|e| e.to_string())?;
        ensure(a0 == p && b0 == tp, || format!("h₀ ≠ (P, τP) on {p}"))?;
        let (a1, b1) = h_t(&p, &Q::one()).map_err(|e| e.to_string())?;
        ensure(inside(&a1, 0, 1) && inside(&b1, -1, 0) && a1.is_disjoint(&b1), || {
            format!("h₁ on {p} gives {a1} and {b1}")
        })?;
    }
    let left: Interval = "[0, 1)".parse().unwrap();
    let right: Interval = "[1, 2]".parse().unwrap();
    let glued = union_partial(&[IntervalSet::single(left), IntervalSet::single(right)]);
    ensure(glued == Some(IntervalSet::closed(q(0), q(2))), || format!("[0,1) ∪ [1,2] = {glued:?}"))?;
    Ok("1000 random sets, exact gluing".into())
}

fn string_contexts(copies: usize) -> Vec<PathContext> {
    let mut out = Vec::new();
    for n in [2, 3] {
        let stage = Arc::new(regular_rep(Arc::new(FiniteGroup::cyclic(n)), copies));
        for m in [Arc::new(TableMonoid::cyclic(2)) as Monoid, zero_to_three()] {
            out.push(PathContext::new(m, stage.clone()).unwrap());
        }
    }
    out
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut certified = 0;
    for ctx in string_contexts(1) {
        for sc in bundled_corpus(&ctx, 12).map_err(|e| e.to_string())? {
            ensure(sc.len() <= MAX_PARTICLES, || "corpus entry too large".into())?;
            for (_, label) in sc.particles() {
                let (p, _) = split_label(label).map_err(|e| e.to_string())?;
                ensure(p.len() <= MAX_INTERVALS, || "corpus string has too many intervals".into())?;
            }
            let x = underlying(&sc, &ctx).map_err(|e| e.to_string())?;
            for path in [
                PathSpec::GammaLambda { ctx: ctx.clone(), sc: sc.clone() },
                PathSpec::LambdaGamma { ctx: ctx.clone(), x },
            ] {
                let r = certify_continuity(&path, 64, None);
                let finite = parse_q(&r.lipschitz).is_ok();
                ensure(r.pass && r.endpoint_ok && finite, || format!("{r:?}"))?;
                certified += 1;
            }
            let vanish = certify_continuity(&PathSpec::Vanish { ctx: ctx.clone(), sc: sc.clone() }, 64, None);
            ensure(vanish.audit_ok && vanish.pass, || format!("{vanish:?}"))?;
            let cert = grouplike_certificate(&sc, &ctx).map_err(|e| e.to_string())?;
            let r = certify_continuity(&cert, 64, None);
            ensure(r.pass, || format!("{r:?}"))?;
            let end = cert.eval(&Q::one()).map_err(|e| e.to_string())?;
            ensure(end.is_empty(), || format!("certificate ends at {} particles", end.len()))?;
            certified += 2;
        }
    }
    within(start, Duration::from_secs(120)).map(|t| format!("{certified} paths at N = 64 in {t}"))
}

fn oracle_group(m: &dyn PartialMonoid) -> Result<AbelianGroup, String> {
    let pres = pi0_presentation(m, 4).map_err(|e| e.to_string())?;
    let k = grothendieck_group(&pres).group;
    let (rank, torsion) = oracle::cokernel(&pres.relation_matrix(), pres.generators.len());
    ensure(k.rank == rank && k.torsion == torsion, || format!("{}: {k} against the oracle", m.name()))?;
    Ok(k)
}

fn criterion_4() -> Verdict {
    let free = GroupSubset::new(1, vec![], vec![vec![0], vec![1]]).unwrap();
    ensure(oracle_group(&free)? == AbelianGroup::free(1), || "{0,1} ⊂ Z".into())?;
    ensure(oracle_group(&TableMonoid::cyclic(2))? == AbelianGroup::finite_product(&[2]), || "Z/2".into())?;
    let (z, o, i) = (Some(0), Some(1), Some(2));
    let absorbing =
        TableMonoid::new(vec!["0".into(), "1".into(), "inf".into()], 0, vec![vec![z, o, i], vec![o, i, i], vec![i, i, i]])
            .unwrap();
    ensure(oracle_group(&absorbing)?.is_trivial(), || "absorbing".into())?;
    let groups: [&[i64]; 11] = [&[], &[2], &[3], &[4], &[2, 2], &[5], &[6], &[7], &[8], &[2, 4], &[2, 2, 2]];
    for moduli in groups {
        let a = if moduli.is_empty() {
            GroupSubset::new(1, vec![], vec![vec![0]]).unwrap()
        } else {
            GroupSubset::whole(moduli.to_vec()).unwrap()
        };
        ensure(oracle_group(&a)? == AbelianGroup::finite_product(moduli), || format!("{moduli:?}"))?;
    }
    for ctx in string_contexts(1) {
        let corpus = bundled_corpus(&ctx, 10).map_err(|e| e.to_string())?;
        let r = strings_pi0_check(&ctx, &corpus, 4, 16).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("{:?}", r.failures))?;
    }
    Ok("3 reference monoids, 11 finite groups, string classes".into())
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = oracle::big(&rows);
        let s = smith_normal_form(&a, c);
        s.verify(&a).map_err(|e| format!("{rows:?}: {e}"))?;
        ensure(oracle::det_rational(&s.u).abs() == BigInt::one(), || "U not unimodular".into())?;
        ensure(oracle::det_rational(&s.v).abs() == BigInt::one(), || "V not unimodular".into())?;
        ensure(s.diagonal() == oracle::invariant_factors(&a, c), || format!("{rows:?}: divisors disagree"))?;
    }
    Ok("200 random matrices up to 8x8".into())
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let m = TableMonoid::cyclic(2);
    let a = TotalMonoid::from_partial(&m).map_err(|e| e.to_string())?;
    let one = nerve_homology(&BarCategory::one_object(a.clone()).map_err(|e| e.to_string())?, 1, 1_000_000)
        .map_err(|e| e.to_string())?;
    let k = grothendieck_group(&pi0_presentation(&m, 2).map_err(|e| e.to_string())?).group;
    ensure(one.homology[1] == AbelianGroup::finite_product(&[2]), || format!("H1 = {}", one.homology[1]))?;
    ensure(one.homology[1] == k, || format!("H1 = {} but K = {k}", one.homology[1]))?;
    let id: Vec<usize> = (0..a.len()).collect();
    let two = nerve_homology(&BarCategory::new(a.clone(), &a, &id).map_err(|e| e.to_string())?, 1, 1_000_000)
        .map_err(|e| e.to_string())?;
    ensure(two.homology[0] == AbelianGroup::free(1) && two.homology[1].is_trivial(), || {
        format!("B(A, A): H0 = {}, H1 = {}", two.homology[0], two.homology[1])
    })?;
    within(start, Duration::from_secs(60)).map(|t| format!("H1 = Z/2 = K, B(A, A) acyclic in {t}"))
}

/// Dense configurations: coordinates in `{0, 1}` so that sums collide.
fn dense(rng: &mut ChaCha8Rng, stage: &Arc<UniverseStage>, m: &dyn PartialMonoid) -> LabeledConfig {
    let mut c = LabeledConfig::empty(stage.clone());
    for _ in 0..rng.gen_range(0..=3) {
        let v = (0..stage.dim()).map(|_| q(rng.gen_range(0..=1))).collect();
        let a = m.sample(rng);
        if !m.is_zero(&a) {
            c = c.with_particle(v, a);
        }
    }
    c
}

const EQUIVARIANCE_CASES: usize = 500;

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0usize;
    let err = |e: &dyn std::fmt::Display| e.to_string();
    for ctx in string_contexts(2) {
        let m = ctx.m.as_ref();
        let group = ctx.gadget.stage_in().group().clone();
        let stage = ctx.gadget.stage_in().clone();
        let name = format!("{} over {}", m.name(), group.name());
        let corpus = bundled_corpus(&ctx, EQUIVARIANCE_CASES).map_err(|e| err(&e))?;
        for sc in &corpus {
            let g = rng.gen_range(0..group.order());
            let gsc = g_act(sc, g, ctx.sm.as_ref()).map_err(|e| err(&e))?;
            let lhs = g_act(&lambda(sc, &ctx.gadget, m).map_err(|e| err(&e))?, g, m).map_err(|e| err(&e))?;
            ensure(lhs == lambda(&gsc, &ctx.gadget, m).map_err(|e| err(&e))?, || format!("λ, {name}"))?;
            let lhs = g_act(&tau_inv(sc, &ctx.sm).map_err(|e| err(&e))?, g, ctx.sm.as_ref()).map_err(|e| err(&e))?;
            ensure(lhs == tau_inv(&gsc, &ctx.sm).map_err(|e| err(&e))?, || format!("τ_inv, {name}"))?;
            let x = underlying(sc, &ctx).map_err(|e| err(&e))?;
            let gx = g_act(&x, g, m).map_err(|e| err(&e))?;
            let lhs = g_act(&gamma(&x, &ctx.sm).map_err(|e| err(&e))?, g, ctx.sm.as_ref()).map_err(|e| err(&e))?;
            ensure(lhs == gamma(&gx, &ctx.sm).map_err(|e| err(&e))?, || format!("γ, {name}"))?;
            checks += 3;
        }
        let gadget = IsometryGadget::new(stage.clone());
        for _ in 0..EQUIVARIANCE_CASES {
            let g = rng.gen_range(0..group.order());
            let tuple: Vec<LabeledConfig> = (0..rng.gen_range(1..=3)).map(|_| dense(&mut rng, &stage, m)).collect();
            let moved: Vec<LabeledConfig> = tuple.iter().map(|c| g_act(c, g, m)).collect::<Result<_, _>>().map_err(|e| err(&e))?;
            let lhs = config_partial_sum(&tuple, m)
                .map_err(|e| err(&e))?
                .map(|s| g_act(&s, g, m))
                .transpose()
                .map_err(|e| err(&e))?;
            ensure(lhs == config_partial_sum(&moved, m).map_err(|e| err(&e))?, || format!("partial sum, {name}"))?;
            let (x, y) = (&tuple[0], dense(&mut rng, &stage, m));
            let (gx, gy) = (g_act(x, g, m).map_err(|e| err(&e))?, g_act(&y, g, m).map_err(|e| err(&e))?);
            let lhs = g_act(&hopf_mul(x, &y, &gadget).map_err(|e| err(&e))?, g, m).map_err(|e| err(&e))?;
            ensure(lhs == hopf_mul(&gx, &gy, &gadget).map_err(|e| err(&e))?, || format!("Hopf product, {name}"))?;
            checks += 2;
        }
    }
    Ok(format!("{checks} commuting squares over Z/2 and Z/3 at stage 2"))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.display().to_string()
}

fn criterion_8() -> Verdict {
    let runs: Vec<Vec<String>> = [
        vec!["axioms", "zero_to_three.json"],
        vec!["axioms", "interval.json", "--samples", "2000"],
        vec!["axioms", "corrupted.json"],
        vec!["completion", "absorbing.json"],
        vec!["homotopy", "two_strings.json", "--path", "gamma-lambda"],
        vec!["homotopy", "two_strings.json", "--path", "lambda-gamma"],
        vec!["homotopy", "two_strings.json", "--path", "ht"],
        vec!["homotopy", "two_strings.json", "--path", "vanish"],
        vec!["homotopy", "colliding_isotopy.json", "--path", "isotopy"],
        vec!["certify-inverse", "two_strings.json"],
        vec!["orbit", "orbit_lopsided.json", "group_z2.json"],
        vec!["nerve", "z2.json"],
        vec!["nerve", "z2.json", "--bar"],
        vec!["snf", "snf_2x2.json"],
    ]
    .iter()
    .map(|args| args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }).collect())
    .collect();
    for args in &runs {
        let go = || Command::new(env!("CARGO_BIN_EXE_labstrings")).args(args).output().unwrap();
        let (first, second) = (go(), go());
        ensure(first.stdout == second.stdout && first.status == second.status, || format!("{args:?} differs"))?;
        let report: serde_json::Value = serde_json::from_slice(&first.stdout).map_err(|e| format!("{args:?}: {e}"))?;
        let manifest = &report["manifest"];
        ensure(manifest["command"] == args[0].as_str() && manifest["version"].is_string(), || {
            format!("{args:?}: manifest {manifest}")
        })?;
    }
    Ok(format!("{} commands reproduce byte for byte", runs.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("1 monoid axioms", criterion_1),
        ("2 interval exactness", criterion_2),
        ("3 homotopy certification", criterion_3),
        ("4 Grothendieck groups", criterion_4),
        ("5 SNF certificates", criterion_5),
        ("6 bar nerve", criterion_6),
        ("7 equivariance", criterion_7),
        ("8 determinism", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        match verdict {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                println!("criterion {name}: FAIL ({why})");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
