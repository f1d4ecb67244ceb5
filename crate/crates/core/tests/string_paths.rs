use std::sync::Arc;
use std::time::Instant;

use labstrings::config::g_act;
use labstrings::group_rep::{regular_rep, FiniteGroup};
use labstrings::monoid::{GroupSubset, Monoid, TableMonoid};
use labstrings::rational::q;
use labstrings::strings::corpus::{bundled_corpus, underlying};
use labstrings::strings::path::PathContext;
use labstrings::strings::{certify_continuity, gamma, grouplike_certificate, lambda, tau_inv, PathSpec};

fn contexts() -> Vec<PathContext> {
    let mut out = Vec::new();
    for n in [2, 3] {
        let stage = Arc::new(regular_rep(Arc::new(FiniteGroup::cyclic(n)), 1));
        let labels: [Monoid; 2] = [
            Arc::new(TableMonoid::cyclic(2)),
            Arc::new(GroupSubset::new(1, vec![], (0..4).map(|x| vec![x]).collect()).unwrap()),
        ];
        for m in labels {
            out.push(PathContext::new(m, stage.clone()).unwrap());
        }
    }
    out
}

#[test]
fn corpus_paths_certify_at_64_samples() {
    let start = Instant::now();
    for ctx in contexts() {
        for sc in bundled_corpus(&ctx, 10).unwrap() {
            let x = underlying(&sc, &ctx).unwrap();
            let paths = [
                PathSpec::GammaLambda { ctx: ctx.clone(), sc: sc.clone() },
                PathSpec::LambdaGamma { ctx: ctx.clone(), x },
                PathSpec::Vanish { ctx: ctx.clone(), sc: sc.clone() },
                grouplike_certificate(&sc, &ctx).unwrap(),
            ];
            for path in &paths {
                let r = certify_continuity(path, 64, None);
                assert!(r.pass, "{} on {} particles: {r:?}", path.kind(), sc.len());
                assert!(r.endpoint_ok && r.audit_ok);
            }
            assert!(paths[3].eval(&q(1)).unwrap().is_empty());
        }
    }
    eprintln!("corpus certification took {:?}", start.elapsed());
}

#[test]
fn string_maps_commute_with_the_action() {
    for ctx in contexts() {
        let group = ctx.gadget.stage_in().group().clone();
        for sc in bundled_corpus(&ctx, 10).unwrap() {
            let x = underlying(&sc, &ctx).unwrap();
            for g in 0..group.order() {
                let gsc = g_act(&sc, g, ctx.sm.as_ref()).unwrap();
                assert_eq!(
                    g_act(&lambda(&sc, &ctx.gadget, ctx.m.as_ref()).unwrap(), g, ctx.m.as_ref()).unwrap(),
                    lambda(&gsc, &ctx.gadget, ctx.m.as_ref()).unwrap()
                );
                assert_eq!(
                    g_act(&tau_inv(&sc, &ctx.sm).unwrap(), g, ctx.sm.as_ref()).unwrap(),
                    tau_inv(&gsc, &ctx.sm).unwrap()
                );
                assert_eq!(
                    g_act(&gamma(&x, &ctx.sm).unwrap(), g, ctx.sm.as_ref()).unwrap(),
                    gamma(&g_act(&x, g, ctx.m.as_ref()).unwrap(), &ctx.sm).unwrap()
                );
            }
        }
    }
}

#[test]
fn induced_map_is_equivariant() {
    use labstrings::config::IsometryGadget;
    use labstrings::group_rep::{coset_gset, PointedGSet};
    use labstrings::monoid::WedgeLabel;
    use labstrings::strings::string_monoid;
    use labstrings::strings::structural::c4_rho;
    use std::collections::BTreeMap;

    for n in [2, 3] {
        let group = Arc::new(FiniteGroup::cyclic(n));
        let stage = Arc::new(regular_rep(group.clone(), 1));
        let gadget = IsometryGadget::new(stage.clone());
        let x = PointedGSet::plain(vec!["*".into(), "a".into(), "b".into()], 0, group.clone());
        let m: Monoid = Arc::new(TableMonoid::cyclic(2));
        let inner = string_monoid(Arc::new(WedgeLabel::new(x.clone(), m.clone()).unwrap())).unwrap();
        let (cosets, _) = coset_gset(group.clone(), &[0]).unwrap();
        let big = PointedGSet::smash(&cosets, &x).unwrap();
        let outer = string_monoid(Arc::new(WedgeLabel::new(big, m.clone()).unwrap())).unwrap();
        let ctx = PathContext::new(Arc::new(WedgeLabel::new(x.clone(), m).unwrap()), stage.clone()).unwrap();
        let corpus = bundled_corpus(&ctx, 6).unwrap();
        let f: BTreeMap<usize, _> = cosets.non_basepoints().map(|s| (s, corpus[s % corpus.len()].clone())).collect();
        let rho = c4_rho(&f, &[0], &x, &gadget).unwrap();
        for g in 0..n {
            let gi = group.inv(g);
            let moved: BTreeMap<usize, _> = cosets
                .non_basepoints()
                .map(|s| (s, g_act(&f[&cosets.act(gi, s)], g, &inner).unwrap()))
                .collect();
            assert_eq!(g_act(&rho, g, &outer).unwrap(), c4_rho(&moved, &[0], &x, &gadget).unwrap());
        }
    }
}
