use std::collections::BTreeMap;
use std::sync::Arc;

use labstrings::config::{
    config_partial_sum, delta_map, g_act, hopf_mul, psi, random_config, IsometryGadget, LabeledConfig,
};
use labstrings::group_rep::{regular_rep, FiniteGroup, PointedGSet, UniverseStage};
use labstrings::monoid::{GroupSubset, PartialMonoid};
use labstrings::rational::{frac, q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `{-1, 0, 1} ⊂ ℤ` with `ℤ/2` acting by negation.
fn signed() -> (Arc<UniverseStage>, GroupSubset) {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let m = GroupSubset::new(1, vec![], vec![vec![-1], vec![0], vec![1]])
        .unwrap()
        .with_action(g.clone(), vec![vec![0, 1, 2], vec![2, 1, 0]])
        .unwrap();
    (Arc::new(regular_rep(g, 2)), m)
}

/// `ℤ/2 × ℤ/2` with `ℤ/3` cycling its three nonzero elements.
fn klein() -> (Arc<UniverseStage>, GroupSubset) {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let m = GroupSubset::whole(vec![2, 2])
        .unwrap()
        .with_action(g.clone(), vec![vec![0, 1, 2, 3], vec![0, 3, 1, 2], vec![0, 2, 3, 1]])
        .unwrap();
    (Arc::new(regular_rep(g, 2)), m)
}

fn setups() -> Vec<(Arc<UniverseStage>, GroupSubset)> {
    vec![signed(), klein()]
}

/// Coordinates drawn from a small range so that supports overlap often.
fn dense(rng: &mut ChaCha8Rng, stage: &Arc<UniverseStage>, m: &GroupSubset) -> LabeledConfig {
    let c = random_config(rng, stage.clone(), m, 3);
    let squeezed: Vec<_> = c
        .particles()
        .iter()
        .map(|(p, a)| (p.iter().map(|x| if *x > q(0) { q(1) } else { q(0) }).collect(), a.clone()))
        .collect::<BTreeMap<_, _>>()
        .into_iter()
        .collect();
    labstrings::config::make_config(stage.clone(), squeezed, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 250, ..ProptestConfig::default() })]

    #[test]
    fn partial_sums_are_partition_coherent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (stage, m) in setups() {
            let (a, b, c) = (dense(&mut rng, &stage, &m), dense(&mut rng, &stage, &m), dense(&mut rng, &stage, &m));
            // every partition of three into a summable pair and a singleton
            let whole = config_partial_sum(&[a.clone(), b.clone(), c.clone()], &m).unwrap();
            for (x, y, z) in [(&a, &b, &c), (&b, &c, &a), (&a, &c, &b)] {
                if let Some(xy) = config_partial_sum(&[x.clone(), y.clone()], &m).unwrap() {
                    prop_assert_eq!(&config_partial_sum(&[xy, z.clone()], &m).unwrap(), &whole);
                }
            }
            prop_assert_eq!(config_partial_sum(&[a.clone()], &m).unwrap(), Some(a.clone()));
            prop_assert_eq!(
                config_partial_sum(&[a.clone(), b.clone()], &m).unwrap(),
                config_partial_sum(&[b, a], &m).unwrap()
            );
        }
    }

    #[test]
    fn action_commutes_with_sums_and_hopf_mul(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (stage, m) in setups() {
            let gadget = IsometryGadget::new(stage.clone());
            let (x, y) = (dense(&mut rng, &stage, &m), dense(&mut rng, &stage, &m));
            let sum = config_partial_sum(&[x.clone(), y.clone()], &m).unwrap();
            let mu = hopf_mul(&x, &y, &gadget).unwrap();
            for g in 0..stage.group().order() {
                let (gx, gy) = (g_act(&x, g, &m).unwrap(), g_act(&y, g, &m).unwrap());
                let moved = sum.as_ref().map(|s| g_act(s, g, &m).unwrap());
                prop_assert_eq!(moved, config_partial_sum(&[gx.clone(), gy.clone()], &m).unwrap());
                prop_assert_eq!(g_act(&mu, g, &m).unwrap(), hopf_mul(&gx, &gy, &gadget).unwrap());
                for h in 0..stage.group().order() {
                    let gh = stage.group().mul(g, h);
                    prop_assert_eq!(g_act(&g_act(&x, h, &m).unwrap(), g, &m).unwrap(), g_act(&x, gh, &m).unwrap());
                }
            }
            let mut labels = x.label_multiset();
            labels.extend(y.label_multiset());
            labels.sort();
            prop_assert_eq!(mu.label_multiset(), labels);
            prop_assert_eq!(mu.len(), x.len() + y.len());
        }
    }

    #[test]
    fn delta_recovers_each_summand_of_psi(seed in any::<u64>(), points in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (stage, m) = signed();
        let gadget = IsometryGadget::new(stage.clone());
        let set = PointedGSet::standard(points);
        let f: BTreeMap<usize, LabeledConfig> =
            set.non_basepoints().map(|p| (p, random_config(&mut rng, stage.clone(), &m, 3))).collect();
        let out = psi(&set, &f, &gadget).unwrap();
        let parts: Vec<LabeledConfig> = set.non_basepoints().map(|p| delta_map(&out, &set, p)).collect();
        for (p, part) in set.non_basepoints().zip(&parts) {
            prop_assert_eq!(part.label_multiset(), f[&p].label_multiset());
        }
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                prop_assert!(a.particles().iter().all(|(v, _)| b.label_at(v).is_none()));
            }
        }
    }
}

#[test]
fn isometry_path_is_orthogonal_and_equivariant() {
    for n in [2, 3] {
        let stage = Arc::new(regular_rep(Arc::new(FiniteGroup::cyclic(n)), 2));
        let gadget = IsometryGadget::new(stage.clone());
        gadget.validate().unwrap();
        for k in 0..=12 {
            let t = frac(k, 12);
            let l = gadget.path_matrix(&t);
            assert!(l.transpose().mul(&l).is_identity(), "t = {t}");
            for g in 0..n {
                let lhs = l.mul(stage.rep().matrix(g));
                let rhs = gadget.stage_out().rep().matrix(g).mul(&l);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn stage_mismatch_is_an_error() {
    let (stage, m) = signed();
    let other = Arc::new(regular_rep(stage.group().clone(), 3));
    let a = LabeledConfig::empty(stage);
    let b = LabeledConfig::empty(other);
    assert!(config_partial_sum(&[a, b], &m).is_err());
    assert!(m.group().is_some());
}
