mod common;

use std::sync::Arc;

use common::oracle;
use labstrings::completion::homology::{nerve_homology, BarCategory, TotalMonoid};
use labstrings::completion::snf::det_bareiss;
use labstrings::completion::{
    grothendieck_group, pi0_presentation, smith_normal_form, strings_pi0_check, AbelianGroup, MonoidPresentation,
};
use labstrings::group_rep::{regular_rep, FiniteGroup};
use labstrings::monoid::{GroupSubset, Monoid, PartialMonoid, TableMonoid};
use labstrings::strings::corpus::bundled_corpus;
use labstrings::strings::path::PathContext;
use num::{BigInt, One, Signed};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng) -> (Vec<Vec<BigInt>>, usize) {
    let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
    let rows = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect::<Vec<Vec<i64>>>();
    (oracle::big(&rows), c)
}

#[test]
fn smith_forms_of_random_matrices_carry_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (a, cols) = random_matrix(&mut rng);
        let s = smith_normal_form(&a, cols);
        s.verify(&a).unwrap();
        assert_eq!(oracle::det_rational(&s.u).abs(), BigInt::one());
        assert_eq!(oracle::det_rational(&s.v).abs(), BigInt::one());
        assert_eq!(s.diagonal(), oracle::invariant_factors(&a, cols));
    }
}

#[test]
fn bareiss_agrees_with_rational_elimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 1..=7 {
        let rows = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect::<Vec<Vec<i64>>>();
        let a = oracle::big(&rows);
        assert_eq!(det_bareiss(&a), oracle::det_rational(&a));
    }
}

fn absorbing() -> TableMonoid {
    let (z, o, i) = (Some(0), Some(1), Some(2));
    TableMonoid::new(vec!["0".into(), "1".into(), "inf".into()], 0, vec![vec![z, o, i], vec![o, i, i], vec![i, i, i]])
        .unwrap()
}

fn against_oracle(m: &dyn PartialMonoid, arity: usize) -> AbelianGroup {
    let pres = pi0_presentation(m, arity).unwrap();
    let k = grothendieck_group(&pres).group;
    let (rank, torsion) = oracle::cokernel(&pres.relation_matrix(), pres.generators.len());
    assert_eq!((k.rank, k.torsion.clone()), (rank, torsion), "{}", m.name());
    k
}

/// Every abelian group of order at most 8, by its moduli.
fn small_abelian() -> Vec<Vec<i64>> {
    vec![
        vec![],
        vec![2],
        vec![3],
        vec![4],
        vec![2, 2],
        vec![5],
        vec![6],
        vec![7],
        vec![8],
        vec![2, 4],
        vec![2, 2, 2],
    ]
}

/// `A` as the full subset of itself; the trivial group is `{0} ⊂ ℤ`.
fn whole(moduli: &[i64]) -> GroupSubset {
    if moduli.is_empty() {
        GroupSubset::new(1, vec![], vec![vec![0]]).unwrap()
    } else {
        GroupSubset::whole(moduli.to_vec()).unwrap()
    }
}

#[test]
fn grothendieck_groups_of_the_reference_monoids() {
    let free = GroupSubset::new(1, vec![], vec![vec![0], vec![1]]).unwrap();
    assert_eq!(against_oracle(&free, 4), AbelianGroup::free(1));
    assert_eq!(against_oracle(&TableMonoid::cyclic(2), 4).to_string(), "Z/2");
    assert!(against_oracle(&absorbing(), 4).is_trivial());
    for moduli in small_abelian() {
        let a = whole(&moduli);
        assert_eq!(against_oracle(&a, 4), AbelianGroup::finite_product(&moduli), "{moduli:?}");
    }
}

#[test]
fn raising_the_arity_bound_is_stable_on_the_examples() {
    let examples: Vec<Monoid> = vec![
        Arc::new(GroupSubset::new(1, vec![], (0..4).map(|x| vec![x]).collect()).unwrap()),
        Arc::new(GroupSubset::new(1, vec![], vec![vec![-1], vec![0], vec![1]]).unwrap()),
        Arc::new(TableMonoid::cyclic(3)),
        Arc::new(absorbing()),
        Arc::new(GroupSubset::whole(vec![2, 2]).unwrap()),
    ];
    for m in examples {
        let low = grothendieck_group(&pi0_presentation(m.as_ref(), 4).unwrap()).group;
        let high = grothendieck_group(&pi0_presentation(m.as_ref(), 5).unwrap()).group;
        assert_eq!(low, high, "{}", m.name());
    }
}

fn shuffled(p: &MonoidPresentation, seed: u64, dup: usize) -> MonoidPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relations = p.relations.clone();
    for _ in 0..dup {
        if !relations.is_empty() {
            let i = rng.gen_range(0..relations.len());
            relations.push(relations[i].clone());
        }
    }
    for i in (1..relations.len()).rev() {
        relations.swap(i, rng.gen_range(0..=i));
    }
    MonoidPresentation {
        relations,
        ..p.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn completion_ignores_relation_order_and_repeats(seed in any::<u64>(), dup in 0usize..6, which in 0usize..11) {
        let moduli = &small_abelian()[which];
        let p = pi0_presentation(&whole(moduli), 3).unwrap();
        prop_assert_eq!(grothendieck_group(&shuffled(&p, seed, dup)).group, grothendieck_group(&p).group);
    }
}

#[test]
fn bar_nerve_matches_the_grothendieck_group() {
    let z2 = TableMonoid::cyclic(2);
    let a = TotalMonoid::from_partial(&z2).unwrap();
    let one = nerve_homology(&BarCategory::one_object(a.clone()).unwrap(), 1, 1_000_000).unwrap();
    let k = grothendieck_group(&pi0_presentation(&z2, 2).unwrap()).group;
    assert_eq!(one.homology[1], k);
    let id: Vec<usize> = (0..a.len()).collect();
    let two = nerve_homology(&BarCategory::new(a.clone(), &a, &id).unwrap(), 1, 1_000_000).unwrap();
    assert_eq!(two.homology[0], AbelianGroup::free(1));
    assert!(two.homology[1].is_trivial());
    for moduli in [vec![3], vec![2, 2], vec![4]] {
        let m = GroupSubset::whole(moduli.clone()).unwrap();
        let bar = nerve_homology(&BarCategory::one_object(TotalMonoid::from_partial(&m).unwrap()).unwrap(), 1, 1_000_000)
            .unwrap();
        assert_eq!(bar.homology[1], AbelianGroup::finite_product(&moduli));
    }
}

#[test]
fn strings_classes_form_a_group_on_the_corpus() {
    for n in [2, 3] {
        let stage = Arc::new(regular_rep(Arc::new(FiniteGroup::cyclic(n)), 1));
        let labels: [Monoid; 2] = [
            Arc::new(TableMonoid::cyclic(2)),
            Arc::new(GroupSubset::new(1, vec![], (0..4).map(|x| vec![x]).collect()).unwrap()),
        ];
        for m in labels {
            let ctx = PathContext::new(m, stage.clone()).unwrap();
            let corpus = bundled_corpus(&ctx, 10).unwrap();
            let r = strings_pi0_check(&ctx, &corpus, 4, 16).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
