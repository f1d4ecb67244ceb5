use labstrings::interval::{
    alpha, alpha_t, h_t, normalize, symdiff_distance, union_partial, vanish_path, Interval, IntervalSet, MonotoneMap,
};
use labstrings::rational::{frac, q, Q};
use num::{One, Signed, Zero};
use proptest::prelude::*;

/// Canonical separated sets with endpoints on the grid `ℤ/4 ∩ [-4, 4]`,
/// built from distinct sorted endpoints so no two components touch.
fn separated(max_components: usize) -> impl Strategy<Value = IntervalSet> {
    (
        proptest::sample::subsequence((-16i64..=16).collect::<Vec<_>>(), 0..=2 * max_components),
        proptest::collection::vec(any::<(bool, bool)>(), max_components),
    )
        .prop_map(|(mut ends, flags)| {
            ends.truncate(ends.len() / 2 * 2);
            let raw = ends
                .chunks(2)
                .zip(flags)
                .map(|(w, (lc, hc))| Interval::new(frac(w[0], 4), frac(w[1], 4), lc, hc).unwrap())
                .collect();
            normalize(raw).unwrap()
        })
}

/// Possibly touching sets from unit cells of `[0, 6)`.
fn cells() -> impl Strategy<Value = IntervalSet> {
    proptest::collection::vec((0i64..6, any::<bool>(), any::<bool>()), 0..4).prop_map(|cs| {
        let mut raw: Vec<Interval> = Vec::new();
        for (i, lc, hc) in cs {
            let iv = Interval::new(q(i), q(i + 1), lc, hc).unwrap();
            if raw.iter().all(|r| !r.intersects(&iv)) {
                raw.push(iv);
            }
        }
        normalize(raw).unwrap()
    })
}

fn unit_times() -> impl Strategy<Value = Q> {
    (0i64..=8).prop_map(|k| frac(k, 8))
}

fn inside(set: &IntervalSet, lo: &Q, hi: &Q) -> bool {
    set.components().iter().all(|c| c.lo() > lo && c.hi() < hi)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn tau_is_an_involution(p in separated(4)) {
        let once = p.tau().unwrap();
        prop_assert_eq!(once.tau().unwrap(), p.clone());
        prop_assert_eq!(once.euler_char(), -p.euler_char());
        prop_assert_eq!(once.measure(), p.measure());
    }

    #[test]
    fn superimposition_is_commutative(a in cells(), b in cells()) {
        prop_assert_eq!(union_partial(&[a.clone(), b.clone()]), union_partial(&[b, a]));
    }

    #[test]
    fn superimposition_is_partition_coherent(a in cells(), b in cells(), c in cells()) {
        let whole = union_partial(&[a.clone(), b.clone(), c.clone()]);
        let grouped = union_partial(&[a.clone(), c.clone()]).and_then(|ac| union_partial(&[ac, b.clone()]));
        prop_assert_eq!(whole.clone(), grouped);
        if let Some(w) = whole {
            prop_assert_eq!(w.measure(), a.measure() + b.measure() + c.measure());
        }
    }

    #[test]
    fn h_t_is_additive(p in separated(3), other in separated(3), t in unit_times()) {
        let Some(sum) = union_partial(&[p.clone(), other.clone()]) else { return Ok(()) };
        if !sum.is_separated() {
            return Ok(());
        }
        let (a0, a1) = h_t(&p, &t).unwrap();
        let (b0, b1) = h_t(&other, &t).unwrap();
        let (s0, s1) = h_t(&sum, &t).unwrap();
        prop_assert_eq!(Some(s0), union_partial(&[a0, b0]));
        prop_assert_eq!(Some(s1), union_partial(&[a1, b1]));
    }

    #[test]
    fn h_t_endpoints(p in separated(4)) {
        let (x, y) = h_t(&p, &Q::zero()).unwrap();
        prop_assert_eq!(&x, &p);
        prop_assert_eq!(y, p.tau().unwrap());
        let (x, y) = h_t(&p, &Q::one()).unwrap();
        prop_assert!(inside(&x, &Q::zero(), &Q::one()));
        prop_assert!(inside(&y, &-Q::one(), &Q::zero()));
        prop_assert!(x.is_disjoint(&y));
    }

    #[test]
    fn alpha_t_keeps_disjoint_sets_disjoint(a in cells(), b in cells(), t in unit_times()) {
        if !a.is_disjoint(&b) {
            return Ok(());
        }
        let map = MonotoneMap::AlphaT(t);
        prop_assert!(a.pushforward(&map).unwrap().is_disjoint(&b.pushforward(&map).unwrap()));
    }

    #[test]
    fn symmetric_difference_is_a_metric(a in cells(), b in cells(), c in cells()) {
        let (ab, bc, ac) = (symdiff_distance(&a, &b), symdiff_distance(&b, &c), symdiff_distance(&a, &c));
        prop_assert!(ac <= &ab + &bc);
        prop_assert_eq!(ab.clone(), symdiff_distance(&b, &a));
        prop_assert!(!ab.is_negative());
        prop_assert!(symdiff_distance(&a, &a).is_zero());
    }

    #[test]
    fn vanishing_is_lipschitz_and_keeps_euler_characteristic(p in separated(3)) {
        let n = 64i64;
        let k = p.len() as i64;
        let (x, y) = h_t(&p, &Q::one()).unwrap();
        let mut prev = vanish_path(&p, &Q::zero()).unwrap();
        prop_assert_eq!(Some(prev.clone()), union_partial(&[x, y]));
        for i in 1..=n {
            let u = frac(i, n);
            let cur = vanish_path(&p, &u).unwrap();
            prop_assert!(symdiff_distance(&prev, &cur) <= frac(4 * k, n));
            prop_assert_eq!(cur.euler_char(), 0);
            prev = cur;
        }
        prop_assert!(prev.is_empty());
    }
}

#[test]
fn alpha_is_monotone_onto_the_unit_interval() {
    let pts: Vec<Q> = (-40..=40).map(|i| frac(i * i * i, 7)).collect();
    for w in pts.windows(2) {
        assert!(alpha(&w[0]) < alpha(&w[1]));
        assert!(alpha(&w[0]).is_positive() && alpha(&w[0]) < Q::one());
    }
    assert_eq!(alpha(&Q::zero()), frac(1, 2));
    assert_eq!(alpha(&-q(2)) + alpha(&q(2)), Q::one());
    assert_eq!(alpha_t(&q(3), &Q::zero()), q(3));
}
