use crossloop::linkpat::{permutation_patterns, word_table, LinkPattern, PermHat};
use proptest::prelude::*;

fn pattern() -> impl Strategy<Value = LinkPattern> {
    (1usize..=5, any::<prop::sample::Index>()).prop_map(|(n, ix)| {
        let all = LinkPattern::enumerate(n);
        ix.get(&all).clone()
    })
}

fn pattern_and_site() -> impl Strategy<Value = (LinkPattern, usize)> {
    pattern().prop_flat_map(|p| {
        let m = p.size();
        (Just(p), 1..=m)
    })
}

proptest! {
    #[test]
    fn rotation_has_order_two_n(p in pattern()) {
        let mut q = p.clone();
        for _ in 0..p.size() {
            q = q.rotate();
        }
        prop_assert_eq!(q, p);
    }

    #[test]
    fn reflection_is_an_involution(p in pattern()) {
        prop_assert_eq!(p.reflect().reflect(), p);
    }

    #[test]
    fn symmetries_preserve_crossings(p in pattern()) {
        prop_assert_eq!(p.rotate().crossings(), p.crossings());
        prop_assert_eq!(p.reflect().crossings(), p.crossings());
    }

    #[test]
    fn f_changes_crossings_by_one((p, i) in pattern_and_site()) {
        let q = p.apply_f(i);
        let delta = p.crossings().abs_diff(q.crossings());
        if p.has_arch(i) {
            prop_assert_eq!(&q, &p);
        } else {
            prop_assert_eq!(delta, 1);
        }
        prop_assert_eq!(p.apply_f(i).apply_f(i), p);
    }

    #[test]
    fn e_creates_the_arch_and_is_idempotent((p, i) in pattern_and_site()) {
        let q = p.apply_e(i);
        prop_assert!(q.has_arch(i));
        prop_assert_eq!(q.apply_e(i), q.clone());
        prop_assert!(q.preimages_e(i).iter().all(|r| r.apply_e(i) == q));
    }

    #[test]
    fn text_and_json_round_trip(p in pattern()) {
        prop_assert_eq!(LinkPattern::parse(&p.to_string()).unwrap(), p.clone());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<LinkPattern>(&json).unwrap(), p);
    }

    #[test]
    fn perm_hat_round_trip(perm in (1usize..=6).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())) {
        let hat = PermHat::new(perm).unwrap();
        let p = LinkPattern::from_perm_hat(&hat);
        prop_assert!(p.is_permutation_pattern());
        prop_assert_eq!(p.perm_hat().unwrap(), hat.clone());
        prop_assert_eq!(hat.inverse().inverse(), hat);
    }
}

#[test]
fn words_reach_every_pattern_once() {
    for n in 1..=4 {
        let table = word_table(n);
        assert_eq!(table.len(), LinkPattern::enumerate(n).len());
        for (p, w) in &table {
            assert_eq!(w.replay(n).unwrap(), *p);
        }
    }
}

#[test]
fn permutation_patterns_count() {
    let factorial = [1, 1, 2, 6, 24, 120];
    for n in 1..=5 {
        assert_eq!(permutation_patterns(n).len(), factorial[n]);
    }
}
