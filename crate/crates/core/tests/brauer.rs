use crossloop::brauer::{
    apply, check_bn_relation, check_rcheck_unitarity, check_vn_invariance, check_yang_baxter, tprime_apply, OperatorSpec,
    PatternVector,
};
use crossloop::linkpat::LinkPattern;
use crossloop::points::generic_points;
use crossloop::poly::{rat, Rational};
use num_traits::One;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-14i64..=14, 2i64..=31).prop_map(|(a, b)| rat(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn yang_baxter_and_unitarity(n in 1usize..=3, u in rational(), v in rational()) {
        let r = check_yang_baxter(n, &u, &v);
        prop_assert!(r.pass, "{}", r.line());
    }

    #[test]
    fn rcheck_is_unitary_and_preserves_forms(n in 1usize..=3, site in 0usize..6, z in rational(), w in rational()) {
        let i = site % (2 * n) + 1;
        prop_assume!(z != w);
        for r in [
            check_rcheck_unitarity(n, i, &z, &w).unwrap(),
            check_vn_invariance(n, i, &z, &w).unwrap(),
        ] {
            prop_assert!(r.pass, "{}", r.line());
        }
        if i != n && i != 2 * n {
            let r = check_bn_relation(n, i, &z, &w).unwrap();
            prop_assert!(r.pass, "{}", r.line());
        }
    }

    #[test]
    fn tprime_is_linear(n in 1usize..=3, seed in any::<u64>(), a in rational(), b in rational()) {
        let z = &generic_points(2 * n, 1, seed)[0];
        let pats = LinkPattern::enumerate(n);
        let x = PatternVector::basis(&pats[0], a.clone());
        let y = PatternVector::basis(&pats[pats.len() - 1], b.clone());
        let lhs = tprime_apply(n, z, &x.add(&y)).unwrap();
        let rhs = tprime_apply(n, z, &x).unwrap().add(&tprime_apply(n, z, &y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn rotation_has_order_two_n() {
    for n in 1..=3 {
        for p in LinkPattern::enumerate(n) {
            let mut v = PatternVector::basis(&p, Rational::one());
            for _ in 0..2 * n {
                v = apply(&OperatorSpec::Rotate, &v).unwrap();
            }
            assert_eq!(v, PatternVector::basis(&p, Rational::one()));
        }
    }
}
