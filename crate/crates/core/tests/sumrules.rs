use crossloop::sumrules::{
    determinant, homogeneous_by_determinant, homogeneous_by_pfaffian, homogeneous_number, lgv_count, pfaffian,
    pfaffian_by_matchings, random_skew,
};
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #[test]
    fn pfaffian_squares_to_determinant(half in 1usize..=4, seed in any::<u64>()) {
        let m = random_skew(2 * half, seed);
        let pf = pfaffian(&m);
        prop_assert_eq!(&pf * &pf, determinant(m.rows()));
        prop_assert_eq!(pfaffian_by_matchings(&m), pf);
    }
}

#[test]
fn homogeneous_routes_agree() {
    for n in 1..=7 {
        assert_eq!(homogeneous_by_determinant(n), homogeneous_by_pfaffian(n), "n={n}");
    }
    for n in 1..=4 {
        assert_eq!(BigInt::from(lgv_count(n)), homogeneous_number(n), "n={n}");
    }
}
