use std::collections::BTreeMap;

use crossloop::degrees::{
    bidegree_from_schubert, bidegree_table, build_delta_recursive, check_bidegrees, delta_family_from_psi,
    refined_poly, refined_poly_pointwise, schubert_family_recursive, schubert_from_delta, verify_families,
};
use crossloop::groundstate::build;

#[test]
fn recursion_agrees_with_ground_state() {
    for n in 1..=3 {
        let gs = build(n).unwrap();
        let recursive = build_delta_recursive(n).unwrap();
        let from_psi = delta_family_from_psi(&gs).unwrap();
        assert_eq!(recursive.entries, from_psi.entries, "n={n}");
        assert_eq!(refined_poly(&gs).unwrap(), refined_poly_pointwise(n).unwrap(), "n={n}");
    }
}

#[test]
fn family_identities_up_to_size_four() {
    let mut deltas = BTreeMap::new();
    for n in 1..=4 {
        deltas.insert(n, build_delta_recursive(n).unwrap());
        let schuberts = schubert_family_recursive(n).unwrap();
        let reports = verify_families(n, &deltas, &schuberts).unwrap();
        let failures: Vec<String> = reports.iter().filter(|r| r.is_hard_failure()).map(|r| r.line()).collect();
        assert!(failures.is_empty(), "n={n}: {failures:?}");
    }
}

#[test]
fn schubert_and_delta_routes_give_the_same_bidegrees() {
    for n in 1..=3 {
        let deltas = build_delta_recursive(n).unwrap();
        let schuberts = schubert_family_recursive(n).unwrap();
        let table = bidegree_table(&deltas).unwrap();
        assert!(check_bidegrees(n, &table).pass);
        for (p, d) in &deltas.entries {
            let s = schubert_from_delta(d, n).unwrap();
            assert_eq!(s, *schuberts.get(p), "n={n}, {p}");
            assert_eq!(bidegree_from_schubert(&s, n).unwrap(), table[p], "n={n}, {p}");
        }
    }
}
