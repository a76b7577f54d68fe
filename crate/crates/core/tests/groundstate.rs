//! Symbolic ground states against the pointwise solver and the operator identities.

use std::sync::OnceLock;

use crossloop::groundstate::{build, psi_pi0, psi_pi0_at, GroundState};
use crossloop::pointwise::ground_state_at;
use crossloop::points::generic_points;
use proptest::prelude::*;

fn ground(n: usize) -> &'static GroundState {
    static CELLS: [OnceLock<GroundState>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CELLS[n - 1].get_or_init(|| build(n).expect("build succeeds"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pointwise_matches_symbolic(n in 1usize..=3, seed in any::<u64>()) {
        let pt = &generic_points(2 * n, 1, seed)[0];
        let solved = ground_state_at(n, pt).unwrap();
        prop_assert_eq!(solved, ground(n).evaluate(pt));
    }

    #[test]
    fn base_entry_factorizes(n in 1usize..=3, seed in any::<u64>()) {
        let pt = &generic_points(2 * n, 1, seed)[0];
        prop_assert_eq!(psi_pi0_at(n, pt), psi_pi0(n).evaluate(pt));
    }
}

#[test]
fn all_identities_hold_up_to_size_three() {
    for n in 1..=3 {
        let gs = ground(n);
        let report = gs.verify(&generic_points(2 * n, 6, 11), 1);
        let failures: Vec<String> = report.hard_failures().map(|r| r.line()).collect();
        assert!(failures.is_empty(), "{failures:?}");
    }
}

#[test]
fn homogeneous_entries_are_positive_integers() {
    for n in 1..=3 {
        let gs = ground(n);
        assert!(gs.check_homogeneous_positivity().pass);
        assert_eq!(gs.homogeneous().values().min().map(|v| v.to_string()), Some("1".into()));
    }
}
