mod common;

use common::{random_network, rng, with_duplicates, NetShape, Shape};
use critnet::{run_algorithm1, run_algorithm3, run_onthefly, DEFAULT_BUDGET};
use proptest::prelude::*;
use rand::Rng;

fn shape() -> NetShape {
    NetShape {
        min_members: 1,
        max_members: 3,
        fsm: Shape {
            max_states: 4,
            ..Shape::default()
        },
        ..NetShape::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn all_algorithms_agree(seed: u64) {
        let mut r = rng(seed);
        let base = random_network(&mut r, &shape());
        let extra = r.gen_range(0..=2);
        let n = if extra > 0 { with_duplicates(&mut r, &base, extra) } else { base };
        let v1 = run_algorithm1(&n, DEFAULT_BUDGET).unwrap().verdict.observable;
        let v2 = run_onthefly(&n).unwrap().verdict.observable;
        let v3 = run_algorithm3(&n, false, DEFAULT_BUDGET).unwrap().verdict.observable;
        prop_assert_eq!(v1, v2);
        prop_assert_eq!(v1, v3);
    }

    #[test]
    fn ledgers_are_deterministic(seed: u64) {
        let n = random_network(&mut rng(seed), &shape());
        let a = run_algorithm3(&n, true, DEFAULT_BUDGET).unwrap();
        let b = run_algorithm3(&n, true, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(a.ledger_reduced, b.ledger_reduced);
        prop_assert_eq!(a.ledger_baseline, b.ledger_baseline);
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn duplicates_never_increase_cost(seed: u64) {
        let mut r = rng(seed);
        let base = random_network(&mut r, &shape());
        let extra = r.gen_range(1..=2);
        let n = with_duplicates(&mut r, &base, extra);
        let report = run_algorithm3(&n, true, DEFAULT_BUDGET).unwrap();
        let baseline = report.ledger_baseline.unwrap();
        prop_assert!(report.ledger_reduced.space() <= baseline.space());
        prop_assert!(report.ledger_reduced.time() <= baseline.time());
    }

    #[test]
    fn aliased_locals_follow_their_class(seed: u64) {
        let mut r = rng(seed);
        let base = random_network(&mut r, &shape());
        let n = with_duplicates(&mut r, &base, 1);
        let report = run_algorithm3(&n, false, DEFAULT_BUDGET).unwrap();
        if let Some(locals) = &report.locals {
            prop_assert_eq!(locals.len(), n.len());
            for (i, (name, obs)) in locals.iter().enumerate() {
                prop_assert_eq!(name, &n.members()[i].0);
                let rep = report.classes.representative_of(i);
                prop_assert_eq!(obs, &locals[rep].1);
            }
        }
    }
}
