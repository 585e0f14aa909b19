mod common;

use std::collections::BTreeSet;

use common::{naive_delta, names, random_fsm, rng, Shape};
use critnet::{project_word, Fsm, Label, Word};
use proptest::prelude::*;

fn word(m: &Fsm, picks: &[usize]) -> Word {
    picks
        .iter()
        .map(|&i| m.alphabet()[i % m.alphabet().len()].clone())
        .collect()
}

fn strings(w: &Word) -> Vec<String> {
    w.symbols().iter().map(|l| l.to_string()).collect()
}

fn shape() -> Shape {
    Shape {
        max_states: 6,
        max_labels: 3,
        ..Shape::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn extended_delta_splits_at_any_point(seed: u64, u in prop::collection::vec(0usize..4, 0..5), v in prop::collection::vec(0usize..4, 0..5)) {
        let m = random_fsm(&mut rng(seed), &shape());
        let (u, v) = (word(&m, &u), word(&m, &v));
        let init: Vec<String> = m.initial().iter().map(|&s| m.state_name(s).to_string()).collect();
        let whole = m.extended_delta(&init, &u.concat(&v)).unwrap();
        let mid = m.extended_delta(&init, &u).unwrap();
        let staged = m.extended_delta(mid.iter().map(|s| s.as_str()), &v).unwrap();
        prop_assert_eq!(&whole, &staged);
        let oracle = names(&m, &naive_delta(&m, &strings(&u.concat(&v))));
        prop_assert_eq!(whole.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(), oracle);
    }

    #[test]
    fn extended_delta_is_monotone(seed: u64, mask1: u8, mask2: u8, w in prop::collection::vec(0usize..4, 0..6)) {
        let m = random_fsm(&mut rng(seed), &shape());
        let n = m.state_count();
        let small: Vec<String> = (0..n).filter(|i| mask1 >> i & 1 == 1).map(|i| m.state_name(i).to_string()).collect();
        let large: Vec<String> = (0..n).filter(|i| (mask1 | mask2) >> i & 1 == 1).map(|i| m.state_name(i).to_string()).collect();
        let w = word(&m, &w);
        let a = m.extended_delta(&small, &w).unwrap();
        let b = m.extended_delta(&large, &w).unwrap();
        prop_assert!(a.is_subset(&b));
    }

    #[test]
    fn projection_is_idempotent(w in prop::collection::vec(0usize..5, 0..10), keep in prop::collection::btree_set(0usize..5, 0..5)) {
        let pool = ["a", "b", "c", "d", "e"];
        let w: Word = w.iter().map(|&i| Label::new(pool[i]).unwrap()).collect();
        let e: BTreeSet<Label> = keep.iter().map(|&i| Label::new(pool[i]).unwrap()).collect();
        let once = project_word(&w, &e);
        prop_assert_eq!(project_word(&once, &e), once.clone());
        prop_assert!(once.symbols().iter().all(|l| e.contains(l)));
        let expected: Vec<&Label> = w.symbols().iter().filter(|l| e.contains(*l)).collect();
        prop_assert_eq!(once.symbols().iter().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn accessible_is_idempotent(seed: u64) {
        let m = random_fsm(&mut rng(seed), &shape());
        let ac = m.accessible();
        prop_assert_eq!(ac.accessible(), ac.clone());
        prop_assert!(ac.state_count() <= m.state_count());
        prop_assert_eq!(ac.alphabet(), m.alphabet());
    }

    #[test]
    fn language_membership_matches_reachability(seed: u64, w in prop::collection::vec(0usize..4, 0..7)) {
        let m = random_fsm(&mut rng(seed), &shape());
        let w = word(&m, &w);
        let reached = naive_delta(&m, &strings(&w));
        prop_assert_eq!(m.in_language(&w).unwrap(), !reached.is_empty());
        prop_assert_eq!(m.accessible().in_language(&w).unwrap(), !reached.is_empty());
    }
}
