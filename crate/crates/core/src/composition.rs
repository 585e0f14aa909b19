//! Parallel composition of finite state machines.
//!
//! Shared labels synchronize (every member owning the label must move),
//! private labels interleave. A product state is critical when any of its
//! parts is. Only the accessible part of the product is explored.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fsm::{is_atom, Fsm, Label, StateId};

/// Ordered, named collection of machines composed in parallel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    members: Vec<(String, Fsm)>,
}

impl Network {
    pub fn new(members: Vec<(String, Fsm)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("network has no members"));
        }
        for (i, (name, _)) in members.iter().enumerate() {
            if !is_atom(name) || name.starts_with('#') {
                return Err(Error::invalid(format!("malformed member name `{name}`")));
            }
            if members[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::invalid(format!("duplicate member name `{name}`")));
            }
        }
        Ok(Network { members })
    }

    pub fn members(&self) -> &[(String, Fsm)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|(n, _)| n.as_str())
    }

    pub fn fsms(&self) -> impl Iterator<Item = &Fsm> {
        self.members.iter().map(|(_, m)| m)
    }

    pub fn get(&self, name: &str) -> Option<&Fsm> {
        self.members.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Union of the members' alphabets, sorted.
    pub fn alphabet(&self) -> Vec<Label> {
        union_alphabet(self.fsms())
    }
}

pub(crate) fn union_alphabet<'a>(fsms: impl Iterator<Item = &'a Fsm>) -> Vec<Label> {
    let mut all: Vec<Label> = fsms.flat_map(|m| m.alphabet().iter().cloned()).collect();
    all.sort();
    all.dedup();
    all
}

/// Canonical textual encoding of a product state: `(x1,...,xN)`.
pub fn product_state_name<S: AsRef<str>>(parts: &[S]) -> String {
    let mut out = String::from("(");
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(p.as_ref());
    }
    out.push(')');
    out
}

/// `M1 || M2`, with product states named `(x1,x2)`.
pub fn compose2(m1: &Fsm, m2: &Fsm) -> Fsm {
    product(&[m1, m2])
}

/// `M1 || ... || MN` with product states flattened to N-tuples. A singleton
/// network yields its member unchanged.
pub fn compose_network(n: &Network) -> Fsm {
    let fsms: Vec<&Fsm> = n.fsms().collect();
    if let [only] = fsms.as_slice() {
        return (*only).clone();
    }
    product(&fsms)
}

/// Per-member translation from union-alphabet label index to local label index.
pub(crate) fn label_maps(alphabet: &[Label], fsms: &[&Fsm]) -> Vec<Vec<Option<usize>>> {
    fsms.iter()
        .map(|m| {
            alphabet
                .iter()
                .map(|l| m.label_index(l.as_str()))
                .collect()
        })
        .collect()
}

/// Reachable N-ary synchronous product, explored breadth-first.
fn product(fsms: &[&Fsm]) -> Fsm {
    let alphabet = union_alphabet(fsms.iter().copied());
    let maps = label_maps(&alphabet, fsms);

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |t: Vec<usize>, tuples: &mut Vec<Vec<usize>>, queue: &mut VecDeque<usize>| {
        *index.entry(t.clone()).or_insert_with(|| {
            tuples.push(t);
            queue.push_back(tuples.len() - 1);
            tuples.len() - 1
        })
    };

    let initial_sets: Vec<Vec<usize>> = fsms.iter().map(|m| m.initial().to_vec()).collect();
    let mut initial = Vec::new();
    for t in cartesian(&initial_sets) {
        initial.push(intern(t, &mut tuples, &mut queue));
    }

    let mut transitions = Vec::new();
    while let Some(cur) = queue.pop_front() {
        let tuple = tuples[cur].clone();
        'labels: for (g, _) in alphabet.iter().enumerate() {
            let mut choices: Vec<Vec<usize>> = Vec::with_capacity(fsms.len());
            for (i, m) in fsms.iter().enumerate() {
                match maps[i][g] {
                    Some(l) => {
                        let succ = m.successors(tuple[i], l);
                        if succ.is_empty() {
                            continue 'labels;
                        }
                        choices.push(succ.to_vec());
                    }
                    None => choices.push(vec![tuple[i]]),
                }
            }
            for t in cartesian(&choices) {
                let to = intern(t, &mut tuples, &mut queue);
                transitions.push((cur, g, to));
            }
        }
    }

    let names = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t
                .iter()
                .zip(fsms)
                .map(|(&s, m)| m.state_name(s).as_str())
                .collect();
            StateId::from_trusted(product_state_name(&parts))
        })
        .collect();
    let critical = tuples
        .iter()
        .map(|t| t.iter().zip(fsms).any(|(&s, m)| m.is_critical(s)))
        .collect();
    Fsm::from_parts(names, initial, alphabet, transitions, critical)
}

/// Cartesian product of index lists, in lexicographic order.
pub(crate) fn cartesian(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(sets.len())];
    for set in sets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                set.iter().map(move |&x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::Word;

    fn fixture_a() -> Fsm {
        Fsm::builder()
            .states(["p", "q"])
            .initial(["p"])
            .alphabet(["a", "b"])
            .transition("p", "a", "q")
            .transition("q", "b", "p")
            .critical(["q"])
            .build()
            .unwrap()
    }

    fn fixture_b_with_c() -> Fsm {
        Fsm::builder()
            .states(["r", "s", "t"])
            .initial(["r"])
            .alphabet(["a", "c"])
            .transition("r", "a", "s")
            .transition("r", "a", "t")
            .transition("s", "c", "r")
            .critical(["t"])
            .build()
            .unwrap()
    }

    #[test]
    fn shared_label_synchronizes() {
        let c = compose2(&fixture_a(), &fixture_b_with_c());
        assert_eq!(c.alphabet().len(), 3);
        let succ = c.extended_delta(["(p,r)"], &Word::parse("a").unwrap()).unwrap();
        let names: Vec<&str> = succ.iter().map(StateId::as_str).collect();
        assert_eq!(names, ["(q,s)", "(q,t)"]);
        let qs = c.state_index("(q,s)").unwrap();
        let qt = c.state_index("(q,t)").unwrap();
        assert!(c.is_critical(qs), "q is critical in A");
        assert!(c.is_critical(qt));
        let pr = c.state_index("(p,r)").unwrap();
        assert!(!c.is_critical(pr));
    }

    #[test]
    fn disjoint_alphabets_interleave() {
        let a = fixture_a();
        let d = Fsm::builder()
            .states(["u", "v"])
            .initial(["u"])
            .alphabet(["x", "y"])
            .transition("u", "x", "v")
            .transition("v", "y", "u")
            .build()
            .unwrap();
        let c = compose2(&a, &d);
        // explicit interleaving oracle: every pair is reachable
        assert_eq!(c.state_count(), 4);
        assert_eq!(c.transition_count(), 8);
    }

    #[test]
    fn blocking_when_one_side_cannot_move() {
        // `b` is shared; B-like machine never offers it
        let a = fixture_a();
        let e = Fsm::builder()
            .states(["r", "s"])
            .initial(["r"])
            .alphabet(["a", "b"])
            .transition("r", "a", "s")
            .build()
            .unwrap();
        let c = compose2(&a, &e);
        assert_eq!(c.state_count(), 2);
        assert!(!c.in_language(&Word::parse("a b").unwrap()).unwrap());
    }

    #[test]
    fn singleton_network_is_identity() {
        let a = fixture_a();
        let n = Network::new(vec![("A".into(), a.clone())]).unwrap();
        assert_eq!(compose_network(&n), a);
    }

    #[test]
    fn network_rejects_bad_members() {
        let a = fixture_a();
        assert!(Network::new(vec![]).is_err());
        assert!(Network::new(vec![("A".into(), a.clone()), ("A".into(), a.clone())]).is_err());
        assert!(Network::new(vec![("A B".into(), a)]).is_err());
    }

    #[test]
    fn cartesian_order() {
        let c = cartesian(&[vec![0, 1], vec![5, 6]]);
        assert_eq!(c, vec![vec![0, 5], vec![0, 6], vec![1, 5], vec![1, 6]]);
        assert_eq!(cartesian(&[vec![0], vec![]]), Vec::<Vec<usize>>::new());
    }
}
