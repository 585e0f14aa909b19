//! Isomorphism, bisimulation with critical-state agreement, and the quotient
//! of a network by bisimilarity of its members.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::composition::{compose_network, Network};
use crate::fsm::Fsm;
use crate::machine::LabeledMachine;
use crate::observer::{build_observer, check_observable, is_critical_observer_for, Verdict};

/// `(label, successor class, multiplicity)`.
type Signature = (usize, usize, usize);

/// A bijection between the accessible states of two machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    /// `(state of m1, state of m2)`, sorted by the first component.
    pub mapping: Vec<(usize, usize)>,
}

impl IsoWitness {
    pub fn image(&self, state: usize) -> Option<usize> {
        self.mapping
            .binary_search_by_key(&state, |&(a, _)| a)
            .ok()
            .map(|i| self.mapping[i].1)
    }
}

/// Searches for an isomorphism between the accessible parts of `m1` and `m2`
/// that maps initial states onto initial states, commutes with transitions
/// and preserves outputs. Alphabets must coincide.
pub fn iso_check<A, B>(m1: &A, m2: &B) -> Option<IsoWitness>
where
    A: LabeledMachine + ?Sized,
    B: LabeledMachine + ?Sized,
{
    if m1.labels() != m2.labels() {
        return None;
    }
    let acc1 = m1.accessible_flags();
    let acc2 = m2.accessible_flags();
    let n1 = acc1.iter().filter(|&&a| a).count();
    let n2 = acc2.iter().filter(|&&a| a).count();
    if n1 != n2 || m1.initial_states().len() != m2.initial_states().len() {
        return None;
    }
    if m1.is_deterministic() && m2.is_deterministic() {
        iso_deterministic(m1, m2)
    } else {
        iso_search(m1, m2, &acc1, &acc2)
    }
}

fn iso_deterministic<A, B>(m1: &A, m2: &B) -> Option<IsoWitness>
where
    A: LabeledMachine + ?Sized,
    B: LabeledMachine + ?Sized,
{
    let mut fwd = vec![None; m1.state_count()];
    let mut bwd = vec![None; m2.state_count()];
    let (i1, i2) = (m1.initial_states()[0], m2.initial_states()[0]);
    fwd[i1] = Some(i2);
    bwd[i2] = Some(i1);
    let mut queue = VecDeque::from([(i1, i2)]);
    while let Some((x, y)) = queue.pop_front() {
        if m1.output(x) != m2.output(y) {
            return None;
        }
        for l in 0..m1.labels().len() {
            match (m1.successors(x, l).first(), m2.successors(y, l).first()) {
                (None, None) => {}
                (Some(&tx), Some(&ty)) => match (fwd[tx], bwd[ty]) {
                    (None, None) => {
                        fwd[tx] = Some(ty);
                        bwd[ty] = Some(tx);
                        queue.push_back((tx, ty));
                    }
                    (Some(a), Some(b)) if a == ty && b == tx => {}
                    _ => return None,
                },
                _ => return None,
            }
        }
    }
    Some(IsoWitness {
        mapping: fwd
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect(),
    })
}

/// Color refinement on the disjoint union of both machines, returning a
/// color per accessible state (index `x` for m1, `n1 + y` for m2).
fn joint_colors<A, B>(m1: &A, m2: &B, acc1: &[bool], acc2: &[bool]) -> Vec<usize>
where
    A: LabeledMachine + ?Sized,
    B: LabeledMachine + ?Sized,
{
    let n1 = m1.state_count();
    let total = n1 + m2.state_count();
    let init1: BTreeSet<usize> = m1.initial_states().into_iter().collect();
    let init2: BTreeSet<usize> = m2.initial_states().into_iter().collect();
    let labels = m1.labels().len();
    let succ = |s: usize, l: usize| -> Vec<usize> {
        if s < n1 {
            m1.successors(s, l).to_vec()
        } else {
            m2.successors(s - n1, l).iter().map(|&t| t + n1).collect()
        }
    };
    let alive = |s: usize| if s < n1 { acc1[s] } else { acc2[s - n1] };
    let mut color: Vec<usize> = (0..total)
        .map(|s| {
            let (init, out) = if s < n1 {
                (init1.contains(&s), m1.output(s))
            } else {
                (init2.contains(&(s - n1)), m2.output(s - n1))
            };
            usize::from(init) * 2 + usize::from(out)
        })
        .collect();
    let mut classes = usize::MAX;
    loop {
        let mut ids: HashMap<(usize, Vec<Signature>), usize> = HashMap::new();
        let mut next = vec![0; total];
        for s in (0..total).filter(|&s| alive(s)) {
            let mut sig: Vec<(usize, usize)> = (0..labels)
                .flat_map(|l| succ(s, l).into_iter().map(move |t| (l, t)))
                .map(|(l, t)| (l, color[t]))
                .collect();
            sig.sort_unstable();
            let mut counted: Vec<Signature> = Vec::new();
            for (l, c) in sig {
                match counted.last_mut() {
                    Some(last) if last.0 == l && last.1 == c => last.2 += 1,
                    _ => counted.push((l, c, 1)),
                }
            }
            let len = ids.len();
            next[s] = *ids.entry((color[s], counted)).or_insert(len);
        }
        color = next;
        if ids.len() == classes {
            return color;
        }
        classes = ids.len();
    }
}

fn iso_search<A, B>(m1: &A, m2: &B, acc1: &[bool], acc2: &[bool]) -> Option<IsoWitness>
where
    A: LabeledMachine + ?Sized,
    B: LabeledMachine + ?Sized,
{
    let n1 = m1.state_count();
    let color = joint_colors(m1, m2, acc1, acc2);
    let left: Vec<usize> = (0..n1).filter(|&s| acc1[s]).collect();
    let right: Vec<usize> = (0..m2.state_count()).filter(|&s| acc2[s]).collect();
    let mut hist: HashMap<usize, isize> = HashMap::new();
    for &x in &left {
        *hist.entry(color[x]).or_default() += 1;
    }
    for &y in &right {
        *hist.entry(color[n1 + y]).or_default() -= 1;
    }
    if hist.values().any(|&v| v != 0) {
        return None;
    }

    struct Search<'a, A: ?Sized, B: ?Sized> {
        m1: &'a A,
        m2: &'a B,
        n1: usize,
        color: Vec<usize>,
        left: Vec<usize>,
        right: Vec<usize>,
        fwd: Vec<Option<usize>>,
        used: Vec<bool>,
    }

    impl<A: LabeledMachine + ?Sized, B: LabeledMachine + ?Sized> Search<'_, A, B> {
        fn consistent(&self, x: usize, y: usize) -> bool {
            let labels = self.m1.labels().len();
            let edge1 = |a: usize, b: usize, l: usize| self.m1.successors(a, l).binary_search(&b).is_ok();
            let edge2 = |a: usize, b: usize, l: usize| self.m2.successors(a, l).binary_search(&b).is_ok();
            (0..labels).all(|l| {
                edge1(x, x, l) == edge2(y, y, l)
                    && self.left.iter().all(|&x2| match self.fwd[x2] {
                        Some(y2) => {
                            edge1(x, x2, l) == edge2(y, y2, l) && edge1(x2, x, l) == edge2(y2, y, l)
                        }
                        None => true,
                    })
            })
        }

        fn extend(&mut self, depth: usize) -> bool {
            if depth == self.left.len() {
                return true;
            }
            let x = self.left[depth];
            for k in 0..self.right.len() {
                let y = self.right[k];
                if self.used[y] || self.color[x] != self.color[self.n1 + y] || !self.consistent(x, y) {
                    continue;
                }
                self.fwd[x] = Some(y);
                self.used[y] = true;
                if self.extend(depth + 1) {
                    return true;
                }
                self.fwd[x] = None;
                self.used[y] = false;
            }
            false
        }
    }

    let mut search = Search {
        m1,
        m2,
        n1,
        color,
        left,
        right,
        fwd: vec![None; n1],
        used: vec![false; m2.state_count()],
    };
    if !search.extend(0) {
        return None;
    }
    Some(IsoWitness {
        mapping: search
            .fwd
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect(),
    })
}

/// A relation between the states of two machines, as index pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BisimRelation {
    pub pairs: BTreeSet<(usize, usize)>,
}

impl BisimRelation {
    pub fn identity(m: &Fsm) -> Self {
        BisimRelation {
            pairs: (0..m.state_count()).map(|s| (s, s)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        BisimRelation {
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Relational composition `self ; other`.
    pub fn then(&self, other: &BisimRelation) -> Self {
        let mut pairs = BTreeSet::new();
        for &(a, b) in &self.pairs {
            for &(_, c) in other.pairs.range((b, 0)..=(b, usize::MAX)) {
                pairs.insert((a, c));
            }
        }
        BisimRelation { pairs }
    }

    pub fn named_pairs(&self, m1: &Fsm, m2: &Fsm) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(a, b)| (m1.state_name(a).to_string(), m2.state_name(b).to_string()))
            .collect()
    }

    /// Checks every pair against the four bisimulation conditions: initial
    /// agreement, forward and backward transition matching, and critical
    /// agreement. Labels are matched by name; a label missing from one
    /// alphabet has no transitions there.
    pub fn is_valid_for(&self, m1: &Fsm, m2: &Fsm) -> bool {
        let init1: BTreeSet<usize> = m1.initial().iter().copied().collect();
        let init2: BTreeSet<usize> = m2.initial().iter().copied().collect();
        let succ = |m: &Fsm, s: usize, name: &str| -> Vec<usize> {
            m.label_index(name)
                .map(|l| m.successors(s, l).to_vec())
                .unwrap_or_default()
        };
        self.pairs.iter().all(|&(x1, x2)| {
            init1.contains(&x1) == init2.contains(&x2)
                && m1.is_critical(x1) == m2.is_critical(x2)
                && m1.alphabet().iter().all(|l| {
                    let s2 = succ(m2, x2, l.as_str());
                    succ(m1, x1, l.as_str())
                        .iter()
                        .all(|&t1| s2.iter().any(|&t2| self.pairs.contains(&(t1, t2))))
                })
                && m2.alphabet().iter().all(|l| {
                    let s1 = succ(m1, x1, l.as_str());
                    succ(m2, x2, l.as_str())
                        .iter()
                        .all(|&t2| s1.iter().any(|&t1| self.pairs.contains(&(t1, t2))))
                })
        })
    }

    /// Every initial state of each machine is related to an initial state of
    /// the other.
    pub fn is_total_on_initial(&self, m1: &Fsm, m2: &Fsm) -> bool {
        m1.initial().iter().all(|&x| {
            m2.initial().iter().any(|&y| self.pairs.contains(&(x, y)))
        }) && m2.initial().iter().all(|&y| {
            m1.initial().iter().any(|&x| self.pairs.contains(&(x, y)))
        })
    }
}

/// Coarsest stable partition of the disjoint union of `m1` and `m2`, seeded by
/// (critical, initial) membership. Returns one block id per state, `m1`'s
/// states first.
fn coarsest_partition(m1: &Fsm, m2: &Fsm) -> Vec<usize> {
    let n1 = m1.state_count();
    let total = n1 + m2.state_count();
    let mut labels: Vec<&str> = m1
        .alphabet()
        .iter()
        .chain(m2.alphabet())
        .map(|l| l.as_str())
        .collect();
    labels.sort_unstable();
    labels.dedup();
    // edges[s] = (label, target) over the union
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); total];
    for (f, l, t) in m1.transitions() {
        let g = labels.binary_search(&m1.alphabet()[l].as_str()).unwrap();
        edges[f].push((g, t));
    }
    for (f, l, t) in m2.transitions() {
        let g = labels.binary_search(&m2.alphabet()[l].as_str()).unwrap();
        edges[n1 + f].push((g, n1 + t));
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (s, out) in edges.iter().enumerate() {
        for &(_, t) in out {
            preds[t].push(s);
        }
    }

    let mut block: Vec<usize> = (0..total)
        .map(|s| {
            let (crit, init) = if s < n1 {
                (m1.is_critical(s), m1.initial().contains(&s))
            } else {
                (m2.is_critical(s - n1), m2.initial().contains(&(s - n1)))
            };
            usize::from(crit) * 2 + usize::from(init)
        })
        .collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); 4];
    for (s, &b) in block.iter().enumerate() {
        members[b].push(s);
    }

    // A block is re-examined whenever a successor of one of its states moved.
    let mut pending: BTreeSet<usize> = (0..members.len()).filter(|&b| !members[b].is_empty()).collect();
    while let Some(b) = pending.pop_first() {
        let mut groups: Vec<(Vec<(usize, usize)>, usize)> = members[b]
            .iter()
            .map(|&s| {
                let mut sig: Vec<(usize, usize)> =
                    edges[s].iter().map(|&(l, t)| (l, block[t])).collect();
                sig.sort_unstable();
                sig.dedup();
                (sig, s)
            })
            .collect();
        groups.sort();
        if groups.first().map(|g| &g.0) == groups.last().map(|g| &g.0) {
            continue;
        }
        let mut moved = Vec::new();
        let mut current = b;
        members[b].clear();
        for i in 0..groups.len() {
            if i > 0 && groups[i].0 != groups[i - 1].0 {
                members.push(Vec::new());
                current = members.len() - 1;
            }
            let s = groups[i].1;
            members[current].push(s);
            if current != b {
                block[s] = current;
                moved.push(s);
            }
        }
        for s in moved {
            for &p in &preds[s] {
                pending.insert(block[p]);
            }
        }
    }
    block
}

/// The largest relation between the states of `m1` and `m2` satisfying the
/// four bisimulation conditions (it may be empty).
pub fn largest_bisimulation(m1: &Fsm, m2: &Fsm) -> BisimRelation {
    let n1 = m1.state_count();
    let block = coarsest_partition(m1, m2);
    let mut pairs = BTreeSet::new();
    for x in 0..n1 {
        for y in 0..m2.state_count() {
            if block[x] == block[n1 + y] {
                pairs.insert((x, y));
            }
        }
    }
    BisimRelation { pairs }
}

/// Bisimilarity of two machines over the same alphabet. Returns the largest
/// bisimulation when it relates every initial state of each machine to an
/// initial state of the other.
pub fn bisim_check(m1: &Fsm, m2: &Fsm) -> Option<BisimRelation> {
    if m1.alphabet() != m2.alphabet() {
        return None;
    }
    let rel = largest_bisimulation(m1, m2);
    rel.is_total_on_initial(m1, m2).then_some(rel)
}

/// Partition of a network's members into bisimilarity classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceClasses {
    /// Member names of each class, in network order.
    pub classes: Vec<Vec<String>>,
    /// Network index of each class's representative (its lowest index).
    pub representatives: Vec<usize>,
    /// Class index of every network member.
    pub class_of: Vec<usize>,
}

impl EquivalenceClasses {
    pub fn representative_of(&self, member: usize) -> usize {
        self.representatives[self.class_of[member]]
    }
}

/// Groups bisimilar members and keeps the lowest-index member of each class.
pub fn quotient_network(n: &Network) -> (Network, EquivalenceClasses) {
    let members = n.members();
    let mut representatives: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(members.len());
    for (i, (_, m)) in members.iter().enumerate() {
        let class = representatives
            .iter()
            .position(|&r| bisim_check(&members[r].1, m).is_some());
        match class {
            Some(c) => class_of.push(c),
            None => {
                class_of.push(representatives.len());
                representatives.push(i);
            }
        }
    }
    let mut classes = vec![Vec::new(); representatives.len()];
    for (i, &c) in class_of.iter().enumerate() {
        classes[c].push(members[i].0.clone());
    }
    let reduced = Network::new(representatives.iter().map(|&r| members[r].clone()).collect())
        .expect("representatives form a valid network");
    (
        reduced,
        EquivalenceClasses {
            classes,
            representatives,
            class_of,
        },
    )
}

/// Side-by-side comparison of a network and its quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub verdict_full: Verdict,
    pub verdict_reduced: Verdict,
    /// `Obs(M(N^min))` is a critical observer for `M(N^min)`.
    pub observer_valid_reduced: bool,
    /// `Obs(M(N^min))` is a critical observer for `M(N)`.
    pub observer_valid_full: bool,
    pub classes: EquivalenceClasses,
}

impl PreservationReport {
    pub fn agrees(&self) -> bool {
        self.verdict_full.observable == self.verdict_reduced.observable
            && self.observer_valid_reduced == self.observer_valid_full
            && self.observer_valid_full == self.verdict_full.observable
    }
}

/// Builds the monolithic observers of `n` and of its quotient and compares
/// verdicts and observer validity. Intended for desk-scale networks.
pub fn preservation_check(n: &Network) -> PreservationReport {
    let (reduced, classes) = quotient_network(n);
    let full = compose_network(n);
    let small = compose_network(&reduced);
    let obs_small = build_observer(&small);
    PreservationReport {
        verdict_full: check_observable(&build_observer(&full), &full.critical_states()),
        verdict_reduced: check_observable(&obs_small, &small.critical_states()),
        observer_valid_reduced: is_critical_observer_for(&obs_small, &small),
        observer_valid_full: is_critical_observer_for(&obs_small, &full),
        classes,
    }
}
