//! Powerset observers, the observability criterion and the decentralized
//! observer bank.
//!
//! An observer state is a nonempty set of states of the observed machine
//! (its current state estimate). It outputs 1 when the estimate touches the
//! critical set. The observed machine is critically observable exactly when
//! every flagged estimate lies entirely inside the critical set.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::composition::{product_state_name, Network};
use crate::error::{Error, Result};
use crate::fsm::{Fsm, Label, StateId, Word};
use crate::machine::LabeledMachine;

/// Default cap on the number of states any single construction may create.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Sorted indices into the observed machine's states.
pub type Subset = Vec<usize>;

pub(crate) fn subset_label(universe: &[StateId], subset: &[usize]) -> String {
    let mut out = String::from("{");
    for (i, &s) in subset.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(universe[s].as_str());
    }
    out.push('}');
    out
}

/// Deterministic observer whose states are state estimates of an observed
/// machine, with a boolean output per state.
///
/// States are kept in canonical (lexicographic subset) order, so two
/// observers with the same states, transitions and outputs compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObserverFsm {
    universe: Vec<StateId>,
    universe_critical: Vec<bool>,
    alphabet: Vec<Label>,
    states: Vec<Subset>,
    initial: usize,
    delta: Vec<Vec<Option<usize>>>,
    output: Vec<bool>,
}

impl ObserverFsm {
    /// Canonicalizes a raw observer. `edges` are `(from, label, to)` over
    /// positions in `states`; `states[initial]` is the initial estimate.
    pub(crate) fn from_raw(
        observed: &Fsm,
        states: Vec<Subset>,
        initial: usize,
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> ObserverFsm {
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by(|&a, &b| states[a].cmp(&states[b]));
        let mut remap = vec![0; states.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut delta = vec![vec![None; observed.alphabet().len()]; states.len()];
        for (f, l, t) in edges {
            let slot = &mut delta[remap[f]][l];
            debug_assert!(slot.is_none() || *slot == Some(remap[t]));
            *slot = Some(remap[t]);
        }
        let states: Vec<Subset> = order.into_iter().map(|o| states[o].clone()).collect();
        let output = states
            .iter()
            .map(|z| z.iter().any(|&x| observed.is_critical(x)))
            .collect();
        debug_assert!(states.iter().all(|z| !z.is_empty()));
        ObserverFsm {
            universe: observed.states().to_vec(),
            universe_critical: observed.critical_flags().to_vec(),
            alphabet: observed.alphabet().to_vec(),
            states,
            initial: remap[initial],
            delta,
            output,
        }
    }

    pub fn alphabet(&self) -> &[Label] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Subset] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn next(&self, state: usize, label: usize) -> Option<usize> {
        self.delta[state][label]
    }

    pub fn output(&self, state: usize) -> bool {
        self.output[state]
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.alphabet.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    /// States of the observed machine.
    pub fn universe(&self) -> &[StateId] {
        &self.universe
    }

    /// The estimate held by observer state `state`, as state names.
    pub fn estimate(&self, state: usize) -> Vec<StateId> {
        self.states[state]
            .iter()
            .map(|&x| self.universe[x].clone())
            .collect()
    }

    /// `{x1,...,xk}` rendering of an observer state.
    pub fn subset_label(&self, state: usize) -> String {
        subset_label(&self.universe, &self.states[state])
    }

    /// Whether the estimate lies entirely inside the critical set.
    pub fn is_fully_critical(&self, state: usize) -> bool {
        self.states[state].iter().all(|&x| self.universe_critical[x])
    }

    /// Position of the state whose estimate is exactly `subset`.
    pub fn find(&self, subset: &[usize]) -> Option<usize> {
        self.states.binary_search_by(|z| z.as_slice().cmp(subset)).ok()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(f, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(l, t)| t.map(|t| (f, l, t)))
        })
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().flatten().filter(|t| t.is_some()).count()
    }

    /// The observer as a deterministic [`Fsm`] whose states are named
    /// `{x1,...}` and whose critical set is the set of flagged states.
    pub fn to_fsm(&self) -> Fsm {
        let names = (0..self.states.len())
            .map(|s| StateId::from_trusted(self.subset_label(s)))
            .collect();
        Fsm::from_parts(
            names,
            [self.initial],
            self.alphabet.clone(),
            self.transitions().collect::<Vec<_>>(),
            self.output.clone(),
        )
    }

    /// Restriction to the states flagged in `keep`, followed by the
    /// accessible part. The initial state must be kept.
    pub(crate) fn restricted(&self, keep: &[bool]) -> ObserverFsm {
        debug_assert!(keep[self.initial]);
        let mut seen = vec![false; self.states.len()];
        seen[self.initial] = true;
        let mut stack = vec![self.initial];
        while let Some(s) = stack.pop() {
            for t in self.delta[s].iter().flatten() {
                if keep[*t] && !seen[*t] {
                    seen[*t] = true;
                    stack.push(*t);
                }
            }
        }
        let kept: Vec<usize> = (0..self.states.len()).filter(|&s| seen[s]).collect();
        let mut pos = vec![usize::MAX; self.states.len()];
        for (i, &s) in kept.iter().enumerate() {
            pos[s] = i;
        }
        let delta = kept
            .iter()
            .map(|&s| {
                self.delta[s]
                    .iter()
                    .map(|t| t.filter(|&t| seen[t]).map(|t| pos[t]))
                    .collect()
            })
            .collect();
        ObserverFsm {
            universe: self.universe.clone(),
            universe_critical: self.universe_critical.clone(),
            alphabet: self.alphabet.clone(),
            states: kept.iter().map(|&s| self.states[s].clone()).collect(),
            initial: pos[self.initial],
            delta,
            output: kept.iter().map(|&s| self.output[s]).collect(),
        }
    }

    /// Whether `self` is a sub-machine of `full`: same alphabet, every state
    /// present in `full` with the same output, and every transition of `self`
    /// also a transition of `full`.
    pub fn is_submachine_of(&self, full: &ObserverFsm) -> bool {
        if self.alphabet != full.alphabet || self.universe != full.universe {
            return false;
        }
        let Some(map) = (0..self.states.len())
            .map(|s| full.find(&self.states[s]))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        map[self.initial] == full.initial
            && (0..self.states.len()).all(|s| self.output[s] == full.output[map[s]])
            && self
                .transitions()
                .all(|(f, l, t)| full.delta[map[f]][l] == Some(map[t]))
    }
}

impl LabeledMachine for ObserverFsm {
    fn labels(&self) -> &[Label] {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.states.len()
    }

    fn initial_states(&self) -> Vec<usize> {
        vec![self.initial]
    }

    fn successors(&self, state: usize, label: usize) -> &[usize] {
        self.delta[state][label].as_slice()
    }

    fn output(&self, state: usize) -> bool {
        self.output[state]
    }

    fn state_label(&self, state: usize) -> String {
        self.subset_label(state)
    }
}

/// Subset construction seeded at the initial set; only accessible nonempty
/// estimates are created and an empty image leaves the transition undefined.
pub fn build_observer(m: &Fsm) -> ObserverFsm {
    build_observer_with_budget(m, usize::MAX).expect("unbounded budget")
}

pub fn build_observer_with_budget(m: &Fsm, budget: usize) -> Result<ObserverFsm> {
    let mut index: HashMap<Subset, usize> = HashMap::new();
    let mut states: Vec<Subset> = vec![m.initial().to_vec()];
    index.insert(m.initial().to_vec(), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        for l in 0..m.alphabet().len() {
            let img = m.post(&states[cur], l);
            if img.is_empty() {
                continue;
            }
            let to = match index.get(&img) {
                Some(&t) => t,
                None => {
                    if states.len() >= budget {
                        return Err(Error::ResourceLimit { budget });
                    }
                    states.push(img.clone());
                    index.insert(img, states.len() - 1);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            edges.push((cur, l, to));
        }
    }
    Ok(ObserverFsm::from_raw(m, states, 0, edges))
}

/// A state violating the observability criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// An estimate of a single machine.
    Subset(Vec<StateId>),
    /// One estimate per network member.
    Aggregate(Vec<Vec<StateId>>),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn subset(f: &mut fmt::Formatter<'_>, z: &[StateId]) -> fmt::Result {
            f.write_str("{")?;
            for (i, x) in z.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(x.as_str())?;
            }
            f.write_str("}")
        }
        match self {
            Witness::Subset(z) => subset(f, z),
            Witness::Aggregate(parts) => {
                f.write_str("(")?;
                for (i, z) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    subset(f, z)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Outcome of an observability check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub observable: bool,
    /// Present exactly when `observable` is false.
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn observable() -> Self {
        Verdict {
            observable: true,
            witness: None,
        }
    }

    pub fn violated(witness: Witness) -> Self {
        Verdict {
            observable: false,
            witness: Some(witness),
        }
    }
}

/// Breadth-first visiting order from the initial state, labels ascending.
fn bfs_order<M: LabeledMachine>(m: &M) -> Vec<usize> {
    let mut seen = vec![false; m.state_count()];
    let mut order = m.initial_states();
    for &s in &order {
        seen[s] = true;
    }
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for l in 0..m.labels().len() {
            for &t in m.successors(s, l) {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
    }
    order
}

/// Every flagged estimate must be contained in `critical`; otherwise the
/// first offending estimate in breadth-first order is returned as witness.
pub fn check_observable(obs: &ObserverFsm, critical: &BTreeSet<StateId>) -> Verdict {
    bfs_order(obs)
        .into_iter()
        .find(|&z| {
            obs.output(z)
                && !obs.states[z]
                    .iter()
                    .all(|&x| critical.contains(&obs.universe[x]))
        })
        .map_or_else(Verdict::observable, |z| {
            Verdict::violated(Witness::Subset(obs.estimate(z)))
        })
}

/// Observability of a single machine via its observer.
pub fn is_critically_observable(m: &Fsm) -> bool {
    check_observable(&build_observer(m), &m.critical_states()).observable
}

/// The unique run of `obs` on `w`, initial state included.
pub fn observer_run(obs: &ObserverFsm, w: &Word) -> Result<Vec<(usize, bool)>> {
    let mut cur = obs.initial;
    let mut out = vec![(cur, obs.output(cur))];
    for (step, l) in w.symbols().iter().enumerate() {
        let li = obs
            .label_index(l.as_str())
            .ok_or_else(|| Error::invalid(format!("label `{l}` not in alphabet")))?;
        cur = obs.next(cur, li).ok_or_else(|| Error::TraceNotInLanguage {
            step: step + 1,
            label: l.to_string(),
        })?;
        out.push((cur, obs.output(cur)));
    }
    Ok(out)
}

/// Decides whether `obs` is a critical observer for `m`: along every run of
/// `m`, the corresponding observer run exists and outputs 1 exactly at
/// critical states. Explores the reachable pairs of (state, observer state).
pub fn is_critical_observer_for<O: LabeledMachine>(obs: &O, m: &Fsm) -> bool {
    let init = obs.initial_states();
    if obs.labels() != m.alphabet() || init.len() != 1 || !obs.is_deterministic() {
        return false;
    }
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut stack: Vec<(usize, usize)> = m.initial().iter().map(|&x| (x, init[0])).collect();
    while let Some((x, z)) = stack.pop() {
        if !seen.insert((x, z)) {
            continue;
        }
        if obs.output(z) != m.is_critical(x) {
            return false;
        }
        for l in 0..m.alphabet().len() {
            let succ = m.successors(x, l);
            if succ.is_empty() {
                continue;
            }
            let Some(&z2) = obs.successors(z, l).first() else {
                return false;
            };
            stack.extend(succ.iter().map(|&x2| (x2, z2)));
        }
    }
    true
}

/// One local observer per network member; the global output is the OR of the
/// local outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecentralizedObserver {
    pub locals: Vec<(String, ObserverFsm)>,
}

pub fn build_decentralized(n: &Network) -> DecentralizedObserver {
    DecentralizedObserver {
        locals: n
            .members()
            .iter()
            .map(|(name, m)| (name.clone(), build_observer(m)))
            .collect(),
    }
}

pub fn build_decentralized_with_budget(n: &Network, budget: usize) -> Result<DecentralizedObserver> {
    let locals = n
        .members()
        .iter()
        .map(|(name, m)| Ok((name.clone(), build_observer_with_budget(m, budget)?)))
        .collect::<Result<_>>()?;
    Ok(DecentralizedObserver { locals })
}

/// Materialized parallel composition of a bank of local observers.
///
/// States are aggregates `(z1,...,zN)` of local observer states, numbered in
/// breadth-first discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposedObserver {
    locals: Vec<(String, ObserverFsm)>,
    alphabet: Vec<Label>,
    states: Vec<Vec<usize>>,
    delta: Vec<Vec<Option<usize>>>,
    output: Vec<bool>,
}

impl ComposedObserver {
    pub fn locals(&self) -> &[(String, ObserverFsm)] {
        &self.locals
    }

    pub fn alphabet(&self) -> &[Label] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Local observer state indices of aggregate `state`.
    pub fn aggregate(&self, state: usize) -> &[usize] {
        &self.states[state]
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn next(&self, state: usize, label: usize) -> Option<usize> {
        self.delta[state][label]
    }

    pub fn output(&self, state: usize) -> bool {
        self.output[state]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(f, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(l, t)| t.map(|t| (f, l, t)))
        })
    }

    pub fn transition_count(&self) -> usize {
        self.transitions().count()
    }

    pub fn aggregate_estimates(&self, state: usize) -> Vec<Vec<StateId>> {
        self.states[state]
            .iter()
            .zip(&self.locals)
            .map(|(&z, (_, o))| o.estimate(z))
            .collect()
    }

    /// Image of an aggregate under `(z1,...,zN) ↦ z1 × ... × zN`, as product
    /// state names. For a single member this is the estimate itself.
    pub fn product_image(&self, state: usize) -> BTreeSet<String> {
        let parts = self.aggregate_estimates(state);
        if parts.len() == 1 {
            return parts[0].iter().map(|s| s.to_string()).collect();
        }
        let mut acc: Vec<Vec<&str>> = vec![Vec::new()];
        for z in &parts {
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    z.iter().map(move |x| {
                        let mut t = prefix.clone();
                        t.push(x.as_str());
                        t
                    })
                })
                .collect();
        }
        acc.iter().map(|t| product_state_name(t)).collect()
    }

    /// Whether the product set of the aggregate is entirely critical: some
    /// part lies inside its member's critical set.
    pub fn is_fully_critical(&self, state: usize) -> bool {
        self.states[state]
            .iter()
            .zip(&self.locals)
            .any(|(&z, (_, o))| o.is_fully_critical(z))
    }

    /// Observability criterion on the composed observer; witness is the first
    /// violating aggregate in breadth-first order.
    pub fn check(&self) -> Verdict {
        (0..self.states.len())
            .find(|&z| self.output[z] && !self.is_fully_critical(z))
            .map_or_else(Verdict::observable, |z| {
                Verdict::violated(Witness::Aggregate(self.aggregate_estimates(z)))
            })
    }

    /// Projection onto local observer `member`: its local states occurring in
    /// some aggregate, with the local transition map restricted to them.
    pub fn project_local(&self, member: usize) -> ObserverFsm {
        let local = &self.locals[member].1;
        let mut keep = vec![false; local.state_count()];
        for agg in &self.states {
            keep[agg[member]] = true;
        }
        local.restricted(&keep)
    }
}

impl LabeledMachine for ComposedObserver {
    fn labels(&self) -> &[Label] {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.states.len()
    }

    fn initial_states(&self) -> Vec<usize> {
        vec![0]
    }

    fn successors(&self, state: usize, label: usize) -> &[usize] {
        self.delta[state][label].as_slice()
    }

    fn output(&self, state: usize) -> bool {
        self.output[state]
    }

    fn state_label(&self, state: usize) -> String {
        Witness::Aggregate(self.aggregate_estimates(state)).to_string()
    }
}

/// Parallel composition of the local observers with OR output.
pub fn compose_decentralized(d: &DecentralizedObserver) -> ComposedObserver {
    compose_decentralized_with_budget(d, usize::MAX).expect("unbounded budget")
}

pub fn compose_decentralized_with_budget(
    d: &DecentralizedObserver,
    budget: usize,
) -> Result<ComposedObserver> {
    let alphabet = {
        let mut all: Vec<Label> = d
            .locals
            .iter()
            .flat_map(|(_, o)| o.alphabet.iter().cloned())
            .collect();
        all.sort();
        all.dedup();
        all
    };
    let maps: Vec<Vec<Option<usize>>> = d
        .locals
        .iter()
        .map(|(_, o)| alphabet.iter().map(|l| o.label_index(l.as_str())).collect())
        .collect();

    let start: Vec<usize> = d.locals.iter().map(|(_, o)| o.initial).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let cur = states[head].clone();
        let mut row = vec![None; alphabet.len()];
        'labels: for (g, slot) in row.iter_mut().enumerate() {
            let mut next = cur.clone();
            for (i, (_, o)) in d.locals.iter().enumerate() {
                if let Some(l) = maps[i][g] {
                    match o.next(cur[i], l) {
                        Some(t) => next[i] = t,
                        None => continue 'labels,
                    }
                }
            }
            let to = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if states.len() >= budget {
                        return Err(Error::ResourceLimit { budget });
                    }
                    states.push(next.clone());
                    index.insert(next, states.len() - 1);
                    states.len() - 1
                }
            };
            *slot = Some(to);
        }
        delta.push(row);
        head += 1;
    }
    let output = states
        .iter()
        .map(|agg| agg.iter().zip(&d.locals).any(|(&z, (_, o))| o.output(z)))
        .collect();
    Ok(ComposedObserver {
        locals: d.locals.clone(),
        alphabet,
        states,
        delta,
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn fixture_b() -> Fsm {
        Fsm::builder()
            .states(["r", "s", "t"])
            .initial(["r"])
            .alphabet(["a"])
            .transition("r", "a", "s")
            .transition("r", "a", "t")
            .critical(["t"])
            .build()
            .unwrap()
    }

    fn labels(obs: &ObserverFsm) -> Vec<String> {
        (0..obs.state_count()).map(|s| obs.subset_label(s)).collect()
    }

    #[test]
    fn observer_of_a() {
        let obs = build_observer(&fixture_a());
        assert_eq!(labels(&obs), ["{p}", "{q}"]);
        assert_eq!(obs.initial(), 0);
        let a = obs.label_index("a").unwrap();
        let b = obs.label_index("b").unwrap();
        assert_eq!(obs.next(0, a), Some(1));
        assert_eq!(obs.next(1, b), Some(0));
        assert_eq!(obs.next(0, b), None);
        assert!(!obs.output(0));
        assert!(obs.output(1));
    }

    #[test]
    fn observer_of_b() {
        let obs = build_observer(&fixture_b());
        assert_eq!(labels(&obs), ["{r}", "{s,t}"]);
        let st = obs.find(&[1, 2]).unwrap();
        assert!(obs.output(st));
    }

    #[test]
    fn observability_verdicts() {
        let a = fixture_a();
        assert_eq!(
            check_observable(&build_observer(&a), &a.critical_states()),
            Verdict::observable()
        );
        let b = fixture_b();
        let v = check_observable(&build_observer(&b), &b.critical_states());
        assert!(!v.observable);
        assert_eq!(v.witness.unwrap().to_string(), "{s,t}");

        let no_critical = Fsm::builder()
            .states(["r", "s", "t"])
            .initial(["r"])
            .alphabet(["a"])
            .transition("r", "a", "s")
            .transition("r", "a", "t")
            .build()
            .unwrap();
        assert!(is_critically_observable(&no_critical));
    }

    #[test]
    fn runs_of_observer() {
        let obs = build_observer(&fixture_a());
        assert_eq!(observer_run(&obs, &Word::empty()).unwrap(), vec![(0, false)]);
        assert_eq!(
            observer_run(&obs, &Word::parse("a").unwrap()).unwrap(),
            vec![(0, false), (1, true)]
        );
        assert_eq!(
            observer_run(&obs, &Word::parse("b").unwrap()),
            Err(Error::TraceNotInLanguage {
                step: 1,
                label: "b".into()
            })
        );
    }

    #[test]
    fn deterministic_input_gives_singletons() {
        let a = fixture_a();
        let obs = build_observer(&a);
        assert!(obs.states().iter().all(|z| z.len() == 1));
        assert_eq!(obs.to_fsm().transition_count(), a.transition_count());
    }

    #[test]
    fn decentralized_bank_is_memberwise() {
        let n = Network::new(vec![
            ("A".into(), fixture_a()),
            ("B".into(), fixture_b()),
        ])
        .unwrap();
        let d = build_decentralized(&n);
        assert_eq!(d.locals.len(), 2);
        assert_eq!(d.locals[0].1, build_observer(&fixture_a()));
        assert_eq!(d.locals[1].1, build_observer(&fixture_b()));
    }

    #[test]
    fn composing_a_single_local_is_identity() {
        let n = Network::new(vec![("A".into(), fixture_a())]).unwrap();
        let c = compose_decentralized(&build_decentralized(&n));
        assert_eq!(c.state_count(), 2);
        assert_eq!(c.transition_count(), 2);
        assert_eq!(c.project_local(0), build_observer(&fixture_a()));
    }

    #[test]
    fn composed_output_is_or() {
        let n = Network::new(vec![
            ("A".into(), fixture_a()),
            ("B".into(), fixture_b()),
        ])
        .unwrap();
        let c = compose_decentralized(&build_decentralized(&n));
        for z in 0..c.state_count() {
            let agg = c.aggregate(z);
            let expect = c.locals()[0].1.output(agg[0]) || c.locals()[1].1.output(agg[1]);
            assert_eq!(c.output(z), expect);
        }
        assert!(!c.check().observable);
    }

    #[test]
    fn observer_validation() {
        let a = fixture_a();
        assert!(is_critical_observer_for(&build_observer(&a), &a));
        let b = fixture_b();
        assert!(!is_critical_observer_for(&build_observer(&b), &b));
    }
}
