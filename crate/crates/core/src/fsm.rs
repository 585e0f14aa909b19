//! Finite state machines with critical states.
//!
//! States and labels are identified by whitespace-free strings. Internally an
//! [`Fsm`] keeps its states and labels in sorted order and refers to them by
//! index, so that sets of states are plain sorted index vectors and compare
//! structurally.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Token reserved for the empty word in textual words.
pub const EPSILON: &str = "eps";

/// Name of a state, unique within its machine.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(String);

/// Input label of a transition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

macro_rules! string_newtype {
    ($ty:ident) => {
        impl $ty {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl Borrow<str> for $ty {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl AsRef<str> for $ty {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

string_newtype!(StateId);
string_newtype!(Label);

impl StateId {
    /// Validates a state name.
    ///
    /// Names are whitespace-free. A name containing any of `,(){}` must be a
    /// bracketed term such as `(p,q)` or `{p,(q,r)}`, which keeps the product
    /// and subset encodings produced by composition and observers unambiguous.
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::invalid("empty state name"));
        }
        if name.starts_with('#') || name.chars().any(char::is_whitespace) {
            return Err(Error::invalid(format!("malformed state name `{name}`")));
        }
        if !is_term(&name) {
            return Err(Error::invalid(format!(
                "state name `{name}` uses `,(){{}}` outside a well-formed bracketed term"
            )));
        }
        Ok(StateId(name))
    }

    pub(crate) fn from_trusted(name: String) -> Self {
        debug_assert!(is_term(&name), "{name}");
        StateId(name)
    }
}

impl Label {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name == EPSILON || name.starts_with('#') || !is_atom(&name) {
            return Err(Error::invalid(format!("malformed label `{name}`")));
        }
        Ok(Label(name))
    }
}

pub(crate) fn is_atom(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, ',' | '(' | ')' | '{' | '}'))
}

fn is_term(s: &str) -> bool {
    fn term(b: &[u8], mut i: usize) -> Option<usize> {
        match b.get(i)? {
            open @ (b'(' | b'{') => {
                let close = if *open == b'(' { b')' } else { b'}' };
                i += 1;
                loop {
                    i = term(b, i)?;
                    match b.get(i)? {
                        b',' => i += 1,
                        c if *c == close => return Some(i + 1),
                        _ => return None,
                    }
                }
            }
            _ => {
                let start = i;
                while i < b.len() && !matches!(b[i], b',' | b'(' | b')' | b'{' | b'}') {
                    i += 1;
                }
                (i > start).then_some(i)
            }
        }
    }
    term(s.as_bytes(), 0) == Some(s.len())
}

/// A finite word over some alphabet. The empty word is ε.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Label>);

impl Word {
    pub fn new(symbols: Vec<Label>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a whitespace-separated word; `eps` (or nothing) denotes ε.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == [EPSILON] {
            return Ok(Word::empty());
        }
        tokens
            .into_iter()
            .map(Label::new)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn symbols(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(other.0.iter()).cloned().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EPSILON);
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(l.as_str())?;
        }
        Ok(())
    }
}

impl FromIterator<Label> for Word {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Projection of `w` onto the labels in `sub`: symbols outside `sub` are erased.
pub fn project_word(w: &Word, sub: &BTreeSet<Label>) -> Word {
    w.0.iter().filter(|l| sub.contains(*l)).cloned().collect()
}

/// A possibly nondeterministic finite state machine with a set of critical
/// states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsm {
    states: Vec<StateId>,
    initial: Vec<usize>,
    alphabet: Vec<Label>,
    // delta[state][label] holds a sorted successor list; empty means undefined.
    delta: Vec<Vec<Vec<usize>>>,
    critical: Vec<bool>,
}

impl Fsm {
    pub fn builder() -> FsmBuilder {
        FsmBuilder::default()
    }

    /// Assembles a machine from indexed parts produced inside the crate.
    ///
    /// States are re-sorted by name; `transitions` are `(from, label, to)`
    /// with `label` indexing the already sorted `alphabet`.
    pub(crate) fn from_parts(
        names: Vec<StateId>,
        initial: impl IntoIterator<Item = usize>,
        alphabet: Vec<Label>,
        transitions: impl IntoIterator<Item = (usize, usize, usize)>,
        critical: Vec<bool>,
    ) -> Fsm {
        debug_assert!(alphabet.windows(2).all(|w| w[0] < w[1]));
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        debug_assert!(
            order.windows(2).all(|w| names[w[0]] != names[w[1]]),
            "state name collision"
        );
        let mut remap = vec![0; names.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut delta = vec![vec![Vec::new(); alphabet.len()]; names.len()];
        for (from, label, to) in transitions {
            delta[remap[from]][label].push(remap[to]);
        }
        for row in &mut delta {
            for succ in row {
                succ.sort_unstable();
                succ.dedup();
            }
        }
        let mut initial: Vec<usize> = initial.into_iter().map(|s| remap[s]).collect();
        initial.sort_unstable();
        initial.dedup();
        let critical_sorted = order.iter().map(|&old| critical[old]).collect();
        let states = order.iter().map(|&old| names[old].clone()).collect();
        Fsm {
            states,
            initial,
            alphabet,
            delta,
            critical: critical_sorted,
        }
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub fn state_name(&self, index: usize) -> &StateId {
        &self.states[index]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn alphabet(&self) -> &[Label] {
        &self.alphabet
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.alphabet.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn alphabet_set(&self) -> BTreeSet<Label> {
        self.alphabet.iter().cloned().collect()
    }

    pub fn successors(&self, state: usize, label: usize) -> &[usize] {
        &self.delta[state][label]
    }

    pub fn is_critical(&self, state: usize) -> bool {
        self.critical[state]
    }

    pub fn critical_flags(&self) -> &[bool] {
        &self.critical
    }

    pub fn critical_states(&self) -> BTreeSet<StateId> {
        self.states
            .iter()
            .zip(&self.critical)
            .filter(|(_, &c)| c)
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// All transitions as `(from, label, to)` index triples in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(from, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(label, succ)| succ.iter().map(move |&to| (from, label, to)))
        })
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().flatten().map(Vec::len).sum()
    }

    /// `|X⁰| = 1` and at most one successor per state and label.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().flatten().all(|s| s.len() <= 1)
    }

    /// One-step image `δ(set, label)` of a sorted index set.
    pub fn post(&self, set: &[usize], label: usize) -> Vec<usize> {
        let mut out: Vec<usize> = set
            .iter()
            .flat_map(|&x| self.delta[x][label].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Resolves the labels of `w` against this machine's alphabet.
    pub fn resolve_word(&self, w: &Word) -> Result<Vec<usize>> {
        w.symbols()
            .iter()
            .map(|l| {
                self.label_index(l.as_str())
                    .ok_or_else(|| Error::invalid(format!("label `{l}` not in alphabet")))
            })
            .collect()
    }

    pub(crate) fn resolve_states<I, S>(&self, states: I) -> Result<Vec<usize>>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = states
            .into_iter()
            .map(|s| {
                let s = s.as_ref();
                self.state_index(s)
                    .ok_or_else(|| Error::invalid(format!("state `{s}` not in fsm")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Index-level extended transition map over resolved labels.
    pub fn extended_delta_indices(&self, from: &[usize], word: &[usize]) -> Vec<usize> {
        let mut cur = from.to_vec();
        for &l in word {
            if cur.is_empty() {
                break;
            }
            cur = self.post(&cur, l);
        }
        cur
    }

    /// `δ̂(from, w)`; the empty result means `w` cannot be read from `from`.
    pub fn extended_delta<I, S>(&self, from: I, w: &Word) -> Result<BTreeSet<StateId>>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let from = self.resolve_states(from)?;
        let word = self.resolve_word(w)?;
        Ok(self
            .extended_delta_indices(&from, &word)
            .into_iter()
            .map(|s| self.states[s].clone())
            .collect())
    }

    /// Membership of `w` in the generated language `L(M)`.
    pub fn in_language(&self, w: &Word) -> Result<bool> {
        let word = self.resolve_word(w)?;
        Ok(!self.extended_delta_indices(&self.initial, &word).is_empty())
    }

    /// The accessible part: states reachable from some initial state, with the
    /// critical set and transitions restricted accordingly.
    pub fn accessible(&self) -> Fsm {
        let reach = self.reachable();
        if reach.iter().all(|&r| r) {
            return self.clone();
        }
        let kept: Vec<usize> = (0..self.states.len()).filter(|&s| reach[s]).collect();
        let mut new_index = vec![usize::MAX; self.states.len()];
        for (i, &s) in kept.iter().enumerate() {
            new_index[s] = i;
        }
        let transitions: Vec<_> = self
            .transitions()
            .filter(|&(f, _, t)| reach[f] && reach[t])
            .map(|(f, l, t)| (new_index[f], l, new_index[t]))
            .collect();
        Fsm::from_parts(
            kept.iter().map(|&s| self.states[s].clone()).collect(),
            self.initial.iter().map(|&s| new_index[s]),
            self.alphabet.clone(),
            transitions,
            kept.iter().map(|&s| self.critical[s]).collect(),
        )
    }

    pub(crate) fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in &self.initial {
            seen[s] = true;
            queue.push_back(s);
        }
        while let Some(s) = queue.pop_front() {
            for succ in &self.delta[s] {
                for &t in succ {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    /// Returns the same machine with states renamed by `rename`.
    pub fn renamed(&self, mut rename: impl FnMut(&StateId) -> String) -> Result<Fsm> {
        let mut b = Fsm::builder();
        let names: Vec<String> = self.states.iter().map(&mut rename).collect();
        b = b.states(names.iter());
        b = b.initial(self.initial.iter().map(|&s| &names[s]));
        b = b.alphabet(self.alphabet.iter());
        for (f, l, t) in self.transitions() {
            b = b.transition(&names[f], self.alphabet[l].as_str(), &names[t]);
        }
        b = b.critical((0..names.len()).filter(|&s| self.critical[s]).map(|s| &names[s]));
        b.build()
    }
}

/// A state run: a state sequence together with its trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateRun {
    pub states: Vec<StateId>,
    pub trace: Word,
}

impl StateRun {
    /// Whether this is a genuine run of `m` starting in an initial state.
    pub fn is_run_of(&self, m: &Fsm) -> bool {
        if self.states.is_empty() || self.states.len() != self.trace.len() + 1 {
            return false;
        }
        let Ok(idx) = self
            .states
            .iter()
            .map(|s| m.state_index(s.as_str()).ok_or(()))
            .collect::<Result<Vec<_>, ()>>()
        else {
            return false;
        };
        let Ok(labels) = m.resolve_word(&self.trace) else {
            return false;
        };
        m.initial.contains(&idx[0])
            && labels
                .iter()
                .enumerate()
                .all(|(i, &l)| m.successors(idx[i], l).contains(&idx[i + 1]))
    }
}

/// Incremental constructor for [`Fsm`] values, validated by [`FsmBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct FsmBuilder {
    name: Option<String>,
    states: Vec<String>,
    initial: Vec<String>,
    alphabet: Vec<String>,
    transitions: Vec<(String, String, String)>,
    critical: Vec<String>,
}

impl FsmBuilder {
    /// Name used in validation errors.
    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn state(mut self, s: impl AsRef<str>) -> Self {
        self.states.push(s.as_ref().to_owned());
        self
    }

    pub fn states<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, it: I) -> Self {
        self.states.extend(it.into_iter().map(|s| s.as_ref().to_owned()));
        self
    }

    pub fn initial<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, it: I) -> Self {
        self.initial.extend(it.into_iter().map(|s| s.as_ref().to_owned()));
        self
    }

    pub fn alphabet<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, it: I) -> Self {
        self.alphabet.extend(it.into_iter().map(|s| s.as_ref().to_owned()));
        self
    }

    pub fn critical<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, it: I) -> Self {
        self.critical.extend(it.into_iter().map(|s| s.as_ref().to_owned()));
        self
    }

    pub fn transition(
        mut self,
        from: impl AsRef<str>,
        label: impl AsRef<str>,
        to: impl AsRef<str>,
    ) -> Self {
        self.transitions.push((
            from.as_ref().to_owned(),
            label.as_ref().to_owned(),
            to.as_ref().to_owned(),
        ));
        self
    }

    pub fn build(self) -> Result<Fsm> {
        let fsm_name = self.name.unwrap_or_else(|| "<unnamed>".to_owned());
        let semantic = |rule: String| Error::Semantic {
            fsm: fsm_name.clone(),
            rule,
        };
        let wrap = |e: Error| match e {
            Error::InvalidInput(rule) => semantic(rule),
            other => other,
        };

        let mut index: BTreeMap<StateId, usize> = BTreeMap::new();
        let mut names = Vec::with_capacity(self.states.len());
        for s in self.states {
            let id = StateId::new(s).map_err(wrap)?;
            if index.insert(id.clone(), names.len()).is_some() {
                return Err(semantic(format!("duplicate state `{id}`")));
            }
            names.push(id);
        }
        let mut alphabet = self
            .alphabet
            .into_iter()
            .map(Label::new)
            .collect::<Result<Vec<_>>>()
            .map_err(wrap)?;
        alphabet.sort();
        if alphabet.windows(2).any(|w| w[0] == w[1]) {
            return Err(semantic("duplicate label in alphabet".into()));
        }
        let lookup = |s: &str, what: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| semantic(format!("{what} `{s}` is not a declared state")))
        };
        let initial = self
            .initial
            .iter()
            .map(|s| lookup(s, "initial state"))
            .collect::<Result<BTreeSet<_>>>()?;
        if initial.is_empty() {
            return Err(semantic("initial set is empty".into()));
        }
        let mut critical = vec![false; names.len()];
        for s in &self.critical {
            critical[lookup(s, "critical state")?] = true;
        }
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for (f, l, t) in &self.transitions {
            let from = lookup(f, "transition source")?;
            let to = lookup(t, "transition target")?;
            let label = alphabet
                .binary_search_by(|x| x.as_str().cmp(l))
                .map_err(|_| semantic(format!("transition label `{l}` not in alphabet")))?;
            transitions.push((from, label, to));
        }

        let critical_initial = initial.iter().filter(|&&s| critical[s]).count();
        if critical_initial != 0 && critical_initial != initial.len() {
            return Err(semantic("initial set straddles critical set".into()));
        }

        Ok(Fsm::from_parts(names, initial, alphabet, transitions, critical))
    }
}
