//! Integrated on-the-fly synthesis of projected local observers.
//!
//! Aggregates `(z1,...,zN)` of per-member state estimates are explored
//! generation by generation without materializing the composed observer. The
//! search stops at the first aggregate whose product set straddles the
//! critical set of the composition; otherwise each member's observer fragment
//! that takes part in the composition is returned.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::composition::{union_alphabet, Network};
use crate::error::{Error, Result};
use crate::fsm::Fsm;
use crate::observer::{ObserverFsm, Subset, Verdict, Witness, DEFAULT_BUDGET};
use crate::pipeline::CostLedger;

/// One state estimate per network member.
pub type AggregateState = Vec<Subset>;

/// Whether the product set `z1 × ... × zN` meets both the critical set of
/// the composition and its complement.
///
/// A tuple is critical iff one of its parts is, so the product meets the
/// critical set iff some `zi` meets `Ci`, and meets the complement iff every
/// `zi` has a non-critical element.
pub fn straddle_test(agg: &[Subset], critical: &[&[bool]]) -> bool {
    let meets_critical = agg
        .iter()
        .zip(critical)
        .any(|(z, c)| z.iter().any(|&x| c[x]));
    let meets_complement = agg
        .iter()
        .zip(critical)
        .all(|(z, c)| z.iter().any(|&x| !c[x]));
    meets_critical && meets_complement
}

/// Progress snapshot passed to the optional callback once per generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationStats {
    pub generation: usize,
    pub frontier: usize,
    pub visited: usize,
}

pub struct OnTheFlyOptions<'a> {
    /// Maximum number of aggregates that may be stored.
    pub budget: usize,
    pub progress: Option<&'a mut dyn FnMut(GenerationStats)>,
}

impl Default for OnTheFlyOptions<'_> {
    fn default() -> Self {
        OnTheFlyOptions {
            budget: DEFAULT_BUDGET,
            progress: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExplorationStats {
    /// Completed or interrupted generations.
    pub generations: usize,
    /// Aggregates stored, including the initial one.
    pub aggregates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnTheFlyOutcome {
    pub verdict: Verdict,
    /// Projected local observers, present only when observable.
    pub locals: Option<Vec<(String, ObserverFsm)>>,
    pub stats: ExplorationStats,
    /// Transitions and outputs stored in the local observer fragments.
    pub ledger: CostLedger,
}

/// The part of one member's observer built so far.
#[derive(Default)]
struct Fragment {
    index: HashMap<Subset, usize>,
    states: Vec<Subset>,
    edges: BTreeMap<(usize, usize), usize>,
}

impl Fragment {
    fn intern(&mut self, z: &Subset) -> usize {
        if let Some(&i) = self.index.get(z) {
            return i;
        }
        self.states.push(z.clone());
        self.index.insert(z.clone(), self.states.len() - 1);
        self.states.len() - 1
    }

    fn ledger(&self) -> CostLedger {
        let mut ledger = CostLedger::default();
        for _ in &self.states {
            ledger.record_output();
        }
        for (&(from, _), &to) in &self.edges {
            ledger.record_transition(self.states[from].len() + self.states[to].len());
        }
        ledger
    }

    /// Adds every transition of the member's full observer between states
    /// already in the fragment.
    fn close(&mut self, m: &Fsm) {
        for from in 0..self.states.len() {
            for l in 0..m.alphabet().len() {
                if self.edges.contains_key(&(from, l)) {
                    continue;
                }
                let img = m.post(&self.states[from], l);
                if let Some(&to) = self.index.get(&img) {
                    self.edges.insert((from, l), to);
                }
            }
        }
    }
}

pub fn run_onthefly(n: &Network) -> Result<OnTheFlyOutcome> {
    run_onthefly_with(n, OnTheFlyOptions::default())
}

pub fn run_onthefly_with(n: &Network, mut opts: OnTheFlyOptions<'_>) -> Result<OnTheFlyOutcome> {
    let fsms: Vec<&Fsm> = n.fsms().collect();
    let alphabet = union_alphabet(fsms.iter().copied());
    let maps: Vec<Vec<Option<usize>>> = fsms
        .iter()
        .map(|m| alphabet.iter().map(|l| m.label_index(l.as_str())).collect())
        .collect();
    let critical: Vec<&[bool]> = fsms.iter().map(|m| m.critical_flags()).collect();

    let mut fragments: Vec<Fragment> = fsms.iter().map(|_| Fragment::default()).collect();
    let start: AggregateState = fsms.iter().map(|m| m.initial().to_vec()).collect();
    for (frag, z) in fragments.iter_mut().zip(&start) {
        frag.intern(z);
    }
    let mut visited: HashSet<AggregateState> = HashSet::from([start.clone()]);
    let mut frontier: Vec<AggregateState> = vec![start];
    let mut stats = ExplorationStats {
        generations: 0,
        aggregates: 1,
    };

    let ledger_of = |fragments: &[Fragment]| {
        fragments
            .iter()
            .fold(CostLedger::default(), |acc, f| acc + f.ledger())
    };

    while !frontier.is_empty() {
        if let Some(cb) = opts.progress.as_mut() {
            cb(GenerationStats {
                generation: stats.generations,
                frontier: frontier.len(),
                visited: visited.len(),
            });
        }
        stats.generations += 1;
        let mut next: BTreeSet<AggregateState> = BTreeSet::new();
        for agg in &frontier {
            'labels: for g in 0..alphabet.len() {
                let mut succ = agg.clone();
                for (i, m) in fsms.iter().enumerate() {
                    if let Some(l) = maps[i][g] {
                        let img = m.post(&agg[i], l);
                        if img.is_empty() {
                            continue 'labels;
                        }
                        succ[i] = img;
                    }
                }
                if !visited.contains(&succ) && !next.contains(&succ) {
                    if straddle_test(&succ, &critical) {
                        let witness = Witness::Aggregate(
                            succ.iter()
                                .zip(&fsms)
                                .map(|(z, m)| z.iter().map(|&x| m.state_name(x).clone()).collect())
                                .collect(),
                        );
                        stats.aggregates = visited.len() + next.len();
                        return Ok(OnTheFlyOutcome {
                            verdict: Verdict::violated(witness),
                            locals: None,
                            stats,
                            ledger: ledger_of(&fragments),
                        });
                    }
                    if visited.len() + next.len() >= opts.budget {
                        return Err(Error::ResourceLimit {
                            budget: opts.budget,
                        });
                    }
                    next.insert(succ.clone());
                }
                for (i, frag) in fragments.iter_mut().enumerate() {
                    if let Some(l) = maps[i][g] {
                        let from = frag.intern(&agg[i]);
                        let to = frag.intern(&succ[i]);
                        frag.edges.insert((from, l), to);
                    }
                }
            }
        }
        visited.extend(next.iter().cloned());
        frontier = next.into_iter().collect();
    }
    stats.aggregates = visited.len();

    for (frag, m) in fragments.iter_mut().zip(&fsms) {
        frag.close(m);
    }
    let ledger = ledger_of(&fragments);
    let locals = fragments
        .into_iter()
        .zip(n.members())
        .map(|(frag, (name, m))| {
            let edges: Vec<(usize, usize, usize)> = frag
                .edges
                .iter()
                .map(|(&(f, l), &t)| (f, l, t))
                .collect();
            (name.clone(), ObserverFsm::from_raw(m, frag.states, 0, edges))
        })
        .collect();
    Ok(OnTheFlyOutcome {
        verdict: Verdict::observable(),
        locals: Some(locals),
        stats,
        ledger,
    })
}
