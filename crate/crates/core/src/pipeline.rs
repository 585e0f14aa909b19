//! End-to-end observability workflows and their cost accounting.
//!
//! The baseline builds every local observer in full and composes them. The
//! reduced pipeline first collapses bisimilar members, runs the on-the-fly
//! search on the quotient, then hands each original member the projected
//! observer of its class representative.

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::Serialize;

use crate::composition::Network;
use crate::equivalence::{quotient_network, EquivalenceClasses};
use crate::error::Result;
use crate::observer::{
    build_decentralized_with_budget, compose_decentralized_with_budget, ComposedObserver,
    ObserverFsm, Verdict,
};
use crate::onthefly::{run_onthefly_with, ExplorationStats, OnTheFlyOptions};

/// Storage and work spent on observer data.
///
/// Each stored transition costs the sizes of its source and target
/// estimates plus one unit for the label; each stored state costs one unit
/// for its output. Time counts transitions generated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CostLedger {
    transition_data: u64,
    output_data: u64,
    time: u64,
}

impl CostLedger {
    pub(crate) fn record_transition(&mut self, estimate_sizes: usize) {
        self.transition_data += estimate_sizes as u64 + 1;
        self.time += 1;
    }

    pub(crate) fn record_output(&mut self) {
        self.output_data += 1;
    }

    pub fn of_observer(obs: &ObserverFsm) -> Self {
        let mut ledger = CostLedger {
            output_data: obs.state_count() as u64,
            ..CostLedger::default()
        };
        for (from, _, to) in obs.transitions() {
            ledger.record_transition(obs.states()[from].len() + obs.states()[to].len());
        }
        ledger
    }

    /// Cost of materializing the composed observer on top of its locals.
    pub fn of_composed(c: &ComposedObserver) -> Self {
        let size = |s: usize| -> usize {
            c.aggregate(s)
                .iter()
                .zip(c.locals())
                .map(|(&z, (_, o))| o.states()[z].len())
                .sum()
        };
        let mut ledger = CostLedger {
            output_data: c.state_count() as u64,
            ..CostLedger::default()
        };
        for (from, _, to) in c.transitions() {
            ledger.record_transition(size(from) + size(to));
        }
        ledger
    }

    pub fn transition_data(&self) -> u64 {
        self.transition_data
    }

    pub fn output_data(&self) -> u64 {
        self.output_data
    }

    pub fn space(&self) -> u64 {
        self.transition_data + self.output_data
    }

    pub fn time(&self) -> u64 {
        self.time
    }
}

impl Add for CostLedger {
    type Output = CostLedger;

    fn add(self, rhs: CostLedger) -> CostLedger {
        CostLedger {
            transition_data: self.transition_data + rhs.transition_data,
            output_data: self.output_data + rhs.output_data,
            time: self.time + rhs.time,
        }
    }
}

impl AddAssign for CostLedger {
    fn add_assign(&mut self, rhs: CostLedger) {
        *self = *self + rhs;
    }
}

impl fmt::Display for CostLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "space {} time {}", self.space(), self.time())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineOutcome {
    pub verdict: Verdict,
    pub observer: ComposedObserver,
    pub ledger: CostLedger,
}

/// Full local observers, their composition, and the check on the result.
pub fn run_algorithm1(n: &Network, budget: usize) -> Result<BaselineOutcome> {
    let d = build_decentralized_with_budget(n, budget)?;
    let mut ledger = d
        .locals
        .iter()
        .fold(CostLedger::default(), |acc, (_, o)| acc + CostLedger::of_observer(o));
    let observer = compose_decentralized_with_budget(&d, budget)?;
    if n.len() > 1 {
        ledger += CostLedger::of_composed(&observer);
    }
    Ok(BaselineOutcome {
        verdict: observer.check(),
        observer,
        ledger,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineReport {
    pub verdict: Verdict,
    pub classes: EquivalenceClasses,
    /// One observer per original member, present only when observable.
    pub locals: Option<Vec<(String, ObserverFsm)>>,
    pub stats: ExplorationStats,
    pub ledger_reduced: CostLedger,
    pub ledger_baseline: Option<CostLedger>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    observable: bool,
    witness: Option<String>,
    classes: &'a [Vec<String>],
    representatives: Vec<&'a str>,
    generations: usize,
    aggregates: usize,
    reduced: LedgerJson,
    baseline: Option<LedgerJson>,
}

#[derive(Serialize)]
struct LedgerJson {
    space: u64,
    time: u64,
}

impl From<CostLedger> for LedgerJson {
    fn from(l: CostLedger) -> Self {
        LedgerJson {
            space: l.space(),
            time: l.time(),
        }
    }
}

impl PipelineReport {
    pub fn to_json(&self) -> serde_json::Value {
        let json = ReportJson {
            observable: self.verdict.observable,
            witness: self.verdict.witness.as_ref().map(ToString::to_string),
            classes: &self.classes.classes,
            representatives: self.classes.classes.iter().map(|c| c[0].as_str()).collect(),
            generations: self.stats.generations,
            aggregates: self.stats.aggregates,
            reduced: self.ledger_reduced.into(),
            baseline: self.ledger_baseline.map(Into::into),
        };
        serde_json::to_value(json).expect("report serializes")
    }
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict.witness {
            None => writeln!(f, "observable: yes")?,
            Some(w) => writeln!(f, "observable: no (witness {w})")?,
        }
        writeln!(f, "classes: {}", self.classes.classes.len())?;
        for class in &self.classes.classes {
            writeln!(f, "  {}", class.join(" "))?;
        }
        writeln!(
            f,
            "explored: {} aggregates in {} generations",
            self.stats.aggregates, self.stats.generations
        )?;
        writeln!(f, "cost: {}", self.ledger_reduced)?;
        if let Some(b) = self.ledger_baseline {
            writeln!(f, "baseline cost: {b}")?;
        }
        Ok(())
    }
}

/// Quotient by bisimilarity, search the quotient on the fly, then share each
/// representative's observer with the rest of its class.
pub fn run_algorithm3(n: &Network, run_baseline: bool, budget: usize) -> Result<PipelineReport> {
    let (reduced, classes) = quotient_network(n);
    let outcome = run_onthefly_with(
        &reduced,
        OnTheFlyOptions {
            budget,
            progress: None,
        },
    )?;
    let locals = outcome.locals.map(|reps| {
        n.names()
            .zip(&classes.class_of)
            .map(|(name, &c)| (name.to_string(), reps[c].1.clone()))
            .collect()
    });
    let ledger_baseline = if run_baseline {
        Some(run_algorithm1(n, budget)?.ledger)
    } else {
        None
    };
    Ok(PipelineReport {
        verdict: outcome.verdict,
        classes,
        locals,
        stats: outcome.stats,
        ledger_reduced: outcome.ledger,
        ledger_baseline,
    })
}
