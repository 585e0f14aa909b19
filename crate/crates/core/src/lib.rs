//! Critical observability of networks of finite state machines.
//!
//! A machine is critically observable when, after any trace, an observer
//! that sees only the events can tell whether the machine currently sits in
//! a critical state. The crate builds such observers for single machines,
//! for networks composed in parallel, and for bisimulation quotients of
//! networks, and replays event streams through banks of local observers.

pub mod composition;
pub mod equivalence;
pub mod error;
pub mod fsm;
pub mod io;
pub mod machine;
pub mod monitor;
pub mod observer;
pub mod onthefly;
pub mod pipeline;

pub use composition::{compose2, compose_network, product_state_name, Network};
pub use equivalence::{
    bisim_check, iso_check, largest_bisimulation, preservation_check, quotient_network,
    BisimRelation, EquivalenceClasses, IsoWitness, PreservationReport,
};
pub use error::{Error, Result};
pub use fsm::{project_word, Fsm, FsmBuilder, Label, StateId, StateRun, Word, EPSILON};
pub use machine::LabeledMachine;
pub use monitor::{MonitorSession, Step};
pub use observer::{
    build_decentralized, build_observer, check_observable, compose_decentralized,
    is_critical_observer_for, is_critically_observable, observer_run, ComposedObserver,
    DecentralizedObserver, ObserverFsm, Verdict, Witness, DEFAULT_BUDGET,
};
pub use onthefly::{run_onthefly, run_onthefly_with, straddle_test, OnTheFlyOptions, OnTheFlyOutcome};
pub use pipeline::{run_algorithm1, run_algorithm3, BaselineOutcome, CostLedger, PipelineReport};
