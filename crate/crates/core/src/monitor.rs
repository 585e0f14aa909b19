//! Online monitoring with a bank of local observers.
//!
//! Every event is routed to the locals whose alphabet contains it; the
//! remaining locals do not move. The global flag is the OR of the local
//! outputs and is recomputed once all affected locals have stepped.

use std::fmt;

use crate::error::{Error, Result};
use crate::fsm::{Label, StateId, Word};
use crate::observer::ObserverFsm;

/// One successfully consumed event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub label: Label,
    /// Which locals consumed the event.
    pub moved: Vec<bool>,
    pub outputs: Vec<bool>,
    pub flag: bool,
}

impl Step {
    /// `<step> <label> <y1..yN> <y>` with steps counted from 1.
    pub fn line(&self, number: usize) -> String {
        let bits: String = self
            .outputs
            .iter()
            .map(|&y| if y { '1' } else { '0' })
            .collect();
        format!("{number} {} {bits} {}", self.label, u8::from(self.flag))
    }
}

#[derive(Debug, Clone)]
pub struct MonitorSession<'a> {
    locals: &'a [(String, ObserverFsm)],
    current: Vec<usize>,
    outputs: Vec<bool>,
    log: Vec<Step>,
    poisoned: bool,
}

impl<'a> MonitorSession<'a> {
    /// Positions every local at its initial state.
    pub fn start(locals: &'a [(String, ObserverFsm)]) -> Self {
        let current: Vec<usize> = locals.iter().map(|(_, o)| o.initial()).collect();
        let outputs = locals
            .iter()
            .zip(&current)
            .map(|((_, o), &s)| o.output(s))
            .collect();
        MonitorSession {
            locals,
            current,
            outputs,
            log: Vec::new(),
            poisoned: false,
        }
    }

    /// Feeds one event and returns the new global flag.
    pub fn feed_event(&mut self, label: &str) -> Result<bool> {
        if self.poisoned {
            return Err(Error::Poisoned);
        }
        let routed: Vec<Option<usize>> = self
            .locals
            .iter()
            .map(|(_, o)| o.label_index(label))
            .collect();
        if routed.iter().all(Option::is_none) {
            return Err(Error::invalid(format!(
                "event `{label}` is in no local alphabet"
            )));
        }
        let mut next = self.current.clone();
        for (i, l) in routed.iter().enumerate() {
            let Some(l) = *l else { continue };
            match self.locals[i].1.next(self.current[i], l) {
                Some(t) => next[i] = t,
                None => {
                    self.poisoned = true;
                    return Err(Error::Desync {
                        step: self.log.len() + 1,
                        local: self.locals[i].0.clone(),
                        label: label.to_string(),
                    });
                }
            }
        }
        self.current = next;
        self.outputs = self
            .locals
            .iter()
            .zip(&self.current)
            .map(|((_, o), &s)| o.output(s))
            .collect();
        let flag = self.flag();
        self.log.push(Step {
            label: Label::new(label)?,
            moved: routed.iter().map(Option::is_some).collect(),
            outputs: self.outputs.clone(),
            flag,
        });
        Ok(flag)
    }

    pub fn replay(&mut self, w: &Word) -> Result<()> {
        w.symbols()
            .iter()
            .try_for_each(|l| self.feed_event(l.as_str()).map(drop))
    }

    pub fn flag(&self) -> bool {
        self.outputs.iter().any(|&y| y)
    }

    pub fn outputs(&self) -> &[bool] {
        &self.outputs
    }

    pub fn current(&self, local: usize) -> usize {
        self.current[local]
    }

    /// Current state estimate of one local.
    pub fn estimate(&self, local: usize) -> Vec<StateId> {
        self.locals[local].1.estimate(self.current[local])
    }

    pub fn log(&self) -> &[Step] {
        &self.log
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    /// The events one local has consumed so far.
    pub fn consumed(&self, local: usize) -> Word {
        self.log
            .iter()
            .filter(|s| s.moved[local])
            .map(|s| s.label.clone())
            .collect()
    }
}

impl fmt::Display for MonitorSession<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.log.iter().enumerate() {
            writeln!(f, "{}", step.line(i + 1))?;
        }
        Ok(())
    }
}
