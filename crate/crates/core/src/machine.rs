//! A read-only view shared by every machine kind in the crate, used by the
//! isomorphism search and the observer validation routines.

use crate::fsm::{Fsm, Label};

pub trait LabeledMachine {
    /// Sorted alphabet; label indices refer to positions in this slice.
    fn labels(&self) -> &[Label];
    fn state_count(&self) -> usize;
    fn initial_states(&self) -> Vec<usize>;
    /// Sorted successor indices.
    fn successors(&self, state: usize, label: usize) -> &[usize];
    /// Output bit; for plain machines this is critical-state membership.
    fn output(&self, state: usize) -> bool;
    fn state_label(&self, state: usize) -> String;

    fn is_deterministic(&self) -> bool {
        self.initial_states().len() == 1
            && (0..self.state_count())
                .all(|s| (0..self.labels().len()).all(|l| self.successors(s, l).len() <= 1))
    }

    /// Breadth-first reachability flags from the initial states.
    fn accessible_flags(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = self.initial_states();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for l in 0..self.labels().len() {
                for &t in self.successors(s, l) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        seen
    }
}

impl LabeledMachine for Fsm {
    fn labels(&self) -> &[Label] {
        self.alphabet()
    }

    fn state_count(&self) -> usize {
        Fsm::state_count(self)
    }

    fn initial_states(&self) -> Vec<usize> {
        self.initial().to_vec()
    }

    fn successors(&self, state: usize, label: usize) -> &[usize] {
        Fsm::successors(self, state, label)
    }

    fn output(&self, state: usize) -> bool {
        self.is_critical(state)
    }

    fn state_label(&self, state: usize) -> String {
        self.state_name(state).to_string()
    }
}
