//! A reference DPLL satisfiability procedure with watched literals.
//!
//! This is ground truth for the encoders on small instances and the fallback
//! effort meter when no external solver is configured. Branching is
//! deterministic (first unassigned variable, false first) so runs are
//! reproducible; a conflict budget turns hopeless instances into an explicit
//! `BudgetExceeded` instead of a hang.

use crate::cnf::{Cnf, Lit, Var};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(Vec<bool>, SatStats),
    Unsat(SatStats),
    BudgetExceeded(SatStats),
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(..))
    }

    pub fn stats(&self) -> SatStats {
        match self {
            SatOutcome::Sat(_, s) | SatOutcome::Unsat(s) | SatOutcome::BudgetExceeded(s) => *s,
        }
    }

    pub fn model(&self) -> Option<&[bool]> {
        match self {
            SatOutcome::Sat(m, _) => Some(m),
            _ => None,
        }
    }
}

/// Decides satisfiability, giving up after `conflict_budget` conflicts.
pub fn solve(cnf: &Cnf, conflict_budget: u64) -> SatOutcome {
    Dpll::new(cnf).run(conflict_budget)
}

const UNASSIGNED: i8 = 0;

fn lit_slot(l: Lit) -> usize {
    (l.var() as usize - 1) * 2 + usize::from(!l.is_positive())
}

struct Dpll {
    clauses: Vec<Vec<Lit>>,
    /// For each literal slot, the clauses currently watching that literal.
    watches: Vec<Vec<usize>>,
    assign: Vec<i8>,
    trail: Vec<Var>,
    /// (variable, trail length before it, both polarities tried)
    decisions: Vec<(Var, usize, bool)>,
    queue_head: usize,
    stats: SatStats,
    /// Set when the input contains an empty clause.
    trivially_unsat: bool,
}

impl Dpll {
    fn new(cnf: &Cnf) -> Dpll {
        let nv = cnf.num_vars() as usize;
        let mut st = Dpll {
            clauses: cnf.clauses().iter().map(|c| c.lits().to_vec()).collect(),
            watches: vec![Vec::new(); nv * 2],
            assign: vec![UNASSIGNED; nv],
            trail: Vec::new(),
            decisions: Vec::new(),
            queue_head: 0,
            stats: SatStats::default(),
            trivially_unsat: false,
        };
        for (idx, clause) in st.clauses.iter().enumerate() {
            match clause.len() {
                0 => st.trivially_unsat = true,
                1 => {
                    // Deferred to the first propagation pass via a watch on
                    // its only literal.
                    st.watches[lit_slot(clause[0])].push(idx);
                }
                _ => {
                    st.watches[lit_slot(clause[0])].push(idx);
                    st.watches[lit_slot(clause[1])].push(idx);
                }
            }
        }
        st
    }

    fn value(&self, l: Lit) -> i8 {
        let v = self.assign[l.var() as usize - 1];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    fn enqueue(&mut self, l: Lit) -> bool {
        match self.value(l) {
            1 => true,
            -1 => false,
            _ => {
                self.assign[l.var() as usize - 1] = if l.is_positive() { 1 } else { -1 };
                self.trail.push(l.var());
                self.stats.propagations += 1;
                true
            }
        }
    }

    /// Propagates everything on the trail; returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.queue_head < self.trail.len() {
            let var = self.trail[self.queue_head];
            self.queue_head += 1;
            let falsified = Lit::new(var, self.assign[var as usize - 1] < 0);
            let slot = lit_slot(falsified);
            let mut watchers = std::mem::take(&mut self.watches[slot]);
            let mut i = 0;
            while i < watchers.len() {
                let cidx = watchers[i];
                match self.rewatch(cidx, falsified) {
                    Rewatch::Moved => {
                        watchers.swap_remove(i);
                    }
                    Rewatch::Unit(l) => {
                        if self.enqueue(l) {
                            i += 1;
                        } else {
                            // Conflict: put the untouched watchers back.
                            self.watches[slot].append(&mut watchers);
                            return false;
                        }
                    }
                    Rewatch::Satisfied => {
                        i += 1;
                    }
                }
            }
            self.watches[slot].extend(watchers);
        }
        true
    }

    fn rewatch(&mut self, cidx: usize, falsified: Lit) -> Rewatch {
        // Keep the falsified literal at position 1 so position 0 holds the
        // other watch.
        if self.clauses[cidx].len() >= 2 && self.clauses[cidx][0] == falsified {
            self.clauses[cidx].swap(0, 1);
        }
        let other = self.clauses[cidx][0];
        if self.value(other) == 1 {
            return Rewatch::Satisfied;
        }
        for pos in 2..self.clauses[cidx].len() {
            let lit = self.clauses[cidx][pos];
            if self.value(lit) != -1 {
                self.clauses[cidx].swap(1, pos);
                self.watches[lit_slot(lit)].push(cidx);
                return Rewatch::Moved;
            }
        }
        Rewatch::Unit(other)
    }

    fn backtrack(&mut self) -> bool {
        while let Some((var, mark, flipped)) = self.decisions.pop() {
            while self.trail.len() > mark {
                let v = self.trail.pop().unwrap();
                self.assign[v as usize - 1] = UNASSIGNED;
            }
            self.queue_head = self.trail.len();
            if !flipped {
                self.decisions.push((var, mark, true));
                let ok = self.enqueue(Lit::new(var, true));
                debug_assert!(ok);
                return true;
            }
        }
        false
    }

    fn run(mut self, conflict_budget: u64) -> SatOutcome {
        if self.trivially_unsat {
            return SatOutcome::Unsat(self.stats);
        }
        // Assert input unit clauses up front.
        for idx in 0..self.clauses.len() {
            if self.clauses[idx].len() == 1 {
                let lit = self.clauses[idx][0];
                if !self.enqueue(lit) {
                    self.stats.conflicts += 1;
                    return SatOutcome::Unsat(self.stats);
                }
            }
        }
        loop {
            if self.propagate() {
                match (1..=self.assign.len() as Var)
                    .find(|&v| self.assign[v as usize - 1] == UNASSIGNED)
                {
                    None => {
                        let model = self.assign.iter().map(|&v| v > 0).collect();
                        return SatOutcome::Sat(model, self.stats);
                    }
                    Some(var) => {
                        self.stats.decisions += 1;
                        self.decisions.push((var, self.trail.len(), false));
                        let ok = self.enqueue(Lit::new(var, false));
                        debug_assert!(ok);
                    }
                }
            } else {
                self.stats.conflicts += 1;
                if self.stats.conflicts >= conflict_budget {
                    return SatOutcome::BudgetExceeded(self.stats);
                }
                if !self.backtrack() {
                    return SatOutcome::Unsat(self.stats);
                }
            }
        }
    }
}

enum Rewatch {
    Moved,
    Unit(Lit),
    Satisfied,
}
