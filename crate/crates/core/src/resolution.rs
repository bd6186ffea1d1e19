//! Resolution refutations: representation, checking, width measurement, an
//! exact small-instance width oracle, brute-force treelike refutation
//! generation, and the size-from-width report.
//!
//! A refutation is a sequence of steps, each an input clause or a resolvent
//! of two earlier steps on a stated pivot; the final step must be the empty
//! clause. Resolvent orientation is normalized: every step records which
//! parent holds the pivot positively.

use crate::cnf::{Cnf, Var};
use crate::game::{GameView, Memory, ProverMove, ProverStrategy};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

/// Variable-count guard for [`treelike_bruteforce`]; the refutation can reach
/// 2^(m+1) - 1 steps.
pub const DEFAULT_TREELIKE_VAR_GUARD: u32 = 22;

/// Clause budget for [`width_oracle`] saturation.
pub const DEFAULT_SATURATION_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("refutation has no steps")]
    EmptyRefutation,
    #[error("step {step}: axiom index {index} out of range")]
    BadAxiomIndex { step: usize, index: usize },
    #[error("step {step}: reference to step {referenced} is not strictly earlier")]
    ForwardReference { step: usize, referenced: usize },
    #[error("step {step}: pivot {pivot} does not occur positively in the first parent")]
    PivotNotPositive { step: usize, pivot: Var },
    #[error("step {step}: pivot {pivot} does not occur negatively in the second parent")]
    PivotNotNegative { step: usize, pivot: Var },
    #[error("step {step}: resolvent still contains both polarities of {var}")]
    TautologicalResolvent { step: usize, var: Var },
    #[error("final step is not the empty clause")]
    FinalNotEmpty,
    #[error("formula has {vars} variables, over the treelike guard {guard}")]
    TooManyVariables { vars: u32, guard: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One refutation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// An input clause, by index into the Cnf.
    Axiom(usize),
    /// Resolvent of two earlier steps; `pos` holds the pivot positively.
    Resolvent { pos: usize, neg: usize, pivot: Var },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Refutation {
    pub steps: Vec<Step>,
}

impl Refutation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Text form: one step per line, `a <clause-idx>` or
    /// `r <pos-step> <neg-step> <pivot-var>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            match *step {
                Step::Axiom(idx) => out.push_str(&format!("a {idx}\n")),
                Step::Resolvent { pos, neg, pivot } => {
                    out.push_str(&format!("r {pos} {neg} {pivot}\n"))
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Refutation, ResolutionError> {
        let mut steps = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ResolutionError::Parse { line: idx + 1, msg };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["a", i] => steps.push(Step::Axiom(
                    i.parse().map_err(|_| err(format!("bad index {i:?}")))?,
                )),
                ["r", a, b, p] => steps.push(Step::Resolvent {
                    pos: a.parse().map_err(|_| err(format!("bad step {a:?}")))?,
                    neg: b.parse().map_err(|_| err(format!("bad step {b:?}")))?,
                    pivot: p.parse().map_err(|_| err(format!("bad pivot {p:?}")))?,
                }),
                _ => {
                    return Err(err(format!(
                        "expected `a <idx>` or `r <s> <s> <var>`, got {line:?}"
                    )))
                }
            }
        }
        Ok(Refutation { steps })
    }
}

/// Width and size measurements of a checked refutation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthReport {
    /// Width of the widest clause appearing in the refutation.
    pub width: usize,
    /// Width of the widest input clause.
    pub formula_width: usize,
    pub num_vars: u32,
    /// Number of steps.
    pub size: usize,
    /// (width - formula_width)^2 / num_vars, clamped at zero.
    pub lower_bound_exponent: f64,
}

pub fn lower_bound_exponent(width: usize, formula_width: usize, num_vars: u32) -> f64 {
    let d = width.saturating_sub(formula_width) as f64;
    d * d / num_vars as f64
}

/// Validates every step and that the final clause is empty; returns the
/// measurements or a structured failure naming the first bad step.
pub fn check_refutation(
    cnf: &Cnf,
    refutation: &Refutation,
) -> Result<WidthReport, ResolutionError> {
    let clauses = replay(cnf, refutation)?;
    if !clauses.last().expect("nonempty").is_empty() {
        return Err(ResolutionError::FinalNotEmpty);
    }
    let width = clauses
        .iter()
        .map(crate::cnf::Clause::width)
        .max()
        .unwrap_or(0);
    Ok(WidthReport {
        width,
        formula_width: cnf.width(),
        num_vars: cnf.num_vars(),
        size: refutation.len(),
        lower_bound_exponent: lower_bound_exponent(width, cnf.width(), cnf.num_vars()),
    })
}

/// Computes the clause at every step, validating as it goes.
fn replay(cnf: &Cnf, refutation: &Refutation) -> Result<Vec<crate::cnf::Clause>, ResolutionError> {
    if refutation.is_empty() {
        return Err(ResolutionError::EmptyRefutation);
    }
    let mut clauses: Vec<crate::cnf::Clause> = Vec::with_capacity(refutation.len());
    for (idx, step) in refutation.steps.iter().enumerate() {
        let clause = match *step {
            Step::Axiom(i) => {
                cnf.clauses()
                    .get(i)
                    .cloned()
                    .ok_or(ResolutionError::BadAxiomIndex {
                        step: idx,
                        index: i,
                    })?
            }
            Step::Resolvent { pos, neg, pivot } => {
                for r in [pos, neg] {
                    if r >= idx {
                        return Err(ResolutionError::ForwardReference {
                            step: idx,
                            referenced: r,
                        });
                    }
                }
                if clauses[pos].polarity_of(pivot) != Some(true) {
                    return Err(ResolutionError::PivotNotPositive { step: idx, pivot });
                }
                if clauses[neg].polarity_of(pivot) != Some(false) {
                    return Err(ResolutionError::PivotNotNegative { step: idx, pivot });
                }
                clauses[pos]
                    .resolve(&clauses[neg], pivot)
                    .map_err(|e| match e {
                        crate::cnf::CnfError::Tautology(var) => {
                            ResolutionError::TautologicalResolvent { step: idx, var }
                        }
                        other => panic!("unexpected resolve error: {other}"),
                    })?
            }
        };
        clauses.push(clause);
    }
    Ok(clauses)
}

// ---------------------------------------------------------------------------
// Size-from-width report
// ---------------------------------------------------------------------------

/// Rendering of the size-from-width relation: refutation length is at least
/// exponential in (W - k)^2 / m. The exponent is reported constant-free as
/// an asymptotic-shape indicator, not a certified bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SizeWidthBound {
    pub refutation_width: usize,
    pub formula_width: usize,
    pub num_vars: u32,
    pub exponent: f64,
    pub note: String,
}

pub fn size_width_bound(report: &WidthReport) -> SizeWidthBound {
    SizeWidthBound {
        refutation_width: report.width,
        formula_width: report.formula_width,
        num_vars: report.num_vars,
        exponent: report.lower_bound_exponent,
        note: "length >= 2^(Omega(exponent)); shape indicator, constant not certified".to_string(),
    }
}

// ---------------------------------------------------------------------------
// Width oracle by bounded saturation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Input(usize),
    Resolved { pos: usize, neg: usize, pivot: Var },
}

struct Arena {
    entries: Vec<(crate::cnf::Clause, Origin)>,
    seen: HashMap<crate::cnf::Clause, usize>,
}

impl Arena {
    fn push(&mut self, clause: crate::cnf::Clause, origin: Origin) -> Option<usize> {
        if self.seen.contains_key(&clause) {
            return None;
        }
        let idx = self.entries.len();
        self.seen.insert(clause.clone(), idx);
        self.entries.push((clause, origin));
        Some(idx)
    }
}

enum SaturateInner {
    Empty(Arena, usize),
    Fixpoint(Arena),
    Budget,
}

/// Closure of the width-<= w fragment: starts from the input clauses of
/// width <= w and adds every non-tautological resolvent of width <= w until
/// fixpoint, deduplicating canonically sorted clauses.
fn saturate_inner(cnf: &Cnf, w: usize, clause_budget: usize) -> SaturateInner {
    let mut arena = Arena {
        entries: Vec::new(),
        seen: HashMap::new(),
    };
    for (idx, clause) in cnf.clauses().iter().enumerate() {
        if clause.width() <= w {
            if let Some(new_idx) = arena.push(clause.clone(), Origin::Input(idx)) {
                if arena.entries[new_idx].0.is_empty() {
                    return SaturateInner::Empty(arena, new_idx);
                }
            }
        }
    }
    let mut i = 0;
    while i < arena.entries.len() {
        for j in 0..i {
            // Try every pivot with opposite polarities between entries i and j.
            let pivots: Vec<(usize, usize, Var)> = {
                let (ci, cj) = (&arena.entries[i].0, &arena.entries[j].0);
                ci.lits()
                    .iter()
                    .filter_map(|l| {
                        let var = l.var();
                        match cj.polarity_of(var) {
                            Some(p) if p != l.is_positive() => Some(if l.is_positive() {
                                (i, j, var)
                            } else {
                                (j, i, var)
                            }),
                            _ => None,
                        }
                    })
                    .collect()
            };
            for (pos, neg, pivot) in pivots {
                let Ok(resolvent) = arena.entries[pos].0.resolve(&arena.entries[neg].0, pivot)
                else {
                    continue; // tautology
                };
                if resolvent.width() > w {
                    continue;
                }
                let empty = resolvent.is_empty();
                if let Some(idx) = arena.push(resolvent, Origin::Resolved { pos, neg, pivot }) {
                    if empty {
                        return SaturateInner::Empty(arena, idx);
                    }
                    if arena.entries.len() > clause_budget {
                        return SaturateInner::Budget;
                    }
                }
            }
        }
        i += 1;
    }
    SaturateInner::Fixpoint(arena)
}

/// Summary of one bounded-width saturation round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturationOutcome {
    /// Fixpoint reached (or empty clause derived) within budget.
    Closed {
        clauses: usize,
        derived_empty: bool,
    },
    BudgetExceeded,
}

pub fn saturate(cnf: &Cnf, w: usize, clause_budget: usize) -> SaturationOutcome {
    match saturate_inner(cnf, w, clause_budget) {
        SaturateInner::Empty(arena, _) => SaturationOutcome::Closed {
            clauses: arena.entries.len(),
            derived_empty: true,
        },
        SaturateInner::Fixpoint(arena) => SaturationOutcome::Closed {
            clauses: arena.entries.len(),
            derived_empty: false,
        },
        SaturateInner::Budget => SaturationOutcome::BudgetExceeded,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WidthOutcome {
    /// The least width whose closure contains the empty clause, with a
    /// refutation extracted from the saturation trace.
    Refuted {
        width: usize,
        refutation: Refutation,
    },
    /// No refutation of width <= w_max (satisfiable formulas land here).
    NotWithin {
        w_max: usize,
    },
    BudgetExceeded {
        at_width: usize,
    },
}

/// Exact minimal refutation width by saturation at increasing width bounds,
/// starting from the formula width.
pub fn width_oracle(cnf: &Cnf, w_max: usize, clause_budget: usize) -> WidthOutcome {
    if let Some(idx) = cnf.clauses().iter().position(|c| c.is_empty()) {
        return WidthOutcome::Refuted {
            width: 0,
            refutation: Refutation {
                steps: vec![Step::Axiom(idx)],
            },
        };
    }
    for w in cnf.width()..=w_max {
        match saturate_inner(cnf, w, clause_budget) {
            SaturateInner::Empty(arena, empty_idx) => {
                return WidthOutcome::Refuted {
                    width: w,
                    refutation: extract(&arena, empty_idx),
                }
            }
            SaturateInner::Fixpoint(_) => {}
            SaturateInner::Budget => return WidthOutcome::BudgetExceeded { at_width: w },
        }
    }
    WidthOutcome::NotWithin { w_max }
}

/// Rebuilds an ordered refutation from the arena entries reachable from the
/// empty clause.
fn extract(arena: &Arena, root: usize) -> Refutation {
    let mut reachable = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(idx) = stack.pop() {
        if !reachable.insert(idx) {
            continue;
        }
        if let Origin::Resolved { pos, neg, .. } = arena.entries[idx].1 {
            stack.push(pos);
            stack.push(neg);
        }
    }
    let order: Vec<usize> = reachable.into_iter().collect();
    let position: HashMap<usize, usize> = order.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let steps = order
        .iter()
        .map(|&i| match arena.entries[i].1 {
            Origin::Input(idx) => Step::Axiom(idx),
            Origin::Resolved { pos, neg, pivot } => Step::Resolvent {
                pos: position[&pos],
                neg: position[&neg],
                pivot,
            },
        })
        .collect();
    Refutation { steps }
}

// ---------------------------------------------------------------------------
// Treelike brute force
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum TreelikeOutcome {
    Refutation(Refutation),
    /// Some branch falsified no clause under a total assignment.
    Satisfiable(Vec<bool>),
}

/// Builds the decision-tree refutation: split on variables in index order;
/// each leaf is an input clause falsified by the branch assignment; internal
/// nodes resolve the two children on the split variable, skipping the
/// resolution (and reusing the child) whenever the pivot is absent. The
/// result passes [`check_refutation`] and has at most 2^(m+1) - 1 steps.
pub fn treelike_bruteforce(cnf: &Cnf, var_guard: u32) -> Result<TreelikeOutcome, ResolutionError> {
    if cnf.num_vars() > var_guard {
        return Err(ResolutionError::TooManyVariables {
            vars: cnf.num_vars(),
            guard: var_guard,
        });
    }
    let mut builder = Treelike {
        cnf,
        assignment: vec![None; cnf.num_vars() as usize],
        steps: Vec::new(),
        clauses: Vec::new(),
        axiom_steps: HashMap::new(),
    };
    match builder.refute(1) {
        Ok(root) => Ok(TreelikeOutcome::Refutation(builder.prune(root))),
        Err(model) => Ok(TreelikeOutcome::Satisfiable(model)),
    }
}

struct Treelike<'a> {
    cnf: &'a Cnf,
    assignment: Vec<Option<bool>>,
    steps: Vec<Step>,
    clauses: Vec<crate::cnf::Clause>,
    axiom_steps: HashMap<usize, usize>,
}

impl Treelike<'_> {
    /// Returns the index of a step whose clause is falsified by the current
    /// partial assignment, or the satisfying total assignment.
    fn refute(&mut self, next_var: Var) -> Result<usize, Vec<bool>> {
        if let Some(idx) = self.falsified_input() {
            return Ok(self.axiom(idx));
        }
        if next_var > self.cnf.num_vars() {
            // Total assignment, nothing falsified: the formula is satisfied.
            return Err(self.assignment.iter().map(|v| v.unwrap_or(false)).collect());
        }

        let slot = next_var as usize - 1;
        self.assignment[slot] = Some(false);
        let lo = self.refute(next_var + 1);
        self.assignment[slot] = None;
        let lo = lo?;
        if self.clauses[lo].polarity_of(next_var) != Some(true) {
            // The pivot is absent: the child clause is already falsified
            // without the split, so reuse it and skip the other branch.
            return Ok(lo);
        }

        self.assignment[slot] = Some(true);
        let hi = self.refute(next_var + 1);
        self.assignment[slot] = None;
        let hi = hi?;
        if self.clauses[hi].polarity_of(next_var) != Some(false) {
            return Ok(hi);
        }

        let clause = self.clauses[lo]
            .resolve(&self.clauses[hi], next_var)
            .expect("branch clauses cannot share further complementary pairs");
        self.steps.push(Step::Resolvent {
            pos: lo,
            neg: hi,
            pivot: next_var,
        });
        self.clauses.push(clause);
        Ok(self.steps.len() - 1)
    }

    fn falsified_input(&self) -> Option<usize> {
        self.cnf.clauses().iter().position(|clause| {
            clause
                .lits()
                .iter()
                .all(|l| self.assignment[l.var() as usize - 1] == Some(!l.is_positive()))
        })
    }

    fn axiom(&mut self, cnf_idx: usize) -> usize {
        if let Some(&step) = self.axiom_steps.get(&cnf_idx) {
            return step;
        }
        self.steps.push(Step::Axiom(cnf_idx));
        self.clauses.push(self.cnf.clause(cnf_idx).clone());
        let step = self.steps.len() - 1;
        self.axiom_steps.insert(cnf_idx, step);
        step
    }

    /// Drops steps unreachable from the root (skipped-branch leftovers) and
    /// renumbers, leaving the root as the final step.
    fn prune(&self, root: usize) -> Refutation {
        let mut reachable = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(idx) = stack.pop() {
            if !reachable.insert(idx) {
                continue;
            }
            if let Step::Resolvent { pos, neg, .. } = self.steps[idx] {
                stack.push(pos);
                stack.push(neg);
            }
        }
        let order: Vec<usize> = reachable.into_iter().collect();
        let position: HashMap<usize, usize> =
            order.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        Refutation {
            steps: order
                .iter()
                .map(|&i| match self.steps[i] {
                    Step::Axiom(idx) => Step::Axiom(idx),
                    Step::Resolvent { pos, neg, pivot } => Step::Resolvent {
                        pos: position[&pos],
                        neg: position[&neg],
                        pivot,
                    },
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Prover from a refutation
// ---------------------------------------------------------------------------

/// The game strategy extracted from a refutation: walk from the empty clause
/// toward an axiom, keeping in memory exactly the assignment falsifying the
/// current clause. With mu >= W + 1 memory locations it reaches a falsified
/// input clause against every adversary.
pub struct RefutationProver {
    steps: Vec<Step>,
    clauses: Vec<crate::cnf::Clause>,
    current: usize,
    width: usize,
}

/// Builds the prover; the refutation is validated up front.
pub fn prover_from_refutation(
    cnf: &Cnf,
    refutation: &Refutation,
) -> Result<RefutationProver, ResolutionError> {
    let report = check_refutation(cnf, refutation)?;
    let clauses = replay(cnf, refutation)?;
    Ok(RefutationProver {
        steps: refutation.steps.clone(),
        clauses,
        current: refutation.len() - 1,
        width: report.width,
    })
}

impl RefutationProver {
    /// W + 1: the memory that suffices for this prover to win.
    pub fn sufficient_memory(&self) -> usize {
        self.width + 1
    }
}

impl ProverStrategy for RefutationProver {
    fn name(&self) -> String {
        "refutation-walk".to_string()
    }

    fn next_move(&mut self, view: &GameView) -> ProverMove {
        let memory: &Memory = view.memory;
        loop {
            match self.steps[self.current] {
                Step::Axiom(_) => {
                    // Memory falsifies an input clause, so the engine ends the
                    // game before asking again; reachable only under a memory
                    // cap below W + 1. Stay legal.
                    return match memory.vars().next() {
                        Some(v) => ProverMove::Forget(v),
                        None => ProverMove::Query(1),
                    };
                }
                Step::Resolvent { pos, neg, pivot } => match memory.get(pivot) {
                    Some(true) => self.current = neg,
                    Some(false) => self.current = pos,
                    None => {
                        let goal = &self.clauses[self.current];
                        if let Some(stale) = memory
                            .vars()
                            .find(|&v| v != pivot && goal.polarity_of(v).is_none())
                        {
                            return ProverMove::Forget(stale);
                        }
                        if memory.len() < view.mu {
                            return ProverMove::Query(pivot);
                        }
                        // Memory cap below W + 1: give ground.
                        let victim = memory.vars().next().expect("memory is full");
                        return ProverMove::Forget(victim);
                    }
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{encode_binary, encode_clique, Clause, ClauseTag, Lit};
    use crate::game::{adversary_constant, adversary_random, play, GameConfig, GameOutcome};
    use crate::graph::Graph;
    use crate::sat;

    fn cnf_of(num_vars: u32, clauses: &[&[i32]]) -> Cnf {
        let mut cnf = Cnf::new(num_vars);
        for c in clauses {
            let lits = c
                .iter()
                .map(|&x| Lit::new(x.unsigned_abs(), x > 0))
                .collect();
            cnf.push(Clause::new(lits).unwrap(), ClauseTag::Input)
                .unwrap();
        }
        cnf
    }

    fn unit_clash() -> Cnf {
        cnf_of(1, &[&[1], &[-1]])
    }

    #[test]
    fn checker_accepts_unit_clash_refutation() {
        let cnf = unit_clash();
        let r = Refutation {
            steps: vec![
                Step::Axiom(0),
                Step::Axiom(1),
                Step::Resolvent {
                    pos: 0,
                    neg: 1,
                    pivot: 1,
                },
            ],
        };
        let report = check_refutation(&cnf, &r).unwrap();
        assert_eq!(report.width, 1);
        assert_eq!(report.size, 3);
        assert_eq!(report.lower_bound_exponent, 0.0);
    }

    #[test]
    fn checker_rejects_absent_pivot() {
        let cnf = unit_clash();
        let r = Refutation {
            steps: vec![
                Step::Axiom(0),
                Step::Axiom(1),
                Step::Resolvent {
                    pos: 0,
                    neg: 1,
                    pivot: 2,
                },
            ],
        };
        assert_eq!(
            check_refutation(&cnf, &r),
            Err(ResolutionError::PivotNotPositive { step: 2, pivot: 2 })
        );
    }

    #[test]
    fn checker_rejects_structural_problems() {
        let cnf = unit_clash();
        assert_eq!(
            check_refutation(&cnf, &Refutation::default()),
            Err(ResolutionError::EmptyRefutation)
        );
        let r = Refutation {
            steps: vec![Step::Axiom(5)],
        };
        assert!(matches!(
            check_refutation(&cnf, &r),
            Err(ResolutionError::BadAxiomIndex { .. })
        ));
        let r = Refutation {
            steps: vec![Step::Axiom(0)],
        };
        assert_eq!(
            check_refutation(&cnf, &r),
            Err(ResolutionError::FinalNotEmpty)
        );
        let r = Refutation {
            steps: vec![
                Step::Axiom(0),
                Step::Resolvent {
                    pos: 0,
                    neg: 1,
                    pivot: 1,
                },
            ],
        };
        assert!(matches!(
            check_refutation(&cnf, &r),
            Err(ResolutionError::ForwardReference { .. })
        ));
    }

    #[test]
    fn width_oracle_examples() {
        match width_oracle(&unit_clash(), 4, 10_000) {
            WidthOutcome::Refuted { width, refutation } => {
                assert_eq!(width, 1);
                check_refutation(&unit_clash(), &refutation).unwrap();
            }
            other => panic!("{other:?}"),
        }

        let full2 = cnf_of(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        match width_oracle(&full2, 4, 10_000) {
            WidthOutcome::Refuted { width, refutation } => {
                assert_eq!(width, 2);
                check_refutation(&full2, &refutation).unwrap();
            }
            other => panic!("{other:?}"),
        }
        // Below the minimum width the closure misses the empty clause.
        assert_eq!(
            saturate(&full2, 1, 10_000),
            SaturationOutcome::Closed {
                clauses: 0,
                derived_empty: false
            }
        );

        let satisfiable = cnf_of(2, &[&[1, 2], &[-1, 2]]);
        assert_eq!(
            width_oracle(&satisfiable, 4, 10_000),
            WidthOutcome::NotWithin { w_max: 4 }
        );
    }

    #[test]
    fn width_oracle_handles_input_empty_clause() {
        let mut cnf = Cnf::new(1);
        cnf.push(Clause::empty(), ClauseTag::Input).unwrap();
        match width_oracle(&cnf, 3, 100) {
            WidthOutcome::Refuted { width, refutation } => {
                assert_eq!(width, 0);
                assert_eq!(refutation.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn treelike_unit_clash() {
        match treelike_bruteforce(&unit_clash(), DEFAULT_TREELIKE_VAR_GUARD).unwrap() {
            TreelikeOutcome::Refutation(r) => {
                assert_eq!(r.len(), 3);
                check_refutation(&unit_clash(), &r).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn treelike_on_clique_formula() {
        let c4 = Graph::cycle(2).unwrap();
        let (cnf, _) = encode_clique(&c4, 3).unwrap();
        assert_eq!(cnf.num_vars(), 6);
        match treelike_bruteforce(&cnf, DEFAULT_TREELIKE_VAR_GUARD).unwrap() {
            TreelikeOutcome::Refutation(r) => {
                assert!(r.len() < (1 << 7), "size {}", r.len());
                check_refutation(&cnf, &r).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn treelike_detects_satisfiable_with_witness() {
        // K_8 is not Ramsey at s = 3: the formula is satisfiable.
        let k8 = Graph::complete(3).unwrap();
        let (cnf, map) = encode_binary(&k8, 3).unwrap();
        match treelike_bruteforce(&cnf, DEFAULT_TREELIKE_VAR_GUARD).unwrap() {
            TreelikeOutcome::Satisfiable(model) => {
                assert!(cnf.eval(&model));
                let decoded = crate::cnf::decode_assignment(&map, &k8, &model);
                assert!(decoded.is_valid_witness());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn treelike_guard() {
        let cnf = Cnf::new(40);
        assert!(matches!(
            treelike_bruteforce(&cnf, 22),
            Err(ResolutionError::TooManyVariables {
                vars: 40,
                guard: 22
            })
        ));
    }

    #[test]
    fn treelike_agrees_with_dpll_on_random_3cnfs() {
        use crate::rng;
        let mut rng = rng::seeded(77);
        for _ in 0..40 {
            let nv = 5 + rng::draw_below(&mut rng, 3) as u32;
            let nc = 8 + rng::draw_below(&mut rng, 25) as usize;
            let mut cnf = Cnf::new(nv);
            for _ in 0..nc {
                let mut lits = Vec::new();
                for _ in 0..3 {
                    let v = 1 + rng::draw_below(&mut rng, nv as u64) as Var;
                    lits.push(Lit::new(v, rng::coin(&mut rng)));
                }
                if let Ok(c) = Clause::new(lits) {
                    cnf.push(c, ClauseTag::Input).unwrap();
                }
            }
            let dpll_sat = sat::solve(&cnf, 1_000_000).is_sat();
            match treelike_bruteforce(&cnf, 22).unwrap() {
                TreelikeOutcome::Refutation(r) => {
                    assert!(!dpll_sat);
                    assert!(r.len() < (1 << (nv + 1)));
                    check_refutation(&cnf, &r).unwrap();
                }
                TreelikeOutcome::Satisfiable(model) => {
                    assert!(dpll_sat);
                    assert!(cnf.eval(&model));
                }
            }
        }
    }

    #[test]
    fn size_width_bound_arithmetic() {
        assert_eq!(lower_bound_exponent(20, 8, 36), 4.0);
        assert_eq!(lower_bound_exponent(8, 8, 36), 0.0);
        assert_eq!(lower_bound_exponent(4, 8, 36), 0.0);
        let mut prev = 0.0;
        for w in 8..30 {
            let e = lower_bound_exponent(w, 8, 36);
            assert!(e >= prev);
            prev = e;
        }
        let report = WidthReport {
            width: 20,
            formula_width: 8,
            num_vars: 36,
            size: 100,
            lower_bound_exponent: 4.0,
        };
        assert_eq!(size_width_bound(&report).exponent, 4.0);
    }

    #[test]
    fn refutation_text_round_trip() {
        let r = Refutation {
            steps: vec![
                Step::Axiom(0),
                Step::Axiom(3),
                Step::Resolvent {
                    pos: 0,
                    neg: 1,
                    pivot: 7,
                },
            ],
        };
        assert_eq!(Refutation::from_text(&r.to_text()).unwrap(), r);
        assert!(Refutation::from_text("x 1 2\n").is_err());
        assert!(Refutation::from_text("r 0 1\n").is_err());
    }

    #[test]
    fn refutation_prover_wins_unit_clash_with_minimal_memory() {
        let cnf = unit_clash();
        let r = Refutation {
            steps: vec![
                Step::Axiom(0),
                Step::Axiom(1),
                Step::Resolvent {
                    pos: 0,
                    neg: 1,
                    pivot: 1,
                },
            ],
        };
        for bit in [false, true] {
            let mut prover = prover_from_refutation(&cnf, &r).unwrap();
            assert_eq!(prover.sufficient_memory(), 2);
            let mut adv = adversary_constant(bit);
            let t = play(&cnf, &mut prover, &mut adv, &GameConfig::new(2, 100));
            match t.outcome {
                GameOutcome::ProverWon { .. } => assert!(t.memory_high_water <= 2),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn refutation_prover_beats_random_adversaries_within_width_bound() {
        let c4 = Graph::cycle(2).unwrap();
        let (cnf, _) = encode_clique(&c4, 3).unwrap();
        let TreelikeOutcome::Refutation(r) =
            treelike_bruteforce(&cnf, DEFAULT_TREELIKE_VAR_GUARD).unwrap()
        else {
            panic!("refutable");
        };
        let report = check_refutation(&cnf, &r).unwrap();
        for seed in 0..5 {
            let mut prover = prover_from_refutation(&cnf, &r).unwrap();
            let mut adv = adversary_random(seed);
            let mu = report.width + 1;
            let t = play(&cnf, &mut prover, &mut adv, &GameConfig::new(mu, 1 << 20));
            match t.outcome {
                GameOutcome::ProverWon { .. } => {
                    assert!(t.memory_high_water <= report.width + 1)
                }
                other => panic!("seed {seed}: {other:?}"),
            }
        }
    }

    #[test]
    fn prover_rejects_invalid_refutation() {
        let cnf = unit_clash();
        let bad = Refutation {
            steps: vec![Step::Axiom(0)],
        };
        assert!(prover_from_refutation(&cnf, &bad).is_err());
    }
}
