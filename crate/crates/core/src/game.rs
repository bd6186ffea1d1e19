//! The memory-bounded query game between a Prover and an Adversary.
//!
//! The Prover claims the CNF is unsatisfiable, the Adversary claims to know a
//! satisfying assignment. Each round the Prover either queries an unassigned
//! variable (legal only below the memory cap) or forgets a stored one; the
//! Adversary answers queries bit by bit and may answer a re-queried variable
//! differently. The Prover wins as soon as the partial assignment in memory
//! falsifies a clause. "Playing forever" is operationalized as surviving
//! `max_moves`, reported as survival at the cap rather than a win.

use crate::cnf::{Cnf, EncodingKind, Var, VarMap};
use crate::pattern::Pattern;
use crate::rng::{self, Rng};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("clique game views need a binary variable map")]
    UnaryMapRejected,
}

/// The Prover's memory: at most one stored value per variable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Memory {
    map: BTreeMap<Var, bool>,
}

impl Memory {
    pub fn new() -> Memory {
        Memory::default()
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.map.get(&var).copied()
    }

    pub fn contains(&self, var: Var) -> bool {
        self.map.contains_key(&var)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.map.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.map.iter().map(|(&v, &b)| (v, b))
    }

    fn insert(&mut self, var: Var, value: bool) {
        self.map.insert(var, value);
    }

    fn remove(&mut self, var: Var) -> Option<bool> {
        self.map.remove(&var)
    }

    /// The pattern the memory currently pins down for one index of a binary
    /// vertex-naming map.
    pub fn pattern_of(&self, map: &VarMap, index: u32) -> Pattern {
        debug_assert_eq!(map.kind, EncodingKind::Binary);
        let mut p = Pattern::empty(map.k);
        for b in 1..=map.k {
            if let Some(value) = self.get(map.x_var(index, b)) {
                p = p.with_bit(b, value);
            }
        }
        p
    }
}

/// Per-index pattern views of the memory; binary maps only.
pub fn clique_game_view(memory: &Memory, map: &VarMap) -> Result<Vec<Pattern>, GameError> {
    if map.kind != EncodingKind::Binary {
        return Err(GameError::UnaryMapRejected);
    }
    Ok((1..=map.s).map(|i| memory.pattern_of(map, i)).collect())
}

/// What the Prover sees when choosing a move.
pub struct GameView<'a> {
    pub memory: &'a Memory,
    pub cnf: &'a Cnf,
    pub mu: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProverMove {
    Query(Var),
    Forget(Var),
    /// Ends the game (interactive operator use).
    Quit,
}

/// Structured resignation carried out of a strategy that cannot maintain its
/// invariants; the diagnostics identify the violated condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resignation {
    pub strategy: String,
    pub condition: String,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdversaryReply {
    Bit(bool),
    Resign(Resignation),
}

pub trait ProverStrategy {
    fn name(&self) -> String;
    fn next_move(&mut self, view: &GameView) -> ProverMove;
}

pub trait AdversaryStrategy {
    fn name(&self) -> String;
    fn answer(&mut self, memory: &Memory, var: Var) -> AdversaryReply;
    /// Called after the engine removed `var`; `memory` is the post-removal state.
    fn observe_forget(&mut self, _memory: &Memory, _var: Var) {}
    /// Invariant hook for instrumented playouts.
    fn validate(&self, _memory: &Memory) -> Result<(), String> {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GameConfig {
    /// Memory locations available to the Prover.
    pub mu: usize,
    pub max_moves: u64,
    /// Run the adversary's `validate` hook after every move.
    pub check_invariants: bool,
}

impl GameConfig {
    pub fn new(mu: usize, max_moves: u64) -> GameConfig {
        GameConfig {
            mu,
            max_moves,
            check_invariants: false,
        }
    }

    pub fn with_invariant_checks(mut self) -> GameConfig {
        self.check_invariants = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum GameOutcome {
    ProverWon {
        clause: usize,
        moves: u64,
    },
    AdversarySurvived {
        moves: u64,
    },
    AdversaryResigned {
        moves: u64,
        resignation: Resignation,
    },
    ProverForfeit {
        moves: u64,
        violation: String,
    },
    InvariantViolation {
        moves: u64,
        message: String,
    },
    Aborted {
        moves: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    /// "q" or "f".
    pub mv: String,
    pub var: Var,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answer: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub prover: String,
    pub adversary: String,
    pub mu: usize,
    pub max_moves: u64,
    pub entries: Vec<TranscriptEntry>,
    pub outcome: GameOutcome,
    pub memory_high_water: usize,
}

impl GameOutcome {
    pub fn moves(&self) -> u64 {
        match *self {
            GameOutcome::ProverWon { moves, .. }
            | GameOutcome::AdversarySurvived { moves }
            | GameOutcome::AdversaryResigned { moves, .. }
            | GameOutcome::ProverForfeit { moves, .. }
            | GameOutcome::InvariantViolation { moves, .. }
            | GameOutcome::Aborted { moves } => moves,
        }
    }
}

impl Transcript {
    /// One JSON record per move, then a trailer record with the outcome.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("serializable"));
            out.push('\n');
        }
        let trailer = serde_json::json!({
            "prover": self.prover,
            "adversary": self.adversary,
            "mu": self.mu,
            "max_moves": self.max_moves,
            "outcome": self.outcome,
            "memory_high_water": self.memory_high_water,
        });
        out.push_str(&trailer.to_string());
        out.push('\n');
        out
    }
}

/// Incremental falsified-literal counters over the clauses that can actually
/// be falsified under the memory cap (width <= mu; wider clauses never have
/// all literals assigned at once).
struct FalsifiedTracker {
    clause_idx: Vec<usize>,
    width: Vec<u32>,
    falsified: Vec<u32>,
    /// Per variable: (candidate position, literal polarity) pairs.
    occurrences: Vec<Vec<(u32, bool)>>,
}

impl FalsifiedTracker {
    fn new(cnf: &Cnf, mu: usize) -> FalsifiedTracker {
        let mut t = FalsifiedTracker {
            clause_idx: Vec::new(),
            width: Vec::new(),
            falsified: Vec::new(),
            occurrences: vec![Vec::new(); cnf.num_vars() as usize],
        };
        for (idx, clause) in cnf.clauses().iter().enumerate() {
            if clause.is_empty() || clause.width() > mu {
                continue;
            }
            let pos = t.clause_idx.len() as u32;
            t.clause_idx.push(idx);
            t.width.push(clause.width() as u32);
            t.falsified.push(0);
            for lit in clause.lits() {
                t.occurrences[lit.var() as usize - 1].push((pos, lit.is_positive()));
            }
        }
        t
    }

    /// Returns the first clause fully falsified by this assignment, if any.
    fn on_assign(&mut self, var: Var, value: bool) -> Option<usize> {
        let mut hit = None;
        for &(pos, polarity) in &self.occurrences[var as usize - 1] {
            if polarity != value {
                let p = pos as usize;
                self.falsified[p] += 1;
                if self.falsified[p] == self.width[p] && hit.is_none() {
                    hit = Some(self.clause_idx[p]);
                }
            }
        }
        hit
    }

    fn on_forget(&mut self, var: Var, value: bool) {
        for &(pos, polarity) in &self.occurrences[var as usize - 1] {
            if polarity != value {
                self.falsified[pos as usize] -= 1;
            }
        }
    }
}

fn clause_falsified_by(cnf: &Cnf, idx: usize, memory: &Memory) -> bool {
    cnf.clause(idx)
        .lits()
        .iter()
        .all(|l| memory.get(l.var()) == Some(!l.is_positive()))
}

/// Plays one game to completion. Strategies are single-game: build fresh
/// instances for repeated playouts.
pub fn play(
    cnf: &Cnf,
    prover: &mut dyn ProverStrategy,
    adversary: &mut dyn AdversaryStrategy,
    config: &GameConfig,
) -> Transcript {
    assert!(
        config.mu >= 1,
        "the game needs at least one memory location"
    );
    let mut memory = Memory::new();
    let mut tracker = FalsifiedTracker::new(cnf, config.mu);
    let mut entries = Vec::new();
    let mut high_water = 0usize;
    let mut moves = 0u64;

    let outcome = 'game: {
        // An input empty clause is falsified by the empty memory.
        if let Some(idx) = cnf.clauses().iter().position(|c| c.is_empty()) {
            break 'game GameOutcome::ProverWon {
                clause: idx,
                moves: 0,
            };
        }
        loop {
            if moves >= config.max_moves {
                break 'game GameOutcome::AdversarySurvived { moves };
            }
            let mv = prover.next_move(&GameView {
                memory: &memory,
                cnf,
                mu: config.mu,
            });
            moves += 1;
            match mv {
                ProverMove::Quit => break 'game GameOutcome::Aborted { moves },
                ProverMove::Query(var) => {
                    if var == 0 || var > cnf.num_vars() {
                        break 'game GameOutcome::ProverForfeit {
                            moves,
                            violation: format!("query of out-of-range variable {var}"),
                        };
                    }
                    if memory.contains(var) {
                        break 'game GameOutcome::ProverForfeit {
                            moves,
                            violation: format!("query of variable {var} already in memory"),
                        };
                    }
                    if memory.len() >= config.mu {
                        break 'game GameOutcome::ProverForfeit {
                            moves,
                            violation: "query at full memory; forget first".to_string(),
                        };
                    }
                    match adversary.answer(&memory, var) {
                        AdversaryReply::Resign(resignation) => {
                            entries.push(TranscriptEntry {
                                mv: "q".into(),
                                var,
                                answer: None,
                            });
                            break 'game GameOutcome::AdversaryResigned { moves, resignation };
                        }
                        AdversaryReply::Bit(value) => {
                            memory.insert(var, value);
                            high_water = high_water.max(memory.len());
                            entries.push(TranscriptEntry {
                                mv: "q".into(),
                                var,
                                answer: Some(value),
                            });
                            if let Some(idx) = tracker.on_assign(var, value) {
                                assert!(
                                    clause_falsified_by(cnf, idx, &memory),
                                    "tracker reported a non-falsified clause"
                                );
                                break 'game GameOutcome::ProverWon { clause: idx, moves };
                            }
                        }
                    }
                }
                ProverMove::Forget(var) => match memory.remove(var) {
                    None => {
                        break 'game GameOutcome::ProverForfeit {
                            moves,
                            violation: format!("forget of variable {var} not in memory"),
                        }
                    }
                    Some(value) => {
                        tracker.on_forget(var, value);
                        entries.push(TranscriptEntry {
                            mv: "f".into(),
                            var,
                            answer: None,
                        });
                        adversary.observe_forget(&memory, var);
                    }
                },
            }
            assert!(memory.len() <= config.mu, "memory bound exceeded");
            if config.check_invariants {
                if let Err(message) = adversary.validate(&memory) {
                    break 'game GameOutcome::InvariantViolation { moves, message };
                }
            }
        }
    };

    Transcript {
        prover: prover.name(),
        adversary: adversary.name(),
        mu: config.mu,
        max_moves: config.max_moves,
        entries,
        outcome,
        memory_high_water: high_water,
    }
}

// ---------------------------------------------------------------------------
// Provers
// ---------------------------------------------------------------------------

/// Queries a uniformly random unassigned variable; forgets a uniformly
/// random stored one when memory is full.
pub struct RandomProver {
    seed: u64,
    rng: Rng,
}

pub fn prover_random(seed: u64) -> RandomProver {
    RandomProver {
        seed,
        rng: rng::seeded(seed),
    }
}

impl ProverStrategy for RandomProver {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn next_move(&mut self, view: &GameView) -> ProverMove {
        let mem = view.memory;
        let unassigned: Vec<Var> = (1..=view.cnf.num_vars())
            .filter(|&v| !mem.contains(v))
            .collect();
        if mem.len() >= view.mu || unassigned.is_empty() {
            let stored: Vec<Var> = mem.vars().collect();
            let pick = rng::draw_below(&mut self.rng, stored.len() as u64) as usize;
            ProverMove::Forget(stored[pick])
        } else {
            let pick = rng::draw_below(&mut self.rng, unassigned.len() as u64) as usize;
            ProverMove::Query(unassigned[pick])
        }
    }
}

/// Queries the variable occurring in the most nearly-falsified clauses
/// (unsatisfied, one unassigned variable left); forgets the stored variable
/// load-bearing for the fewest unsatisfied clauses. Only clauses narrow
/// enough to be falsified under the cap are scored; their indices are cached
/// on the first move.
#[derive(Default)]
pub struct GreedyProver {
    candidates: Option<Vec<usize>>,
}

pub fn prover_greedy() -> GreedyProver {
    GreedyProver::default()
}

impl ProverStrategy for GreedyProver {
    fn name(&self) -> String {
        "greedy".to_string()
    }

    fn next_move(&mut self, view: &GameView) -> ProverMove {
        let mem = view.memory;
        let want_query = mem.len() < view.mu && (1..=view.cnf.num_vars()).any(|v| !mem.contains(v));

        let candidates = self.candidates.get_or_insert_with(|| {
            view.cnf
                .clauses()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_empty() && c.width() <= view.mu)
                .map(|(i, _)| i)
                .collect()
        });
        let mut query_score: BTreeMap<Var, u64> = BTreeMap::new();
        let mut forget_load: BTreeMap<Var, u64> = mem.vars().map(|v| (v, 0)).collect();
        for &idx in candidates.iter() {
            let clause = view.cnf.clause(idx);
            let mut satisfied = false;
            let mut falsified = 0usize;
            let mut open: Option<Var> = None;
            let mut open_count = 0usize;
            for lit in clause.lits() {
                match mem.get(lit.var()) {
                    Some(v) if v == lit.is_positive() => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => falsified += 1,
                    None => {
                        open = Some(lit.var());
                        open_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            if open_count == 1 && falsified == clause.width() - 1 {
                *query_score.entry(open.expect("one open var")).or_insert(0) += 1;
            }
            for lit in clause.lits() {
                if mem.get(lit.var()) == Some(!lit.is_positive()) {
                    *forget_load.entry(lit.var()).or_insert(0) += 1;
                }
            }
        }

        if want_query {
            let best = (1..=view.cnf.num_vars())
                .filter(|&v| !mem.contains(v))
                .max_by_key(|v| {
                    (
                        query_score.get(v).copied().unwrap_or(0),
                        std::cmp::Reverse(*v),
                    )
                })
                .expect("an unassigned variable exists");
            ProverMove::Query(best)
        } else {
            let victim = forget_load
                .iter()
                .min_by_key(|&(v, load)| (*load, *v))
                .map(|(&v, _)| v)
                .expect("memory is nonempty when full");
            ProverMove::Forget(victim)
        }
    }
}

/// Replays a fixed move list; cycles when built with `cycle`, otherwise
/// quits at the end of the script.
pub struct ScriptedProver {
    script: Vec<ProverMove>,
    pos: usize,
    cycle: bool,
}

pub fn prover_scripted(script: Vec<ProverMove>, cycle: bool) -> ScriptedProver {
    ScriptedProver {
        script,
        pos: 0,
        cycle,
    }
}

impl ProverStrategy for ScriptedProver {
    fn name(&self) -> String {
        "scripted".to_string()
    }

    fn next_move(&mut self, _view: &GameView) -> ProverMove {
        if self.pos >= self.script.len() {
            if !self.cycle || self.script.is_empty() {
                return ProverMove::Quit;
            }
            self.pos = 0;
        }
        let mv = self.script[self.pos];
        self.pos += 1;
        mv
    }
}

/// Terminal read-eval loop: `q <var>`, `f <var>`, `state`, `quit`. Parse
/// errors re-prompt; end of input quits.
pub struct InteractiveProver<R, W> {
    input: R,
    output: W,
}

pub fn prover_interactive<R: BufRead, W: Write>(input: R, output: W) -> InteractiveProver<R, W> {
    InteractiveProver { input, output }
}

impl<R: BufRead, W: Write> InteractiveProver<R, W> {
    fn print_state(&mut self, view: &GameView) {
        let mem: Vec<String> = view
            .memory
            .iter()
            .map(|(v, b)| format!("{v}={}", u8::from(b)))
            .collect();
        let _ = writeln!(
            self.output,
            "memory [{}/{}]: {{{}}}",
            view.memory.len(),
            view.mu,
            mem.join(", ")
        );
    }
}

impl<R: BufRead, W: Write> ProverStrategy for InteractiveProver<R, W> {
    fn name(&self) -> String {
        "interactive".to_string()
    }

    fn next_move(&mut self, view: &GameView) -> ProverMove {
        loop {
            self.print_state(view);
            let _ = write!(self.output, "> ");
            let _ = self.output.flush();
            let mut line = String::new();
            match self.input.read_line(&mut line) {
                Ok(0) | Err(_) => return ProverMove::Quit,
                Ok(_) => {}
            }
            let mut tokens = line.split_whitespace();
            match (tokens.next(), tokens.next()) {
                (Some("q"), Some(v)) => match v.parse::<Var>() {
                    Ok(var) if var >= 1 => return ProverMove::Query(var),
                    _ => {}
                },
                (Some("f"), Some(v)) => match v.parse::<Var>() {
                    Ok(var) if var >= 1 => return ProverMove::Forget(var),
                    _ => {}
                },
                (Some("state"), _) => continue,
                (Some("quit"), _) => return ProverMove::Quit,
                (None, _) => continue,
                _ => {}
            }
            let _ = writeln!(self.output, "commands: q <var> | f <var> | state | quit");
        }
    }
}

// ---------------------------------------------------------------------------
// Baseline adversaries
// ---------------------------------------------------------------------------

/// Always answers the same bit.
pub struct ConstantAdversary {
    bit: bool,
}

pub fn adversary_constant(bit: bool) -> ConstantAdversary {
    ConstantAdversary { bit }
}

impl AdversaryStrategy for ConstantAdversary {
    fn name(&self) -> String {
        format!("constant:{}", u8::from(self.bit))
    }

    fn answer(&mut self, _memory: &Memory, _var: Var) -> AdversaryReply {
        AdversaryReply::Bit(self.bit)
    }
}

/// Answers along a fixed total assignment; survives forever on a formula the
/// assignment satisfies.
pub struct AssignmentAdversary {
    assignment: Vec<bool>,
}

pub fn adversary_assignment(assignment: Vec<bool>) -> AssignmentAdversary {
    AssignmentAdversary { assignment }
}

impl AdversaryStrategy for AssignmentAdversary {
    fn name(&self) -> String {
        "fixed-assignment".to_string()
    }

    fn answer(&mut self, _memory: &Memory, var: Var) -> AdversaryReply {
        AdversaryReply::Bit(self.assignment[var as usize - 1])
    }
}

/// Answers uniformly random bits.
pub struct RandomAdversary {
    seed: u64,
    rng: Rng,
}

pub fn adversary_random(seed: u64) -> RandomAdversary {
    RandomAdversary {
        seed,
        rng: rng::seeded(seed),
    }
}

impl AdversaryStrategy for RandomAdversary {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn answer(&mut self, _memory: &Memory, _var: Var) -> AdversaryReply {
        AdversaryReply::Bit(rng::coin(&mut self.rng))
    }
}
