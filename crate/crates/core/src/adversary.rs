//! Adversary strategies for the clique game, and the parameter machinery
//! behind them.
//!
//! Two strategies are provided. The common-neighbor adversary works on
//! graphs with the extension property: it answers arbitrarily until the
//! Prover has pinned down a third of an index's bits, then privately fixes
//! that index to a consistent common neighbor of the already-fixed vertices.
//! The dense-subset adversary works on graphs carrying a statistically dense
//! vertex set: it restricts play to a pruned core of that set on which every
//! small pattern's trace is empty or large, and fixes vertices that keep
//! every active trace dense under neighborhood intersections.

use crate::cnf::{SemanticVar, Var, VarMap};
use crate::game::{AdversaryReply, AdversaryStrategy, Memory, Resignation};
use crate::graph::{vertex_bit, Graph, VertexId, VertexSet};
use crate::pattern::{enumerate_patterns, Pattern};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("pruned core is empty; the source set is too small for these parameters")]
    EmptyCore,
    #[error("epsilon must lie in (0, 1], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("alpha must lie in (0, 1), got {0}")]
    AlphaOutOfRange(f64),
}

// ---------------------------------------------------------------------------
// Entropy and parameter feasibility
// ---------------------------------------------------------------------------

/// Binary entropy H(x) = -x log2 x - (1-x) log2 (1-x), extended by
/// continuity with H(0) = H(1) = 0.
pub fn binary_entropy(x: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&x),
        "entropy argument {x} outside [0, 1]"
    );
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// The feasible alpha interval at a given epsilon: alpha must exceed
/// (4/3)(eps + H(eps)) for the pruned core to survive, and stay below
/// beta - (8/3)eps - (4/3)H(eps) + (4/3)eps log2(delta) for the dense-vertex
/// selection to apply.
pub fn alpha_interval(epsilon: f64, beta: f64, delta: f64) -> (f64, f64) {
    let h = binary_entropy(epsilon);
    let lo = 4.0 / 3.0 * (epsilon + h);
    let hi = beta - 8.0 / 3.0 * epsilon - 4.0 / 3.0 * h + 4.0 / 3.0 * epsilon * delta.log2();
    (lo, hi)
}

/// Searches for (epsilon, alpha) making both feasibility inequalities strict:
/// a halving grid descends from 0.25, and the boundary between the first
/// feasible grid point and its infeasible neighbor is refined by bisection.
/// Returns the largest epsilon whose alpha interval is wider than a fixed
/// margin, with alpha at the interval midpoint; `None` if no epsilon down to
/// 2^-20 is feasible.
pub fn solve_parameters(beta: f64, delta: f64) -> Option<(f64, f64)> {
    assert!(0.0 < beta && beta < 1.0, "beta out of range");
    assert!(0.0 < delta && delta < 1.0, "delta out of range");
    const MARGIN: f64 = 1e-6;
    let feasible = |eps: f64| {
        let (lo, hi) = alpha_interval(eps, beta, delta);
        hi - lo > MARGIN
    };
    // 0.25 * 2^-18 = 2^-20, the smallest epsilon tried.
    let grid: Vec<f64> = (0..=18).map(|j| 0.25 / f64::powi(2.0, j)).collect();
    let first = grid.iter().position(|&e| feasible(e))?;
    let mut eps = grid[first];
    if first > 0 {
        // The interval width is monotone decreasing in epsilon, so push
        // epsilon up toward the boundary.
        let (mut lo, mut hi) = (eps, grid[first - 1]);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        eps = lo;
    }
    let (lo, hi) = alpha_interval(eps, beta, delta);
    let alpha = 0.5 * (lo + hi);
    debug_assert!(0.75 * alpha > eps + binary_entropy(eps));
    Some((eps, alpha))
}

/// Strategy parameters for the dense-subset adversary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    /// Index count of the game formula.
    pub s: u32,
    /// Prover memory the strategy is built to beat: floor(epsilon^2 k^2).
    pub memory_budget: usize,
}

impl ParamConfig {
    /// Derives (epsilon, alpha) from the feasibility solver.
    pub fn derive(beta: f64, delta: f64, s: u32, k: u32) -> Option<ParamConfig> {
        let (epsilon, alpha) = solve_parameters(beta, delta)?;
        Some(ParamConfig::explicit(epsilon, alpha, beta, delta, s, k))
    }

    /// Fixes all constants by hand; the inequalities are checked, not
    /// enforced — desk-scale runs routinely use infeasible constants.
    pub fn explicit(
        epsilon: f64,
        alpha: f64,
        beta: f64,
        delta: f64,
        s: u32,
        k: u32,
    ) -> ParamConfig {
        ParamConfig {
            epsilon,
            alpha,
            beta,
            delta,
            s,
            memory_budget: dense_memory_budget(epsilon, k),
        }
    }

    /// Margin of the pruning-survival inequality (3/4) alpha > eps + H(eps).
    pub fn core_margin(&self) -> f64 {
        0.75 * self.alpha - self.epsilon - binary_entropy(self.epsilon)
    }

    /// Margin of the dense-selection inequality
    /// beta - alpha > (8/3)eps + (4/3)H(eps) - (4/3)eps log2(delta).
    pub fn density_margin(&self) -> f64 {
        let (_, hi) = alpha_interval(self.epsilon, self.beta, self.delta);
        hi - self.alpha
    }

    pub fn inequalities_hold(&self) -> bool {
        self.core_margin() > 0.0 && self.density_margin() > 0.0
    }
}

/// floor(epsilon^2 k^2), the memory bound of the dense-subset strategy.
/// Nudged before flooring so that exact-integer products like (1/3)^2 * 36
/// do not round down through f64.
pub fn dense_memory_budget(epsilon: f64, k: u32) -> usize {
    (epsilon * epsilon * (k * k) as f64 + 1e-9).floor() as usize
}

/// floor(k^2 / 9), the memory bound of the common-neighbor strategy.
pub fn common_neighbor_memory_budget(k: u32) -> usize {
    (k * k / 9) as usize
}

// ---------------------------------------------------------------------------
// Common-neighbor adversary
// ---------------------------------------------------------------------------

/// Serialized state of a common-neighbor resignation: the (U, p) pair with
/// no consistent common neighbor. A genuine resignation refutes the
/// extension property for this graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborResignation {
    pub index: u32,
    pub pattern: String,
    pub fixed: Vec<(u32, VertexId)>,
}

pub struct CommonNeighborAdversary<'g> {
    graph: &'g Graph,
    map: VarMap,
    threshold: u32,
    default_bit: bool,
    fixed: BTreeMap<u32, VertexId>,
}

/// Builds the strategy for a binary vertex-naming map over `graph`. The
/// fixing threshold is max(1, floor(k/3)).
pub fn common_neighbor_adversary<'g>(
    graph: &'g Graph,
    map: &VarMap,
) -> CommonNeighborAdversary<'g> {
    debug_assert_eq!(map.k, graph.k(), "variable map does not match the graph");
    CommonNeighborAdversary {
        graph,
        map: *map,
        threshold: (graph.k() / 3).max(1),
        default_bit: false,
        fixed: BTreeMap::new(),
    }
}

impl CommonNeighborAdversary<'_> {
    pub fn fixed(&self) -> &BTreeMap<u32, VertexId> {
        &self.fixed
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    fn fixed_set(&self) -> VertexSet {
        VertexSet::from_vertices(self.graph.n(), self.fixed.values().copied())
    }
}

impl AdversaryStrategy for CommonNeighborAdversary<'_> {
    fn name(&self) -> String {
        "common-neighbor".to_string()
    }

    fn answer(&mut self, memory: &Memory, var: Var) -> AdversaryReply {
        let (index, bit) = match self.map.semantics(var) {
            Some(SemanticVar::X { index, bit }) => (index, bit),
            // The selector, if present, is answered on the clique side.
            _ => return AdversaryReply::Bit(true),
        };
        if let Some(&v) = self.fixed.get(&index) {
            return AdversaryReply::Bit(vertex_bit(v, bit, self.map.k));
        }
        let pattern = memory.pattern_of(&self.map, index);
        if pattern.size() + 1 < self.threshold {
            return AdversaryReply::Bit(self.default_bit);
        }
        // This answer brings the pattern to the threshold: fix the vertex
        // first, then answer from it.
        let candidates = pattern
            .consistent_set()
            .intersection(&self.graph.common_neighbors(&self.fixed_set()));
        match candidates.first() {
            Some(v) => {
                self.fixed.insert(index, v);
                AdversaryReply::Bit(vertex_bit(v, bit, self.map.k))
            }
            None => AdversaryReply::Resign(Resignation {
                strategy: self.name(),
                condition: "no consistent common neighbor".to_string(),
                detail: serde_json::to_value(NeighborResignation {
                    index,
                    pattern: pattern.to_string(),
                    fixed: self.fixed.iter().map(|(&i, &v)| (i, v)).collect(),
                })
                .expect("serializable"),
            }),
        }
    }

    fn observe_forget(&mut self, memory: &Memory, var: Var) {
        if let Some(SemanticVar::X { index, .. }) = self.map.semantics(var) {
            if self.fixed.contains_key(&index)
                && memory.pattern_of(&self.map, index).size() < self.threshold
            {
                self.fixed.remove(&index);
            }
        }
    }

    fn validate(&self, memory: &Memory) -> Result<(), String> {
        let vs: Vec<(u32, VertexId)> = self.fixed.iter().map(|(&i, &v)| (i, v)).collect();
        for (a, &(i, u)) in vs.iter().enumerate() {
            let p = memory.pattern_of(&self.map, i);
            if !p.matches(u) {
                return Err(format!(
                    "fixed vertex {u} of index {i} inconsistent with {p}"
                ));
            }
            for &(j, v) in &vs[a + 1..] {
                if !self.graph.has_edge(u, v) {
                    return Err(format!(
                        "fixed vertices {u} (index {i}) and {v} (index {j}) not adjacent"
                    ));
                }
            }
        }
        for i in 1..=self.map.s {
            let size = memory.pattern_of(&self.map, i).size();
            let fixed = self.fixed.contains_key(&i);
            if fixed != (size >= self.threshold) {
                return Err(format!(
                    "index {i}: pattern size {size}, threshold {} but fixed = {fixed}",
                    self.threshold
                ));
            }
        }
        Ok(())
    }
}

/// Re-checks a resignation: true when the reported (U, p) really has no
/// consistent common neighbor, i.e. the resignation genuinely refutes the
/// extension property.
pub fn recheck_neighbor_resignation(g: &Graph, detail: &NeighborResignation) -> bool {
    let Ok(p) = crate::pattern::parse_pattern(&detail.pattern, g.k()) else {
        return false;
    };
    let u = VertexSet::from_vertices(g.n(), detail.fixed.iter().map(|&(_, v)| v));
    p.consistent_set().intersection_len(&g.common_neighbors(&u)) == 0
}

// ---------------------------------------------------------------------------
// Pruned core construction
// ---------------------------------------------------------------------------

/// A subset of the source set on which every pattern of size at most the
/// bound has an empty or large trace, together with the trace cache.
#[derive(Debug, Clone)]
pub struct ActiveCore {
    pub core: VertexSet,
    /// |C_p ∩ core| for every pattern of size <= pattern_bound.
    pub traces: BTreeMap<Pattern, usize>,
    /// The patterns whose consistent sets were pruned away, in order.
    pub removed: Vec<Pattern>,
    /// Trace threshold m^(1 - alpha), with m the source set size.
    pub threshold: f64,
    pub source_size: usize,
    /// ceil(epsilon * k).
    pub pattern_bound: u32,
}

impl ActiveCore {
    pub fn is_empty(&self) -> bool {
        self.core.is_empty()
    }

    /// Patterns with nonzero trace.
    pub fn active(&self) -> impl Iterator<Item = (&Pattern, usize)> {
        self.traces
            .iter()
            .filter(|(_, &t)| t > 0)
            .map(|(p, &t)| (p, t))
    }
}

/// Iteratively removes C_p from the set for the canonically first pattern
/// whose trace is nonzero but at most m^(1 - alpha), until no such pattern
/// remains. Each pattern's set can be removed at most once, so the loop runs
/// at most once per pattern. The core may come out empty at desk scale; it
/// is returned as-is for the caller to diagnose.
pub fn build_active_core(
    g: &Graph,
    s_set: &VertexSet,
    epsilon: f64,
    alpha: f64,
) -> Result<ActiveCore, AdversaryError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(AdversaryError::EpsilonOutOfRange(epsilon));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(AdversaryError::AlphaOutOfRange(alpha));
    }
    let k = g.k();
    let pattern_bound = (epsilon * k as f64).ceil() as u32;
    debug_assert!(pattern_bound <= k);
    let source_size = s_set.len();
    let threshold = (source_size as f64).powf(1.0 - alpha);

    let patterns: Vec<(Pattern, VertexSet)> = enumerate_patterns(k, pattern_bound)
        .into_iter()
        .map(|p| {
            let cp = p.consistent_set();
            (p, cp)
        })
        .collect();

    let mut core = s_set.clone();
    let mut removed = Vec::new();
    loop {
        let target = patterns.iter().find(|(_, cp)| {
            let trace = cp.intersection_len(&core);
            trace > 0 && (trace as f64) <= threshold
        });
        match target {
            None => break,
            Some((p, cp)) => {
                debug_assert!(
                    !removed.contains(p),
                    "a pattern set can be removed only once"
                );
                core.remove_all(cp);
                removed.push(*p);
            }
        }
    }

    let traces = patterns
        .iter()
        .map(|(p, cp)| (*p, cp.intersection_len(&core)))
        .collect();
    Ok(ActiveCore {
        core,
        traces,
        removed,
        threshold,
        source_size,
        pattern_bound,
    })
}

// ---------------------------------------------------------------------------
// Dense vertex selection
// ---------------------------------------------------------------------------

/// First vertex of `x` (ascending id) adjacent to at least a delta fraction
/// of every `ys` entry; `None` when x is empty or no vertex qualifies.
pub fn choose_dense_vertex(
    g: &Graph,
    x: &VertexSet,
    ys: &[VertexSet],
    delta: f64,
) -> Option<VertexId> {
    x.iter().find(|&v| {
        ys.iter().all(|y| {
            let hits = g.neighbors(v).intersection_len(y);
            hits as f64 >= delta * y.len() as f64
        })
    })
}

// ---------------------------------------------------------------------------
// Dense-subset adversary
// ---------------------------------------------------------------------------

/// Serialized state of a dense-subset resignation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseResignation {
    /// Which maintained condition could not be preserved:
    /// "active-trace" (an unfixed pattern's trace emptied) or
    /// "dense-extension" (no vertex of X is delta-dense into every Y).
    pub condition: String,
    pub index: u32,
    pub pattern: String,
    pub fixed: Vec<(u32, VertexId)>,
    pub x_size: usize,
    pub y_count: usize,
    /// Whether |X| >= r m^(1-beta) and every |Y| >= m^(1-beta) held; logged,
    /// never enforced.
    pub sufficiency_met: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixStats {
    pub fixes: u64,
    pub unfixes: u64,
    /// Fixes at which the size sufficiency conditions held.
    pub fixes_with_sufficiency: u64,
}

pub struct DenseSubsetAdversary<'g> {
    graph: &'g Graph,
    map: VarMap,
    params: ParamConfig,
    core: ActiveCore,
    /// C_p ∩ core for every pattern of size <= the bound.
    core_traces: BTreeMap<Pattern, VertexSet>,
    threshold: u32,
    fixed: BTreeMap<u32, VertexId>,
    stats: FixStats,
}

/// Builds the strategy: prunes the core from `s_set` under the configured
/// (epsilon, alpha) and fails if it comes out empty. The feasibility
/// inequalities are checked but only recorded; see
/// [`DenseSubsetAdversary::params_feasible`].
pub fn dense_subset_adversary<'g>(
    graph: &'g Graph,
    s_set: &VertexSet,
    params: ParamConfig,
    map: &VarMap,
) -> Result<DenseSubsetAdversary<'g>, AdversaryError> {
    debug_assert_eq!(map.k, graph.k(), "variable map does not match the graph");
    let core = build_active_core(graph, s_set, params.epsilon, params.alpha)?;
    if core.is_empty() {
        return Err(AdversaryError::EmptyCore);
    }
    let core_traces = core
        .traces
        .keys()
        .map(|p| (*p, p.consistent_set().intersection(&core.core)))
        .collect();
    Ok(DenseSubsetAdversary {
        graph,
        map: *map,
        threshold: core.pattern_bound,
        core,
        core_traces,
        params,
        fixed: BTreeMap::new(),
        stats: FixStats::default(),
    })
}

impl DenseSubsetAdversary<'_> {
    pub fn core(&self) -> &ActiveCore {
        &self.core
    }

    pub fn fixed(&self) -> &BTreeMap<u32, VertexId> {
        &self.fixed
    }

    pub fn stats(&self) -> FixStats {
        self.stats
    }

    pub fn params_feasible(&self) -> bool {
        self.params.inequalities_hold()
    }

    fn fixed_vec(&self) -> Vec<VertexId> {
        self.fixed.values().copied().collect()
    }

    /// The Y family: C_p ∩ N(U') ∩ core for every active pattern p and every
    /// subset U' of the fixed set, paired for diagnostics.
    fn y_family(&self, fixed: &[VertexId]) -> Vec<VertexSet> {
        let mut ys = Vec::new();
        for subset_bits in 0..(1u32 << fixed.len()) {
            let u_prime = VertexSet::from_vertices(
                self.graph.n(),
                fixed
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| subset_bits >> pos & 1 == 1)
                    .map(|(_, &v)| v),
            );
            let nu = self.graph.common_neighbors(&u_prime);
            for (p, _) in self.core.active() {
                ys.push(self.core_traces[p].intersection(&nu));
            }
        }
        ys
    }

    fn resign(
        &self,
        condition: &str,
        index: u32,
        pattern: &Pattern,
        x_size: usize,
        y_count: usize,
        sufficiency_met: bool,
    ) -> AdversaryReply {
        AdversaryReply::Resign(Resignation {
            strategy: "dense-subset".to_string(),
            condition: condition.to_string(),
            detail: serde_json::to_value(DenseResignation {
                condition: condition.to_string(),
                index,
                pattern: pattern.to_string(),
                fixed: self.fixed.iter().map(|(&i, &v)| (i, v)).collect(),
                x_size,
                y_count,
                sufficiency_met,
            })
            .expect("serializable"),
        })
    }
}

impl AdversaryStrategy for DenseSubsetAdversary<'_> {
    fn name(&self) -> String {
        "dense-subset".to_string()
    }

    fn answer(&mut self, memory: &Memory, var: Var) -> AdversaryReply {
        let (index, bit) = match self.map.semantics(var) {
            Some(SemanticVar::X { index, bit }) => (index, bit),
            _ => return AdversaryReply::Bit(true),
        };
        if let Some(&v) = self.fixed.get(&index) {
            return AdversaryReply::Bit(vertex_bit(v, bit, self.map.k));
        }
        let pattern = memory.pattern_of(&self.map, index);
        if pattern.size() + 1 < self.threshold {
            // Answer from the lowest-id core vertex consistent with the
            // pattern; its bit keeps the successor pattern active.
            return match self.core_traces[&pattern].first() {
                Some(v) => AdversaryReply::Bit(vertex_bit(v, bit, self.map.k)),
                None => self.resign("active-trace", index, &pattern, 0, 0, false),
            };
        }

        // The answer will bring this index to the threshold: fix a vertex
        // that is adjacent to everything fixed and delta-dense into every
        // active trace restricted by every subset of the fixed set.
        let fixed_vec = self.fixed_vec();
        let u = VertexSet::from_vertices(self.graph.n(), fixed_vec.iter().copied());
        let x = self.core_traces[&pattern].intersection(&self.graph.common_neighbors(&u));
        let ys = self.y_family(&fixed_vec);
        let m = self.core.source_size as f64;
        let size_floor = m.powf(1.0 - self.params.beta);
        let sufficiency = x.len() as f64 >= ys.len() as f64 * size_floor
            && ys.iter().all(|y| y.len() as f64 >= size_floor);
        if ys.iter().any(VertexSet::is_empty) {
            return self.resign(
                "dense-extension",
                index,
                &pattern,
                x.len(),
                ys.len(),
                sufficiency,
            );
        }
        match choose_dense_vertex(self.graph, &x, &ys, self.params.delta) {
            Some(v) => {
                self.fixed.insert(index, v);
                self.stats.fixes += 1;
                if sufficiency {
                    self.stats.fixes_with_sufficiency += 1;
                }
                AdversaryReply::Bit(vertex_bit(v, bit, self.map.k))
            }
            None => self.resign(
                "dense-extension",
                index,
                &pattern,
                x.len(),
                ys.len(),
                sufficiency,
            ),
        }
    }

    fn observe_forget(&mut self, memory: &Memory, var: Var) {
        if let Some(SemanticVar::X { index, .. }) = self.map.semantics(var) {
            if self.fixed.contains_key(&index)
                && memory.pattern_of(&self.map, index).size() < self.threshold
            {
                self.fixed.remove(&index);
                self.stats.unfixes += 1;
            }
        }
    }

    /// Checks the three maintained conditions against the current memory:
    /// unfixed patterns keep a nonempty core trace, fixed vertices are
    /// consistent core members forming a clique, and every active trace
    /// stays delta^|U'|-dense under every subset U' of the fixed set.
    fn validate(&self, memory: &Memory) -> Result<(), String> {
        for i in 1..=self.map.s {
            let p = memory.pattern_of(&self.map, i);
            match self.fixed.get(&i) {
                None => {
                    if p.size() >= self.threshold {
                        return Err(format!("index {i} at size {} is not fixed", p.size()));
                    }
                    if self.core_traces[&p].is_empty() {
                        return Err(format!("condition 1: trace of {p} (index {i}) is empty"));
                    }
                }
                Some(&v) => {
                    if p.size() < self.threshold {
                        return Err(format!("index {i} below threshold is still fixed"));
                    }
                    if !p.matches(v) || !self.core.core.contains(v) {
                        return Err(format!("condition 2: fixed vertex {v} not in C_p ∩ core"));
                    }
                }
            }
        }
        let fixed_vec = self.fixed_vec();
        for (a, &u) in fixed_vec.iter().enumerate() {
            for &v in &fixed_vec[a + 1..] {
                if !self.graph.has_edge(u, v) {
                    return Err(format!("condition 2: fixed vertices {u}, {v} not adjacent"));
                }
            }
        }
        for subset_bits in 0..(1u32 << fixed_vec.len()) {
            let members: Vec<VertexId> = fixed_vec
                .iter()
                .enumerate()
                .filter(|(pos, _)| subset_bits >> pos & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let nu = self.graph.common_neighbors(&VertexSet::from_vertices(
                self.graph.n(),
                members.iter().copied(),
            ));
            let decay = self.params.delta.powi(members.len() as i32);
            for (p, trace) in self.core.active() {
                let surviving = self.core_traces[p].intersection_len(&nu);
                if (surviving as f64) < trace as f64 * decay {
                    return Err(format!(
                        "condition 3: |C_p ∩ core ∩ N(U')| = {surviving} < {} for p = {p}, U' = {members:?}",
                        trace as f64 * decay
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Independently re-checks a dense-subset resignation by rebuilding the core
/// and the X / Y family from the serialized state; true when the named
/// condition really fails.
pub fn recheck_dense_resignation(
    g: &Graph,
    s_set: &VertexSet,
    params: &ParamConfig,
    detail: &DenseResignation,
) -> bool {
    let Ok(core) = build_active_core(g, s_set, params.epsilon, params.alpha) else {
        return false;
    };
    let Ok(pattern) = crate::pattern::parse_pattern(&detail.pattern, g.k()) else {
        return false;
    };
    let cp_core = pattern.consistent_set().intersection(&core.core);
    if detail.condition == "active-trace" {
        return cp_core.is_empty();
    }
    let fixed: Vec<VertexId> = detail.fixed.iter().map(|&(_, v)| v).collect();
    let u = VertexSet::from_vertices(g.n(), fixed.iter().copied());
    let x = cp_core.intersection(&g.common_neighbors(&u));
    let mut ys = Vec::new();
    for subset_bits in 0..(1u32 << fixed.len()) {
        let u_prime = VertexSet::from_vertices(
            g.n(),
            fixed
                .iter()
                .enumerate()
                .filter(|(pos, _)| subset_bits >> pos & 1 == 1)
                .map(|(_, &v)| v),
        );
        let nu = g.common_neighbors(&u_prime);
        for (p, _) in core.active() {
            ys.push(
                p.consistent_set()
                    .intersection(&core.core)
                    .intersection(&nu),
            );
        }
    }
    ys.iter().any(VertexSet::is_empty) || choose_dense_vertex(g, &x, &ys, params.delta).is_none()
}
