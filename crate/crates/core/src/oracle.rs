//! Ground-truth combinatorial checks: homogeneous-set search, the
//! extension property behind the common-neighbor adversary, and empirical
//! density statistics.

use crate::graph::{Graph, VertexId, VertexSet};
use crate::pattern::{binomial, enumerate_patterns, Pattern};
use crate::rng::{self, Rng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default branch-and-bound node budget for homogeneous-set search.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("exhaustive check needs {needed} elementary tests, budget is {budget}")]
    WorkBudget { needed: u64, budget: u64 },
    #[error("subset size {subset} exceeds the set size {set}")]
    SubsetTooLarge { subset: usize, set: usize },
    #[error("beta must lie strictly between 0 and 1, got {0}")]
    BetaOutOfRange(f64),
    #[error("homogeneous-set size must satisfy 2 <= s <= n, got {0}")]
    SizeOutOfRange(u32),
}

// ---------------------------------------------------------------------------
// Homogeneous sets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Clique,
    Independent,
}

/// A vertex set that is fully connected or fully disconnected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousWitness {
    pub kind: WitnessKind,
    pub vertices: Vec<VertexId>,
}

impl HomogeneousWitness {
    /// Independent pairwise re-check of the witness against the graph.
    pub fn verify(&self, g: &Graph) -> bool {
        let vs = &self.vertices;
        if vs.iter().any(|&v| v >= g.n()) {
            return false;
        }
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if vs[i] == vs[j] {
                    return false;
                }
                let adjacent = g.has_edge(vs[i], vs[j]);
                if adjacent != matches!(self.kind, WitnessKind::Clique) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomogeneousSearch {
    Found(HomogeneousWitness),
    NoneExists,
    /// The node budget ran out before the search was exhaustive; distinct
    /// from `NoneExists`.
    BudgetExceeded {
        nodes: u64,
    },
}

/// Exhaustive branch-and-bound search for a clique or independent set of
/// size `s`, over both the graph and its complement.
pub fn find_homogeneous(
    g: &Graph,
    s: u32,
    node_budget: u64,
) -> Result<HomogeneousSearch, OracleError> {
    if s < 2 || s as usize > g.n() {
        return Err(OracleError::SizeOutOfRange(s));
    }
    let mut nodes = 0u64;
    match find_clique(g, s as usize, node_budget, &mut nodes) {
        CliqueSearch::Found(vertices) => {
            return Ok(HomogeneousSearch::Found(HomogeneousWitness {
                kind: WitnessKind::Clique,
                vertices,
            }))
        }
        CliqueSearch::Budget => return Ok(HomogeneousSearch::BudgetExceeded { nodes }),
        CliqueSearch::None => {}
    }
    match find_clique(&g.complement(), s as usize, node_budget, &mut nodes) {
        CliqueSearch::Found(vertices) => Ok(HomogeneousSearch::Found(HomogeneousWitness {
            kind: WitnessKind::Independent,
            vertices,
        })),
        CliqueSearch::Budget => Ok(HomogeneousSearch::BudgetExceeded { nodes }),
        CliqueSearch::None => Ok(HomogeneousSearch::NoneExists),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum RamseyVerdict {
    Ramsey,
    NotRamsey {
        witness: HomogeneousWitness,
    },
    /// Search aborted on budget; never reported as a negative.
    Unknown {
        nodes: u64,
    },
}

/// True Ramsey verdict at size `s`: no clique and no independent set of that
/// size exists. Budget exhaustion propagates as `Unknown`.
pub fn is_c_ramsey(g: &Graph, s: u32, node_budget: u64) -> Result<RamseyVerdict, OracleError> {
    Ok(match find_homogeneous(g, s, node_budget)? {
        HomogeneousSearch::NoneExists => RamseyVerdict::Ramsey,
        HomogeneousSearch::Found(witness) => RamseyVerdict::NotRamsey { witness },
        HomogeneousSearch::BudgetExceeded { nodes } => RamseyVerdict::Unknown { nodes },
    })
}

enum CliqueSearch {
    Found(Vec<VertexId>),
    None,
    Budget,
}

/// Branch and bound over a degree-descending vertex order, pruning branches
/// that cannot reach size `s`.
fn find_clique(g: &Graph, s: usize, budget: u64, nodes: &mut u64) -> CliqueSearch {
    let n = g.n();
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut rank = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        rank[v] = pos;
    }
    // Relabel adjacency by rank so candidate iteration follows the order.
    let adj: Vec<VertexSet> = order
        .iter()
        .map(|&v| VertexSet::from_vertices(n, g.neighbors(v).iter().map(|u| rank[u])))
        .collect();

    let mut current: Vec<usize> = Vec::with_capacity(s);
    match extend(&adj, s, &mut current, &VertexSet::full(n), budget, nodes) {
        Extend::Found => CliqueSearch::Found({
            let mut vs: Vec<VertexId> = current.iter().map(|&r| order[r]).collect();
            vs.sort_unstable();
            vs
        }),
        Extend::None => CliqueSearch::None,
        Extend::Budget => CliqueSearch::Budget,
    }
}

enum Extend {
    Found,
    None,
    Budget,
}

fn extend(
    adj: &[VertexSet],
    s: usize,
    current: &mut Vec<usize>,
    candidates: &VertexSet,
    budget: u64,
    nodes: &mut u64,
) -> Extend {
    *nodes += 1;
    if *nodes > budget {
        return Extend::Budget;
    }
    if current.len() == s {
        return Extend::Found;
    }
    if current.len() + candidates.len() < s {
        return Extend::None;
    }
    for v in candidates.iter() {
        let mut next = candidates.intersection(&adj[v]);
        next.retain_from(v + 1);
        current.push(v);
        match extend(adj, s, current, &next, budget, nodes) {
            Extend::None => {
                current.pop();
            }
            other => return other,
        }
    }
    Extend::None
}

// ---------------------------------------------------------------------------
// Extension property
// ---------------------------------------------------------------------------
//
// The property that drives the common-neighbor adversary: for every vertex
// set U with |U| <= floor(k/3) and every pattern p with |p| <= floor(k/3),
// some vertex consistent with p is a common neighbor of U.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionVerdict {
    HoldsVerified,
    HoldsSampled,
    Fails,
}

/// A concrete (U, p) pair with no consistent common neighbor; re-checkable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCounterexample {
    pub u: Vec<VertexId>,
    pub pattern: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionPropertyReport {
    pub verdict: ExtensionVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<ExtensionCounterexample>,
    /// Number of (U, p) pairs actually tested.
    pub trials: u64,
    /// The size bound floor(k/3) on both U and p.
    pub bound: u32,
}

#[derive(Debug, Clone, Copy)]
pub enum ExtensionMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

/// Checks the extension property, exhaustively or by sampling.
pub fn check_extension_property(
    g: &Graph,
    mode: ExtensionMode,
    work_budget: u64,
) -> Result<ExtensionPropertyReport, OracleError> {
    let k = g.k();
    let n = g.n();
    let bound = k / 3;
    let patterns: Vec<(Pattern, VertexSet)> = enumerate_patterns(k, bound)
        .into_iter()
        .map(|p| {
            let cp = p.consistent_set();
            (p, cp)
        })
        .collect();

    match mode {
        ExtensionMode::Exhaustive => {
            let subsets: u64 = (0..=bound as u64).map(|i| binomial(n as u64, i)).sum();
            let needed = subsets * patterns.len() as u64;
            if needed > work_budget {
                return Err(OracleError::WorkBudget {
                    needed,
                    budget: work_budget,
                });
            }
            let mut trials = 0u64;
            let mut result = None;
            for_each_subset(n, bound as usize, &mut |u_vec| {
                if result.is_some() {
                    return;
                }
                let u = VertexSet::from_vertices(n, u_vec.iter().copied());
                let nu = g.common_neighbors(&u);
                for (p, cp) in &patterns {
                    trials += 1;
                    if cp.intersection_len(&nu) == 0 {
                        result = Some(ExtensionCounterexample {
                            u: u_vec.to_vec(),
                            pattern: p.to_string(),
                        });
                        return;
                    }
                }
            });
            Ok(match result {
                Some(cex) => ExtensionPropertyReport {
                    verdict: ExtensionVerdict::Fails,
                    counterexample: Some(cex),
                    trials,
                    bound,
                },
                None => ExtensionPropertyReport {
                    verdict: ExtensionVerdict::HoldsVerified,
                    counterexample: None,
                    trials,
                    bound,
                },
            })
        }
        ExtensionMode::Sampled { trials, seed } => {
            let mut rng = rng::seeded(seed);
            let pool: Vec<usize> = (0..n).collect();
            for t in 0..trials {
                let usize_ = rng::draw_below(&mut rng, bound as u64 + 1) as usize;
                let u_vec = rng::sample_distinct(&mut rng, &pool, usize_);
                let u = VertexSet::from_vertices(n, u_vec.iter().copied());
                let p = random_pattern(&mut rng, k, bound);
                let nu = g.common_neighbors(&u);
                if p.consistent_set().intersection_len(&nu) == 0 {
                    return Ok(ExtensionPropertyReport {
                        verdict: ExtensionVerdict::Fails,
                        counterexample: Some(ExtensionCounterexample {
                            u: u_vec,
                            pattern: p.to_string(),
                        }),
                        trials: t + 1,
                        bound,
                    });
                }
            }
            Ok(ExtensionPropertyReport {
                verdict: ExtensionVerdict::HoldsSampled,
                counterexample: None,
                trials,
                bound,
            })
        }
    }
}

/// Re-checks a reported counterexample: true when C_p and N(U) really are
/// disjoint in `g`.
pub fn recheck_extension_counterexample(g: &Graph, cex: &ExtensionCounterexample) -> bool {
    let Ok(p) = crate::pattern::parse_pattern(&cex.pattern, g.k()) else {
        return false;
    };
    let u = VertexSet::from_vertices(g.n(), cex.u.iter().copied());
    p.consistent_set().intersection_len(&g.common_neighbors(&u)) == 0
}

fn random_pattern(rng: &mut Rng, k: u32, max_size: u32) -> Pattern {
    let size = rng::draw_below(rng, max_size as u64 + 1) as usize;
    let positions: Vec<usize> = (1..=k as usize).collect();
    let chosen = rng::sample_distinct(rng, &positions, size);
    let mut p = Pattern::empty(k);
    for b in chosen {
        p = p.with_bit(b as u32, rng::coin(rng));
    }
    p
}

/// Calls `f` on every subset of `0..n` of size at most `t`, smallest first.
fn for_each_subset(n: usize, t: usize, f: &mut impl FnMut(&[VertexId])) {
    let mut stack: Vec<VertexId> = Vec::with_capacity(t);
    fn rec(
        n: usize,
        t: usize,
        start: usize,
        stack: &mut Vec<VertexId>,
        f: &mut impl FnMut(&[VertexId]),
    ) {
        f(stack);
        if stack.len() == t {
            return;
        }
        for v in start..n {
            stack.push(v);
            rec(n, t, v + 1, stack, f);
            stack.pop();
        }
    }
    rec(n, t, 0, &mut stack, f);
}

// ---------------------------------------------------------------------------
// Density statistics
// ---------------------------------------------------------------------------

/// Monte-Carlo min/max density over random subset pairs of one vertex set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityFloorReport {
    pub beta: f64,
    /// |S|, the size of the sampled set.
    pub set_size: usize,
    /// Subset size m' = ceil(|S|^(1 - beta)).
    pub subset_size: usize,
    /// Observed minimum density over the trials.
    pub min_density: f64,
    pub max_density: f64,
    pub trials: u64,
}

/// Samples `trials` pairs A, B of `subset_size` vertices from `s_set` and
/// reports the extreme observed densities. The minimum is the empirical
/// density floor fed to the dense-subset adversary configuration.
pub fn density_floor(
    g: &Graph,
    s_set: &VertexSet,
    beta: f64,
    trials: u64,
    seed: u64,
) -> Result<DensityFloorReport, OracleError> {
    if !(0.0 < beta && beta < 1.0) {
        return Err(OracleError::BetaOutOfRange(beta));
    }
    let m = s_set.len();
    if m < 2 {
        return Err(OracleError::SizeOutOfRange(m as u32));
    }
    let subset_size = (m as f64).powf(1.0 - beta).ceil() as usize;
    if subset_size > m {
        return Err(OracleError::SubsetTooLarge {
            subset: subset_size,
            set: m,
        });
    }
    let pool = s_set.to_vec();
    let mut rng = rng::seeded(seed);
    let mut min_density = f64::INFINITY;
    let mut max_density = f64::NEG_INFINITY;
    for _ in 0..trials {
        let a = VertexSet::from_vertices(g.n(), rng::sample_distinct(&mut rng, &pool, subset_size));
        let b = VertexSet::from_vertices(g.n(), rng::sample_distinct(&mut rng, &pool, subset_size));
        let d = g.density(&a, &b);
        min_density = min_density.min(d);
        max_density = max_density.max(d);
    }
    Ok(DensityFloorReport {
        beta,
        set_size: m,
        subset_size,
        min_density,
        max_density,
        trials,
    })
}

/// Heuristic search for a set S with |S| >= n^(3/4) whose empirical density
/// floor reaches `delta_target`: repeatedly removes the vertex with the
/// fewest neighbors inside the candidate set, restarting with randomized
/// tie-breaking. This operationalizes an existence statement; it does not
/// certify the for-all property.
pub fn find_dense_subset(
    g: &Graph,
    beta: f64,
    delta_target: f64,
    step_budget: u64,
    seed: u64,
) -> Result<Option<VertexSet>, OracleError> {
    let n = g.n();
    let min_size = ((n as f64).powf(0.75).ceil() as usize).max(2);
    let check_trials = 64;
    let mut steps = 0u64;
    for restart in 0..4u64 {
        let mut rng = rng::seeded_stream(seed, restart);
        let mut s = g.vertices();
        loop {
            if steps >= step_budget {
                return Ok(None);
            }
            steps += 1;
            let report = density_floor(g, &s, beta, check_trials, seed ^ steps)?;
            if report.min_density >= delta_target {
                return Ok(Some(s));
            }
            if s.len() <= min_size {
                break;
            }
            // Remove a lowest-inside-degree vertex; later restarts break ties
            // randomly among the `restart + 1` worst.
            let mut by_degree: Vec<(usize, VertexId)> = s
                .iter()
                .map(|v| (g.neighbors(v).intersection_len(&s), v))
                .collect();
            by_degree.sort_unstable();
            let pick =
                rng::draw_below(&mut rng, (restart + 1).min(by_degree.len() as u64)) as usize;
            s.remove(by_degree[pick].1);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_examples() {
        // K_8 contains a triangle.
        let k8 = Graph::complete(3).unwrap();
        let HomogeneousSearch::Found(w) = find_homogeneous(&k8, 3, 1_000_000).unwrap() else {
            panic!("expected witness");
        };
        assert_eq!(w.kind, WitnessKind::Clique);
        assert!(w.verify(&k8));

        // C4 has no clique and no independent set of size 3.
        let c4 = Graph::cycle(2).unwrap();
        assert_eq!(
            find_homogeneous(&c4, 3, 1_000_000).unwrap(),
            HomogeneousSearch::NoneExists
        );

        // The empty graph has independent sets everywhere.
        let e = Graph::empty(3).unwrap();
        let HomogeneousSearch::Found(w) = find_homogeneous(&e, 3, 1_000_000).unwrap() else {
            panic!("expected witness");
        };
        assert_eq!(w.kind, WitnessKind::Independent);
        assert!(w.verify(&e));
    }

    #[test]
    fn ramsey_verdicts() {
        let k8 = Graph::complete(3).unwrap();
        assert!(matches!(
            is_c_ramsey(&k8, 3, 1_000_000).unwrap(),
            RamseyVerdict::NotRamsey { .. }
        ));

        // C5 as a k = 3 fragment is not expressible (n must be 8); instead
        // verify the self-complementary invariant on C4 at s = 3.
        let c4 = Graph::cycle(2).unwrap();
        assert!(matches!(
            is_c_ramsey(&c4, 3, 1_000_000).unwrap(),
            RamseyVerdict::Ramsey
        ));
        assert!(matches!(
            is_c_ramsey(&c4.complement(), 3, 1_000_000).unwrap(),
            RamseyVerdict::Ramsey
        ));
    }

    #[test]
    fn budget_abort_is_distinct() {
        let g = Graph::random(4, 4).unwrap();
        match find_homogeneous(&g, 6, 3).unwrap() {
            HomogeneousSearch::BudgetExceeded { nodes } => assert!(nodes > 3),
            other => panic!("expected budget abort, got {other:?}"),
        }
        assert!(matches!(
            is_c_ramsey(&g, 6, 3).unwrap(),
            RamseyVerdict::Unknown { .. }
        ));
    }

    #[test]
    fn witness_matches_sat_encoding_on_seeded_sample() {
        use crate::cnf::encode_binary;
        use crate::sat;
        for k in [2u32, 3] {
            for seed in 0..8 {
                let g = Graph::random(k, seed).unwrap();
                let s = 3;
                let found = matches!(
                    find_homogeneous(&g, s, 1_000_000).unwrap(),
                    HomogeneousSearch::Found(_)
                );
                let (cnf, _) = encode_binary(&g, s).unwrap();
                let sat = sat::solve(&cnf, 1_000_000).is_sat();
                assert_eq!(found, sat, "k={k} seed={seed}");
            }
        }
    }

    #[test]
    fn extension_property_complete_graph_holds() {
        let g = Graph::complete(3).unwrap();
        let report = check_extension_property(&g, ExtensionMode::Exhaustive, 1_000_000).unwrap();
        assert_eq!(report.verdict, ExtensionVerdict::HoldsVerified);
        assert_eq!(report.bound, 1);
    }

    #[test]
    fn extension_property_isolated_vertex_fails() {
        // Vertex 0 isolated: U = {0} has no common neighbors at all.
        let mut g = Graph::empty(3).unwrap();
        for u in 1..8 {
            for v in u + 1..8 {
                g.add_edge(u, v).unwrap();
            }
        }
        let report = check_extension_property(&g, ExtensionMode::Exhaustive, 1_000_000).unwrap();
        assert_eq!(report.verdict, ExtensionVerdict::Fails);
        let cex = report.counterexample.unwrap();
        assert!(recheck_extension_counterexample(&g, &cex));
        assert_eq!(cex.u, vec![0]);
    }

    #[test]
    fn extension_property_sampled_counterexamples_are_stable() {
        let mut g = Graph::empty(3).unwrap();
        for u in 1..8 {
            for v in u + 1..8 {
                g.add_edge(u, v).unwrap();
            }
        }
        let sampled = check_extension_property(
            &g,
            ExtensionMode::Sampled {
                trials: 500,
                seed: 9,
            },
            1_000_000,
        )
        .unwrap();
        if sampled.verdict == ExtensionVerdict::Fails {
            let cex = sampled.counterexample.unwrap();
            assert!(recheck_extension_counterexample(&g, &cex));
            let exhaustive =
                check_extension_property(&g, ExtensionMode::Exhaustive, 1_000_000).unwrap();
            assert_eq!(exhaustive.verdict, ExtensionVerdict::Fails);
        }
    }

    #[test]
    fn extension_property_work_budget() {
        let g = Graph::random(4, 1).unwrap();
        match check_extension_property(&g, ExtensionMode::Exhaustive, 10) {
            Err(OracleError::WorkBudget { needed, budget }) => {
                assert!(needed > budget);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn density_floor_complete_graph() {
        let g = Graph::complete(4).unwrap();
        let report = density_floor(&g, &g.vertices(), 0.3, 50, 7).unwrap();
        let m = report.subset_size as f64;
        assert!(report.min_density >= 1.0 - 1.0 / m);
        assert!(report.max_density <= 1.0);
    }

    #[test]
    fn density_floor_empty_graph() {
        let g = Graph::empty(4).unwrap();
        let report = density_floor(&g, &g.vertices(), 0.3, 20, 7).unwrap();
        assert_eq!(report.min_density, 0.0);
        assert_eq!(report.max_density, 0.0);
    }

    #[test]
    fn density_floor_random_graph_near_half() {
        let g = Graph::random(8, 3).unwrap();
        let report = density_floor(&g, &g.vertices(), 0.2, 1000, 11).unwrap();
        assert!((report.min_density - 0.5).abs() < 0.15, "{report:?}");
        assert!(report.min_density <= report.max_density);
    }

    #[test]
    fn density_floor_rejects_bad_beta() {
        let g = Graph::complete(2).unwrap();
        assert!(matches!(
            density_floor(&g, &g.vertices(), 1.5, 5, 0),
            Err(OracleError::BetaOutOfRange(_))
        ));
    }

    #[test]
    fn dense_subset_on_complete_and_empty_graphs() {
        let g = Graph::complete(4).unwrap();
        let s = find_dense_subset(&g, 0.3, 0.5, 1000, 1).unwrap().unwrap();
        assert_eq!(s, g.vertices());

        let e = Graph::empty(4).unwrap();
        assert_eq!(find_dense_subset(&e, 0.3, 0.1, 200, 1).unwrap(), None);
    }

    #[test]
    fn dense_subset_random_graph_qualifies() {
        let g = Graph::random(8, 5).unwrap();
        let s = find_dense_subset(&g, 0.2, 0.3, 500, 2).unwrap();
        assert!(s.is_some());
    }
}
