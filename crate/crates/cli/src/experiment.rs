//! Experiment orchestration.
//!
//! A TOML spec names graph sources (seeds and/or files), the encodings to
//! emit, a game matrix, and an optional solver. Running it materializes the
//! graphs and DIMACS artifacts under an output directory and appends one
//! JSON row per graph to `rows.jsonl` (plus a `rows.csv` projection when
//! asked). Rows are computed by a worker pool but written in source order;
//! everything except wall-clock timings is deterministic for a fixed spec.

use crate::solver::{run_solver, template_is_valid, SolverStatus};
use anyhow::{bail, Context, Result};
use ramsey_core::adversary::{self, ParamConfig};
use ramsey_core::cnf::{self, Cnf, VarMap};
use ramsey_core::game::{self, GameConfig, GameOutcome};
use ramsey_core::graph::Graph;
use ramsey_core::oracle::{self, ExtensionMode, ExtensionPropertyReport, RamseyVerdict};
use ramsey_core::sat;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::{mpsc, Mutex};
use std::time::{Duration, Instant};

fn default_jobs() -> usize {
    1
}

fn default_node_budget() -> u64 {
    oracle::DEFAULT_NODE_BUDGET
}

fn default_max_moves() -> u64 {
    100_000
}

fn default_conflict_budget() -> u64 {
    200_000
}

fn default_timeout_secs() -> u64 {
    60
}

fn default_work_budget() -> u64 {
    100_000_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub k: u32,
    pub s: u32,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub graph_files: Vec<PathBuf>,
    pub encodings: Vec<String>,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default = "default_node_budget")]
    pub node_budget: u64,
    #[serde(default)]
    pub csv: bool,
    #[serde(default)]
    pub extension_property: Option<ExtensionSpec>,
    #[serde(default)]
    pub games: Vec<GameSpec>,
    #[serde(default)]
    pub solver: Option<SolverSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionSpec {
    /// "exhaustive" or "sampled".
    pub mode: String,
    #[serde(default = "default_max_moves")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_work_budget")]
    pub work_budget: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameSpec {
    /// "random" or "greedy".
    pub prover: String,
    /// "common-neighbor", "dense-subset", "constant0", "constant1", "random".
    pub adversary: String,
    /// Which emitted encoding the game is played on.
    pub encoding: String,
    pub mu: usize,
    #[serde(default = "default_max_moves")]
    pub max_moves: u64,
    #[serde(default)]
    pub check_invariants: bool,
    // Dense-subset parameters.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverSpec {
    /// Command template with a `{cnf}` placeholder, or "internal" for the
    /// built-in reference procedure.
    pub command: String,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    /// Conflict cap for the internal procedure.
    #[serde(default = "default_conflict_budget")]
    pub conflict_budget: u64,
    /// Encodings to solve; defaults to every emitted encoding.
    #[serde(default)]
    pub encodings: Vec<String>,
}

impl SolverSpec {
    /// Section with defaults for a bare command template (CLI or environment
    /// override).
    pub fn from_command(command: String) -> SolverSpec {
        SolverSpec {
            command,
            timeout_secs: default_timeout_secs(),
            conflict_budget: default_conflict_budget(),
            encodings: Vec::new(),
        }
    }
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<ExperimentSpec> {
        let spec: ExperimentSpec = toml::from_str(text).context("parsing experiment spec")?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() && self.graph_files.is_empty() {
            bail!("spec lists no seeds and no graph files");
        }
        if self.s < 2 {
            bail!("s must be at least 2");
        }
        if self.jobs == 0 {
            bail!("jobs must be at least 1");
        }
        if self.encodings.is_empty() {
            bail!("spec lists no encodings");
        }
        for e in &self.encodings {
            if !matches!(e.as_str(), "binary" | "unary" | "clique") {
                bail!("unknown encoding {e:?}");
            }
        }
        for g in &self.games {
            if !matches!(g.prover.as_str(), "random" | "greedy") {
                bail!("unknown prover {:?}", g.prover);
            }
            if !matches!(
                g.adversary.as_str(),
                "common-neighbor" | "dense-subset" | "constant0" | "constant1" | "random"
            ) {
                bail!("unknown adversary {:?}", g.adversary);
            }
            if !self.encodings.contains(&g.encoding) {
                bail!("game encoding {:?} is not emitted", g.encoding);
            }
            if g.mu == 0 {
                bail!("mu must be at least 1");
            }
            if matches!(g.adversary.as_str(), "common-neighbor" | "dense-subset")
                && g.encoding == "unary"
            {
                bail!("the clique-game adversaries need a binary encoding");
            }
        }
        if let Some(solver) = &self.solver {
            if solver.command != "internal" && !template_is_valid(&solver.command) {
                bail!(
                    "solver command {:?} lacks the {{cnf}} placeholder",
                    solver.command
                );
            }
            for e in &solver.encodings {
                if !self.encodings.contains(e) {
                    bail!("solver encoding {e:?} is not emitted");
                }
            }
        }
        if let Some(ep) = &self.extension_property {
            if !matches!(ep.mode.as_str(), "exhaustive" | "sampled") {
                bail!("unknown extension-property mode {:?}", ep.mode);
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Result rows
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormulaStats {
    pub encoding: String,
    pub num_vars: u32,
    pub num_clauses: u64,
    pub width: usize,
    /// File name under the output directory.
    pub path: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub ramsey: RamseyVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_property: Option<ExtensionPropertyReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GameRow {
    pub prover: String,
    pub adversary: String,
    pub encoding: String,
    pub mu: usize,
    pub max_moves: u64,
    pub outcome: GameOutcome,
    pub memory_high_water: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverRow {
    pub encoding: String,
    pub command: String,
    pub status: SolverStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conflicts: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decisions: Option<u64>,
    /// Wall-clock timing; the only nondeterministic row field.
    pub wall_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_verified: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub spec_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_file: Option<String>,
    pub graph_sha256: String,
    pub k: u32,
    pub s: u32,
    pub formulas: Vec<FormulaStats>,
    pub oracle: OracleSection,
    pub games: Vec<GameRow>,
    pub solver: Vec<SolverRow>,
}

#[derive(Debug, Clone)]
enum GraphSource {
    Seed(u64),
    File(PathBuf),
}

impl GraphSource {
    fn label(&self) -> String {
        match self {
            GraphSource::Seed(seed) => format!("seed{seed}"),
            GraphSource::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "file".to_string()),
        }
    }

    /// Base for deriving per-game strategy seeds.
    fn seed_base(&self) -> u64 {
        match self {
            GraphSource::Seed(seed) => *seed,
            GraphSource::File(path) => {
                use sha2::{Digest, Sha256};
                let digest = Sha256::digest(path.to_string_lossy().as_bytes());
                u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
            }
        }
    }
}

/// Runs the whole experiment; rows come back in source order and are also
/// appended to `rows.jsonl` under `out_dir`.
pub fn run_experiment(
    spec: &ExperimentSpec,
    spec_hash: &str,
    out_dir: &Path,
    jobs_override: Option<usize>,
) -> Result<Vec<ResultRow>> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let sources: Vec<GraphSource> = spec
        .seeds
        .iter()
        .map(|&s| GraphSource::Seed(s))
        .chain(spec.graph_files.iter().cloned().map(GraphSource::File))
        .collect();
    let jobs = jobs_override.unwrap_or(spec.jobs).max(1);

    let queue: Mutex<VecDeque<usize>> = Mutex::new((0..sources.len()).collect());
    let (tx, rx) = mpsc::channel::<(usize, Result<ResultRow>)>();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(sources.len().max(1)) {
            let tx = tx.clone();
            let queue = &queue;
            let sources = &sources;
            scope.spawn(move || loop {
                let idx = queue.lock().expect("queue lock").pop_front();
                let Some(idx) = idx else { break };
                let row = compute_row(spec, spec_hash, out_dir, &sources[idx]);
                if tx.send((idx, row)).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);

    let mut by_index: BTreeMap<usize, ResultRow> = BTreeMap::new();
    for (idx, row) in rx {
        by_index.insert(idx, row?);
    }
    let rows: Vec<ResultRow> = by_index.into_values().collect();

    let mut jsonl = String::new();
    for row in &rows {
        jsonl.push_str(&serde_json::to_string(row).expect("serializable"));
        jsonl.push('\n');
    }
    std::fs::write(out_dir.join("rows.jsonl"), jsonl).context("writing rows.jsonl")?;
    if spec.csv {
        std::fs::write(out_dir.join("rows.csv"), csv_projection(&rows))
            .context("writing rows.csv")?;
    }
    Ok(rows)
}

fn compute_row(
    spec: &ExperimentSpec,
    spec_hash: &str,
    out_dir: &Path,
    source: &GraphSource,
) -> Result<ResultRow> {
    let graph = match source {
        GraphSource::Seed(seed) => Graph::random(spec.k, *seed)?,
        GraphSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading graph file {}", path.display()))?;
            let g = Graph::from_text(&text)?;
            if g.k() != spec.k {
                bail!(
                    "graph file {} has k = {}, spec says {}",
                    path.display(),
                    g.k(),
                    spec.k
                );
            }
            g
        }
    };
    let label = source.label();
    let graph_name = format!("graph-k{}-{label}.txt", spec.k);
    std::fs::write(out_dir.join(&graph_name), graph.to_text())?;

    // Emit every requested encoding once; games and the solver reuse them.
    let mut encoded: BTreeMap<String, (Cnf, VarMap, String)> = BTreeMap::new();
    let mut formulas = Vec::new();
    for encoding in &spec.encodings {
        let (cnf, map) = match encoding.as_str() {
            "binary" => cnf::encode_binary(&graph, spec.s)?,
            "unary" => cnf::encode_unary(&graph, spec.s)?,
            "clique" => cnf::encode_clique(&graph, spec.s)?,
            other => bail!("unknown encoding {other:?}"),
        };
        let file_name = format!("graph-k{}-{label}-{encoding}.cnf", spec.k);
        let mut bytes = Vec::new();
        cnf::emit_dimacs(&cnf, &map, &graph.content_hash(), &mut bytes)?;
        std::fs::write(out_dir.join(&file_name), &bytes)?;
        let meta = cnf::formula_metadata(&cnf, &map, &graph);
        std::fs::write(
            out_dir.join(format!("graph-k{}-{label}-{encoding}.meta.json", spec.k)),
            serde_json::to_string_pretty(&meta).expect("serializable"),
        )?;
        formulas.push(FormulaStats {
            encoding: encoding.clone(),
            num_vars: cnf.num_vars(),
            num_clauses: cnf.len() as u64,
            width: cnf.width(),
            path: file_name.clone(),
        });
        encoded.insert(encoding.clone(), (cnf, map, file_name));
    }

    let ramsey = oracle::is_c_ramsey(&graph, spec.s, spec.node_budget)?;
    let witness_verified = match &ramsey {
        RamseyVerdict::NotRamsey { witness } => Some(witness.verify(&graph)),
        _ => None,
    };
    let extension_property = match &spec.extension_property {
        None => None,
        Some(ep) => {
            let mode = match ep.mode.as_str() {
                "exhaustive" => ExtensionMode::Exhaustive,
                _ => ExtensionMode::Sampled {
                    trials: ep.trials,
                    seed: ep.seed,
                },
            };
            Some(oracle::check_extension_property(
                &graph,
                mode,
                ep.work_budget,
            )?)
        }
    };

    let mut games = Vec::new();
    for (game_idx, gspec) in spec.games.iter().enumerate() {
        let (cnf, map, _) = &encoded[&gspec.encoding];
        let game_seed = source
            .seed_base()
            .wrapping_mul(1_000_003)
            .wrapping_add(game_idx as u64);
        let transcript = run_game(&graph, cnf, map, gspec, game_seed)?;
        games.push(GameRow {
            prover: transcript.prover.clone(),
            adversary: transcript.adversary.clone(),
            encoding: gspec.encoding.clone(),
            mu: gspec.mu,
            max_moves: gspec.max_moves,
            outcome: transcript.outcome.clone(),
            memory_high_water: transcript.memory_high_water,
        });
    }

    let mut solver_rows = Vec::new();
    if let Some(sspec) = &spec.solver {
        let targets = if sspec.encodings.is_empty() {
            spec.encodings.clone()
        } else {
            sspec.encodings.clone()
        };
        for encoding in &targets {
            let (cnf, map, file_name) = &encoded[encoding];
            solver_rows.push(solve_one(
                &graph,
                cnf,
                map,
                &out_dir.join(file_name),
                encoding,
                sspec,
            ));
        }
    }

    Ok(ResultRow {
        spec_hash: spec_hash.to_string(),
        graph_seed: match source {
            GraphSource::Seed(s) => Some(*s),
            GraphSource::File(_) => None,
        },
        graph_file: match source {
            GraphSource::Seed(_) => None,
            GraphSource::File(p) => Some(p.to_string_lossy().into_owned()),
        },
        graph_sha256: graph.content_hash(),
        k: spec.k,
        s: spec.s,
        formulas,
        oracle: OracleSection {
            ramsey,
            witness_verified,
            extension_property,
        },
        games,
        solver: solver_rows,
    })
}

fn run_game(
    graph: &Graph,
    cnf: &Cnf,
    map: &VarMap,
    gspec: &GameSpec,
    game_seed: u64,
) -> Result<game::Transcript> {
    let mut config = GameConfig::new(gspec.mu, gspec.max_moves);
    if gspec.check_invariants {
        config = config.with_invariant_checks();
    }
    let mut prover: Box<dyn game::ProverStrategy> = match gspec.prover.as_str() {
        "random" => Box::new(game::prover_random(game_seed)),
        "greedy" => Box::new(game::prover_greedy()),
        other => bail!("unknown prover {other:?}"),
    };
    let params = ParamConfig::explicit(
        gspec.epsilon.unwrap_or(0.25),
        gspec.alpha.unwrap_or(0.5),
        gspec.beta.unwrap_or(0.25),
        gspec.delta.unwrap_or(0.5),
        map.s,
        map.k,
    );
    let mut adversary: Box<dyn game::AdversaryStrategy> = match gspec.adversary.as_str() {
        "common-neighbor" => Box::new(adversary::common_neighbor_adversary(graph, map)),
        "dense-subset" => Box::new(
            adversary::dense_subset_adversary(graph, &graph.vertices(), params, map)
                .context("building dense-subset adversary")?,
        ),
        "constant0" => Box::new(game::adversary_constant(false)),
        "constant1" => Box::new(game::adversary_constant(true)),
        "random" => Box::new(game::adversary_random(game_seed ^ 0x5eed)),
        other => bail!("unknown adversary {other:?}"),
    };
    Ok(game::play(
        cnf,
        prover.as_mut(),
        adversary.as_mut(),
        &config,
    ))
}

fn solve_one(
    graph: &Graph,
    cnf: &Cnf,
    map: &VarMap,
    dimacs_path: &Path,
    encoding: &str,
    sspec: &SolverSpec,
) -> SolverRow {
    if sspec.command == "internal" {
        let started = Instant::now();
        let outcome = sat::solve(cnf, sspec.conflict_budget);
        let stats = outcome.stats();
        let (status, model_verified) = match &outcome {
            sat::SatOutcome::Sat(model, _) => {
                let decoded = cnf::decode_assignment(map, graph, model);
                (SolverStatus::Sat, Some(decoded.is_valid_witness()))
            }
            sat::SatOutcome::Unsat(_) => (SolverStatus::Unsat, None),
            sat::SatOutcome::BudgetExceeded(_) => (SolverStatus::Unknown, None),
        };
        SolverRow {
            encoding: encoding.to_string(),
            command: "internal".to_string(),
            status,
            conflicts: Some(stats.conflicts),
            decisions: Some(stats.decisions),
            wall_ms: started.elapsed().as_millis() as u64,
            model_verified,
        }
    } else {
        let outcome = run_solver(
            dimacs_path,
            &sspec.command,
            Duration::from_secs(sspec.timeout_secs),
            cnf.num_vars(),
        );
        let model_verified = outcome
            .model
            .as_ref()
            .map(|m| cnf::decode_assignment(map, graph, m).is_valid_witness());
        SolverRow {
            encoding: encoding.to_string(),
            command: sspec.command.clone(),
            status: outcome.status,
            conflicts: outcome.conflicts,
            decisions: outcome.decisions,
            wall_ms: outcome.wall_ms,
            model_verified,
        }
    }
}

fn csv_projection(rows: &[ResultRow]) -> String {
    let mut out = String::from("source,k,s,graph_sha256,ramsey,game_outcomes,solver_statuses\n");
    for row in rows {
        let source = row
            .graph_seed
            .map(|s| format!("seed{s}"))
            .or_else(|| row.graph_file.clone())
            .unwrap_or_default();
        let ramsey = match &row.oracle.ramsey {
            RamseyVerdict::Ramsey => "ramsey".to_string(),
            RamseyVerdict::NotRamsey { witness } => format!("not-ramsey({:?})", witness.kind),
            RamseyVerdict::Unknown { .. } => "unknown".to_string(),
        };
        let games: Vec<String> = row
            .games
            .iter()
            .map(|g| {
                let outcome = match &g.outcome {
                    GameOutcome::ProverWon { .. } => "prover-won",
                    GameOutcome::AdversarySurvived { .. } => "adversary-survived",
                    GameOutcome::AdversaryResigned { .. } => "adversary-resigned",
                    GameOutcome::ProverForfeit { .. } => "prover-forfeit",
                    GameOutcome::InvariantViolation { .. } => "invariant-violation",
                    GameOutcome::Aborted { .. } => "aborted",
                };
                format!("{}|{}|{}", g.prover, g.adversary, outcome)
            })
            .collect();
        let solver: Vec<String> = row
            .solver
            .iter()
            .map(|s| format!("{}:{:?}", s.encoding, s.status))
            .collect();
        out.push_str(&format!(
            "{source},{},{},{},{ramsey},{},{}\n",
            row.k,
            row.s,
            row.graph_sha256,
            games.join(";"),
            solver.join(";")
        ));
    }
    out
}
