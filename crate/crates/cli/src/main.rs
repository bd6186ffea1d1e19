//! `ramseybench`: generate graphs, emit homogeneous-set CNF benchmarks, run
//! the combinatorial oracles, play the query game, measure resolution width,
//! and orchestrate experiments.
//!
//! Exit status: 0 on success, 1 on operational failure (output I/O, worker
//! errors), 2 on invalid input (unknown flags, malformed files, bad specs).

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use ramsey_cli::experiment::{run_experiment, ExperimentSpec};
use ramsey_cli::solver::template_is_valid;
use ramsey_core::adversary::{self, ParamConfig};
use ramsey_core::cnf::{self, Cnf, VarMap};
use ramsey_core::game::{self, GameConfig};
use ramsey_core::graph::Graph;
use ramsey_core::oracle::{self, ExtensionMode};
use ramsey_core::resolution::{
    self, check_refutation, size_width_bound, treelike_bruteforce, width_oracle, TreelikeOutcome,
    WidthOutcome,
};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ramseybench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodingArg {
    Binary,
    Unary,
    Clique,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtensionArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProverArg {
    Random,
    Greedy,
    Interactive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdversaryArg {
    CommonNeighbor,
    DenseSubset,
    Constant0,
    Constant1,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WidthMode {
    Oracle,
    Treelike,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded G(2^k, 1/2) graph in the text format.
    Gen {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a formula as DIMACS plus a JSON metadata sidecar.
    Encode {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum)]
        encoding: EncodingArg,
        /// Output path; stdout when omitted (sidecar then needs --meta).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Homogeneous-set verdict and optional extension-property report.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = oracle::DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        #[arg(long, value_enum)]
        extension_property: Option<ExtensionArg>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        sample_seed: u64,
        #[arg(long, default_value_t = 100_000_000)]
        work_budget: u64,
    },
    /// Play one Prover-Adversary game on an encoded formula.
    Game {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value = "clique")]
        encoding: EncodingArg,
        #[arg(long, value_enum)]
        prover: ProverArg,
        #[arg(long, default_value_t = 0)]
        prover_seed: u64,
        #[arg(long, value_enum)]
        adversary: AdversaryArg,
        #[arg(long, default_value_t = 1)]
        adversary_seed: u64,
        #[arg(long)]
        mu: usize,
        #[arg(long, default_value_t = 100_000)]
        max_moves: u64,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.25)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long)]
        check_invariants: bool,
        /// Write the full move transcript here as JSONL.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Width oracle, treelike refutation, and the size-from-width report.
    Width {
        /// DIMACS input; alternatively give --graph/--s/--encoding.
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, value_enum, default_value = "clique")]
        encoding: EncodingArg,
        #[arg(long, value_enum, default_value = "both")]
        mode: WidthMode,
        /// Largest width tried by the oracle; defaults to the variable count.
        #[arg(long)]
        w_max: Option<usize>,
        #[arg(long, default_value_t = resolution::DEFAULT_SATURATION_BUDGET)]
        clause_budget: usize,
        #[arg(long, default_value_t = resolution::DEFAULT_TREELIKE_VAR_GUARD)]
        var_guard: u32,
        /// Write the produced refutation here in the step text format.
        #[arg(long)]
        refutation: Option<PathBuf>,
    },
    /// Run an experiment spec; artifacts and rows.jsonl land in --out.
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; overrides the spec.
        #[arg(long)]
        jobs: Option<usize>,
        /// Solver command template override ({cnf} placeholder or "internal").
        #[arg(long)]
        solver: Option<String>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Op(anyhow::Error),
}

trait FailAs<T> {
    fn usage(self) -> Result<T, Failure>;
    fn op(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> FailAs<T> for Result<T, E> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Usage(e.into()))
    }

    fn op(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Op(e.into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Op(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))
        .usage()?;
    Graph::from_text(&text)
        .with_context(|| format!("parsing graph file {}", path.display()))
        .usage()
}

fn encode(graph: &Graph, s: u32, encoding: EncodingArg) -> Result<(Cnf, VarMap), Failure> {
    match encoding {
        EncodingArg::Binary => cnf::encode_binary(graph, s),
        EncodingArg::Unary => cnf::encode_unary(graph, s),
        EncodingArg::Clique => cnf::encode_clique(graph, s),
    }
    .usage()
}

fn print_json(value: &serde_json::Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // A closed pipe downstream (e.g. `| head`) is not an error worth a panic.
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { k, seed, out } => {
            let graph = Graph::random(k, seed).usage()?;
            let text = graph.to_text();
            match out {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))
                    .op()?,
                None => print!("{text}"),
            }
            Ok(())
        }

        Command::Encode {
            graph,
            s,
            encoding,
            out,
            meta,
        } => {
            let g = load_graph(&graph)?;
            let (cnf, map) = encode(&g, s, encoding)?;
            let mut bytes = Vec::new();
            cnf::emit_dimacs(&cnf, &map, &g.content_hash(), &mut bytes).op()?;
            let meta_path = meta.or_else(|| {
                out.as_ref().map(|p| {
                    let mut m = p.as_os_str().to_owned();
                    m.push(".meta.json");
                    PathBuf::from(m)
                })
            });
            match &out {
                Some(path) => std::fs::write(path, &bytes)
                    .with_context(|| format!("writing {}", path.display()))
                    .op()?,
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(&bytes).op()?;
                }
            }
            if let Some(path) = meta_path {
                let metadata = cnf::formula_metadata(&cnf, &map, &g);
                std::fs::write(
                    &path,
                    serde_json::to_string_pretty(&metadata).expect("serializable"),
                )
                .with_context(|| format!("writing {}", path.display()))
                .op()?;
            }
            Ok(())
        }

        Command::Check {
            graph,
            s,
            node_budget,
            extension_property,
            trials,
            sample_seed,
            work_budget,
        } => {
            let g = load_graph(&graph)?;
            let ramsey = oracle::is_c_ramsey(&g, s, node_budget).usage()?;
            let witness_verified = match &ramsey {
                oracle::RamseyVerdict::NotRamsey { witness } => Some(witness.verify(&g)),
                _ => None,
            };
            let extension = match extension_property {
                None => None,
                Some(mode) => {
                    let mode = match mode {
                        ExtensionArg::Exhaustive => ExtensionMode::Exhaustive,
                        ExtensionArg::Sampled => ExtensionMode::Sampled {
                            trials,
                            seed: sample_seed,
                        },
                    };
                    Some(oracle::check_extension_property(&g, mode, work_budget).usage()?)
                }
            };
            print_json(&serde_json::json!({
                "k": g.k(),
                "s": s,
                "graph_sha256": g.content_hash(),
                "ramsey": ramsey,
                "witness_verified": witness_verified,
                "extension_property": extension,
            }));
            Ok(())
        }

        Command::Game {
            graph,
            s,
            encoding,
            prover,
            prover_seed,
            adversary,
            adversary_seed,
            mu,
            max_moves,
            epsilon,
            alpha,
            beta,
            delta,
            check_invariants,
            transcript,
        } => {
            let g = load_graph(&graph)?;
            let (cnf, map) = encode(&g, s, encoding)?;
            if mu == 0 {
                return Err(Failure::Usage(anyhow!("--mu must be at least 1")));
            }
            if matches!(
                adversary,
                AdversaryArg::CommonNeighbor | AdversaryArg::DenseSubset
            ) && encoding == EncodingArg::Unary
            {
                return Err(Failure::Usage(anyhow!(
                    "the clique-game adversaries need a binary vertex encoding"
                )));
            }
            let mut prover: Box<dyn game::ProverStrategy> = match prover {
                ProverArg::Random => Box::new(game::prover_random(prover_seed)),
                ProverArg::Greedy => Box::new(game::prover_greedy()),
                ProverArg::Interactive => Box::new(game::prover_interactive(
                    std::io::stdin().lock(),
                    std::io::stderr(),
                )),
            };
            let params = ParamConfig::explicit(epsilon, alpha, beta, delta, map.s, map.k);
            let mut adversary: Box<dyn game::AdversaryStrategy> = match adversary {
                AdversaryArg::CommonNeighbor => {
                    Box::new(adversary::common_neighbor_adversary(&g, &map))
                }
                AdversaryArg::DenseSubset => Box::new(
                    adversary::dense_subset_adversary(&g, &g.vertices(), params, &map)
                        .context("building dense-subset adversary")
                        .usage()?,
                ),
                AdversaryArg::Constant0 => Box::new(game::adversary_constant(false)),
                AdversaryArg::Constant1 => Box::new(game::adversary_constant(true)),
                AdversaryArg::Random => Box::new(game::adversary_random(adversary_seed)),
            };
            let mut config = GameConfig::new(mu, max_moves);
            if check_invariants {
                config = config.with_invariant_checks();
            }
            let result = game::play(&cnf, prover.as_mut(), adversary.as_mut(), &config);
            if let Some(path) = transcript {
                std::fs::write(&path, result.to_jsonl())
                    .with_context(|| format!("writing {}", path.display()))
                    .op()?;
            }
            print_json(&serde_json::json!({
                "prover": result.prover,
                "adversary": result.adversary,
                "mu": result.mu,
                "max_moves": result.max_moves,
                "moves": result.outcome.moves(),
                "outcome": result.outcome,
                "memory_high_water": result.memory_high_water,
            }));
            Ok(())
        }

        Command::Width {
            cnf: cnf_path,
            graph,
            s,
            encoding,
            mode,
            w_max,
            clause_budget,
            var_guard,
            refutation,
        } => {
            let formula = match (&cnf_path, &graph) {
                (Some(path), None) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))
                        .usage()?;
                    cnf::parse_dimacs(&text).usage()?
                }
                (None, Some(gpath)) => {
                    let g = load_graph(gpath)?;
                    let s =
                        s.ok_or_else(|| Failure::Usage(anyhow!("--s is required with --graph")))?;
                    encode(&g, s, encoding)?.0
                }
                _ => {
                    return Err(Failure::Usage(anyhow!(
                        "give exactly one of --cnf or --graph"
                    )))
                }
            };
            let mut report = serde_json::json!({
                "num_vars": formula.num_vars(),
                "num_clauses": formula.len(),
                "formula_width": formula.width(),
            });
            let mut produced: Option<resolution::Refutation> = None;

            if matches!(mode, WidthMode::Oracle | WidthMode::Both) {
                let w_max = w_max.unwrap_or(formula.num_vars() as usize);
                let section = match width_oracle(&formula, w_max, clause_budget) {
                    WidthOutcome::Refuted { width, refutation } => {
                        let width_report = check_refutation(&formula, &refutation)
                            .expect("extracted refutation validates");
                        let section = serde_json::json!({
                            "outcome": "refuted",
                            "width": width,
                            "refutation_steps": refutation.len(),
                            "width_report": width_report,
                            "size_width": size_width_bound(&width_report),
                        });
                        produced = Some(refutation);
                        section
                    }
                    WidthOutcome::NotWithin { w_max } => {
                        serde_json::json!({ "outcome": "not-within", "w_max": w_max })
                    }
                    WidthOutcome::BudgetExceeded { at_width } => {
                        serde_json::json!({ "outcome": "budget-exceeded", "at_width": at_width })
                    }
                };
                report["oracle"] = section;
            }

            if matches!(mode, WidthMode::Treelike | WidthMode::Both) {
                let section = match treelike_bruteforce(&formula, var_guard).usage()? {
                    TreelikeOutcome::Refutation(r) => {
                        let width_report =
                            check_refutation(&formula, &r).expect("treelike refutation validates");
                        let section = serde_json::json!({
                            "outcome": "refutation",
                            "steps": r.len(),
                            "width_report": width_report,
                            "size_width": size_width_bound(&width_report),
                        });
                        produced = Some(r);
                        section
                    }
                    TreelikeOutcome::Satisfiable(model) => serde_json::json!({
                        "outcome": "satisfiable",
                        "model_true_vars": model
                            .iter()
                            .enumerate()
                            .filter(|(_, &b)| b)
                            .map(|(i, _)| i + 1)
                            .collect::<Vec<_>>(),
                    }),
                };
                report["treelike"] = section;
            }

            if let Some(path) = refutation {
                match produced {
                    Some(r) => std::fs::write(&path, r.to_text())
                        .with_context(|| format!("writing {}", path.display()))
                        .op()?,
                    None => {
                        return Err(Failure::Usage(anyhow!(
                            "no refutation was produced to write"
                        )))
                    }
                }
            }
            print_json(&report);
            Ok(())
        }

        Command::Experiment {
            spec,
            out,
            jobs,
            solver,
        } => {
            let text = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading spec {}", spec.display()))
                .usage()?;
            let mut parsed = ExperimentSpec::parse(&text).usage()?;
            // Template resolution: --solver beats the spec, which beats the
            // RAMSEYBENCH_SOLVER environment default.
            let env_template = std::env::var("RAMSEYBENCH_SOLVER").ok();
            let override_template =
                solver.or_else(|| parsed.solver.is_none().then_some(env_template).flatten());
            if let Some(template) = override_template {
                if template != "internal" && !template_is_valid(&template) {
                    return Err(Failure::Usage(anyhow!(
                        "solver template {template:?} lacks the {{cnf}} placeholder"
                    )));
                }
                match parsed.solver.as_mut() {
                    Some(s) => s.command = template,
                    None => {
                        parsed.solver =
                            Some(ramsey_cli::experiment::SolverSpec::from_command(template))
                    }
                }
            }
            let spec_hash: String = Sha256::digest(text.as_bytes())
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect();
            let rows = run_experiment(&parsed, &spec_hash, &out, jobs).op()?;
            eprintln!(
                "wrote {} rows to {}",
                rows.len(),
                out.join("rows.jsonl").display()
            );
            Ok(())
        }
    }
}
