//! A workbench for homogeneous-set CNF benchmarks and resolution width
//! experiments on graphs with 2^k vertices.
//!
//! The pieces, bottom to top:
//!
//! - [`graph`]: graphs with bit-string vertex identities, vertex sets,
//!   neighborhoods, densities, seeded random graphs, and a text format.
//! - [`pattern`]: partial assignments to one index's k vertex bits.
//! - [`cnf`]: the binary / unary / clique clause-family generators with a
//!   fixed variable numbering, restriction, bit-exact DIMACS, and
//!   assignment decoding.
//! - [`sat`]: a reference DPLL procedure used as ground truth and as the
//!   fallback effort meter.
//! - [`oracle`]: homogeneous-set search, the extension property check, and
//!   density statistics.
//! - [`resolution`]: refutation checking, the exact width oracle, treelike
//!   brute force, and the prover extracted from a refutation.
//! - [`game`]: the memory-bounded Prover-Adversary query game.
//! - [`adversary`]: the common-neighbor and dense-subset strategies with
//!   their parameter solver.

pub mod adversary;
pub mod cnf;
pub mod game;
pub mod graph;
pub mod oracle;
pub mod pattern;
pub mod resolution;
pub mod rng;
pub mod sat;

pub use cnf::{encode_binary, encode_clique, encode_unary, Cnf, Lit, Var, VarMap};
pub use graph::{Graph, VertexId, VertexSet};
pub use pattern::Pattern;
