//! CNF clause databases, the homogeneous-set encodings, and DIMACS output.
//!
//! Three generators are provided for a graph G on `n = 2^k` vertices and an
//! index count `s`:
//!
//! - [`encode_binary`]: variables `x^i_b` name, in binary, the vertex mapped
//!   to by index `i`, plus a selector `y`; satisfiable iff G has a clique or
//!   independent set of size `s`.
//! - [`encode_unary`]: one variable `p^i_v` per index-vertex pair with
//!   exactly-one constraints per index; same selector `y`.
//! - [`encode_clique`]: the binary formula with `y` fixed to 1 (no `y`
//!   variable); satisfiable iff G has a clique of size `s`.
//!
//! Clause emission order is fixed and documented per generator, so equal
//! inputs produce byte-identical DIMACS on every platform.
//!
//! The homogeneity families are emitted once per *ordered* pair of distinct
//! indices (and once per unordered vertex pair for the binary form, ordered
//! vertex pair for the unary form). Per unordered index pair that is one
//! clause for each orientation of the vertex pair; dropping either
//! orientation would leave the formula satisfiable by assigning vertices in
//! an order the remaining clauses never constrain.

use crate::graph::{vertex_bit, Graph, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use thiserror::Error;

/// 1-based DIMACS variable number.
pub type Var = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("clause contains complementary literals on variable {0}")]
    Tautology(Var),
    #[error("literal variable {var} exceeds variable count {num_vars}")]
    VarOutOfRange { var: Var, num_vars: u32 },
    #[error("index count s must be at least 2, got {0}")]
    IndexCountTooSmall(u32),
    #[error("dimacs parse error at line {line}: {msg}")]
    DimacsParse { line: usize, msg: String },
}

// ---------------------------------------------------------------------------
// Literals and clauses
// ---------------------------------------------------------------------------

/// A literal: a variable with a polarity, stored in DIMACS signed form.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn positive(var: Var) -> Lit {
        debug_assert!(var >= 1);
        Lit(var as i32)
    }

    pub fn negative(var: Var) -> Lit {
        debug_assert!(var >= 1);
        Lit(-(var as i32))
    }

    pub fn new(var: Var, polarity: bool) -> Lit {
        if polarity {
            Lit::positive(var)
        } else {
            Lit::negative(var)
        }
    }

    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Lit {
        Lit(-self.0)
    }

    /// The signed DIMACS integer.
    pub fn code(self) -> i32 {
        self.0
    }

    /// True under a total assignment (index var - 1).
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var() as usize - 1] == self.is_positive()
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A clause: a set of literals over distinct variables, kept sorted by
/// variable number. Width is the number of literals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Builds a clause; duplicate literals collapse, a complementary pair is
    /// an error.
    pub fn new(mut lits: Vec<Lit>) -> Result<Clause, CnfError> {
        lits.sort_unstable_by_key(|l| (l.var(), l.is_positive()));
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return Err(CnfError::Tautology(w[0].var()));
            }
        }
        Ok(Clause { lits })
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn width(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits
            .binary_search_by_key(&lit.var(), |l| l.var())
            .is_ok_and(|i| self.lits[i] == lit)
    }

    /// Polarity of `var` in this clause, if present.
    pub fn polarity_of(&self, var: Var) -> Option<bool> {
        self.lits
            .binary_search_by_key(&var, |l| l.var())
            .ok()
            .map(|i| self.lits[i].is_positive())
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.lits.iter().any(|l| l.eval(assignment))
    }

    /// Resolvent of `self` (containing `pivot` positively) and `other`
    /// (containing it negatively). Fails if a complementary pair remains.
    pub fn resolve(&self, other: &Clause, pivot: Var) -> Result<Clause, CnfError> {
        debug_assert_eq!(self.polarity_of(pivot), Some(true));
        debug_assert_eq!(other.polarity_of(pivot), Some(false));
        let merged = self
            .lits
            .iter()
            .chain(other.lits.iter())
            .copied()
            .filter(|l| l.var() != pivot)
            .collect();
        Clause::new(merged)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l:?}")?;
        }
        write!(f, "]")
    }
}

/// Provenance of a clause within its generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseTag {
    /// Binary injectivity: indices i and j do not both map to vertex v.
    Injective,
    /// Binary edge clause guarded by y (y = 0 forces an independent set).
    IndepSet,
    /// Binary non-edge clause guarded by not-y (y = 1 forces a clique).
    Clique,
    /// Unary at-least-one / at-most-one row constraints.
    ExactlyOne,
    /// Unary injectivity.
    UnaryInjective,
    /// Unary edge / non-edge clauses.
    UnaryEdge,
    /// Hand-built or parsed input clause.
    Input,
}

impl ClauseTag {
    pub fn name(self) -> &'static str {
        match self {
            ClauseTag::Injective => "injective",
            ClauseTag::IndepSet => "indep-set",
            ClauseTag::Clique => "clique",
            ClauseTag::ExactlyOne => "exactly-one",
            ClauseTag::UnaryInjective => "unary-injective",
            ClauseTag::UnaryEdge => "unary-edge",
            ClauseTag::Input => "input",
        }
    }
}

/// A clause database. Clauses are kept in emission order; the count and the
/// order are part of each generator's contract.
#[derive(Clone, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Clause>,
    tags: Vec<ClauseTag>,
}

impl Cnf {
    pub fn new(num_vars: u32) -> Cnf {
        Cnf {
            num_vars,
            clauses: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn from_clauses(num_vars: u32, clauses: Vec<Clause>) -> Result<Cnf, CnfError> {
        let mut cnf = Cnf::new(num_vars);
        for c in clauses {
            cnf.push(c, ClauseTag::Input)?;
        }
        Ok(cnf)
    }

    pub fn push(&mut self, clause: Clause, tag: ClauseTag) -> Result<(), CnfError> {
        if let Some(l) = clause.lits().iter().find(|l| l.var() > self.num_vars) {
            return Err(CnfError::VarOutOfRange {
                var: l.var(),
                num_vars: self.num_vars,
            });
        }
        self.clauses.push(clause);
        self.tags.push(tag);
        Ok(())
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clause(&self, idx: usize) -> &Clause {
        &self.clauses[idx]
    }

    pub fn tag(&self, idx: usize) -> ClauseTag {
        self.tags[idx]
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Width of the widest clause (the formula width).
    pub fn width(&self) -> usize {
        self.clauses.iter().map(Clause::width).max().unwrap_or(0)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.eval(assignment))
    }

    pub fn counts_by_tag(&self) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        for t in &self.tags {
            *out.entry(t.name().to_string()).or_insert(0) += 1;
        }
        out
    }

    /// Applies the restriction `lit = true`: clauses containing `lit` are
    /// deleted, the complementary literal is removed from the rest. Clause
    /// order is preserved; restricting on a variable that no longer occurs is
    /// a no-op.
    pub fn restrict(&self, lit: Lit) -> Cnf {
        let mut out = Cnf::new(self.num_vars);
        for (clause, &tag) in self.clauses.iter().zip(&self.tags) {
            match clause.polarity_of(lit.var()) {
                Some(pol) if pol == lit.is_positive() => {}
                Some(_) => {
                    let kept = clause
                        .lits()
                        .iter()
                        .copied()
                        .filter(|l| l.var() != lit.var())
                        .collect();
                    out.push(
                        Clause::new(kept).expect("restriction cannot add pairs"),
                        tag,
                    )
                    .expect("vars unchanged");
                }
                None => out.push(clause.clone(), tag).expect("vars unchanged"),
            }
        }
        out
    }
}

impl fmt::Debug for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cnf(vars={}, clauses={})", self.num_vars, self.len())
    }
}

// ---------------------------------------------------------------------------
// Variable maps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    Binary,
    Unary,
}

/// What a semantic variable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemanticVar {
    /// Bit `b` (1-based, MSB first) of the vertex assigned to index `i`.
    X { index: u32, bit: u32 },
    /// Index `i` is mapped to vertex `v`.
    P { index: u32, vertex: VertexId },
    /// The clique/independent-set selector.
    Y,
}

/// Bijection between semantic variables and DIMACS numbers.
///
/// Binary: `x^i_b -> (i-1)k + b`, `y -> sk + 1`.
/// Unary: `p^i_v -> (i-1)n + v + 1`, `y -> sn + 1`.
/// Formulas without the selector (the clique form) simply omit the top
/// variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarMap {
    pub kind: EncodingKind,
    pub s: u32,
    pub k: u32,
    pub n: usize,
    pub has_y: bool,
}

impl VarMap {
    pub fn binary(s: u32, k: u32, has_y: bool) -> VarMap {
        VarMap {
            kind: EncodingKind::Binary,
            s,
            k,
            n: 1 << k,
            has_y,
        }
    }

    pub fn unary(s: u32, k: u32, has_y: bool) -> VarMap {
        VarMap {
            kind: EncodingKind::Unary,
            s,
            k,
            n: 1 << k,
            has_y,
        }
    }

    pub fn num_vars(&self) -> u32 {
        let base = match self.kind {
            EncodingKind::Binary => self.s * self.k,
            EncodingKind::Unary => self.s * self.n as u32,
        };
        base + u32::from(self.has_y)
    }

    /// Variable for bit `b` of index `i` (both 1-based).
    pub fn x_var(&self, i: u32, b: u32) -> Var {
        debug_assert_eq!(self.kind, EncodingKind::Binary);
        debug_assert!(i >= 1 && i <= self.s && b >= 1 && b <= self.k);
        (i - 1) * self.k + b
    }

    /// Variable asserting index `i` maps to vertex `v`.
    pub fn p_var(&self, i: u32, v: VertexId) -> Var {
        debug_assert_eq!(self.kind, EncodingKind::Unary);
        debug_assert!(i >= 1 && i <= self.s && v < self.n);
        (i - 1) * self.n as u32 + v as u32 + 1
    }

    pub fn y_var(&self) -> Option<Var> {
        self.has_y.then(|| self.num_vars())
    }

    pub fn semantics(&self, var: Var) -> Option<SemanticVar> {
        if var == 0 || var > self.num_vars() {
            return None;
        }
        if self.y_var() == Some(var) {
            return Some(SemanticVar::Y);
        }
        let idx = var - 1;
        Some(match self.kind {
            EncodingKind::Binary => SemanticVar::X {
                index: idx / self.k + 1,
                bit: idx % self.k + 1,
            },
            EncodingKind::Unary => SemanticVar::P {
                index: idx / self.n as u32 + 1,
                vertex: (idx % self.n as u32) as VertexId,
            },
        })
    }
}

// ---------------------------------------------------------------------------
// Encoders
// ---------------------------------------------------------------------------

/// Literal asserting `x^i_b != v_b`.
fn mismatch_lit(map: &VarMap, i: u32, b: u32, v: VertexId) -> Lit {
    Lit::new(map.x_var(i, b), !vertex_bit(v, b, map.k))
}

/// All k mismatch literals for index `i` against vertex `v`.
fn mismatch_lits(map: &VarMap, i: u32, v: VertexId, out: &mut Vec<Lit>) {
    for b in 1..=map.k {
        out.push(mismatch_lit(map, i, b, v));
    }
}

fn injectivity_clauses(g: &Graph, map: &VarMap, cnf: &mut Cnf) {
    for i in 1..=map.s {
        for j in i + 1..=map.s {
            for v in 0..g.n() {
                let mut lits = Vec::with_capacity(2 * map.k as usize);
                mismatch_lits(map, i, v, &mut lits);
                mismatch_lits(map, j, v, &mut lits);
                cnf.push(
                    Clause::new(lits).expect("distinct vars"),
                    ClauseTag::Injective,
                )
                .expect("in range");
            }
        }
    }
}

/// Ordered pairs of distinct indices in lexicographic order.
fn ordered_index_pairs(s: u32) -> impl Iterator<Item = (u32, u32)> {
    (1..=s).flat_map(move |i| (1..=s).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Builds the full homogeneous-set formula over binary vertex names.
///
/// Emission order: injectivity by (i, j, v) for i < j; then edge clauses by
/// ordered (i, j) and unordered vertex pair u < v; then non-edge clauses in
/// the same order. Total clause count: C(s,2) * (n + n(n-1)).
pub fn encode_binary(g: &Graph, s: u32) -> Result<(Cnf, VarMap), CnfError> {
    if s < 2 {
        return Err(CnfError::IndexCountTooSmall(s));
    }
    let map = VarMap::binary(s, g.k(), true);
    let y = map.y_var().expect("binary map has y");
    let mut cnf = Cnf::new(map.num_vars());

    injectivity_clauses(g, &map, &mut cnf);
    for want_edge in [true, false] {
        let (guard, tag) = if want_edge {
            (Lit::positive(y), ClauseTag::IndepSet)
        } else {
            (Lit::negative(y), ClauseTag::Clique)
        };
        for (i, j) in ordered_index_pairs(s) {
            for u in 0..g.n() {
                for v in u + 1..g.n() {
                    if g.has_edge(u, v) != want_edge {
                        continue;
                    }
                    let mut lits = Vec::with_capacity(2 * map.k as usize + 1);
                    lits.push(guard);
                    mismatch_lits(&map, i, u, &mut lits);
                    mismatch_lits(&map, j, v, &mut lits);
                    cnf.push(Clause::new(lits).expect("distinct vars"), tag)
                        .expect("in range");
                }
            }
        }
    }
    Ok((cnf, map))
}

/// Builds the clique formula directly: the binary formula under y = 1, with
/// no y variable. Satisfiable iff G has a clique of size `s`; `s * k`
/// variables, width 2k.
pub fn encode_clique(g: &Graph, s: u32) -> Result<(Cnf, VarMap), CnfError> {
    if s < 2 {
        return Err(CnfError::IndexCountTooSmall(s));
    }
    let map = VarMap::binary(s, g.k(), false);
    let mut cnf = Cnf::new(map.num_vars());

    injectivity_clauses(g, &map, &mut cnf);
    for (i, j) in ordered_index_pairs(s) {
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if g.has_edge(u, v) {
                    continue;
                }
                let mut lits = Vec::with_capacity(2 * map.k as usize);
                mismatch_lits(&map, i, u, &mut lits);
                mismatch_lits(&map, j, v, &mut lits);
                cnf.push(Clause::new(lits).expect("distinct vars"), ClauseTag::Clique)
                    .expect("in range");
            }
        }
    }
    Ok((cnf, map))
}

/// Builds the unary (one variable per index-vertex pair) formula.
///
/// Emission order: per index, the at-least-one clause then all at-most-one
/// clauses by u < v; injectivity by (i < j, v); edge clauses by ordered
/// (i, j) and ordered (u, v); non-edge clauses in the same order. The edge
/// families visit ordered vertex pairs, so each semantic clause appears once
/// per orientation.
pub fn encode_unary(g: &Graph, s: u32) -> Result<(Cnf, VarMap), CnfError> {
    if s < 2 {
        return Err(CnfError::IndexCountTooSmall(s));
    }
    let map = VarMap::unary(s, g.k(), true);
    let y = map.y_var().expect("unary map has y");
    let n = g.n();
    let mut cnf = Cnf::new(map.num_vars());

    for i in 1..=s {
        let alo = (0..n).map(|v| Lit::positive(map.p_var(i, v))).collect();
        cnf.push(Clause::new(alo).expect("distinct"), ClauseTag::ExactlyOne)
            .expect("in range");
        for u in 0..n {
            for v in u + 1..n {
                let amo = vec![
                    Lit::negative(map.p_var(i, u)),
                    Lit::negative(map.p_var(i, v)),
                ];
                cnf.push(Clause::new(amo).expect("distinct"), ClauseTag::ExactlyOne)
                    .expect("in range");
            }
        }
    }
    for i in 1..=s {
        for j in i + 1..=s {
            for v in 0..n {
                let inj = vec![
                    Lit::negative(map.p_var(i, v)),
                    Lit::negative(map.p_var(j, v)),
                ];
                cnf.push(
                    Clause::new(inj).expect("distinct"),
                    ClauseTag::UnaryInjective,
                )
                .expect("in range");
            }
        }
    }
    for want_edge in [true, false] {
        let guard = if want_edge {
            Lit::positive(y)
        } else {
            Lit::negative(y)
        };
        for (i, j) in ordered_index_pairs(s) {
            for u in 0..n {
                for v in 0..n {
                    if v == u || g.has_edge(u, v) != want_edge {
                        continue;
                    }
                    let lits = vec![
                        guard,
                        Lit::negative(map.p_var(i, u)),
                        Lit::negative(map.p_var(j, v)),
                    ];
                    cnf.push(Clause::new(lits).expect("distinct"), ClauseTag::UnaryEdge)
                        .expect("in range");
                }
            }
        }
    }
    Ok((cnf, map))
}

// ---------------------------------------------------------------------------
// Closed-form clause counts
// ---------------------------------------------------------------------------

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Clause count emitted by [`encode_binary`]: C(s,2) * (n + n(n-1)).
pub fn binary_clause_count(n: usize, s: u32) -> u64 {
    let (n, s) = (n as u64, s as u64);
    choose2(s) * (n + n * (n - 1))
}

/// A commonly quoted compact count, C(s,2) * (1 + C(n,2)), which counts one
/// injectivity clause per index pair instead of n and one homogeneity clause
/// per unordered vertex pair instead of one per orientation. Recorded in
/// metadata for comparison; [`encode_binary`] intentionally does not match it.
pub fn binary_clause_count_compact(n: usize, s: u32) -> u64 {
    let (n, s) = (n as u64, s as u64);
    choose2(s) * (1 + choose2(n))
}

/// Clause count emitted by [`encode_clique`].
pub fn clique_clause_count(n: usize, s: u32, edges: u64) -> u64 {
    let (n, s) = (n as u64, s as u64);
    choose2(s) * n + s * (s - 1) * (choose2(n) - edges)
}

/// Clause count emitted by [`encode_unary`].
pub fn unary_clause_count(n: usize, s: u32) -> u64 {
    let (n, s) = (n as u64, s as u64);
    s + s * choose2(n) + choose2(s) * n + s * (s - 1) * n * (n - 1)
}

// ---------------------------------------------------------------------------
// DIMACS
// ---------------------------------------------------------------------------

/// Writes standard DIMACS with a deterministic comment header. Literals are
/// in ascending variable order; equal inputs produce identical bytes.
pub fn emit_dimacs<W: Write>(
    cnf: &Cnf,
    map: &VarMap,
    graph_hash: &str,
    mut sink: W,
) -> io::Result<()> {
    let kind = if map.has_y {
        match map.kind {
            EncodingKind::Binary => "binary",
            EncodingKind::Unary => "unary",
        }
    } else {
        "clique"
    };
    writeln!(
        sink,
        "c generator ramsey-core {}",
        env!("CARGO_PKG_VERSION")
    )?;
    writeln!(sink, "c k {}", map.k)?;
    writeln!(sink, "c s {}", map.s)?;
    writeln!(sink, "c encoding {kind}")?;
    writeln!(sink, "c graph-sha256 {graph_hash}")?;
    writeln!(sink, "p cnf {} {}", cnf.num_vars(), cnf.len())?;
    for clause in cnf.clauses() {
        for lit in clause.lits() {
            write!(sink, "{} ", lit.code())?;
        }
        writeln!(sink, "0")?;
    }
    Ok(())
}

/// Parses DIMACS text; comment lines are skipped, clauses get [`ClauseTag::Input`].
pub fn parse_dimacs(text: &str) -> Result<Cnf, CnfError> {
    let mut cnf: Option<Cnf> = None;
    let mut pending: Vec<Lit> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let mut it = rest.split_whitespace();
            if it.next() != Some("cnf") {
                return Err(CnfError::DimacsParse {
                    line: idx + 1,
                    msg: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            let vars: u32 =
                it.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(CnfError::DimacsParse {
                        line: idx + 1,
                        msg: "bad variable count".into(),
                    })?;
            cnf = Some(Cnf::new(vars));
            continue;
        }
        let cnf = cnf.as_mut().ok_or(CnfError::DimacsParse {
            line: idx + 1,
            msg: "clause before header".into(),
        })?;
        for tok in line.split_whitespace() {
            let code: i32 = tok.parse().map_err(|_| CnfError::DimacsParse {
                line: idx + 1,
                msg: format!("bad literal {tok:?}"),
            })?;
            if code == 0 {
                cnf.push(Clause::new(std::mem::take(&mut pending))?, ClauseTag::Input)?;
            } else {
                pending.push(Lit(code));
            }
        }
    }
    let cnf = cnf.ok_or(CnfError::DimacsParse {
        line: 0,
        msg: "missing `p cnf` header".into(),
    })?;
    if !pending.is_empty() {
        return Err(CnfError::DimacsParse {
            line: 0,
            msg: "unterminated clause at end of input".into(),
        });
    }
    Ok(cnf)
}

// ---------------------------------------------------------------------------
// Metadata sidecar
// ---------------------------------------------------------------------------

/// JSON sidecar describing one emitted formula.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormulaMetadata {
    pub k: u32,
    pub s: u32,
    /// Derived ratio c = s / k.
    pub c: f64,
    pub encoding: String,
    pub num_vars: u32,
    pub num_clauses: u64,
    pub clause_counts: BTreeMap<String, u64>,
    /// This generator's closed-form count; always equals `num_clauses`.
    pub closed_form: u64,
    /// The compact count C(s,2)(1 + C(n,2)) for the binary form, kept for
    /// comparison with the emitted count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_compact: Option<u64>,
    pub graph_sha256: String,
    pub generator_version: String,
}

pub fn formula_metadata(cnf: &Cnf, map: &VarMap, g: &Graph) -> FormulaMetadata {
    let (encoding, closed_form, compact) = if map.has_y {
        match map.kind {
            EncodingKind::Binary => (
                "binary",
                binary_clause_count(g.n(), map.s),
                Some(binary_clause_count_compact(g.n(), map.s)),
            ),
            EncodingKind::Unary => ("unary", unary_clause_count(g.n(), map.s), None),
        }
    } else {
        (
            "clique",
            clique_clause_count(g.n(), map.s, g.edge_count() as u64),
            None,
        )
    };
    FormulaMetadata {
        k: map.k,
        s: map.s,
        c: map.s as f64 / map.k as f64,
        encoding: encoding.to_string(),
        num_vars: cnf.num_vars(),
        num_clauses: cnf.len() as u64,
        clause_counts: cnf.counts_by_tag(),
        closed_form,
        closed_form_compact: compact,
        graph_sha256: g.content_hash(),
        generator_version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

// ---------------------------------------------------------------------------
// Assignment decoding
// ---------------------------------------------------------------------------

/// A structural problem with a decoded assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecodeViolation {
    NotInjective {
        i: u32,
        j: u32,
        vertex: VertexId,
    },
    /// y = 1 but two mapped vertices are not adjacent.
    MissingEdge {
        i: u32,
        j: u32,
        u: VertexId,
        v: VertexId,
    },
    /// y = 0 but two mapped vertices are adjacent.
    UnexpectedEdge {
        i: u32,
        j: u32,
        u: VertexId,
        v: VertexId,
    },
    /// A unary row with zero or several true variables.
    UnaryRow {
        i: u32,
        true_count: usize,
    },
}

/// Result of decoding a total assignment against a variable map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecodedAssignment {
    /// Vertex per index (1-based index i stored at position i - 1). `None`
    /// marks a malformed unary row.
    pub vertices: Vec<Option<VertexId>>,
    /// Selector value; formulas without y decode as y = 1 (the clique side).
    pub y: bool,
    pub violations: Vec<DecodeViolation>,
}

impl DecodedAssignment {
    /// True when the decoded map is a verified homogeneous set of the right kind.
    pub fn is_valid_witness(&self) -> bool {
        self.violations.is_empty() && self.vertices.iter().all(Option::is_some)
    }
}

/// Decodes a total assignment and re-checks it against the graph, reporting
/// violations rather than failing.
pub fn decode_assignment(map: &VarMap, g: &Graph, assignment: &[bool]) -> DecodedAssignment {
    assert_eq!(
        assignment.len(),
        map.num_vars() as usize,
        "assignment not total"
    );
    let y = map
        .y_var()
        .map(|v| assignment[v as usize - 1])
        .unwrap_or(true);
    let mut vertices: Vec<Option<VertexId>> = Vec::with_capacity(map.s as usize);
    let mut violations = Vec::new();

    for i in 1..=map.s {
        match map.kind {
            EncodingKind::Binary => {
                let mut v: VertexId = 0;
                for b in 1..=map.k {
                    v = (v << 1) | usize::from(assignment[map.x_var(i, b) as usize - 1]);
                }
                vertices.push(Some(v));
            }
            EncodingKind::Unary => {
                let row: Vec<VertexId> = (0..map.n)
                    .filter(|&v| assignment[map.p_var(i, v) as usize - 1])
                    .collect();
                if row.len() == 1 {
                    vertices.push(Some(row[0]));
                } else {
                    violations.push(DecodeViolation::UnaryRow {
                        i,
                        true_count: row.len(),
                    });
                    vertices.push(None);
                }
            }
        }
    }

    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let (Some(u), Some(v)) = (vertices[i], vertices[j]) else {
                continue;
            };
            let (i1, j1) = (i as u32 + 1, j as u32 + 1);
            if u == v {
                violations.push(DecodeViolation::NotInjective {
                    i: i1,
                    j: j1,
                    vertex: u,
                });
            } else if y && !g.has_edge(u, v) {
                violations.push(DecodeViolation::MissingEdge { i: i1, j: j1, u, v });
            } else if !y && g.has_edge(u, v) {
                violations.push(DecodeViolation::UnexpectedEdge { i: i1, j: j1, u, v });
            }
        }
    }

    DecodedAssignment {
        vertices,
        y,
        violations,
    }
}

/// Builds the total assignment that maps index i to `vertices[i - 1]` with
/// the given selector value. The inverse of [`decode_assignment`] on valid
/// witnesses.
pub fn encode_witness(map: &VarMap, vertices: &[VertexId], y: bool) -> Vec<bool> {
    assert_eq!(vertices.len(), map.s as usize, "need one vertex per index");
    let mut assignment = vec![false; map.num_vars() as usize];
    for (idx, &v) in vertices.iter().enumerate() {
        let i = idx as u32 + 1;
        match map.kind {
            EncodingKind::Binary => {
                for b in 1..=map.k {
                    assignment[map.x_var(i, b) as usize - 1] = vertex_bit(v, b, map.k);
                }
            }
            EncodingKind::Unary => {
                assignment[map.p_var(i, v) as usize - 1] = true;
            }
        }
    }
    if let Some(yv) = map.y_var() {
        assignment[yv as usize - 1] = y;
    }
    assignment
}
