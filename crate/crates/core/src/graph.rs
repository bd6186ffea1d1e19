//! Graphs on `n = 2^k` vertices with bit-string vertex identities.
//!
//! Vertices are the integers `0..n`; bit `b` of a vertex (for `b` in `1..=k`)
//! is the b-th most significant bit of its k-bit representation, so bit 1 is
//! the MSB. Adjacency is kept as one bitset per vertex, symmetric and
//! irreflexive. Graphs are immutable once built and safe to share across
//! threads.

use crate::rng;
use sha2::{Digest, Sha256};
use std::fmt;
use thiserror::Error;

/// Vertex identifier, an integer in `0..n`.
pub type VertexId = usize;

/// Largest supported bit-width; adjacency for `k = 14` is 32 MiB.
pub const MAX_K: u32 = 14;

/// Returns bit `b` (1-based, MSB first) of the k-bit vertex id `v`.
#[inline]
pub fn vertex_bit(v: VertexId, b: u32, k: u32) -> bool {
    debug_assert!(b >= 1 && b <= k);
    (v >> (k - b)) & 1 == 1
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("bit-width k must be at least 1")]
    KZero,
    #[error("bit-width k = {k} exceeds the supported maximum {MAX_K}")]
    KTooLarge { k: u32 },
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

// ---------------------------------------------------------------------------
// VertexSet
// ---------------------------------------------------------------------------

/// A subset of `0..universe`, stored as a bitset. All operations are exact
/// set algebra; iteration is in ascending id order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(universe);
            *w = if hi - lo == 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        s
    }

    pub fn singleton(universe: usize, v: VertexId) -> Self {
        let mut s = Self::empty(universe);
        s.insert(v);
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(universe: usize, it: I) -> Self {
        let mut s = Self::empty(universe);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: VertexId) {
        assert!(v < self.universe, "vertex {v} out of range");
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: VertexId) {
        assert!(v < self.universe, "vertex {v} out of range");
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<VertexId> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn remove_all(&mut self, other: &VertexSet) {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Clears all members below `v`.
    pub fn retain_from(&mut self, v: VertexId) {
        let word = v / 64;
        let nwords = self.words.len();
        for w in self.words.iter_mut().take(word.min(nwords)) {
            *w = 0;
        }
        if word < nwords && !v.is_multiple_of(64) {
            self.words[word] &= !((1u64 << (v % 64)) - 1);
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Size of the intersection without materializing it.
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = i * 64;
            std::iter::successors(Some(w), |&w| Some(w & w.wrapping_sub(1)))
                .take_while(|&w| w != 0)
                .map(move |w| base + w.trailing_zeros() as usize)
        })
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    fn zip_words(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        VertexSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

/// Simple undirected graph on `n = 2^k` vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    k: u32,
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Edgeless graph on `2^k` vertices.
    pub fn empty(k: u32) -> Result<Graph, GraphError> {
        if k == 0 {
            return Err(GraphError::KZero);
        }
        if k > MAX_K {
            return Err(GraphError::KTooLarge { k });
        }
        let n = 1usize << k;
        Ok(Graph {
            k,
            n,
            adj: vec![VertexSet::empty(n); n],
        })
    }

    /// Complete graph on `2^k` vertices.
    pub fn complete(k: u32) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(k)?;
        for v in 0..g.n {
            g.adj[v] = VertexSet::full(g.n);
            g.adj[v].remove(v);
        }
        Ok(g)
    }

    /// Cycle 0-1-...-(n-1)-0 on `2^k` vertices.
    pub fn cycle(k: u32) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(k)?;
        for v in 0..g.n {
            g.add_edge(v, (v + 1) % g.n)?;
        }
        Ok(g)
    }

    pub fn from_edges(k: u32, edges: &[(VertexId, VertexId)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(k)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// G(2^k, 1/2): each unordered pair is an edge with probability 1/2.
    ///
    /// Pairs are visited in order (u, v) for u < v and each consumes one coin
    /// flip from the ChaCha8 stream for `seed`, so the graph is identical for
    /// equal `(k, seed)` on every platform.
    pub fn random(k: u32, seed: u64) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(k)?;
        let mut rng = rng::seeded(seed);
        for u in 0..g.n {
            for v in u + 1..g.n {
                if rng::coin(&mut rng) {
                    g.adj[u].insert(v);
                    g.adj[v].insert(u);
                }
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop { v });
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Vertex count `n = 2^k`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.adj[u].contains(v)
    }

    /// N(v). Panics if `v` is out of range.
    pub fn neighbors(&self, v: VertexId) -> &VertexSet {
        assert!(v < self.n, "vertex {v} out of range for n = {}", self.n);
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// N(U), the vertices adjacent to every member of `u`; N(∅) = V(G).
    pub fn common_neighbors(&self, u: &VertexSet) -> VertexSet {
        let mut out = VertexSet::full(self.n);
        for v in u.iter() {
            out.intersect_with(self.neighbors(v));
        }
        out
    }

    /// e(A, B): the number of ordered pairs (u, w) in A x B with {u, w} an edge.
    /// For disjoint A, B this is the plain cross-edge count.
    pub fn edge_count_between(&self, a: &VertexSet, b: &VertexSet) -> u64 {
        a.iter()
            .map(|u| self.neighbors(u).intersection_len(b) as u64)
            .sum()
    }

    /// d(A, B) = e(A, B) / (|A| |B|). Panics on an empty argument.
    pub fn density(&self, a: &VertexSet, b: &VertexSet) -> f64 {
        let (la, lb) = (a.len(), b.len());
        assert!(la > 0 && lb > 0, "density of an empty set is undefined");
        self.edge_count_between(a, b) as f64 / (la as f64 * lb as f64)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph {
            k: self.k,
            n: self.n,
            adj: vec![VertexSet::empty(self.n); self.n],
        };
        for v in 0..self.n {
            let mut row = VertexSet::full(self.n);
            row.remove_all(&self.adj[v]);
            row.remove(v);
            g.adj[v] = row;
        }
        g
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    // -- text format --------------------------------------------------------

    /// Serializes to the graph text format: a `k <k>` header line, then one
    /// `u v` line per edge with u < v, edges in ascending (u, v) order.
    pub fn to_text(&self) -> String {
        let mut out = format!("k {}\n", self.k);
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push_str(&format!("{u} {v}\n"));
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let k = header
            .strip_prefix("k ")
            .and_then(|s| s.trim().parse::<u32>().ok())
            .ok_or(GraphError::Parse {
                line: 1,
                msg: format!("expected header `k <k>`, got {header:?}"),
            })?;
        let mut g = Graph::empty(k)?;
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize, GraphError> {
                tok.and_then(|t| t.parse().ok()).ok_or(GraphError::Parse {
                    line: idx + 1,
                    msg: format!("expected `u v`, got {line:?}"),
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    msg: format!("trailing tokens in {line:?}"),
                });
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// SHA-256 of the canonical text serialization, hex-encoded.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(k={}, n={}, m={})",
            self.k,
            self.n,
            self.edge_count()
        )
    }
}
