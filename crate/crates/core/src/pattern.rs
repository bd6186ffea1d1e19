//! Patterns: partial assignments to the k bits of one vertex index.
//!
//! A pattern is a string in `{0,1,*}^k`; position `b` (1-based) constrains
//! bit `b` of a vertex id, MSB first, matching the vertex bit convention in
//! [`crate::graph`]. The canonical order on patterns is size ascending, then
//! positionwise lexicographic with `*` < `0` < `1`.

use crate::graph::{VertexId, VertexSet};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern length {got} does not match k = {expected}")]
    LengthMismatch { expected: u32, got: usize },
    #[error("invalid pattern character {0:?} (expected 0, 1 or *)")]
    BadChar(char),
}

/// One position of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternEntry {
    Star,
    Zero,
    One,
}

impl PatternEntry {
    fn rank(self) -> u8 {
        match self {
            PatternEntry::Star => 0,
            PatternEntry::Zero => 1,
            PatternEntry::One => 2,
        }
    }
}

/// A partial assignment to k vertex bits, stored as (fixed-positions mask,
/// values) in id-bit space.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pattern {
    k: u32,
    mask: u32,
    bits: u32,
}

impl Pattern {
    /// The empty pattern `*^k`.
    pub fn empty(k: u32) -> Pattern {
        assert!((1..=32).contains(&k));
        Pattern {
            k,
            mask: 0,
            bits: 0,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of positions set to 0 or 1.
    pub fn size(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn entry(&self, b: u32) -> PatternEntry {
        debug_assert!(b >= 1 && b <= self.k);
        let bit = 1u32 << (self.k - b);
        if self.mask & bit == 0 {
            PatternEntry::Star
        } else if self.bits & bit == 0 {
            PatternEntry::Zero
        } else {
            PatternEntry::One
        }
    }

    pub fn is_set(&self, b: u32) -> bool {
        !matches!(self.entry(b), PatternEntry::Star)
    }

    /// Returns a copy with position `b` set to `value`.
    pub fn with_bit(&self, b: u32, value: bool) -> Pattern {
        assert!(b >= 1 && b <= self.k);
        let bit = 1u32 << (self.k - b);
        Pattern {
            k: self.k,
            mask: self.mask | bit,
            bits: if value {
                self.bits | bit
            } else {
                self.bits & !bit
            },
        }
    }

    /// Returns a copy with position `b` cleared back to `*`.
    pub fn without_bit(&self, b: u32) -> Pattern {
        assert!(b >= 1 && b <= self.k);
        let bit = 1u32 << (self.k - b);
        Pattern {
            k: self.k,
            mask: self.mask & !bit,
            bits: self.bits & !bit,
        }
    }

    /// True if `v` agrees with every set position.
    pub fn matches(&self, v: VertexId) -> bool {
        (v as u32) & self.mask == self.bits
    }

    /// True if `other` agrees with `self` wherever `self` is set.
    pub fn extends(&self, base: &Pattern) -> bool {
        self.k == base.k && self.mask & base.mask == base.mask && self.bits & base.mask == base.bits
    }

    /// C_p: the set of vertices consistent with this pattern; |C_p| = 2^(k-|p|).
    pub fn consistent_set(&self) -> VertexSet {
        let n = 1usize << self.k;
        let mut out = VertexSet::empty(n);
        // Enumerate by filling the free positions of `bits`.
        let free = !self.mask & ((1u32 << self.k) - 1);
        let mut sub = 0u32;
        loop {
            out.insert((self.bits | sub) as VertexId);
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        out
    }

    /// The consistent vertex with the smallest id.
    pub fn lowest_consistent(&self) -> VertexId {
        self.bits as VertexId
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.k, other.k, "comparing patterns of different k");
        self.size().cmp(&other.size()).then_with(|| {
            for b in 1..=self.k {
                let ord = self.entry(b).rank().cmp(&other.entry(b).rank());
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in 1..=self.k {
            f.write_str(match self.entry(b) {
                PatternEntry::Star => "*",
                PatternEntry::Zero => "0",
                PatternEntry::One => "1",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let k = s.chars().count() as u32;
        if k == 0 || k > 32 {
            return Err(PatternError::LengthMismatch {
                expected: 32,
                got: s.len(),
            });
        }
        let mut p = Pattern::empty(k);
        for (i, c) in s.chars().enumerate() {
            let b = i as u32 + 1;
            match c {
                '*' => {}
                '0' => p = p.with_bit(b, false),
                '1' => p = p.with_bit(b, true),
                other => return Err(PatternError::BadChar(other)),
            }
        }
        Ok(p)
    }
}

/// Parses a pattern and checks its length against `k`.
pub fn parse_pattern(s: &str, k: u32) -> Result<Pattern, PatternError> {
    let p: Pattern = s.parse()?;
    if p.k() != k {
        return Err(PatternError::LengthMismatch {
            expected: k,
            got: s.len(),
        });
    }
    Ok(p)
}

/// All patterns of size at most `t`, each exactly once, in canonical order
/// (size ascending, then positionwise lexicographic with `*` < `0` < `1`).
/// The count is `sum over i <= t of 2^i * C(k, i)`.
pub fn enumerate_patterns(k: u32, t: u32) -> Vec<Pattern> {
    assert!(t <= k, "pattern size bound {t} exceeds k = {k}");
    let mut out = Vec::new();
    let full = (1u32 << k) - 1;
    // Walk all masks of popcount <= t, then all value choices per mask.
    for mask in 0..=full {
        if mask.count_ones() > t {
            continue;
        }
        let mut sub = 0u32;
        loop {
            out.push(Pattern { k, mask, bits: sub });
            if sub == mask {
                break;
            }
            sub = (sub.wrapping_sub(mask)) & mask;
        }
    }
    out.sort();
    out
}

/// Number of patterns of size at most `t`, the closed form for the
/// [`enumerate_patterns`] stream length.
pub fn pattern_count(k: u32, t: u32) -> u64 {
    (0..=t)
        .map(|i| (1u64 << i) * binomial(k as u64, i as u64))
        .sum()
}

pub(crate) fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1u64;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
