//! Chain-types, GI-types and the boundary strata of the rank-`r`
//! compactification of the isomorphism scheme.
//!
//! A GI-type `(I, J)` indexes the closed stratum cut out by the divisors
//! `Z_i` (`i ∈ I`) and `Y_j` (`j ∈ J`); it is non-empty exactly when
//! `min(I) + min(J) >= r`, where the minimum of the empty set is `r`. Each
//! GI-type determines the chain-type of the Gieseker chain inserted over the
//! corresponding node: the gaps between consecutive elements of `I ∪ {r}`
//! ascending, followed by the gaps of `J ∪ {r}` descending.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chain-type entry {0} is not positive")]
    NonPositiveEntry(i64),
    #[error("chain-type of degree {degree} exceeds rank {rank}")]
    DegreeExceedsRank { degree: u64, rank: u32 },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("element {element} is outside [0, {max}]")]
    OutOfRange { element: u32, max: u32 },
    #[error("subset elements must be strictly increasing")]
    NotStrictlyIncreasing,
    #[error("min(I) + min(J) = {sum} is smaller than the rank {rank}")]
    EmptyStratum { sum: u32, rank: u32 },
}

/// Tuple `(d_1, …, d_q)` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ChainType(Vec<u32>);

impl ChainType {
    pub fn new(entries: Vec<u32>) -> Result<Self, ChainError> {
        if entries.contains(&0) {
            return Err(ChainError::NonPositiveEntry(0));
        }
        Ok(ChainType(entries))
    }

    pub fn empty() -> Self {
        ChainType(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    pub fn reverse(&self) -> ChainType {
        ChainType(self.0.iter().rev().copied().collect())
    }

    /// Checks the degree bound `|d| <= r`.
    pub fn check_rank(&self, rank: u32) -> Result<(), ChainError> {
        if rank == 0 {
            return Err(ChainError::ZeroRank);
        }
        if self.degree() > rank as u64 {
            return Err(ChainError::DegreeExceedsRank {
                degree: self.degree(),
                rank,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<u32>> for ChainType {
    type Error = ChainError;
    fn try_from(entries: Vec<u32>) -> Result<Self, ChainError> {
        ChainType::new(entries)
    }
}

impl From<ChainType> for Vec<u32> {
    fn from(c: ChainType) -> Vec<u32> {
        c.0
    }
}

impl fmt::Display for ChainType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// A subset of `[0, r-1]`, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct RankSubset(Vec<u32>);

impl RankSubset {
    pub fn new(elements: Vec<u32>) -> Result<Self, ChainError> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ChainError::NotStrictlyIncreasing);
        }
        Ok(RankSubset(elements))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut elements: Vec<u32>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        RankSubset(elements)
    }

    pub fn empty() -> Self {
        RankSubset(Vec::new())
    }

    pub fn from_mask(mask: u64, rank: u32) -> Self {
        RankSubset((0..rank).filter(|&i| mask & (1 << i) != 0).collect())
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest element, or `rank` for the empty set.
    pub fn min_or(&self, rank: u32) -> u32 {
        self.0.first().copied().unwrap_or(rank)
    }

    pub fn is_subset(&self, other: &RankSubset) -> bool {
        self.0.iter().all(|x| other.0.binary_search(x).is_ok())
    }

    pub fn check_rank(&self, rank: u32) -> Result<(), ChainError> {
        if rank == 0 {
            return Err(ChainError::ZeroRank);
        }
        match self.0.last() {
            Some(&x) if x >= rank => Err(ChainError::OutOfRange {
                element: x,
                max: rank - 1,
            }),
            _ => Ok(()),
        }
    }
}

impl TryFrom<Vec<u32>> for RankSubset {
    type Error = ChainError;
    fn try_from(elements: Vec<u32>) -> Result<Self, ChainError> {
        RankSubset::new(elements)
    }
}

impl From<RankSubset> for Vec<u32> {
    fn from(s: RankSubset) -> Vec<u32> {
        s.0
    }
}

impl fmt::Display for RankSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Whether `(I, J)` is a GI-type for rank `r`.
pub fn is_valid_gi_type(i: &RankSubset, j: &RankSubset, rank: u32) -> Result<bool, ChainError> {
    i.check_rank(rank)?;
    j.check_rank(rank)?;
    Ok(i.min_or(rank) + j.min_or(rank) >= rank)
}

/// A pair `(I, J)` of subsets of `[0, r-1]` with `min(I) + min(J) >= r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GiType {
    i: RankSubset,
    j: RankSubset,
    rank: u32,
}

impl GiType {
    pub fn new(i: RankSubset, j: RankSubset, rank: u32) -> Result<Self, ChainError> {
        if !is_valid_gi_type(&i, &j, rank)? {
            return Err(ChainError::EmptyStratum {
                sum: i.min_or(rank) + j.min_or(rank),
                rank,
            });
        }
        Ok(GiType { i, j, rank })
    }

    /// The open stratum `(∅, ∅)`.
    pub fn open(rank: u32) -> Self {
        GiType {
            i: RankSubset::empty(),
            j: RankSubset::empty(),
            rank,
        }
    }

    pub fn i(&self) -> &RankSubset {
        &self.i
    }

    pub fn j(&self) -> &RankSubset {
        &self.j
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn codim(&self) -> usize {
        self.i.len() + self.j.len()
    }

    /// Swap `I` and `J`: the type of the inverse generalized isomorphism.
    pub fn invert(&self) -> GiType {
        GiType {
            i: self.j.clone(),
            j: self.i.clone(),
            rank: self.rank,
        }
    }

    /// The chain-type of the Gieseker chain attached to this GI-type.
    pub fn to_chain(&self) -> ChainType {
        let r = self.rank;
        let mut out = Vec::with_capacity(self.codim());
        let i = self.i.elements();
        for k in 0..i.len() {
            let next = i.get(k + 1).copied().unwrap_or(r);
            out.push(next - i[k]);
        }
        let j = self.j.elements();
        for k in (0..j.len()).rev() {
            let next = j.get(k + 1).copied().unwrap_or(r);
            out.push(next - j[k]);
        }
        ChainType(out)
    }

    /// Componentwise inclusion `I ⊆ I'`, `J ⊆ J'`. The larger pair indexes
    /// the deeper stratum.
    pub fn is_below(&self, other: &GiType) -> bool {
        self.rank == other.rank && self.i.is_subset(&other.i) && self.j.is_subset(&other.j)
    }
}

impl fmt::Display for GiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

pub fn gi_to_chain(t: &GiType) -> ChainType {
    t.to_chain()
}

pub fn invert(t: &GiType) -> GiType {
    t.invert()
}

pub fn reverse(d: &ChainType) -> ChainType {
    d.reverse()
}

/// All GI-types over the chain-type `d`. The fiber is indexed by the split
/// position `p ∈ [0, len(d)]`: the first `p` entries come from `I` and the
/// rest from `J`. Elements are listed from `p = len(d)` (everything in `I`)
/// down to `p = 0`.
pub fn chain_fiber(d: &ChainType, rank: u32) -> Result<Vec<GiType>, ChainError> {
    d.check_rank(rank)?;
    let entries = d.entries();
    let len = entries.len();
    let mut out = Vec::with_capacity(len + 1);
    for p in (0..=len).rev() {
        // I: i_m = r - (d_m + … + d_p)
        let mut i = Vec::with_capacity(p);
        let mut acc = rank;
        for &x in entries[..p].iter().rev() {
            acc -= x;
            i.push(acc);
        }
        i.reverse();
        // J: j_q = r - d_{p+1}, j_{q-1} = j_q - d_{p+2}, …
        let mut j = Vec::with_capacity(len - p);
        let mut acc = rank;
        for &x in &entries[p..] {
            acc -= x;
            j.push(acc);
        }
        j.reverse();
        out.push(GiType::new(RankSubset(i), RankSubset(j), rank)?);
    }
    Ok(out)
}

/// All compositions of `0..=r`, ordered by length and then
/// lexicographically. There are `2^r` of them.
pub fn enumerate_chain_types(rank: u32) -> Vec<ChainType> {
    let mut all = Vec::new();
    let mut current = Vec::new();
    fn extend(remaining: u32, current: &mut Vec<u32>, all: &mut Vec<ChainType>) {
        all.push(ChainType(current.clone()));
        for d in 1..=remaining {
            current.push(d);
            extend(remaining - d, current, all);
            current.pop();
        }
    }
    extend(rank, &mut current, &mut all);
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

/// All GI-types for rank `r`, grouped by chain-type (in
/// [`enumerate_chain_types`] order) and by split position within a fiber.
pub fn enumerate_gi_types(rank: u32) -> Vec<GiType> {
    enumerate_chain_types(rank)
        .iter()
        .flat_map(|d| chain_fiber(d, rank).expect("chain-type within rank"))
        .collect()
}

/// Entries `a_i` of a splitting type are admissible when each lies in
/// `[1, r]` and their sum is at most `r`.
pub fn is_admissible_splitting(parts: &[i64], rank: u32) -> bool {
    parts.iter().all(|&a| a >= 1 && a <= rank as i64) && parts.iter().sum::<i64>() <= rank as i64
}

/// Per-component degrees of a bundle on a chain of projective lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingType {
    pub parts: Vec<i64>,
    pub rank: u32,
}

impl SplittingType {
    pub fn is_admissible(&self) -> bool {
        is_admissible_splitting(&self.parts, self.rank)
    }
}

/// Boundary strata of the rank-`r` compactification, ordered by inclusion of
/// index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataPoset {
    rank: u32,
    nodes: Vec<GiType>,
    covers: Vec<(usize, usize)>,
}

impl StrataPoset {
    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn nodes(&self) -> &[GiType] {
        &self.nodes
    }

    /// Cover relations `(lower, upper)` as node indices.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn codim(&self, node: usize) -> usize {
        self.nodes[node].codim()
    }

    pub fn index_of(&self, t: &GiType) -> Option<usize> {
        self.nodes.iter().position(|n| n == t)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.nodes[a].is_below(&self.nodes[b])
    }

    /// Nodes strictly above `node`. A point of the closed stratum `node` is
    /// generic when it avoids all of these.
    pub fn strictly_above(&self, node: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&k| k != node && self.leq(node, k))
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&k| (0..self.nodes.len()).all(|o| o == k || !self.leq(o, k)))
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&k| (0..self.nodes.len()).all(|o| o == k || !self.leq(k, o)))
            .collect()
    }
}

/// Nodes sorted by codimension, then `(I, J)`.
pub fn strata_poset(rank: u32) -> StrataPoset {
    let mut nodes = enumerate_gi_types(rank);
    nodes.sort_by(|a, b| a.codim().cmp(&b.codim()).then_with(|| a.cmp(b)));
    let mut covers = Vec::new();
    for (a, lower) in nodes.iter().enumerate() {
        for (b, upper) in nodes.iter().enumerate() {
            if upper.codim() == lower.codim() + 1 && lower.is_below(upper) {
                covers.push((a, b));
            }
        }
    }
    StrataPoset { rank, nodes, covers }
}
