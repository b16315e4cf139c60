//! Chain-graphs and GI-graphs.
//!
//! A chain-graph decorates a stable modular graph with an integer degree per
//! vertex and a chain-type per oriented edge, reversed under edge reversal. A
//! GI-graph instead carries an integer weight `δ_v` per vertex and a subset
//! `I_f ⊆ [0, r-1]` per non-tail flag such that every edge `(f, f')` has a
//! GI-type `(I_f, I_f')`. Every GI-graph determines a chain-graph, and every
//! chain-graph arises from finitely many GI-graphs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::canon::{self, CanonicalForm, DecorationSchema, Decorations, Label, OrientationRule};
use crate::chain::{chain_fiber, ChainType, GiType, RankSubset};
use crate::graph::{FlagId, VertexId};
use crate::modular::{ModularGraph, StabilityViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainGraphViolation {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("vertex {0} is unstable ({1:?})")]
    Unstable(VertexId, StabilityViolation),
    #[error("base graph is not connected")]
    Disconnected,
    #[error("{got} vertex degrees given for {expected} vertices")]
    DegreeCount { expected: usize, got: usize },
    #[error("oriented edge at flag {0} has no chain-type")]
    MissingChain(FlagId),
    #[error("tail {0} carries a chain-type")]
    ChainOnTail(FlagId),
    #[error("chain-type at flag {flag} is not the reverse of the one at flag {partner}")]
    Reversal { flag: FlagId, partner: FlagId },
    #[error("chain-type at flag {flag} has degree {degree} > rank {rank}")]
    DegreeExceedsRank { flag: FlagId, degree: u64, rank: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GiGraphViolation {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("vertex {0} is unstable ({1:?})")]
    Unstable(VertexId, StabilityViolation),
    #[error("base graph is not connected")]
    Disconnected,
    #[error("{got} vertex weights given for {expected} vertices")]
    DeltaCount { expected: usize, got: usize },
    #[error("flag {0} has no subset")]
    MissingSubset(FlagId),
    #[error("tail {0} carries a subset")]
    SubsetOnTail(FlagId),
    #[error("subset at flag {0} is not contained in [0, r-1]")]
    SubsetOutOfRange(FlagId),
    #[error("edge ({flag}, {partner}) does not carry a GI-type")]
    NotGiType { flag: FlagId, partner: FlagId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecoratedError {
    #[error("invalid chain-graph: {}", join(.0))]
    InvalidChainGraph(Vec<ChainGraphViolation>),
    #[error("invalid GI-graph: {}", join(.0))]
    InvalidGiGraph(Vec<GiGraphViolation>),
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join("; ")
}

fn base_violations(base: &ModularGraph) -> (Vec<(VertexId, StabilityViolation)>, bool) {
    (base.is_stable().violations, base.graph().is_connected())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainGraph {
    pub base: ModularGraph,
    pub rank: u32,
    pub vertex_degree: Vec<i64>,
    /// Chain-type of the oriented edge `(f, j(f))`, keyed by `f`.
    pub edge_chain: BTreeMap<FlagId, ChainType>,
}

impl ChainGraph {
    /// Every violation of the chain-graph conditions; empty when valid.
    pub fn violations(&self) -> Vec<ChainGraphViolation> {
        let mut out = Vec::new();
        if self.rank == 0 {
            out.push(ChainGraphViolation::ZeroRank);
        }
        let (unstable, connected) = base_violations(&self.base);
        out.extend(
            unstable
                .into_iter()
                .map(|(v, why)| ChainGraphViolation::Unstable(v, why)),
        );
        if !connected {
            out.push(ChainGraphViolation::Disconnected);
        }
        let graph = self.base.graph();
        if self.vertex_degree.len() != graph.vertex_count() {
            out.push(ChainGraphViolation::DegreeCount {
                expected: graph.vertex_count(),
                got: self.vertex_degree.len(),
            });
        }
        for &f in self.edge_chain.keys() {
            if f >= graph.flag_count() || graph.is_tail(f) {
                out.push(ChainGraphViolation::ChainOnTail(f));
            }
        }
        for (f, partner) in graph.oriented_edges() {
            let Some(chain) = self.edge_chain.get(&f) else {
                out.push(ChainGraphViolation::MissingChain(f));
                continue;
            };
            if chain.check_rank(self.rank.max(1)).is_err() {
                out.push(ChainGraphViolation::DegreeExceedsRank {
                    flag: f,
                    degree: chain.degree(),
                    rank: self.rank,
                });
            }
            if f < partner {
                if let Some(other) = self.edge_chain.get(&partner) {
                    if *other != chain.reverse() {
                        out.push(ChainGraphViolation::Reversal { flag: f, partner });
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), DecoratedError> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(DecoratedError::InvalidChainGraph(violations))
        }
    }

    pub fn chain(&self, flag: FlagId) -> Option<&ChainType> {
        self.edge_chain.get(&flag)
    }

    pub fn decorations(&self) -> Decorations {
        let base = &self.base;
        let flag = base
            .tail_flag_labels()
            .into_iter()
            .enumerate()
            .map(|(f, label)| match self.edge_chain.get(&f) {
                Some(chain) => Label::Seq(chain.entries().iter().map(|&d| d as i64).collect()),
                None => label,
            })
            .collect();
        Decorations {
            schema: DecorationSchema {
                vertex_tag: "genus-degree",
                flag_tag: "tail-or-chain",
                orientation: OrientationRule::Reverse,
            },
            vertex: (0..base.graph().vertex_count())
                .map(|v| {
                    Label::Tuple(vec![
                        Label::Int(base.vertex_genus(v) as i64),
                        Label::Int(self.vertex_degree[v]),
                    ])
                })
                .collect(),
            flag,
        }
    }

    /// Requires a valid chain-graph.
    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self.base.graph(), &self.decorations()).expect("valid chain-graph")
    }

    pub fn relabel(&self, flag_perm: &[FlagId], vertex_perm: &[VertexId]) -> ChainGraph {
        let base = self.base.relabel(flag_perm, vertex_perm).expect("permutations");
        let mut vertex_degree = vec![0; self.vertex_degree.len()];
        for (v, &d) in self.vertex_degree.iter().enumerate() {
            vertex_degree[vertex_perm[v]] = d;
        }
        let edge_chain = self
            .edge_chain
            .iter()
            .map(|(&f, c)| (flag_perm[f], c.clone()))
            .collect();
        ChainGraph {
            base,
            rank: self.rank,
            vertex_degree,
            edge_chain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GiGraph {
    pub base: ModularGraph,
    pub rank: u32,
    pub vertex_delta: Vec<i64>,
    /// `I_f` for every non-tail flag `f`.
    pub flag_subset: BTreeMap<FlagId, RankSubset>,
}

impl GiGraph {
    pub fn violations(&self) -> Vec<GiGraphViolation> {
        let mut out = Vec::new();
        if self.rank == 0 {
            out.push(GiGraphViolation::ZeroRank);
        }
        let (unstable, connected) = base_violations(&self.base);
        out.extend(unstable.into_iter().map(|(v, why)| GiGraphViolation::Unstable(v, why)));
        if !connected {
            out.push(GiGraphViolation::Disconnected);
        }
        let graph = self.base.graph();
        if self.vertex_delta.len() != graph.vertex_count() {
            out.push(GiGraphViolation::DeltaCount {
                expected: graph.vertex_count(),
                got: self.vertex_delta.len(),
            });
        }
        for &f in self.flag_subset.keys() {
            if f >= graph.flag_count() || graph.is_tail(f) {
                out.push(GiGraphViolation::SubsetOnTail(f));
            }
        }
        for (f, _) in graph.oriented_edges() {
            match self.flag_subset.get(&f) {
                None => out.push(GiGraphViolation::MissingSubset(f)),
                Some(s) if s.check_rank(self.rank.max(1)).is_err() => out.push(GiGraphViolation::SubsetOutOfRange(f)),
                Some(_) => {}
            }
        }
        if out.is_empty() {
            for (f, partner) in graph.edges() {
                if GiType::new(
                    self.flag_subset[&f].clone(),
                    self.flag_subset[&partner].clone(),
                    self.rank,
                )
                .is_err()
                {
                    out.push(GiGraphViolation::NotGiType { flag: f, partner });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), DecoratedError> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(DecoratedError::InvalidGiGraph(violations))
        }
    }

    /// GI-type of the oriented edge `(f, j(f))`. Requires a valid GI-graph.
    pub fn gi_type(&self, flag: FlagId) -> GiType {
        let partner = self.base.graph().involution(flag);
        GiType::new(
            self.flag_subset[&flag].clone(),
            self.flag_subset[&partner].clone(),
            self.rank,
        )
        .expect("valid GI-graph")
    }

    pub fn decorations(&self) -> Decorations {
        let base = &self.base;
        let flag = base
            .tail_flag_labels()
            .into_iter()
            .enumerate()
            .map(|(f, label)| match self.flag_subset.get(&f) {
                Some(s) => Label::Seq(s.elements().iter().map(|&x| x as i64).collect()),
                None => label,
            })
            .collect();
        Decorations {
            schema: DecorationSchema {
                vertex_tag: "genus-delta",
                flag_tag: "tail-or-subset",
                orientation: OrientationRule::Free,
            },
            vertex: (0..base.graph().vertex_count())
                .map(|v| {
                    Label::Tuple(vec![
                        Label::Int(base.vertex_genus(v) as i64),
                        Label::Int(self.vertex_delta[v]),
                    ])
                })
                .collect(),
            flag,
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self.base.graph(), &self.decorations()).expect("valid GI-graph")
    }
}

/// Associated chain-graph: `d_v = δ_v - Σ_{f at v} (r - min I_f)` and
/// `d(f, f') = gi_to_chain(I_f, I_f')`.
pub fn gi_graph_to_chain_graph(gamma: &GiGraph) -> Result<ChainGraph, DecoratedError> {
    gamma.validate()?;
    let graph = gamma.base.graph();
    let r = gamma.rank;
    let mut vertex_degree = gamma.vertex_delta.clone();
    let mut edge_chain = BTreeMap::new();
    for (f, _) in graph.oriented_edges() {
        vertex_degree[graph.boundary(f)] -= (r - gamma.flag_subset[&f].min_or(r)) as i64;
        edge_chain.insert(f, gamma.gi_type(f).to_chain());
    }
    Ok(ChainGraph {
        base: gamma.base.clone(),
        rank: r,
        vertex_degree,
        edge_chain,
    })
}

/// All GI-graphs over `c`. Each unoriented edge independently picks an
/// element of the fiber over its chain-type (read along the canonical
/// orientation); the resulting list is ordered lexicographically by these
/// choices, edges taken in ascending flag order.
pub fn enumerate_gi_graphs_over(c: &ChainGraph) -> Result<Vec<GiGraph>, DecoratedError> {
    c.validate()?;
    let graph = c.base.graph();
    let r = c.rank;
    let edges = graph.edges();
    let fibers: Vec<Vec<GiType>> = edges
        .iter()
        .map(|&(f, _)| chain_fiber(&c.edge_chain[&f], r).expect("validated chain-type"))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; edges.len()];
    loop {
        let mut flag_subset = BTreeMap::new();
        let mut vertex_delta = c.vertex_degree.clone();
        for (k, &(f, partner)) in edges.iter().enumerate() {
            let t = &fibers[k][choice[k]];
            flag_subset.insert(f, t.i().clone());
            flag_subset.insert(partner, t.j().clone());
            vertex_delta[graph.boundary(f)] += (r - t.i().min_or(r)) as i64;
            vertex_delta[graph.boundary(partner)] += (r - t.j().min_or(r)) as i64;
        }
        out.push(GiGraph {
            base: c.base.clone(),
            rank: r,
            vertex_delta,
            flag_subset,
        });
        // odometer over the per-edge fibers, last edge fastest
        let mut k = edges.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < fibers[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Genus, tails and total degree of the target of the boundary morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSignature {
    pub genus: u32,
    pub tails: Vec<String>,
    pub total_degree: i64,
    pub rank: u32,
}

pub fn target_signature(c: &ChainGraph) -> Result<TargetSignature, DecoratedError> {
    c.validate()?;
    let graph = c.base.graph();
    let chains: i64 = graph
        .edges()
        .iter()
        .map(|&(f, _)| c.edge_chain[&f].degree() as i64)
        .sum();
    Ok(TargetSignature {
        genus: c.base.genus().expect("connected"),
        tails: c.base.label_set().into_iter().collect(),
        total_degree: c.vertex_degree.iter().sum::<i64>() + chains,
        rank: c.rank,
    })
}
