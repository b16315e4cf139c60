//! Graph-level models of stable maps to `BGL_r`.
//!
//! A model is the dual graph of a prestable pointed curve together with the
//! degree of the bundle on every component. Components that the
//! stabilization contracts must sit in chains of rational curves over nodes
//! of the stabilized curve, and the bundle degrees along each chain must form
//! an admissible splitting.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::canon::{self, CanonicalForm, DecorationSchema, Decorations, Label, OrientationRule};
use crate::chain::{is_admissible_splitting, ChainType};
use crate::decorated::{ChainGraph, DecoratedError};
use crate::graph::{FlagId, Graph, VertexId};
use crate::modular::ModularGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableMapModel {
    pub curve: ModularGraph,
    pub rank: u32,
    pub component_degree: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StableMapViolation {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("{got} component degrees given for {expected} components")]
    DegreeCount { expected: usize, got: usize },
    #[error("curve is not connected")]
    Disconnected,
    #[error("rational component {0} has fewer than two special points")]
    DanglingRationalTail(VertexId),
    #[error("rational component {0} with two special points carries a marked point")]
    TailOnChain(VertexId),
    #[error("component {0} of genus one has no special point")]
    UnstableComponent(VertexId),
    #[error("the chain components {0:?} form a cycle with no stable component")]
    AllChainCycle(Vec<VertexId>),
    #[error("chain component {vertex} has degree {degree} < 1")]
    NonPositiveChainDegree { vertex: VertexId, degree: i64 },
    #[error("chain {vertices:?} has total degree {degree} > rank {rank}")]
    ChainDegreeExceedsRank {
        vertices: Vec<VertexId>,
        degree: i64,
        rank: u32,
    },
}

impl StableMapViolation {
    /// Stable machine-readable name of the violation.
    pub fn class(&self) -> &'static str {
        match self {
            StableMapViolation::ZeroRank => "zero-rank",
            StableMapViolation::DegreeCount { .. } => "degree-count",
            StableMapViolation::Disconnected => "disconnected",
            StableMapViolation::DanglingRationalTail(_) => "dangling-rational-tail",
            StableMapViolation::TailOnChain(_) => "tail-on-chain",
            StableMapViolation::UnstableComponent(_) => "unstable-component",
            StableMapViolation::AllChainCycle(_) => "all-chain-cycle",
            StableMapViolation::NonPositiveChainDegree { .. } => "degree-zero-chain-vertex",
            StableMapViolation::ChainDegreeExceedsRank { .. } => "chain-degree-exceeds-rank",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StableMapError {
    #[error("invalid stable map: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<StableMapViolation>),
    #[error(transparent)]
    Decorated(#[from] DecoratedError),
    #[error("vertex {vertex}: {reason}")]
    PieceMismatch { vertex: VertexId, reason: String },
    #[error("{got} pieces given for {expected} vertices")]
    PieceCount { expected: usize, got: usize },
}

/// Where a component of the original curve goes under stabilization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexImage {
    Vertex(VertexId),
    /// Contracted into the node of the stabilized edge `(flag, j(flag))`
    /// (canonical orientation), at `position` counted from `flag`'s side.
    Edge {
        flag: FlagId,
        position: usize,
    },
}

/// Result of stabilizing a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionData {
    pub stabilized: ModularGraph,
    /// Original vertex surviving as each stabilized vertex.
    pub source_vertex: Vec<VertexId>,
    /// Original flag surviving as each stabilized flag.
    pub source_flag: Vec<FlagId>,
    pub vertex_image: Vec<VertexImage>,
    /// For every non-tail flag `f` of the stabilized graph, the contracted
    /// components met when walking from `f` to `j(f)`, with their degrees.
    pub chains: BTreeMap<FlagId, Vec<(VertexId, i64)>>,
}

impl ContractionData {
    pub fn is_identity(&self) -> bool {
        self.chains.values().all(Vec::is_empty)
            && self.source_vertex.iter().enumerate().all(|(k, &v)| k == v)
            && self.source_flag.iter().enumerate().all(|(k, &f)| k == f)
            && self.vertex_image.len() == self.source_vertex.len()
    }
}

impl StableMapModel {
    fn is_chain_vertex(&self, v: VertexId) -> bool {
        let graph = self.curve.graph();
        self.curve.vertex_genus(v) == 0
            && self.curve.valence(v) == 2
            && graph.flags_at(v).iter().all(|&f| !graph.is_tail(f))
    }

    /// Every violation of the stable-map conditions; empty when valid.
    pub fn violations(&self) -> Vec<StableMapViolation> {
        let mut out = Vec::new();
        let graph = self.curve.graph();
        if self.rank == 0 {
            out.push(StableMapViolation::ZeroRank);
        }
        if self.component_degree.len() != graph.vertex_count() {
            out.push(StableMapViolation::DegreeCount {
                expected: graph.vertex_count(),
                got: self.component_degree.len(),
            });
            return out;
        }
        if !graph.is_connected() {
            out.push(StableMapViolation::Disconnected);
        }
        for v in 0..graph.vertex_count() {
            let valence = self.curve.valence(v);
            match self.curve.vertex_genus(v) {
                0 if valence <= 1 => out.push(StableMapViolation::DanglingRationalTail(v)),
                0 if valence == 2 && !self.is_chain_vertex(v) => out.push(StableMapViolation::TailOnChain(v)),
                1 if valence == 0 => out.push(StableMapViolation::UnstableComponent(v)),
                _ => {}
            }
        }
        for v in 0..graph.vertex_count() {
            if self.is_chain_vertex(v) && self.component_degree[v] < 1 {
                out.push(StableMapViolation::NonPositiveChainDegree {
                    vertex: v,
                    degree: self.component_degree[v],
                });
            }
        }
        for chain in self.maximal_chains() {
            match chain {
                Chain::Cycle(vertices) => out.push(StableMapViolation::AllChainCycle(vertices)),
                Chain::Path(vertices) => {
                    let degrees: Vec<i64> = vertices.iter().map(|&v| self.component_degree[v]).collect();
                    let degree: i64 = degrees.iter().sum();
                    let positive = degrees.iter().all(|&d| d >= 1);
                    if positive && !is_admissible_splitting(&degrees, self.rank.max(1)) {
                        out.push(StableMapViolation::ChainDegreeExceedsRank {
                            vertices,
                            degree,
                            rank: self.rank,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), StableMapError> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(StableMapError::Invalid(violations))
        }
    }

    /// Connected components of the subgraph spanned by chain vertices.
    fn maximal_chains(&self) -> Vec<Chain> {
        let graph = self.curve.graph();
        let n = graph.vertex_count();
        let mut visited = vec![false; n];
        let mut out = Vec::new();
        let neighbours = |v: VertexId| -> Vec<VertexId> {
            graph
                .flags_at(v)
                .into_iter()
                .map(|f| graph.boundary(graph.involution(f)))
                .collect()
        };
        for start in 0..n {
            if visited[start] || !self.is_chain_vertex(start) {
                continue;
            }
            // collect the component
            let mut component = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if !component.insert(v) {
                    continue;
                }
                visited[v] = true;
                for w in neighbours(v) {
                    if self.is_chain_vertex(w) && !component.contains(&w) {
                        stack.push(w);
                    }
                }
            }
            let attached = component
                .iter()
                .any(|&v| neighbours(v).iter().any(|&w| !self.is_chain_vertex(w)));
            if !attached {
                out.push(Chain::Cycle(component.into_iter().collect()));
                continue;
            }
            // order the path from one end
            let end = component
                .iter()
                .copied()
                .find(|&v| neighbours(v).iter().any(|&w| !self.is_chain_vertex(w)))
                .expect("attached chain has an end");
            let mut path = vec![end];
            let mut prev = usize::MAX;
            let mut cur = end;
            loop {
                let next = neighbours(cur)
                    .into_iter()
                    .find(|&w| w != prev && w != cur && component.contains(&w) && !path.contains(&w));
                match next {
                    Some(w) => {
                        prev = cur;
                        cur = w;
                        path.push(w);
                    }
                    None => break,
                }
            }
            out.push(Chain::Path(path));
        }
        out
    }

    pub fn total_degree(&self) -> i64 {
        self.component_degree.iter().sum()
    }

    pub fn decorations(&self) -> Decorations {
        let curve = &self.curve;
        Decorations {
            schema: DecorationSchema {
                vertex_tag: "genus-degree",
                flag_tag: "tail-label",
                orientation: OrientationRule::Free,
            },
            vertex: (0..curve.graph().vertex_count())
                .map(|v| {
                    Label::Tuple(vec![
                        Label::Int(curve.vertex_genus(v) as i64),
                        Label::Int(self.component_degree[v]),
                    ])
                })
                .collect(),
            flag: curve.tail_flag_labels(),
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self.curve.graph(), &self.decorations()).expect("model decorations")
    }

    pub fn relabel(&self, flag_perm: &[FlagId], vertex_perm: &[VertexId]) -> StableMapModel {
        let curve = self.curve.relabel(flag_perm, vertex_perm).expect("permutations");
        let mut component_degree = vec![0; self.component_degree.len()];
        for (v, &d) in self.component_degree.iter().enumerate() {
            component_degree[vertex_perm[v]] = d;
        }
        StableMapModel {
            curve,
            rank: self.rank,
            component_degree,
        }
    }
}

enum Chain {
    Path(Vec<VertexId>),
    Cycle(Vec<VertexId>),
}

pub fn validate_stable_map(m: &StableMapModel) -> Vec<StableMapViolation> {
    m.violations()
}

/// Contract every maximal chain of rational components with two special
/// points. Surviving vertices and flags keep their relative order.
pub fn stabilize(m: &StableMapModel) -> Result<ContractionData, StableMapError> {
    m.validate()?;
    let graph = m.curve.graph();
    let source_vertex: Vec<VertexId> = (0..graph.vertex_count()).filter(|&v| !m.is_chain_vertex(v)).collect();
    let mut new_vertex = vec![usize::MAX; graph.vertex_count()];
    for (k, &v) in source_vertex.iter().enumerate() {
        new_vertex[v] = k;
    }
    let source_flag: Vec<FlagId> = (0..graph.flag_count())
        .filter(|&f| new_vertex[graph.boundary(f)] != usize::MAX)
        .collect();
    let mut new_flag = vec![usize::MAX; graph.flag_count()];
    for (k, &f) in source_flag.iter().enumerate() {
        new_flag[f] = k;
    }
    let mut involution = vec![0; source_flag.len()];
    let mut chains = BTreeMap::new();
    for (k, &f) in source_flag.iter().enumerate() {
        let mut walk = Vec::new();
        let mut cur = graph.involution(f);
        if cur == f {
            involution[k] = k;
            continue;
        }
        while new_flag[cur] == usize::MAX {
            let c = graph.boundary(cur);
            walk.push((c, m.component_degree[c]));
            let other = graph
                .flags_at(c)
                .into_iter()
                .find(|&g| g != cur)
                .expect("chain vertex has two flags");
            cur = graph.involution(other);
        }
        involution[k] = new_flag[cur];
        chains.insert(k, walk);
    }
    let boundary = source_flag.iter().map(|&f| new_vertex[graph.boundary(f)]).collect();
    let stabilized_graph = Graph::new(source_vertex.len(), boundary, involution).expect("stabilized graph");
    let genus = source_vertex.iter().map(|&v| m.curve.vertex_genus(v)).collect();
    let tails = m
        .curve
        .tail_labels()
        .iter()
        .map(|(&f, l)| (new_flag[f], l.clone()))
        .collect();
    let stabilized = ModularGraph::new(stabilized_graph, genus, tails).expect("stabilized modular graph");
    let mut vertex_image: Vec<VertexImage> = new_vertex.iter().map(|&k| VertexImage::Vertex(k)).collect();
    for (&flag, walk) in &chains {
        if flag < stabilized.graph().involution(flag) {
            for (position, &(c, _)) in walk.iter().enumerate() {
                vertex_image[c] = VertexImage::Edge { flag, position };
            }
        }
    }
    debug_assert!(stabilized.is_stable().stable);
    Ok(ContractionData {
        stabilized,
        source_vertex,
        source_flag,
        vertex_image,
        chains,
    })
}

/// Chain-graph recording the stabilized curve, the degrees of the surviving
/// components and the degree sequences of the contracted chains.
pub fn combinatorial_type(m: &StableMapModel) -> Result<ChainGraph, StableMapError> {
    let data = stabilize(m)?;
    let vertex_degree = data.source_vertex.iter().map(|&v| m.component_degree[v]).collect();
    let edge_chain = data
        .chains
        .iter()
        .map(|(&f, walk)| {
            let entries = walk.iter().map(|&(_, d)| d as u32).collect();
            (f, ChainType::new(entries).expect("validated chain degrees"))
        })
        .collect();
    let c = ChainGraph {
        base: data.stabilized,
        rank: m.rank,
        vertex_degree,
        edge_chain,
    };
    c.validate()?;
    Ok(c)
}

/// Generic stable map of combinatorial type `c`: one smooth component per
/// vertex, and for every edge a chain of rational components carrying the
/// chain-type's degrees, read along the canonical orientation. Original
/// flags keep their ids; inserted vertices and flags are appended.
pub fn clutch(c: &ChainGraph) -> Result<StableMapModel, StableMapError> {
    c.validate()?;
    let graph = c.base.graph();
    let mut boundary = graph.boundary_map().to_vec();
    let mut involution = graph.involution_map().to_vec();
    let mut genus = c.base.genera().to_vec();
    let mut component_degree = c.vertex_degree.clone();
    for (f, partner) in graph.edges() {
        let chain = &c.edge_chain[&f];
        if chain.is_empty() {
            continue;
        }
        let mut previous = f;
        for &d in chain.entries() {
            let v = genus.len();
            genus.push(0);
            component_degree.push(d as i64);
            let (a, b) = (boundary.len(), boundary.len() + 1);
            boundary.extend([v, v]);
            involution.extend([previous, usize::MAX]);
            involution[previous] = a;
            previous = b;
        }
        involution[previous] = partner;
        involution[partner] = previous;
    }
    let curve_graph = Graph::new(genus.len(), boundary, involution).expect("clutched graph");
    let curve = ModularGraph::new(curve_graph, genus, c.base.tail_labels().clone()).expect("clutched curve");
    let model = StableMapModel {
        curve,
        rank: c.rank,
        component_degree,
    };
    debug_assert!(model.violations().is_empty());
    Ok(model)
}

/// A stable map attached to one vertex of a chain-graph. `tail_to_flag`
/// matches each tail label of the piece with a flag at that vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPiece {
    pub model: StableMapModel,
    pub tail_to_flag: BTreeMap<String, FlagId>,
}

impl VertexPiece {
    /// A single smooth component of the given genus and degree carrying one
    /// tail per flag at `vertex`; tails are named `f<flag>`.
    pub fn smooth(c: &ChainGraph, vertex: VertexId) -> VertexPiece {
        let flags = c.base.graph().flags_at(vertex);
        let names: Vec<String> = flags.iter().map(|f| format!("f{f}")).collect();
        let curve = ModularGraph::smooth(c.base.vertex_genus(vertex), &names).expect("distinct names");
        VertexPiece {
            model: StableMapModel {
                curve,
                rank: c.rank,
                component_degree: vec![c.vertex_degree[vertex]],
            },
            tail_to_flag: names.into_iter().zip(flags).collect(),
        }
    }
}

/// Glue one stable map per vertex of `c` along the edges of `c`, inserting
/// the decorated chain of every edge between the two matched points.
pub fn glue(pieces: &[VertexPiece], c: &ChainGraph) -> Result<StableMapModel, StableMapError> {
    c.validate()?;
    let graph = c.base.graph();
    if pieces.len() != graph.vertex_count() {
        return Err(StableMapError::PieceCount {
            expected: graph.vertex_count(),
            got: pieces.len(),
        });
    }
    let mut boundary = Vec::new();
    let mut involution = Vec::new();
    let mut genus = Vec::new();
    let mut component_degree = Vec::new();
    let mut tails = BTreeMap::new();
    // glued flag standing for each flag of c
    let mut at_flag = vec![usize::MAX; graph.flag_count()];
    for (v, piece) in pieces.iter().enumerate() {
        let mismatch = |reason: String| StableMapError::PieceMismatch { vertex: v, reason };
        piece.model.validate()?;
        let expected: BTreeSet<FlagId> = graph.flags_at(v).into_iter().collect();
        let got: BTreeSet<FlagId> = piece.tail_to_flag.values().copied().collect();
        let labels = piece.model.curve.label_set();
        let named: BTreeSet<String> = piece.tail_to_flag.keys().cloned().collect();
        if got != expected || labels != named || piece.tail_to_flag.len() != expected.len() {
            return Err(mismatch("tails do not match the flags at the vertex".into()));
        }
        if piece.model.rank != c.rank {
            return Err(mismatch(format!("rank {} differs from {}", piece.model.rank, c.rank)));
        }
        let g = piece.model.curve.genus().map_err(|e| mismatch(e.to_string()))?;
        if g != c.base.vertex_genus(v) {
            return Err(mismatch(format!("genus {g} differs from {}", c.base.vertex_genus(v))));
        }
        if piece.model.total_degree() != c.vertex_degree[v] {
            return Err(mismatch(format!(
                "degree {} differs from {}",
                piece.model.total_degree(),
                c.vertex_degree[v]
            )));
        }
        let pg = piece.model.curve.graph();
        let (v0, f0) = (genus.len(), boundary.len());
        genus.extend_from_slice(piece.model.curve.genera());
        component_degree.extend_from_slice(&piece.model.component_degree);
        for f in 0..pg.flag_count() {
            boundary.push(v0 + pg.boundary(f));
            involution.push(f0 + pg.involution(f));
        }
        for (&f, label) in piece.model.curve.tail_labels() {
            let target = piece.tail_to_flag[label];
            at_flag[target] = f0 + f;
            if let Some(name) = c.base.tail_label(target) {
                tails.insert(f0 + f, name.to_string());
            }
        }
    }
    for (f, partner) in graph.edges() {
        let (a, b) = (at_flag[f], at_flag[partner]);
        let mut previous = a;
        for &d in c.edge_chain[&f].entries() {
            let v = genus.len();
            genus.push(0);
            component_degree.push(d as i64);
            let (x, y) = (boundary.len(), boundary.len() + 1);
            boundary.extend([v, v]);
            involution.extend([previous, usize::MAX]);
            involution[previous] = x;
            previous = y;
        }
        involution[previous] = b;
        involution[b] = previous;
    }
    let curve_graph = Graph::new(genus.len(), boundary, involution).expect("glued graph");
    let curve = ModularGraph::new(curve_graph, genus, tails).expect("glued curve");
    let model = StableMapModel {
        curve,
        rank: c.rank,
        component_degree,
    };
    model.validate()?;
    Ok(model)
}
