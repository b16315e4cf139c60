//! Modular graphs: graphs with a genus on every vertex and labeled tails.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::canon::{self, CanonicalForm, DecorationSchema, Decorations, Label, OrientationRule};
use crate::graph::{FlagId, Graph, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("genus list has {got} entries for {expected} vertices")]
    GenusLength { expected: usize, got: usize },
    #[error("flag {0} carries a tail label but is not a tail")]
    LabelOnEdge(FlagId),
    #[error("tail {0} has no label")]
    UnlabeledTail(FlagId),
    #[error("tail label {0:?} is used twice")]
    DuplicateLabel(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("flag {0} is a tail, not an edge")]
    NotAnEdge(FlagId),
    #[error("refusing to contract the loop through flag {0}")]
    LoopContraction(FlagId),
}

/// A graph together with a genus for every vertex and a bijection from the
/// tails onto a label set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModularGraph {
    graph: Graph,
    genus: Vec<u32>,
    tail_labels: BTreeMap<FlagId, String>,
}

impl ModularGraph {
    pub fn new(graph: Graph, genus: Vec<u32>, tail_labels: BTreeMap<FlagId, String>) -> Result<Self, ModularError> {
        if genus.len() != graph.vertex_count() {
            return Err(ModularError::GenusLength {
                expected: graph.vertex_count(),
                got: genus.len(),
            });
        }
        for &f in tail_labels.keys() {
            if f >= graph.flag_count() {
                return Err(GraphError::UnknownFlag(f).into());
            }
            if !graph.is_tail(f) {
                return Err(ModularError::LabelOnEdge(f));
            }
        }
        for f in graph.tails() {
            if !tail_labels.contains_key(&f) {
                return Err(ModularError::UnlabeledTail(f));
            }
        }
        let mut seen = BTreeSet::new();
        for label in tail_labels.values() {
            if !seen.insert(label) {
                return Err(ModularError::DuplicateLabel(label.clone()));
            }
        }
        Ok(ModularGraph {
            graph,
            genus,
            tail_labels,
        })
    }

    /// One vertex of genus `genus` carrying one tail per label.
    pub fn smooth(genus: u32, labels: &[String]) -> Result<Self, ModularError> {
        let n = labels.len();
        let graph = Graph::new(1, vec![0; n], (0..n).collect())?;
        let tails = labels.iter().cloned().enumerate().collect();
        ModularGraph::new(graph, vec![genus], tails)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_genus(&self, v: VertexId) -> u32 {
        self.genus[v]
    }

    pub fn genera(&self) -> &[u32] {
        &self.genus
    }

    pub fn tail_labels(&self) -> &BTreeMap<FlagId, String> {
        &self.tail_labels
    }

    pub fn tail_label(&self, f: FlagId) -> Option<&str> {
        self.tail_labels.get(&f).map(String::as_str)
    }

    /// The label set `S`, sorted.
    pub fn label_set(&self) -> BTreeSet<String> {
        self.tail_labels.values().cloned().collect()
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.graph.valence(v).expect("vertex in range")
    }

    pub fn is_stable(&self) -> StabilityReport {
        let mut violations = Vec::new();
        for v in 0..self.graph.vertex_count() {
            let valence = self.valence(v);
            match self.genus[v] {
                0 if valence < 3 => violations.push((v, StabilityViolation::GenusZero { valence })),
                1 if valence < 1 => violations.push((v, StabilityViolation::GenusOne { valence })),
                _ => {}
            }
        }
        StabilityReport {
            stable: violations.is_empty(),
            violations,
        }
    }

    /// Arithmetic genus `Σ g_v + b1`. Requires a connected graph.
    pub fn genus(&self) -> Result<u32, ModularError> {
        if !self.graph.is_connected() {
            return Err(ModularError::Disconnected);
        }
        Ok(self.genus.iter().sum::<u32>() + self.graph.betti().b1 as u32)
    }

    pub fn decorations(&self) -> Decorations {
        Decorations {
            schema: DecorationSchema {
                vertex_tag: "genus",
                flag_tag: "tail-label",
                orientation: OrientationRule::Free,
            },
            vertex: self.genus.iter().map(|&g| Label::Int(g as i64)).collect(),
            flag: self.tail_flag_labels(),
        }
    }

    /// Tail flags labeled by their name, edge flags by `Unit`.
    pub(crate) fn tail_flag_labels(&self) -> Vec<Label> {
        (0..self.graph.flag_count())
            .map(|f| match self.tail_labels.get(&f) {
                Some(name) => Label::Text(name.clone()),
                None => Label::Unit,
            })
            .collect()
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(&self.graph, &self.decorations()).expect("modular decorations are complete")
    }

    pub fn relabel(&self, flag_perm: &[FlagId], vertex_perm: &[VertexId]) -> Result<ModularGraph, ModularError> {
        let graph = self.graph.relabel(flag_perm, vertex_perm)?;
        let mut genus = vec![0; self.genus.len()];
        for (v, &g) in self.genus.iter().enumerate() {
            genus[vertex_perm[v]] = g;
        }
        let tail_labels = self
            .tail_labels
            .iter()
            .map(|(&f, l)| (flag_perm[f], l.clone()))
            .collect();
        Ok(ModularGraph {
            graph,
            genus,
            tail_labels,
        })
    }

    /// Contract the non-loop edge through `flag`. The endpoints merge into the
    /// endpoint with the smaller id; genera add; remaining flags keep their
    /// relative order.
    pub fn contract(&self, flag: FlagId) -> Result<ModularGraph, ModularError> {
        if flag >= self.graph.flag_count() {
            return Err(GraphError::UnknownFlag(flag).into());
        }
        let partner = self.graph.involution(flag);
        if partner == flag {
            return Err(ModularError::NotAnEdge(flag));
        }
        let a = self.graph.boundary(flag);
        let b = self.graph.boundary(partner);
        if a == b {
            return Err(ModularError::LoopContraction(flag));
        }
        let (keep, gone) = (a.min(b), a.max(b));
        let vertex_map = |v: VertexId| -> VertexId {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let kept_flags: Vec<FlagId> = (0..self.graph.flag_count())
            .filter(|&f| f != flag && f != partner)
            .collect();
        let mut new_index = vec![usize::MAX; self.graph.flag_count()];
        for (i, &f) in kept_flags.iter().enumerate() {
            new_index[f] = i;
        }
        let boundary = kept_flags.iter().map(|&f| vertex_map(self.graph.boundary(f))).collect();
        let involution = kept_flags
            .iter()
            .map(|&f| new_index[self.graph.involution(f)])
            .collect();
        let graph = Graph::new(self.graph.vertex_count() - 1, boundary, involution)?;
        let mut genus: Vec<u32> = Vec::with_capacity(self.genus.len() - 1);
        for (v, &g) in self.genus.iter().enumerate() {
            if v == gone {
                continue;
            }
            genus.push(if v == keep { g + self.genus[gone] } else { g });
        }
        let tail_labels = self
            .tail_labels
            .iter()
            .map(|(&f, l)| (new_index[f], l.clone()))
            .collect();
        ModularGraph::new(graph, genus, tail_labels)
    }

    /// All graphs obtained by one elementary degeneration that stay stable:
    /// splitting a vertex into two joined by a new edge, or trading one unit
    /// of genus at a vertex for a new loop.
    pub fn degenerations(&self) -> Vec<ModularGraph> {
        let mut out = Vec::new();
        let n_flags = self.graph.flag_count();
        for v in 0..self.graph.vertex_count() {
            let g = self.genus[v];
            if g >= 1 {
                let mut boundary = self.graph.boundary_map().to_vec();
                let mut involution = self.graph.involution_map().to_vec();
                boundary.extend([v, v]);
                involution.extend([n_flags + 1, n_flags]);
                let mut genus = self.genus.clone();
                genus[v] -= 1;
                let graph = Graph::new(self.graph.vertex_count(), boundary, involution).expect("loop added");
                let m = ModularGraph {
                    graph,
                    genus,
                    tail_labels: self.tail_labels.clone(),
                };
                if m.is_stable().stable {
                    out.push(m);
                }
            }
            let at = self.graph.flags_at(v);
            let new_vertex = self.graph.vertex_count();
            for mask in 0u64..(1u64 << at.len()) {
                for g1 in 0..=g {
                    let mut boundary = self.graph.boundary_map().to_vec();
                    for (k, &f) in at.iter().enumerate() {
                        if mask & (1 << k) != 0 {
                            boundary[f] = new_vertex;
                        }
                    }
                    let mut involution = self.graph.involution_map().to_vec();
                    boundary.extend([v, new_vertex]);
                    involution.extend([n_flags + 1, n_flags]);
                    let mut genus = self.genus.clone();
                    genus[v] = g1;
                    genus.push(g - g1);
                    let graph = Graph::new(new_vertex + 1, boundary, involution).expect("split");
                    let m = ModularGraph {
                        graph,
                        genus,
                        tail_labels: self.tail_labels.clone(),
                    };
                    if m.is_stable().stable {
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityViolation {
    /// Genus-0 vertex with fewer than three flags.
    GenusZero { valence: usize },
    /// Genus-1 vertex without flags.
    GenusOne { valence: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    pub violations: Vec<(VertexId, StabilityViolation)>,
}

/// Whether `(genus, n)` lies in the stable range `2g - 2 + n > 0`.
pub fn in_stable_range(genus: u32, tails: usize) -> bool {
    2 * genus as i64 - 2 + tails as i64 > 0
}

/// All connected stable modular graphs of genus `genus` whose tails carry
/// `labels`, one per isomorphism class (tail labels fixed pointwise), sorted
/// by canonical form. Empty outside the stable range.
pub fn enumerate_stable_graphs(genus: u32, labels: &[String]) -> Vec<ModularGraph> {
    if !in_stable_range(genus, labels.len()) {
        return Vec::new();
    }
    let distinct: BTreeSet<&String> = labels.iter().collect();
    assert_eq!(distinct.len(), labels.len(), "tail labels must be distinct");
    let start = ModularGraph::smooth(genus, labels).expect("one-vertex graph");
    let mut found: BTreeMap<CanonicalForm, ModularGraph> = BTreeMap::new();
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    seen.insert(start.canonical_form());
    found.insert(start.canonical_form(), start.clone());
    let mut layer = vec![start];
    // every stable graph has at most 3g - 3 + n edges
    let max_edges = 3 * genus as usize + labels.len() - 3;
    for _ in 0..max_edges {
        let mut next = Vec::new();
        for m in &layer {
            for d in m.degenerations() {
                let form = d.canonical_form();
                if seen.insert(form.clone()) {
                    found.insert(form, d.clone());
                    next.push(d);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    found.into_values().collect()
}
