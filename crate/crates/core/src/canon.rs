//! Canonical forms and isomorphism witnesses for decorated graphs.
//!
//! Vertices are colored by iterated partition refinement on (vertex label,
//! valence, incident flag labels, neighbour colours). When the refined
//! partition is not discrete we branch on every vertex of the first
//! non-singleton cell and keep the lexicographically smallest leaf encoding.
//! No automorphism pruning is done: the graphs handled here have at most a
//! few dozen vertices.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{FlagId, Graph, VertexId};

/// A decoration value. Labels are totally ordered and have an injective
/// byte encoding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Unit,
    Int(i64),
    Seq(Vec<i64>),
    Text(String),
    Tuple(Vec<Label>),
}

impl Label {
    fn encode(&self, out: &mut Vec<u8>) {
        match self {
            Label::Unit => out.push(0),
            Label::Int(x) => {
                out.push(1);
                out.extend_from_slice(&x.to_be_bytes());
            }
            Label::Seq(xs) => {
                out.push(2);
                out.extend_from_slice(&(xs.len() as u32).to_be_bytes());
                for x in xs {
                    out.extend_from_slice(&x.to_be_bytes());
                }
            }
            Label::Text(s) => {
                out.push(3);
                out.extend_from_slice(&(s.len() as u32).to_be_bytes());
                out.extend_from_slice(s.as_bytes());
            }
            Label::Tuple(items) => {
                out.push(4);
                out.extend_from_slice(&(items.len() as u32).to_be_bytes());
                for item in items {
                    item.encode(out);
                }
            }
        }
    }
}

/// How the label of a flag relates to the label of its partner flag.
///
/// Labels on non-tail flags stand for labels on oriented edges `(f, j(f))`;
/// the rule says what happens to such a label when the edge is reversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationRule {
    /// No relation between the two labels of an edge.
    Free,
    /// The partner flag carries the reversed sequence.
    Reverse,
}

impl OrientationRule {
    /// Transform a label under edge reversal. Both variants are involutions.
    pub fn apply(&self, label: &Label) -> Label {
        match (self, label) {
            (OrientationRule::Reverse, Label::Seq(xs)) => Label::Seq(xs.iter().rev().copied().collect()),
            _ => label.clone(),
        }
    }

    fn constrains(&self) -> bool {
        matches!(self, OrientationRule::Reverse)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecorationSchema {
    pub vertex_tag: &'static str,
    pub flag_tag: &'static str,
    pub orientation: OrientationRule,
}

impl DecorationSchema {
    pub const UNDECORATED: DecorationSchema = DecorationSchema {
        vertex_tag: "none",
        flag_tag: "none",
        orientation: OrientationRule::Free,
    };
}

/// Vertex and flag labels for one graph, indexed by vertex and flag id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decorations {
    pub schema: DecorationSchema,
    pub vertex: Vec<Label>,
    pub flag: Vec<Label>,
}

impl Decorations {
    pub fn undecorated(graph: &Graph) -> Self {
        Decorations {
            schema: DecorationSchema::UNDECORATED,
            vertex: vec![Label::Unit; graph.vertex_count()],
            flag: vec![Label::Unit; graph.flag_count()],
        }
    }

    pub fn check(&self, graph: &Graph) -> Result<(), DecorationError> {
        if self.vertex.len() != graph.vertex_count() {
            return Err(DecorationError::MissingVertexLabels {
                expected: graph.vertex_count(),
                got: self.vertex.len(),
            });
        }
        if self.flag.len() != graph.flag_count() {
            return Err(DecorationError::MissingFlagLabels {
                expected: graph.flag_count(),
                got: self.flag.len(),
            });
        }
        if self.schema.orientation.constrains() {
            for (f, partner) in graph.oriented_edges() {
                if self.flag[partner] != self.schema.orientation.apply(&self.flag[f]) {
                    return Err(DecorationError::Orientation { flag: f });
                }
            }
        }
        Ok(())
    }

    /// Decorations transported along a relabeling (see [`Graph::relabel`]).
    pub fn relabel(&self, flag_perm: &[FlagId], vertex_perm: &[VertexId]) -> Decorations {
        let mut vertex = self.vertex.clone();
        for (v, label) in self.vertex.iter().enumerate() {
            vertex[vertex_perm[v]] = label.clone();
        }
        let mut flag = self.flag.clone();
        for (f, label) in self.flag.iter().enumerate() {
            flag[flag_perm[f]] = label.clone();
        }
        Decorations {
            schema: self.schema,
            vertex,
            flag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecorationError {
    #[error("expected {expected} vertex labels, got {got}")]
    MissingVertexLabels { expected: usize, got: usize },
    #[error("expected {expected} flag labels, got {got}")]
    MissingFlagLabels { expected: usize, got: usize },
    #[error("labels on the edge through flag {flag} violate the orientation rule")]
    Orientation { flag: FlagId },
    #[error("decoration schemas differ")]
    SchemaMismatch,
}

/// Byte string identifying a decorated graph up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// A pair of bijections: flag `f` maps to `flags[f]`, vertex `v` to
/// `vertices[v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub flags: Vec<FlagId>,
    pub vertices: Vec<VertexId>,
}

impl Isomorphism {
    pub fn identity(graph: &Graph) -> Self {
        Isomorphism {
            flags: (0..graph.flag_count()).collect(),
            vertices: (0..graph.vertex_count()).collect(),
        }
    }

    /// Checks that this pair of bijections transports the structure maps and
    /// all labels of `(g1, d1)` onto `(g2, d2)`.
    pub fn transports(&self, g1: &Graph, d1: &Decorations, g2: &Graph, d2: &Decorations) -> bool {
        if self.flags.len() != g1.flag_count()
            || self.vertices.len() != g1.vertex_count()
            || g1.flag_count() != g2.flag_count()
            || g1.vertex_count() != g2.vertex_count()
        {
            return false;
        }
        if crate::graph::check_permutation(&self.flags, g1.flag_count()).is_err()
            || crate::graph::check_permutation(&self.vertices, g1.vertex_count()).is_err()
        {
            return false;
        }
        (0..g1.flag_count()).all(|f| {
            let image = self.flags[f];
            g2.boundary(image) == self.vertices[g1.boundary(f)]
                && g2.involution(image) == self.flags[g1.involution(f)]
                && d2.flag[image] == d1.flag[f]
        }) && (0..g1.vertex_count()).all(|v| d2.vertex[self.vertices[v]] == d1.vertex[v])
    }
}

pub fn canonical_form(graph: &Graph, decorations: &Decorations) -> Result<CanonicalForm, DecorationError> {
    decorations.check(graph)?;
    Ok(CanonicalForm(best_leaf(graph, decorations).0))
}

/// Searches for a decoration-preserving isomorphism from `(g1, d1)` to
/// `(g2, d2)`.
pub fn is_isomorphic(
    g1: &Graph,
    d1: &Decorations,
    g2: &Graph,
    d2: &Decorations,
) -> Result<Option<Isomorphism>, DecorationError> {
    if d1.schema != d2.schema {
        return Err(DecorationError::SchemaMismatch);
    }
    d1.check(g1)?;
    d2.check(g2)?;
    if g1.vertex_count() != g2.vertex_count() || g1.flag_count() != g2.flag_count() {
        return Ok(None);
    }
    let (code1, order1) = best_leaf(g1, d1);
    let (code2, order2) = best_leaf(g2, d2);
    if code1 != code2 {
        return Ok(None);
    }
    // order[k] is the vertex in canonical position k
    let n = g1.vertex_count();
    let mut vertices = vec![0; n];
    for k in 0..n {
        vertices[order1[k]] = order2[k];
    }
    let pos1 = positions(&order1);
    let pos2 = positions(&order2);
    let mut flags = vec![usize::MAX; g1.flag_count()];
    let mut used = vec![false; g2.flag_count()];
    for (v, &w) in vertices.iter().enumerate() {
        let candidates = g2.flags_at(w);
        for f in g1.flags_at(v) {
            if flags[f] != usize::MAX {
                continue;
            }
            let key = flag_key(g1, d1, &pos1, f);
            let partner = g1.involution(f);
            let chosen = candidates.iter().copied().find(|&c| {
                if used[c] || flag_key(g2, d2, &pos2, c) != key {
                    return false;
                }
                let cp = g2.involution(c);
                // used flags are closed under the involution
                partner == f || (cp != c && !used[cp])
            });
            let Some(c) = chosen else {
                return Ok(None);
            };
            flags[f] = c;
            used[c] = true;
            if partner != f {
                let cp = g2.involution(c);
                flags[partner] = cp;
                used[cp] = true;
            }
        }
    }
    let iso = Isomorphism { flags, vertices };
    debug_assert!(iso.transports(g1, d1, g2, d2));
    Ok(Some(iso))
}

fn positions(order: &[VertexId]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    pos
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum FlagKey<'a> {
    Tail(&'a Label),
    Edge(&'a Label, usize, &'a Label),
}

fn flag_key<'a>(graph: &Graph, deco: &'a Decorations, pos: &[usize], f: FlagId) -> FlagKey<'a> {
    let partner = graph.involution(f);
    if partner == f {
        FlagKey::Tail(&deco.flag[f])
    } else {
        FlagKey::Edge(&deco.flag[f], pos[graph.boundary(partner)], &deco.flag[partner])
    }
}

fn encode_leaf(graph: &Graph, deco: &Decorations, order: &[VertexId]) -> Vec<u8> {
    let pos = positions(order);
    let mut out = Vec::new();
    out.extend_from_slice(&(graph.vertex_count() as u32).to_be_bytes());
    out.extend_from_slice(&(graph.flag_count() as u32).to_be_bytes());
    let mut at: Vec<Vec<FlagId>> = vec![Vec::new(); graph.vertex_count()];
    for f in 0..graph.flag_count() {
        at[graph.boundary(f)].push(f);
    }
    for &v in order {
        deco.vertex[v].encode(&mut out);
        let mut keys: Vec<FlagKey> = at[v].iter().map(|&f| flag_key(graph, deco, &pos, f)).collect();
        keys.sort();
        out.extend_from_slice(&(keys.len() as u32).to_be_bytes());
        for key in keys {
            match key {
                FlagKey::Tail(label) => {
                    out.push(0);
                    label.encode(&mut out);
                }
                FlagKey::Edge(label, w, other) => {
                    out.push(1);
                    label.encode(&mut out);
                    out.extend_from_slice(&(w as u32).to_be_bytes());
                    other.encode(&mut out);
                }
            }
        }
    }
    out
}

/// Replace colours by the rank of their key, preserving key order.
fn rank_by<K: Ord>(keys: Vec<K>) -> Vec<usize> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("key present"))
        .collect()
}

fn cell_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

/// Vertex key: current colour and, per incident flag, its label plus the
/// partner's colour and label.
type VertexKey<'a> = (usize, Vec<(&'a Label, Option<(usize, &'a Label)>)>);

fn refine(graph: &Graph, deco: &Decorations, at: &[Vec<FlagId>], mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let keys: Vec<VertexKey> = (0..graph.vertex_count())
            .map(|v| {
                let mut around: Vec<_> = at[v]
                    .iter()
                    .map(|&f| {
                        let p = graph.involution(f);
                        let partner = (p != f).then(|| (colors[graph.boundary(p)], &deco.flag[p]));
                        (&deco.flag[f], partner)
                    })
                    .collect();
                around.sort();
                (colors[v], around)
            })
            .collect();
        let next = rank_by(keys);
        if cell_count(&next) == cell_count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn best_leaf(graph: &Graph, deco: &Decorations) -> (Vec<u8>, Vec<VertexId>) {
    let mut at: Vec<Vec<FlagId>> = vec![Vec::new(); graph.vertex_count()];
    for f in 0..graph.flag_count() {
        at[graph.boundary(f)].push(f);
    }
    let initial: Vec<(&Label, usize)> = (0..graph.vertex_count())
        .map(|v| (&deco.vertex[v], at[v].len()))
        .collect();
    let colors = refine(graph, deco, &at, rank_by(initial));
    let mut best: Option<(Vec<u8>, Vec<VertexId>)> = None;
    search(graph, deco, &at, colors, &mut best);
    best.unwrap_or_else(|| (encode_leaf(graph, deco, &[]), Vec::new()))
}

fn search(
    graph: &Graph,
    deco: &Decorations,
    at: &[Vec<FlagId>],
    colors: Vec<usize>,
    best: &mut Option<(Vec<u8>, Vec<VertexId>)>,
) {
    let n = graph.vertex_count();
    let mut cells: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let Some(target) = cells.values().find(|cell| cell.len() > 1) else {
        let mut order = vec![0; n];
        for v in 0..n {
            order[colors[v]] = v;
        }
        let code = encode_leaf(graph, deco, &order);
        let better = match best {
            None => true,
            Some((b, _)) => code.cmp(b) == Ordering::Less,
        };
        if better {
            *best = Some((code, order));
        }
        return;
    };
    for &chosen in target {
        let keys: Vec<(usize, bool)> = (0..n).map(|v| (colors[v], v != chosen)).collect();
        let next = refine(graph, deco, at, rank_by(keys));
        search(graph, deco, at, next, best);
    }
}
