//! JSON documents for graphs, decorated graphs, stable-map models and strata
//! posets.
//!
//! Identifiers are strings. Serialization names vertices `v0, v1, …` and
//! flags `f0, f1, …` in id order and writes every map with sorted keys, so
//! `serialize(parse(d)) == d` for every document produced by `serialize`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainType, RankSubset, StrataPoset};
use crate::decorated::{ChainGraph, GiGraph};
use crate::graph::Graph;
use crate::modular::ModularGraph;
use crate::stable_map::{ContractionData, StableMapModel, VertexImage};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocumentKind {
    Graph,
    Modular,
    ChainGraph,
    GiGraph,
    StableMapModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format_version: String,
    pub kind: DocumentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    pub vertices: Vec<String>,
    pub flags: Vec<String>,
    pub boundary: BTreeMap<String, String>,
    pub involution: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<BTreeMap<String, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tails: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_degree: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_chain: Option<BTreeMap<String, ChainType>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_delta: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_subset: Option<BTreeMap<String, RankSubset>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_degree: Option<BTreeMap<String, i64>>,
}

/// A parsed document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Graph(Graph),
    Modular(ModularGraph),
    ChainGraph(ChainGraph),
    GiGraph(GiGraph),
    StableMap(StableMapModel),
}

impl Document {
    pub fn kind(&self) -> DocumentKind {
        match self {
            Document::Graph(_) => DocumentKind::Graph,
            Document::Modular(_) => DocumentKind::Modular,
            Document::ChainGraph(_) => DocumentKind::ChainGraph,
            Document::GiGraph(_) => DocumentKind::GiGraph,
            Document::StableMap(_) => DocumentKind::StableMapModel,
        }
    }

    /// Runs the validator of the document's kind. Modular graphs must be
    /// stable and connected.
    pub fn validate(&self) -> Result<(), DocumentError> {
        let (class, details): (&'static str, Vec<String>) = match self {
            Document::Graph(_) => return Ok(()),
            Document::Modular(m) => {
                let mut details: Vec<String> = m
                    .is_stable()
                    .violations
                    .iter()
                    .map(|(v, why)| format!("vertex v{v}: {why:?}"))
                    .collect();
                if !m.graph().is_connected() {
                    details.push("graph is not connected".into());
                }
                ("unstable-modular-graph", details)
            }
            Document::ChainGraph(c) => (
                "invalid-chain-graph",
                c.violations().iter().map(ToString::to_string).collect(),
            ),
            Document::GiGraph(g) => (
                "invalid-gi-graph",
                g.violations().iter().map(ToString::to_string).collect(),
            ),
            Document::StableMap(m) => (
                "invalid-stable-map",
                m.violations().iter().map(|v| format!("{}: {v}", v.class())).collect(),
            ),
        };
        if details.is_empty() {
            Ok(())
        } else {
            Err(DocumentError::Invalid { class, details })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("{class}: {}", .details.join("; "))]
    Invalid { class: &'static str, details: Vec<String> },
}

impl DocumentError {
    pub fn class(&self) -> &'static str {
        match self {
            DocumentError::Syntax { .. } => "syntax-error",
            DocumentError::Schema { .. } => "schema-violation",
            DocumentError::Invalid { class, .. } => class,
        }
    }

    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => DocumentError::Schema {
                path: format!("line {} column {}", e.line(), e.column()),
                message: e.to_string(),
            },
            _ => DocumentError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    }
}

/// Structural parse: the result is a well-formed value of the declared kind
/// but has not been run through its validator.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    from_graph_document(&doc)
}

/// Structural parse followed by the kind's validator.
pub fn parse(text: &str) -> Result<Document, DocumentError> {
    let document = parse_document(text)?;
    document.validate()?;
    Ok(document)
}

pub fn serialize(document: &Document) -> String {
    let mut text = serde_json::to_string_pretty(&to_graph_document(document)).expect("serializable");
    text.push('\n');
    text
}

fn index_names(names: &[String], what: &str) -> Result<HashMap<String, usize>, DocumentError> {
    let mut index = HashMap::new();
    for (k, name) in names.iter().enumerate() {
        if index.insert(name.clone(), k).is_some() {
            return Err(DocumentError::schema(
                format!("{what}[{k}]"),
                format!("duplicate identifier {name:?}"),
            ));
        }
    }
    Ok(index)
}

/// Resolves a map keyed by identifiers into a dense vector, requiring every
/// identifier of `index` to be present.
fn dense<T: Clone>(
    field: &str,
    map: &BTreeMap<String, T>,
    index: &HashMap<String, usize>,
) -> Result<Vec<T>, DocumentError> {
    let mut out: Vec<Option<T>> = vec![None; index.len()];
    for (key, value) in map {
        let k = *index
            .get(key)
            .ok_or_else(|| DocumentError::schema(format!("{field}.{key}"), "unknown identifier"))?;
        out[k] = Some(value.clone());
    }
    let mut names: Vec<(&String, &usize)> = index.iter().collect();
    names.sort_by_key(|&(_, &k)| k);
    names
        .into_iter()
        .map(|(name, &k)| {
            out[k]
                .clone()
                .ok_or_else(|| DocumentError::schema(format!("{field}.{name}"), "missing entry"))
        })
        .collect()
}

fn sparse<T: Clone>(
    field: &str,
    map: &BTreeMap<String, T>,
    index: &HashMap<String, usize>,
) -> Result<BTreeMap<usize, T>, DocumentError> {
    map.iter()
        .map(|(key, value)| {
            index
                .get(key)
                .map(|&k| (k, value.clone()))
                .ok_or_else(|| DocumentError::schema(format!("{field}.{key}"), "unknown identifier"))
        })
        .collect()
}

fn require<'a, T>(field: &str, value: &'a Option<T>) -> Result<&'a T, DocumentError> {
    value
        .as_ref()
        .ok_or_else(|| DocumentError::schema(field, "required for this kind"))
}

fn from_graph_document(doc: &GraphDocument) -> Result<Document, DocumentError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(DocumentError::schema(
            "format_version",
            format!("unsupported version {:?}", doc.format_version),
        ));
    }
    let allowed: &[&str] = match doc.kind {
        DocumentKind::Graph => &[],
        DocumentKind::Modular => &["genus", "tails"],
        DocumentKind::ChainGraph => &["rank", "genus", "tails", "vertex_degree", "edge_chain"],
        DocumentKind::GiGraph => &["rank", "genus", "tails", "vertex_delta", "flag_subset"],
        DocumentKind::StableMapModel => &["rank", "genus", "tails", "component_degree"],
    };
    let present = [
        ("rank", doc.rank.is_some()),
        ("genus", doc.genus.is_some()),
        ("tails", doc.tails.is_some()),
        ("vertex_degree", doc.vertex_degree.is_some()),
        ("edge_chain", doc.edge_chain.is_some()),
        ("vertex_delta", doc.vertex_delta.is_some()),
        ("flag_subset", doc.flag_subset.is_some()),
        ("component_degree", doc.component_degree.is_some()),
    ];
    for (field, is_present) in present {
        if is_present && !allowed.contains(&field) {
            return Err(DocumentError::schema(field, "not allowed for this kind"));
        }
    }

    let vertices = index_names(&doc.vertices, "vertices")?;
    let flags = index_names(&doc.flags, "flags")?;
    let boundary_names = dense("boundary", &doc.boundary, &flags)?;
    let boundary = boundary_names
        .iter()
        .zip(&doc.flags)
        .map(|(v, f)| {
            vertices
                .get(v)
                .copied()
                .ok_or_else(|| DocumentError::schema(format!("boundary.{f}"), format!("unknown vertex {v:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let involution_names = dense("involution", &doc.involution, &flags)?;
    let involution = involution_names
        .iter()
        .zip(&doc.flags)
        .map(|(g, f)| {
            flags
                .get(g)
                .copied()
                .ok_or_else(|| DocumentError::schema(format!("involution.{f}"), format!("unknown flag {g:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (k, &image) in involution.iter().enumerate() {
        if involution[image] != k {
            return Err(DocumentError::schema(
                format!("involution.{}", doc.flags[k]),
                format!(
                    "not an involution: {} -> {} -> {}",
                    doc.flags[k], doc.flags[image], doc.flags[involution[image]]
                ),
            ));
        }
    }
    let graph = Graph::new(doc.vertices.len(), boundary, involution)
        .map_err(|e| DocumentError::schema("graph", e.to_string()))?;
    if doc.kind == DocumentKind::Graph {
        return Ok(Document::Graph(graph));
    }

    let genus = dense("genus", require("genus", &doc.genus)?, &vertices)?;
    let tails = sparse("tails", require("tails", &doc.tails)?, &flags)?;
    let base = ModularGraph::new(graph, genus, tails).map_err(|e| DocumentError::schema("tails", e.to_string()))?;
    let rank = || require("rank", &doc.rank).copied();
    Ok(match doc.kind {
        DocumentKind::Graph => unreachable!(),
        DocumentKind::Modular => Document::Modular(base),
        DocumentKind::ChainGraph => Document::ChainGraph(ChainGraph {
            rank: rank()?,
            vertex_degree: dense(
                "vertex_degree",
                require("vertex_degree", &doc.vertex_degree)?,
                &vertices,
            )?,
            edge_chain: sparse("edge_chain", require("edge_chain", &doc.edge_chain)?, &flags)?,
            base,
        }),
        DocumentKind::GiGraph => Document::GiGraph(GiGraph {
            rank: rank()?,
            vertex_delta: dense("vertex_delta", require("vertex_delta", &doc.vertex_delta)?, &vertices)?,
            flag_subset: sparse("flag_subset", require("flag_subset", &doc.flag_subset)?, &flags)?,
            base,
        }),
        DocumentKind::StableMapModel => Document::StableMap(StableMapModel {
            rank: rank()?,
            component_degree: dense(
                "component_degree",
                require("component_degree", &doc.component_degree)?,
                &vertices,
            )?,
            curve: base,
        }),
    })
}

fn vertex_name(v: usize) -> String {
    format!("v{v}")
}

fn flag_name(f: usize) -> String {
    format!("f{f}")
}

fn per_vertex<T: Clone>(values: &[T]) -> BTreeMap<String, T> {
    values
        .iter()
        .enumerate()
        .map(|(v, x)| (vertex_name(v), x.clone()))
        .collect()
}

fn per_flag<T: Clone>(values: &BTreeMap<usize, T>) -> BTreeMap<String, T> {
    values.iter().map(|(&f, x)| (flag_name(f), x.clone())).collect()
}

fn bare(kind: DocumentKind, graph: &Graph) -> GraphDocument {
    GraphDocument {
        format_version: FORMAT_VERSION.to_string(),
        kind,
        rank: None,
        vertices: (0..graph.vertex_count()).map(vertex_name).collect(),
        flags: (0..graph.flag_count()).map(flag_name).collect(),
        boundary: (0..graph.flag_count())
            .map(|f| (flag_name(f), vertex_name(graph.boundary(f))))
            .collect(),
        involution: (0..graph.flag_count())
            .map(|f| (flag_name(f), flag_name(graph.involution(f))))
            .collect(),
        genus: None,
        tails: None,
        vertex_degree: None,
        edge_chain: None,
        vertex_delta: None,
        flag_subset: None,
        component_degree: None,
    }
}

fn modular_document(kind: DocumentKind, m: &ModularGraph) -> GraphDocument {
    let mut doc = bare(kind, m.graph());
    doc.genus = Some(per_vertex(m.genera()));
    doc.tails = Some(per_flag(m.tail_labels()));
    doc
}

pub fn to_graph_document(document: &Document) -> GraphDocument {
    match document {
        Document::Graph(g) => bare(DocumentKind::Graph, g),
        Document::Modular(m) => modular_document(DocumentKind::Modular, m),
        Document::ChainGraph(c) => {
            let mut doc = modular_document(DocumentKind::ChainGraph, &c.base);
            doc.rank = Some(c.rank);
            doc.vertex_degree = Some(per_vertex(&c.vertex_degree));
            doc.edge_chain = Some(per_flag(&c.edge_chain));
            doc
        }
        Document::GiGraph(g) => {
            let mut doc = modular_document(DocumentKind::GiGraph, &g.base);
            doc.rank = Some(g.rank);
            doc.vertex_delta = Some(per_vertex(&g.vertex_delta));
            doc.flag_subset = Some(per_flag(&g.flag_subset));
            doc
        }
        Document::StableMap(m) => {
            let mut doc = modular_document(DocumentKind::StableMapModel, &m.curve);
            doc.rank = Some(m.rank);
            doc.component_degree = Some(per_vertex(&m.component_degree));
            doc
        }
    }
}

/// A list of documents as one JSON array.
pub fn serialize_many(documents: &[Document]) -> String {
    let docs: Vec<GraphDocument> = documents.iter().map(to_graph_document).collect();
    let mut text = serde_json::to_string_pretty(&docs).expect("serializable");
    text.push('\n');
    text
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetNode {
    pub i: RankSubset,
    pub j: RankSubset,
    pub codim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDocument {
    pub format_version: String,
    pub rank: u32,
    pub nodes: Vec<PosetNode>,
    pub covers: Vec<(usize, usize)>,
}

impl PosetDocument {
    pub fn from_poset(poset: &StrataPoset) -> Self {
        PosetDocument {
            format_version: FORMAT_VERSION.to_string(),
            rank: poset.rank(),
            nodes: poset
                .nodes()
                .iter()
                .map(|t| PosetNode {
                    i: t.i().clone(),
                    j: t.j().clone(),
                    codim: t.codim(),
                })
                .collect(),
            covers: poset.covers().to_vec(),
        }
    }

    /// Covers reference existing nodes, raise codim by exactly one, and
    /// codim equals `|I| + |J|`. Acyclicity follows from the codim rule.
    pub fn check(&self) -> Result<(), DocumentError> {
        for (k, node) in self.nodes.iter().enumerate() {
            if node.codim != node.i.len() + node.j.len() {
                return Err(DocumentError::schema(
                    format!("nodes[{k}].codim"),
                    "codim must equal |I| + |J|",
                ));
            }
        }
        for (k, &(a, b)) in self.covers.iter().enumerate() {
            let path = format!("covers[{k}]");
            let (Some(lower), Some(upper)) = (self.nodes.get(a), self.nodes.get(b)) else {
                return Err(DocumentError::schema(path, "unknown node index"));
            };
            if upper.codim != lower.codim + 1 {
                return Err(DocumentError::schema(path, "cover must raise codim by exactly one"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: PosetDocument = serde_json::from_str(text)?;
        doc.check()?;
        Ok(doc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionDocument {
    pub format_version: String,
    pub stabilized: GraphDocument,
    /// Original vertex behind each stabilized vertex.
    pub source_vertex: BTreeMap<String, String>,
    /// Original component -> stabilized vertex, or stabilized edge flag and
    /// position along its chain.
    pub vertex_image: BTreeMap<String, String>,
    /// Contracted components with degrees, per stabilized non-tail flag.
    pub chains: BTreeMap<String, Vec<(String, i64)>>,
}

impl ContractionDocument {
    pub fn from_contraction(data: &ContractionData) -> Self {
        ContractionDocument {
            format_version: FORMAT_VERSION.to_string(),
            stabilized: modular_document(DocumentKind::Modular, &data.stabilized),
            source_vertex: data
                .source_vertex
                .iter()
                .enumerate()
                .map(|(k, &v)| (vertex_name(k), vertex_name(v)))
                .collect(),
            vertex_image: data
                .vertex_image
                .iter()
                .enumerate()
                .map(|(v, image)| {
                    let target = match *image {
                        VertexImage::Vertex(w) => vertex_name(w),
                        VertexImage::Edge { flag, position } => format!("{}#{position}", flag_name(flag)),
                    };
                    (vertex_name(v), target)
                })
                .collect(),
            chains: data
                .chains
                .iter()
                .map(|(&f, walk)| (flag_name(f), walk.iter().map(|&(v, d)| (vertex_name(v), d)).collect()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }
}
