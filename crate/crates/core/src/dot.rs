//! Graphviz DOT export. Vertices become nodes `n0, n1, …` in id order; each
//! unoriented edge is drawn once, along its canonical orientation.

use std::fmt::Write;

use crate::chain::StrataPoset;
use crate::decorated::{ChainGraph, GiGraph};
use crate::graph::Graph;
use crate::modular::ModularGraph;
use crate::stable_map::StableMapModel;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn render(name: &str, nodes: &[String], arcs: &[(usize, usize, Option<String>)]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    for (k, label) in nodes.iter().enumerate() {
        writeln!(out, "  n{k} [label=\"{}\"];", escape(label)).unwrap();
    }
    for (a, b, label) in arcs {
        match label {
            Some(l) => writeln!(out, "  n{a} -> n{b} [label=\"{}\"];", escape(l)).unwrap(),
            None => writeln!(out, "  n{a} -> n{b};").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

fn vertex_labels(m: &ModularGraph, extra: impl Fn(usize) -> String) -> Vec<String> {
    let graph = m.graph();
    (0..graph.vertex_count())
        .map(|v| {
            let mut label = format!("g={}{}", m.vertex_genus(v), extra(v));
            let tails: Vec<&str> = graph.flags_at(v).into_iter().filter_map(|f| m.tail_label(f)).collect();
            if !tails.is_empty() {
                label.push_str(&format!("\n[{}]", tails.join(",")));
            }
            label
        })
        .collect()
}

fn arcs(graph: &Graph, label: impl Fn(usize) -> Option<String>) -> Vec<(usize, usize, Option<String>)> {
    graph
        .edges()
        .into_iter()
        .map(|(f, partner)| (graph.boundary(f), graph.boundary(partner), label(f)))
        .collect()
}

pub fn modular_to_dot(m: &ModularGraph) -> String {
    render(
        "modular",
        &vertex_labels(m, |_| String::new()),
        &arcs(m.graph(), |_| None),
    )
}

/// Edges are labeled by the chain-type of their canonical orientation, `∅`
/// for the empty chain.
pub fn chain_graph_to_dot(c: &ChainGraph) -> String {
    let nodes = vertex_labels(&c.base, |v| format!(" d={}", c.vertex_degree[v]));
    let arcs = arcs(c.base.graph(), |f| {
        c.edge_chain
            .get(&f)
            .map(|d| if d.is_empty() { "∅".to_string() } else { d.to_string() })
    });
    render("chain_graph", &nodes, &arcs)
}

pub fn gi_graph_to_dot(g: &GiGraph) -> String {
    let nodes = vertex_labels(&g.base, |v| format!(" δ={}", g.vertex_delta[v]));
    let graph = g.base.graph();
    let arcs = arcs(graph, |f| {
        let i = g.flag_subset.get(&f)?;
        let j = g.flag_subset.get(&graph.involution(f))?;
        Some(format!("({i},{j})"))
    });
    render("gi_graph", &nodes, &arcs)
}

pub fn model_to_dot(m: &StableMapModel) -> String {
    let nodes = vertex_labels(&m.curve, |v| format!(" d={}", m.component_degree[v]));
    render("stable_map", &nodes, &arcs(m.curve.graph(), |_| None))
}

/// Nodes in poset order, arcs along cover relations from the shallower to
/// the deeper stratum.
pub fn poset_to_dot(p: &StrataPoset) -> String {
    let nodes: Vec<String> = p.nodes().iter().map(|t| format!("{t}\ncodim {}", t.codim())).collect();
    let arcs: Vec<_> = p.covers().iter().map(|&(a, b)| (a, b, None)).collect();
    render("strata", &nodes, &arcs)
}
