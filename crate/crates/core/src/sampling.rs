//! Seeded random and exhaustive generators for decorated graphs, plus the
//! clutch/extract property suite.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{enumerate_chain_types, enumerate_gi_types, ChainType};
use crate::decorated::{ChainGraph, GiGraph};
use crate::modular::{enumerate_stable_graphs, in_stable_range, ModularGraph};
use crate::stable_map::{clutch, combinatorial_type, stabilize, StableMapModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tail_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

/// Stable graphs with at most `max_vertices` vertices for every
/// `(genus, tails)` with `3g - 3 + n <= max_edges`, in canonical order per
/// type.
pub fn stable_base_pool(max_vertices: usize, max_edges: usize) -> Vec<ModularGraph> {
    let mut out = Vec::new();
    for genus in 0..=max_edges as u32 {
        for n in 0..=max_edges + 3 {
            if !in_stable_range(genus, n) || 3 * genus as usize + n - 3 > max_edges {
                continue;
            }
            out.extend(
                enumerate_stable_graphs(genus, &tail_names(n))
                    .into_iter()
                    .filter(|m| m.graph().vertex_count() <= max_vertices),
            );
        }
    }
    out
}

/// Random stable graph with at most `max_vertices` vertices, reached by a
/// random walk of degenerations from a one-vertex graph.
pub fn random_stable_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> ModularGraph {
    let (genus, n) = loop {
        let genus = rng.gen_range(0..=2u32);
        let n = rng.gen_range(0..=4usize);
        if in_stable_range(genus, n) {
            break (genus, n);
        }
    };
    let mut m = ModularGraph::smooth(genus, &tail_names(n)).expect("distinct names");
    let steps = rng.gen_range(0..=3 * genus as usize + n - 3);
    for _ in 0..steps {
        let options: Vec<ModularGraph> = m
            .degenerations()
            .into_iter()
            .filter(|d| d.graph().vertex_count() <= max_vertices)
            .collect();
        match options.choose(rng) {
            Some(next) => m = next.clone(),
            None => break,
        }
    }
    m
}

/// Random chain-graph on `base`: each edge gets a uniformly chosen chain-type
/// of degree at most `rank`, each vertex a degree in `[-3, 3]`.
pub fn random_chain_graph<R: Rng>(rng: &mut R, base: ModularGraph, rank: u32) -> ChainGraph {
    let types = enumerate_chain_types(rank);
    let graph = base.graph();
    let mut edge_chain = BTreeMap::new();
    for (f, partner) in graph.edges() {
        let d = types.choose(rng).expect("non-empty").clone();
        edge_chain.insert(partner, d.reverse());
        edge_chain.insert(f, d);
    }
    let vertex_degree = (0..graph.vertex_count()).map(|_| rng.gen_range(-3..=3)).collect();
    ChainGraph {
        base,
        rank,
        vertex_degree,
        edge_chain,
    }
}

/// Random GI-graph on `base`: each edge gets a uniformly chosen GI-type.
pub fn random_gi_graph<R: Rng>(rng: &mut R, base: ModularGraph, rank: u32) -> GiGraph {
    let types = enumerate_gi_types(rank);
    let graph = base.graph();
    let mut flag_subset = BTreeMap::new();
    for (f, partner) in graph.edges() {
        let t = types.choose(rng).expect("non-empty");
        flag_subset.insert(f, t.i().clone());
        flag_subset.insert(partner, t.j().clone());
    }
    let vertex_delta = (0..graph.vertex_count()).map(|_| rng.gen_range(-5..=5)).collect();
    GiGraph {
        base,
        rank,
        vertex_delta,
        flag_subset,
    }
}

/// All chain-graphs on `base` for `rank`, with fixed vertex degrees
/// `degree_of(v)`: one per assignment of a chain-type to every edge.
pub fn all_chain_graphs_on(base: &ModularGraph, rank: u32, degree_of: impl Fn(usize) -> i64) -> Vec<ChainGraph> {
    let types = enumerate_chain_types(rank);
    let edges = base.graph().edges();
    let vertex_degree: Vec<i64> = (0..base.graph().vertex_count()).map(degree_of).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; edges.len()];
    loop {
        let mut edge_chain: BTreeMap<usize, ChainType> = BTreeMap::new();
        for (k, &(f, partner)) in edges.iter().enumerate() {
            edge_chain.insert(f, types[choice[k]].clone());
            edge_chain.insert(partner, types[choice[k]].reverse());
        }
        out.push(ChainGraph {
            base: base.clone(),
            rank,
            vertex_degree: vertex_degree.clone(),
            edge_chain,
        });
        let mut k = edges.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < types.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Uniformly random relabeling of a model's flags and vertices.
pub fn shuffle_model<R: Rng>(rng: &mut R, m: &StableMapModel) -> StableMapModel {
    let mut flags: Vec<usize> = (0..m.curve.graph().flag_count()).collect();
    let mut vertices: Vec<usize> = (0..m.curve.graph().vertex_count()).collect();
    flags.shuffle(rng);
    vertices.shuffle(rng);
    m.relabel(&flags, &vertices)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 10 {
                self.failures.push(what());
            }
        }
    }
}

/// Checks on one chain-graph: the clutched model is valid, its combinatorial
/// type is isomorphic to `c`, a shuffled copy stabilizes to the same type,
/// and stabilization is idempotent.
pub fn check_clutch_roundtrip<R: Rng>(rng: &mut R, c: &ChainGraph) -> Result<(), String> {
    let model = clutch(c).map_err(|e| e.to_string())?;
    if !model.violations().is_empty() {
        return Err("clutched model is invalid".into());
    }
    let back = combinatorial_type(&model).map_err(|e| e.to_string())?;
    if back.canonical_form() != c.canonical_form() {
        return Err("combinatorial type of clutch differs".into());
    }
    let shuffled = shuffle_model(rng, &model);
    let again = combinatorial_type(&shuffled).map_err(|e| e.to_string())?;
    if again.canonical_form() != c.canonical_form() {
        return Err("relabeled model has a different combinatorial type".into());
    }
    let data = stabilize(&shuffled).map_err(|e| e.to_string())?;
    let stable = StableMapModel {
        curve: data.stabilized.clone(),
        rank: c.rank,
        component_degree: data
            .source_vertex
            .iter()
            .map(|&v| shuffled.component_degree[v])
            .collect(),
    };
    if !stabilize(&stable).map_err(|e| e.to_string())?.is_identity() {
        return Err("stabilization is not idempotent".into());
    }
    if data.stabilized.genus() != shuffled.curve.genus() {
        return Err("stabilization changed the genus".into());
    }
    Ok(())
}

/// Exhaustive clutch/extract checks over stable bases with at most
/// `max_vertices` vertices (at most three edges) and every edge decoration
/// for `rank`, followed by `samples` random cases with up to `max_vertices`
/// vertices.
pub fn roundtrip_suite(rank: u32, max_vertices: usize, samples: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::default();
    let mut rng = rng(seed);
    for base in stable_base_pool(max_vertices, 3) {
        for c in all_chain_graphs_on(&base, rank, |v| v as i64 - 1) {
            let outcome = check_clutch_roundtrip(&mut rng, &c);
            report.record(outcome.is_ok(), || format!("{outcome:?}"));
        }
    }
    for _ in 0..samples {
        let base = random_stable_graph(&mut rng, max_vertices);
        let c = random_chain_graph(&mut rng, base, rank);
        let outcome = check_clutch_roundtrip(&mut rng, &c);
        report.record(outcome.is_ok(), || format!("{outcome:?}"));
    }
    report
}
