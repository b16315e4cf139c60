//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng;

use bglr::chain::{
    chain_fiber, enumerate_chain_types, enumerate_gi_types, gi_to_chain, invert, is_admissible_splitting, reverse,
    strata_poset, GiType,
};
use bglr::decorated::{enumerate_gi_graphs_over, gi_graph_to_chain_graph};
use bglr::document::{parse, parse_document, serialize, serialize_many, Document, DocumentError, PosetDocument};
use bglr::modular::enumerate_stable_graphs;
use bglr::sampling::{
    all_chain_graphs_on, check_clutch_roundtrip, random_chain_graph, random_gi_graph, random_stable_graph, rng,
    shuffle_model, stable_base_pool, tail_names,
};
use bglr::stable_map::{clutch, stabilize};
use bglr::{ChainGraph, StableMapModel};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn pair(t: &GiType) -> (Vec<u32>, Vec<u32>) {
    (t.i().elements().to_vec(), t.j().elements().to_vec())
}

/// All 4^r subset pairs, kept when min(I) + min(J) >= r with min(∅) = r.
fn brute_gi_pairs(r: u32) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
    let min = |mask: u32| if mask == 0 { r } else { mask.trailing_zeros() };
    let elems = |mask: u32| (0..r).filter(|k| mask >> k & 1 == 1).collect::<Vec<_>>();
    let mut out = BTreeSet::new();
    for a in 0..1u32 << r {
        for b in 0..1u32 << r {
            if min(a) + min(b) >= r {
                out.insert((elems(a), elems(b)));
            }
        }
    }
    out
}

/// Compositions of every total `0..=r`, built by cutting `k` at the set bits
/// of a `(k-1)`-bit mask.
fn brute_compositions(r: u32) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    out.insert(vec![]);
    for k in 1..=r {
        for mask in 0..1u32 << (k - 1) {
            let mut parts = vec![];
            let mut run = 1;
            for bit in 0..k - 1 {
                if mask >> bit & 1 == 1 {
                    parts.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            parts.push(run);
            out.insert(parts);
        }
    }
    out
}

fn gi_type_counts() -> Outcome {
    let mut counts = vec![];
    for r in 1..=3 {
        let listed: Vec<_> = enumerate_gi_types(r).iter().map(pair).collect();
        let set: BTreeSet<_> = listed.iter().cloned().collect();
        ensure!(set.len() == listed.len(), "duplicates at r={r}");
        ensure!(set == brute_gi_pairs(r), "differs from brute force at r={r}");
        counts.push(listed.len());
    }
    ensure!(counts == [3, 8, 20], "counts {counts:?}");
    Ok(format!("counts {counts:?} for r=1,2,3"))
}

fn chain_type_counts() -> Outcome {
    for r in 0..=10 {
        let listed: Vec<Vec<u32>> = enumerate_chain_types(r).iter().map(|d| d.entries().to_vec()).collect();
        ensure!(listed.len() == 1 << r, "{} types at r={r}", listed.len());
        let set: BTreeSet<_> = listed.into_iter().collect();
        ensure!(set == brute_compositions(r), "differs from compositions at r={r}");
    }
    Ok("2^r types for r=0..10".into())
}

fn fiber_law() -> Outcome {
    let mut checked = 0;
    for r in 1..=6 {
        let all: BTreeSet<_> = enumerate_gi_types(r).iter().map(pair).collect();
        let mut seen = BTreeSet::new();
        for d in enumerate_chain_types(r) {
            let fiber = chain_fiber(&d, r).map_err(|e| e.to_string())?;
            ensure!(
                fiber.len() == d.len() + 1,
                "fiber of {d} at r={r} has {} elements",
                fiber.len()
            );
            for t in &fiber {
                ensure!(gi_to_chain(t) == d, "{t} does not map to {d}");
                ensure!(seen.insert(pair(t)), "{t} lies in two fibers");
            }
            checked += 1;
        }
        ensure!(seen == all, "fibers do not cover the GI-types at r={r}");
    }
    Ok(format!("{checked} fibers"))
}

fn degree_identity() -> Outcome {
    let mut checked = 0;
    for r in 1..=6 {
        for t in enumerate_gi_types(r) {
            let expected = 2 * r as u64 - t.i().min_or(r) as u64 - t.j().min_or(r) as u64;
            ensure!(gi_to_chain(&t).degree() == expected, "{t} at r={r}");
            checked += 1;
        }
    }
    Ok(format!("{checked} GI-types"))
}

fn involution_laws() -> Outcome {
    for r in 1..=6 {
        for t in enumerate_gi_types(r) {
            ensure!(invert(&invert(&t)) == t, "invert twice on {t}");
            ensure!(
                gi_to_chain(&invert(&t)) == reverse(&gi_to_chain(&t)),
                "inversion on {t}"
            );
        }
        for d in enumerate_chain_types(r) {
            ensure!(reverse(&reverse(&d)) == d, "reverse twice on {d}");
        }
    }
    Ok("r=1..6".into())
}

fn poset_laws() -> Outcome {
    for r in 1..=5 {
        let poset = strata_poset(r);
        let nodes: BTreeSet<_> = poset.nodes().iter().map(pair).collect();
        ensure!(nodes == brute_gi_pairs(r), "node set at r={r}");
        for t in poset.nodes() {
            ensure!(
                poset.codim(poset.index_of(t).unwrap()) == t.i().len() + t.j().len(),
                "codim of {t}"
            );
            // drop one element from I or J
            for (side, elems) in [(0, t.i().elements()), (1, t.j().elements())] {
                for skip in 0..elems.len() {
                    let fewer: Vec<u32> = elems
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    let smaller = if side == 0 {
                        (fewer, t.j().elements().to_vec())
                    } else {
                        (t.i().elements().to_vec(), fewer)
                    };
                    ensure!(nodes.contains(&smaller), "not downward closed below {t}");
                }
            }
        }
        let n = poset.nodes().len();
        let mut expected = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (pair(&poset.nodes()[a]), pair(&poset.nodes()[b]));
                let below = x.0.iter().all(|e| y.0.contains(e)) && x.1.iter().all(|e| y.1.contains(e));
                if below && y.0.len() + y.1.len() == x.0.len() + x.1.len() + 1 {
                    expected.insert((a, b));
                }
            }
        }
        let covers: BTreeSet<_> = poset.covers().iter().copied().collect();
        ensure!(covers == expected, "cover relation at r={r}");
        for &(a, b) in poset.covers() {
            ensure!(poset.codim(b) == poset.codim(a) + 1, "cover {a}->{b} at r={r}");
        }
        let open = poset.index_of(&GiType::open(r)).ok_or("open stratum missing")?;
        ensure!(poset.minimal() == vec![open], "minimum at r={r}");
        ensure!(
            (0..n).all(|k| poset.leq(open, k)),
            "open stratum not below all at r={r}"
        );
    }
    Ok("r=1..5".into())
}

fn stable_graph_counts() -> Outcome {
    let mut report = vec![];
    for (genus, n, expected) in [(0, 3, 1), (0, 4, 4), (0, 5, 26), (1, 1, 2), (1, 2, 5)] {
        let listed = enumerate_stable_graphs(genus, &tail_names(n));
        let brute = common::oracle(genus, n);
        ensure!(
            brute.len() == expected,
            "oracle gives {} for ({genus},{n})",
            brute.len()
        );
        ensure!(
            listed.len() == expected,
            "enumeration gives {} for ({genus},{n})",
            listed.len()
        );
        let keys: BTreeSet<_> = listed.iter().map(common::key_of).collect();
        ensure!(keys.len() == listed.len(), "isomorphic outputs for ({genus},{n})");
        ensure!(keys == brute, "classes differ from oracle for ({genus},{n})");
        let forms: BTreeSet<_> = listed.iter().map(|m| m.canonical_form()).collect();
        ensure!(forms.len() == listed.len(), "repeated canonical form for ({genus},{n})");
        for m in &listed {
            ensure!(
                m.is_stable().stable && m.graph().is_connected(),
                "unstable or disconnected output"
            );
            ensure!(m.genus() == Ok(genus), "wrong genus");
        }
        report.push(format!("({genus},{n}):{expected}"));
    }
    Ok(report.join(" "))
}

fn exhaustive_chain_graphs(rank: u32) -> Vec<ChainGraph> {
    stable_base_pool(3, 3)
        .iter()
        .flat_map(|base| all_chain_graphs_on(base, rank, |v| v as i64 - 1))
        .collect()
}

fn gi_graph_fiber_law() -> Outcome {
    let mut chain_graphs = 0;
    let mut gi_graphs = 0;
    for rank in 1..=3 {
        for c in exhaustive_chain_graphs(rank) {
            let graph = c.base.graph();
            let expected: usize = graph.edges().iter().map(|&(f, _)| c.edge_chain[&f].len() + 1).product();
            let fiber = enumerate_gi_graphs_over(&c).map_err(|e| e.to_string())?;
            ensure!(
                fiber.len() == expected,
                "fiber has {} elements, expected {expected}",
                fiber.len()
            );
            let distinct: BTreeSet<_> = fiber.iter().map(|g| format!("{:?}", g.flag_subset)).collect();
            ensure!(distinct.len() == fiber.len(), "repeated fiber element");
            for gamma in &fiber {
                let back = gi_graph_to_chain_graph(gamma).map_err(|e| e.to_string())?;
                ensure!(back == c, "not a left inverse");
            }
            chain_graphs += 1;
            gi_graphs += fiber.len();
        }
    }
    Ok(format!("{chain_graphs} chain-graphs, {gi_graphs} GI-graphs"))
}

fn total_degree_identity() -> Outcome {
    let mut r = rng(9);
    for _ in 0..10_000 {
        let rank = r.gen_range(1..=4);
        let base = random_stable_graph(&mut r, 6);
        let gamma = random_gi_graph(&mut r, base, rank);
        let c = gi_graph_to_chain_graph(&gamma).map_err(|e| e.to_string())?;
        let graph = c.base.graph();
        let chains: i64 = graph
            .edges()
            .iter()
            .map(|&(f, _)| c.edge_chain[&f].degree() as i64)
            .sum();
        let lhs: i64 = gamma.vertex_delta.iter().sum();
        ensure!(lhs == c.vertex_degree.iter().sum::<i64>() + chains, "identity fails");
    }
    Ok("10000 random GI-graphs".into())
}

fn clutch_round_trip() -> Outcome {
    let mut r = rng(10);
    let mut exhaustive = 0;
    for rank in 1..=3 {
        for c in exhaustive_chain_graphs(rank) {
            check_clutch_roundtrip(&mut r, &c)?;
            exhaustive += 1;
        }
    }
    for _ in 0..10_000 {
        let rank = r.gen_range(1..=5);
        let base = random_stable_graph(&mut r, 6);
        let c = random_chain_graph(&mut r, base, rank);
        check_clutch_roundtrip(&mut r, &c)?;
    }
    Ok(format!("{exhaustive} exhaustive, 10000 random"))
}

fn fixtures(sub: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(sub);
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .expect("fixture directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
}

fn stem(path: &Path) -> String {
    path.file_stem().unwrap().to_string_lossy().into_owned()
}

fn stabilization() -> Outcome {
    let mut r = rng(11);
    let mut chains = 0;
    for _ in 0..10_000 {
        let rank = r.gen_range(1..=5);
        let base = random_stable_graph(&mut r, 6);
        let c = random_chain_graph(&mut r, base, rank);
        let model = shuffle_model(&mut r, &clutch(&c).map_err(|e| e.to_string())?);
        ensure!(model.violations().is_empty(), "generated model is invalid");
        let data = stabilize(&model).map_err(|e| e.to_string())?;
        ensure!(data.stabilized.genus() == model.curve.genus(), "genus changed");
        let stable = StableMapModel {
            curve: data.stabilized.clone(),
            rank,
            component_degree: data.source_vertex.iter().map(|&v| model.component_degree[v]).collect(),
        };
        let again = stabilize(&stable).map_err(|e| e.to_string())?;
        ensure!(
            again.is_identity() && again.stabilized == data.stabilized,
            "not idempotent"
        );
        for chain in data.chains.values().filter(|ch| !ch.is_empty()) {
            let degrees: Vec<i64> = chain.iter().map(|&(_, d)| d).collect();
            ensure!(
                is_admissible_splitting(&degrees, rank),
                "chain {degrees:?} not admissible at r={rank}"
            );
            chains += 1;
        }
    }
    let mut rejected = vec![];
    for path in fixtures("")
        .into_iter()
        .filter(|p| stem(p).starts_with("invalid__invalid-stable-map__"))
    {
        let name = stem(&path);
        let class = name.rsplit("__").next().unwrap().to_string();
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let Ok(Document::StableMap(m)) = parse_document(&text) else {
            return Err(format!("{name} is not a stable-map document"));
        };
        let classes: Vec<_> = m.violations().iter().map(|v| v.class()).collect();
        ensure!(classes.contains(&class.as_str()), "{name}: got {classes:?}");
        ensure!(stabilize(&m).is_err(), "{name} was stabilized");
        ensure!(
            matches!(
                parse(&text),
                Err(DocumentError::Invalid {
                    class: "invalid-stable-map",
                    ..
                })
            ),
            "{name}: document class"
        );
        rejected.push(class);
    }
    for required in [
        "tail-on-chain",
        "dangling-rational-tail",
        "all-chain-cycle",
        "degree-zero-chain-vertex",
        "chain-degree-exceeds-rank",
    ] {
        ensure!(rejected.iter().any(|c| c == required), "no fixture for {required}");
    }
    Ok(format!(
        "10000 random models, {chains} chains, {} invalid fixtures",
        rejected.len()
    ))
}

fn serialization() -> Outcome {
    let mut count = 0;
    for path in fixtures("") {
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let doc = parse_document(&text).map_err(|e| format!("{}: {e}", stem(&path)))?;
        ensure!(serialize(&doc) == text, "{} does not round trip", stem(&path));
        ensure!(
            parse_document(&serialize(&doc)).as_ref() == Ok(&doc),
            "{} reparses differently",
            stem(&path)
        );
        count += 1;
    }
    for path in fixtures("posets") {
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let doc = PosetDocument::parse(&text).map_err(|e| e.to_string())?;
        ensure!(doc.to_json() == text, "{} does not round trip", stem(&path));
        count += 1;
    }
    let run = || {
        let graphs: Vec<Document> = enumerate_stable_graphs(1, &tail_names(3))
            .into_iter()
            .map(Document::Modular)
            .collect();
        let c = exhaustive_chain_graphs(2).swap_remove(7);
        let fiber: Vec<Document> = enumerate_gi_graphs_over(&c)
            .unwrap()
            .into_iter()
            .map(Document::GiGraph)
            .collect();
        let model = Document::StableMap(clutch(&c).unwrap());
        [
            serialize_many(&graphs),
            serialize_many(&fiber),
            serialize(&model),
            PosetDocument::from_poset(&strata_poset(3)).to_json(),
            bglr::dot::poset_to_dot(&strata_poset(3)),
            format!("{:?}", enumerate_gi_types(4)),
        ]
    };
    ensure!(run() == run(), "repeated runs differ");
    Ok(format!("{count} fixtures, repeated runs identical"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            name: "GI-type counts",
            budget: secs(1),
            check: gi_type_counts,
        },
        Criterion {
            id: 2,
            name: "chain-type counts",
            budget: secs(1),
            check: chain_type_counts,
        },
        Criterion {
            id: 3,
            name: "fiber law",
            budget: secs(5),
            check: fiber_law,
        },
        Criterion {
            id: 4,
            name: "degree identity",
            budget: secs(1),
            check: degree_identity,
        },
        Criterion {
            id: 5,
            name: "involution laws",
            budget: secs(1),
            check: involution_laws,
        },
        Criterion {
            id: 6,
            name: "strata poset",
            budget: secs(5),
            check: poset_laws,
        },
        Criterion {
            id: 7,
            name: "stable-graph enumeration",
            budget: secs(30),
            check: stable_graph_counts,
        },
        Criterion {
            id: 8,
            name: "GI-graph fiber law",
            budget: secs(60),
            check: gi_graph_fiber_law,
        },
        Criterion {
            id: 9,
            name: "total-degree identity",
            budget: secs(30),
            check: total_degree_identity,
        },
        Criterion {
            id: 10,
            name: "clutch/extract round trip",
            budget: secs(120),
            check: clutch_round_trip,
        },
        Criterion {
            id: 11,
            name: "stabilization",
            budget: secs(60),
            check: stabilization,
        },
        Criterion {
            id: 12,
            name: "serialization",
            budget: secs(10),
            check: serialization,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; over budget {:?}", c.budget)),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(detail) => ("PASS", detail),
            Err(detail) => ("FAIL", detail),
        };
        println!("{status} criterion {:>2} {}: {detail} ({:.2?})", c.id, c.name, elapsed);
        if outcome.is_err() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
