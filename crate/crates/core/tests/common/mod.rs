//! Brute-force oracle for stable graph enumeration.
//!
//! Independent of the library's canonical forms: candidate graphs are
//! (genus vector, edge multiset, tail placement) triples and isomorphism is
//! decided by minimizing over all vertex permutations.

use std::collections::BTreeSet;

use bglr::ModularGraph;

/// (genus per vertex, sorted edges as vertex pairs, vertex of each tail)
pub type Key = (Vec<u32>, Vec<(usize, usize)>, Vec<usize>);

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn canonical_key(genus: &[u32], edges: &[(usize, usize)], tails: &[usize]) -> Key {
    permutations(genus.len())
        .into_iter()
        .map(|p| {
            let mut g = vec![0; genus.len()];
            for (v, &gv) in genus.iter().enumerate() {
                g[p[v]] = gv;
            }
            let mut e: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
            e.sort();
            (g, e, tails.iter().map(|&v| p[v]).collect())
        })
        .min()
        .unwrap()
}

fn multisets(pool: &[(usize, usize)], size: usize, from: usize) -> Vec<Vec<(usize, usize)>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in from..pool.len() {
        for mut rest in multisets(pool, size - 1, k) {
            rest.insert(0, pool[k]);
            out.push(rest);
        }
    }
    out
}

fn genus_vectors(len: usize, total: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![vec![]];
    }
    (0..=total)
        .flat_map(|g| {
            genus_vectors(len - 1, total - g).into_iter().map(move |mut rest| {
                rest.insert(0, g);
                rest
            })
        })
        .collect()
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn oracle(genus: u32, n: usize) -> BTreeSet<Key> {
    let mut found = BTreeSet::new();
    let max_vertices = (2 * genus as usize + n).saturating_sub(2);
    for v in 1..=max_vertices {
        let pool: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        for gv in genus_vectors(v, genus) {
            let b1 = genus - gv.iter().sum::<u32>();
            let edge_count = v - 1 + b1 as usize;
            for edges in multisets(&pool, edge_count, 0) {
                if !connected(v, &edges) {
                    continue;
                }
                let placements = (0..n).fold(vec![vec![]], |acc: Vec<Vec<usize>>, _| {
                    acc.into_iter()
                        .flat_map(|p| {
                            (0..v).map(move |x| {
                                let mut q = p.clone();
                                q.push(x);
                                q
                            })
                        })
                        .collect()
                });
                for tails in placements {
                    let stable = (0..v).all(|x| {
                        let valence = edges
                            .iter()
                            .map(|&(a, b)| (a == x) as usize + (b == x) as usize)
                            .sum::<usize>()
                            + tails.iter().filter(|&&t| t == x).count();
                        match gv[x] {
                            0 => valence >= 3,
                            1 => valence >= 1,
                            _ => true,
                        }
                    });
                    if stable {
                        found.insert(canonical_key(&gv, &edges, &tails));
                    }
                }
            }
        }
    }
    found
}

pub fn key_of(m: &ModularGraph) -> Key {
    let graph = m.graph();
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .map(|&(f, g)| (graph.boundary(f), graph.boundary(g)))
        .collect();
    let by_label: std::collections::BTreeMap<&str, usize> = m
        .tail_labels()
        .iter()
        .map(|(&f, name)| (name.as_str(), graph.boundary(f)))
        .collect();
    let tails: Vec<usize> = by_label.values().copied().collect();
    canonical_key(m.genera(), &edges, &tails)
}
