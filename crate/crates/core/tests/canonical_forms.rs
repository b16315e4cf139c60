use bglr::canon::{canonical_form, is_isomorphic, DecorationSchema, Decorations, Label};
use bglr::Graph;
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Sample {
    vertex_labels: Vec<i64>,
    edges: Vec<(usize, usize, i64, i64)>,
    tails: Vec<(usize, i64)>,
}

impl Sample {
    fn build(&self) -> (Graph, Decorations) {
        let mut boundary = Vec::new();
        let mut involution = Vec::new();
        let mut flag = Vec::new();
        for &(a, b, x, y) in &self.edges {
            let f = boundary.len();
            boundary.extend([a, b]);
            involution.extend([f + 1, f]);
            flag.extend([Label::Int(x), Label::Int(y)]);
        }
        for &(v, x) in &self.tails {
            involution.push(boundary.len());
            boundary.push(v);
            flag.push(Label::Int(x));
        }
        let graph = Graph::new(self.vertex_labels.len(), boundary, involution).unwrap();
        let decorations = Decorations {
            schema: DecorationSchema::UNDECORATED,
            vertex: self.vertex_labels.iter().map(|&x| Label::Int(x)).collect(),
            flag,
        };
        (graph, decorations)
    }

    /// Brute-force isomorphism test over vertex permutations, comparing the
    /// multisets of unordered labeled edges and labeled tails.
    fn isomorphic(&self, other: &Sample) -> bool {
        let n = self.vertex_labels.len();
        if n != other.vertex_labels.len()
            || self.edges.len() != other.edges.len()
            || self.tails.len() != other.tails.len()
        {
            return false;
        }
        let target = other.normal_form(&(0..n).collect::<Vec<_>>());
        permutations(n).iter().any(|p| {
            (0..n).all(|v| self.vertex_labels[v] == other.vertex_labels[p[v]]) && self.normal_form(p) == target
        })
    }

    fn normal_form(&self, p: &[usize]) -> NormalForm {
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b, x, y)| (p[a], x, p[b], y).min((p[b], y, p[a], x)))
            .collect();
        edges.sort();
        let mut tails: Vec<_> = self.tails.iter().map(|&(v, x)| (p[v], x)).collect();
        tails.sort();
        (edges, tails)
    }

    fn permuted(&self, p: &[usize]) -> Sample {
        let mut vertex_labels = vec![0; self.vertex_labels.len()];
        for (v, &x) in self.vertex_labels.iter().enumerate() {
            vertex_labels[p[v]] = x;
        }
        Sample {
            vertex_labels,
            edges: self
                .edges
                .iter()
                .map(|&(a, b, x, y)| (p[a], p[b], x, y))
                .rev()
                .collect(),
            tails: self.tails.iter().map(|&(v, x)| (p[v], x)).rev().collect(),
        }
    }
}

/// Sorted unordered labeled edges and sorted labeled tails.
type NormalForm = (Vec<(usize, i64, usize, i64)>, Vec<(usize, i64)>);

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

fn sample(max_vertices: usize, labels: i64) -> impl Strategy<Value = Sample> {
    (1..=max_vertices).prop_flat_map(move |n| {
        (
            prop::collection::vec(0..labels, n),
            prop::collection::vec((0..n, 0..n, 0..labels, 0..labels), 0..=n + 3),
            prop::collection::vec((0..n, 0..labels), 0..=4),
        )
            .prop_map(|(vertex_labels, edges, tails)| Sample {
                vertex_labels,
                edges,
                tails,
            })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn relabeling_preserves_canonical_form(
        (s, fp, vp) in sample(8, 2).prop_flat_map(|s| {
            let (g, _) = s.build();
            (Just(s), permutation(g.flag_count()), permutation(g.vertex_count()))
        })
    ) {
        let (g, d) = s.build();
        let g2 = g.relabel(&fp, &vp).unwrap();
        let d2 = d.relabel(&fp, &vp);
        prop_assert_eq!(canonical_form(&g, &d).unwrap(), canonical_form(&g2, &d2).unwrap());
        let witness = is_isomorphic(&g, &d, &g2, &d2).unwrap();
        prop_assert!(witness.is_some());
        prop_assert!(witness.unwrap().transports(&g, &d, &g2, &d2));
    }

    #[test]
    fn canonical_form_decides_isomorphism(
        (a, b) in sample(5, 2).prop_flat_map(|s| {
            let n = s.vertex_labels.len();
            let other = prop_oneof![
                permutation(n).prop_map({ let s = s.clone(); move |p| s.permuted(&p) }),
                permutation(n).prop_map({
                    let s = s.clone();
                    move |p| {
                        let mut t = s.permuted(&p);
                        if let Some(e) = t.edges.first_mut() {
                            e.3 = 1 - e.3;
                        } else {
                            t.vertex_labels[0] = 1 - t.vertex_labels[0];
                        }
                        t
                    }
                }),
                sample(5, 2),
            ];
            (Just(s), other)
        })
    ) {
        let (g1, d1) = a.build();
        let (g2, d2) = b.build();
        let expected = a.isomorphic(&b);
        let same = canonical_form(&g1, &d1).unwrap() == canonical_form(&g2, &d2).unwrap();
        prop_assert_eq!(same, expected);
        let witness = is_isomorphic(&g1, &d1, &g2, &d2).unwrap();
        prop_assert_eq!(witness.is_some(), expected);
        if let Some(w) = witness {
            prop_assert!(w.transports(&g1, &d1, &g2, &d2));
        }
    }
}

#[test]
fn parallel_edges_and_loops_are_distinguished() {
    let loop_pair = Sample {
        vertex_labels: vec![0, 0],
        edges: vec![(0, 0, 0, 0), (1, 1, 0, 0)],
        tails: vec![],
    };
    let double_edge = Sample {
        vertex_labels: vec![0, 0],
        edges: vec![(0, 1, 0, 0), (0, 1, 0, 0)],
        tails: vec![],
    };
    let (g1, d1) = loop_pair.build();
    let (g2, d2) = double_edge.build();
    assert_ne!(canonical_form(&g1, &d1).unwrap(), canonical_form(&g2, &d2).unwrap());
    assert!(is_isomorphic(&g1, &d1, &g2, &d2).unwrap().is_none());
}
