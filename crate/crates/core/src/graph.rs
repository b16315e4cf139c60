//! Finite graphs in the flag formalism.
//!
//! A graph is a set of flags (half-edges), a set of vertices, a boundary map
//! sending every flag to the vertex it starts from, and an involution on the
//! flags. Fixed points of the involution are tails; two-element orbits are
//! edges. Loops, parallel edges and disconnected graphs are all allowed here.

use thiserror::Error;

pub type FlagId = usize;
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("flag {flag} has boundary vertex {vertex}, but the graph has {vertex_count} vertices")]
    BoundaryOutOfRange {
        flag: FlagId,
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("flag {flag} is sent to {image}, which is not a flag")]
    InvolutionOutOfRange { flag: FlagId, image: FlagId },
    #[error("involution is not an involution at flag {flag}")]
    NotAnInvolution { flag: FlagId },
    #[error("boundary has {boundary} entries but involution has {involution}")]
    LengthMismatch { boundary: usize, involution: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown flag {0}")]
    UnknownFlag(FlagId),
    #[error("permutation of length {got} does not match {expected} elements")]
    BadPermutation { expected: usize, got: usize },
}

/// Graph `(F, V, ∂, j)` with flags `0..flag_count()` and vertices
/// `0..vertex_count()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    boundary: Vec<VertexId>,
    involution: Vec<FlagId>,
}

impl Graph {
    pub fn new(vertex_count: usize, boundary: Vec<VertexId>, involution: Vec<FlagId>) -> Result<Self, GraphError> {
        if boundary.len() != involution.len() {
            return Err(GraphError::LengthMismatch {
                boundary: boundary.len(),
                involution: involution.len(),
            });
        }
        for (flag, &vertex) in boundary.iter().enumerate() {
            if vertex >= vertex_count {
                return Err(GraphError::BoundaryOutOfRange {
                    flag,
                    vertex,
                    vertex_count,
                });
            }
        }
        for (flag, &image) in involution.iter().enumerate() {
            if image >= involution.len() {
                return Err(GraphError::InvolutionOutOfRange { flag, image });
            }
            if involution[image] != flag {
                return Err(GraphError::NotAnInvolution { flag });
            }
        }
        Ok(Graph {
            vertex_count,
            boundary,
            involution,
        })
    }

    /// Graph with `vertex_count` vertices and no flags.
    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            vertex_count,
            boundary: Vec::new(),
            involution: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn flag_count(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary(&self, flag: FlagId) -> VertexId {
        self.boundary[flag]
    }

    pub fn involution(&self, flag: FlagId) -> FlagId {
        self.involution[flag]
    }

    pub fn boundary_map(&self) -> &[VertexId] {
        &self.boundary
    }

    pub fn involution_map(&self) -> &[FlagId] {
        &self.involution
    }

    pub fn is_tail(&self, flag: FlagId) -> bool {
        self.involution[flag] == flag
    }

    /// Fixed points of the involution, ascending.
    pub fn tails(&self) -> Vec<FlagId> {
        (0..self.flag_count()).filter(|&f| self.is_tail(f)).collect()
    }

    /// All pairs `(f, j(f))` with `j(f) != f`, ascending by first flag.
    pub fn oriented_edges(&self) -> Vec<(FlagId, FlagId)> {
        (0..self.flag_count())
            .filter(|&f| !self.is_tail(f))
            .map(|f| (f, self.involution[f]))
            .collect()
    }

    /// Unoriented edges, each given by its canonical orientation (smaller flag
    /// first).
    pub fn edges(&self) -> Vec<(FlagId, FlagId)> {
        (0..self.flag_count())
            .filter(|&f| self.involution[f] > f)
            .map(|f| (f, self.involution[f]))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.involution.iter().enumerate().filter(|&(f, &j)| j > f).count()
    }

    /// Flags starting at `vertex`, ascending.
    pub fn flags_at(&self, vertex: VertexId) -> Vec<FlagId> {
        (0..self.flag_count()).filter(|&f| self.boundary[f] == vertex).collect()
    }

    pub fn valence(&self, vertex: VertexId) -> Result<usize, GraphError> {
        if vertex >= self.vertex_count {
            return Err(GraphError::UnknownVertex(vertex));
        }
        Ok(self.boundary.iter().filter(|&&v| v == vertex).count())
    }

    /// Connected component index of every vertex, numbered in order of first
    /// appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (a, b) in self.edges() {
            let ra = find(&mut parent, self.boundary[a]);
            let rb = find(&mut parent, self.boundary[b]);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut index = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        let mut out = Vec::with_capacity(self.vertex_count);
        for v in 0..self.vertex_count {
            let root = find(&mut parent, v);
            if index[root] == usize::MAX {
                index[root] = next;
                next += 1;
            }
            out.push(index[root]);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.components().iter().all(|&c| c == 0)
    }

    /// Number of connected components and first Betti number of the
    /// topological realization. Tails do not contribute.
    pub fn betti(&self) -> Betti {
        let components = self.components().into_iter().max().map_or(0, |m| m + 1);
        let b1 = self.edge_count() + components - self.vertex_count;
        Betti { components, b1 }
    }

    /// Image of this graph under relabeling: flag `f` becomes
    /// `flag_perm[f]` and vertex `v` becomes `vertex_perm[v]`.
    pub fn relabel(&self, flag_perm: &[FlagId], vertex_perm: &[VertexId]) -> Result<Graph, GraphError> {
        check_permutation(flag_perm, self.flag_count())?;
        check_permutation(vertex_perm, self.vertex_count)?;
        let mut boundary = vec![0; self.flag_count()];
        let mut involution = vec![0; self.flag_count()];
        for f in 0..self.flag_count() {
            boundary[flag_perm[f]] = vertex_perm[self.boundary[f]];
            involution[flag_perm[f]] = flag_perm[self.involution[f]];
        }
        Ok(Graph {
            vertex_count: self.vertex_count,
            boundary,
            involution,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Betti {
    pub components: usize,
    pub b1: usize,
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<(), GraphError> {
    if perm.len() != n {
        return Err(GraphError::BadPermutation {
            expected: n,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(GraphError::BadPermutation {
                expected: n,
                got: perm.len(),
            });
        }
        seen[p] = true;
    }
    Ok(())
}
