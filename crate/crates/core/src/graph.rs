//! Finite simple undirected graphs on dense labels `0..n`.

use num_rational::Ratio;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::vset::VertexSet;

/// Name of the generator behind [`gnp`], recorded in experiment reports.
pub const PRNG_NAME: &str = "chacha8/v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph of order {n}")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("minimum degree of the empty graph is undefined")]
    EmptyGraph,
    #[error("edge probability {0} outside [0,1]")]
    BadProbability(Ratio<u64>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<VertexSet>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![VertexSet::new(); n],
            m: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !g.adj[u].insert(v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.adj[v].insert(u);
            g.m += 1;
        }
        Ok(g)
    }

    pub(crate) fn from_adjacency_unchecked(adj: Vec<VertexSet>) -> Self {
        let m = adj.iter().map(VertexSet::len).sum::<usize>() / 2;
        Self { adj, m }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.order())
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.order() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex { vertex: v, n: self.order() })
        }
    }

    pub fn check_set(&self, x: &VertexSet) -> Result<(), GraphError> {
        match x.max() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Adjacency as single-word masks, available when `n <= 64`.
    pub fn masks(&self) -> Option<Vec<u64>> {
        if self.order() > 64 {
            return None;
        }
        self.adj.iter().map(VertexSet::to_mask).collect()
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adj[v].len())
    }

    pub fn min_degree(&self) -> Result<usize, GraphError> {
        self.adj.iter().map(VertexSet::len).min().ok_or(GraphError::EmptyGraph)
    }

    /// Union of the open neighborhoods of the members of `x`. The result may
    /// intersect `x`; `N(∅) = ∅`.
    pub fn neighborhood(&self, x: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_set(x)?;
        Ok(x.iter().fold(VertexSet::new(), |acc, v| acc.union(&self.adj[v])))
    }

    /// True iff no edge has both endpoints in `s`.
    pub fn is_independent(&self, s: &VertexSet) -> Result<bool, GraphError> {
        self.check_set(s)?;
        Ok(s.iter().all(|v| self.adj[v].is_disjoint(s)))
    }

    /// Induced subgraph on `V ∖ x`, together with the map from new labels to
    /// the original ones (ascending).
    pub fn delete_vertices(&self, x: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_set(x)?;
        let keep: Vec<usize> = (0..self.order()).filter(|v| !x.contains(*v)).collect();
        let mut new_label = vec![usize::MAX; self.order()];
        for (i, &v) in keep.iter().enumerate() {
            new_label[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|u| !x.contains(*u))
                    .map(|u| new_label[u])
                    .collect()
            })
            .collect();
        Ok((Graph::from_adjacency_unchecked(adj), keep))
    }

    /// Subgraph degree `d_{G-S}(v)`, i.e. neighbors of `v` outside `s`.
    pub fn degree_outside(&self, v: usize, s: &VertexSet) -> usize {
        self.adj[v].difference(s).len()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges=", self.order())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

pub fn complete(n: usize) -> Graph {
    let adj = (0..n)
        .map(|v| {
            let mut s = VertexSet::full(n);
            s.remove(v);
            s
        })
        .collect();
    Graph::from_adjacency_unchecked(adj)
}

/// `s` disjoint edges `{2i, 2i+1}`.
pub fn matching(s: usize) -> Graph {
    Graph::from_edges(2 * s, (0..s).map(|i| (2 * i, 2 * i + 1))).expect("matching is simple")
}

/// Vertices of `h` are shifted by `g.order()`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let off = g.order();
    let edges = g.edges().chain(h.edges().map(|(u, v)| (u + off, v + off)));
    Graph::from_edges(off + h.order(), edges).expect("disjoint union is simple")
}

/// Disjoint union plus every edge between the two sides.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let off = g.order();
    let cross = (0..off).flat_map(|u| (0..h.order()).map(move |v| (u, v + off)));
    let edges = g
        .edges()
        .chain(h.edges().map(|(u, v)| (u + off, v + off)))
        .chain(cross);
    Graph::from_edges(off + h.order(), edges).expect("join is simple")
}

/// Erdős–Rényi `G(n, p)` with exact rational `p`. Pairs `(u, v)`, `u < v`, are
/// visited in lexicographic order and each consumes one 64-bit draw `x`; the
/// edge is kept iff `floor(x * den / 2^64) < num`.
pub fn gnp(n: usize, p: Ratio<u64>, seed: u64) -> Result<Graph, GraphError> {
    if *p.denom() == 0 || p.numer() > p.denom() {
        return Err(GraphError::BadProbability(p));
    }
    let (num, den) = (*p.numer() as u128, *p.denom() as u128);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let x = rng.next_u64() as u128;
            if (x * den) >> 64 < num {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}
