//! Complete multipartite host graphs, their canonical vertex and edge order,
//! and edge colorings.

use std::fmt;

use thiserror::Error;

/// Largest vertex count the bit-mask based searches support.
pub const MAX_VERTICES: usize = 128;

/// Bit mask over flat vertex indices.
pub type VertexMask = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a complete multipartite graph needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("class {0} has size zero")]
    EmptyClass(usize),
    #[error("graph has {0} vertices, more than the supported {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("{0} and {1} lie in the same class, so they are not adjacent")]
    SameClass(VertexId, VertexId),
    #[error("edge index {0} is out of range (graph has {1} edges)")]
    EdgeIndexOutOfRange(usize, usize),
    #[error("coloring has {got} entries, graph has {expected} edges")]
    ColoringLength { expected: usize, got: usize },
    #[error("color {color} on edge {edge} is outside 1..={t}")]
    ColorOutOfRange { edge: usize, color: u32, t: u32 },
    #[error("number of colors must be at least 1")]
    NoColors,
}

/// A vertex named by its class and its position inside that class.
///
/// The derived order is `(class, offset)`, which is also the flat index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub class: usize,
    pub offset: usize,
}

impl VertexId {
    pub const fn new(class: usize, offset: usize) -> Self {
        Self { class, offset }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.class, self.offset)
    }
}

/// An edge between two vertices of distinct classes, smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Result<Self, GraphError> {
        if a.class == b.class {
            return Err(GraphError::SameClass(a, b));
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Ok(Self { lo, hi })
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: VertexId) -> Option<VertexId> {
        if self.lo == v {
            Some(self.hi)
        } else if self.hi == v {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// The complete multipartite graph `K_{n_1, ..., n_r}`.
///
/// Vertices are numbered class by class (flat index = class start + offset).
/// Edges are numbered by `(class_i, class_j, offset_i, offset_j)` with
/// `class_i < class_j`; the position in that order is the edge index used
/// by colorings, certificates and reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipartiteGraph {
    class_sizes: Vec<usize>,
    class_start: Vec<usize>,
    // pair_base[i * r + j] = first edge index of the (i, j) block, i < j
    pair_base: Vec<usize>,
    edges: Vec<Edge>,
    endpoints: Vec<(u8, u8)>,
    // adjacency[v] = (neighbor flat index, edge index), ascending by edge index
    adjacency: Vec<Vec<(u8, u32)>>,
}

impl MultipartiteGraph {
    pub fn new(class_sizes: &[usize]) -> Result<Self, GraphError> {
        let r = class_sizes.len();
        if r < 2 {
            return Err(GraphError::TooFewClasses(r));
        }
        if let Some(i) = class_sizes.iter().position(|&n| n == 0) {
            return Err(GraphError::EmptyClass(i));
        }
        let total: usize = class_sizes.iter().sum();
        if total > MAX_VERTICES {
            return Err(GraphError::TooLarge(total));
        }

        let mut class_start = Vec::with_capacity(r);
        let mut acc = 0;
        for &n in class_sizes {
            class_start.push(acc);
            acc += n;
        }

        let mut pair_base = vec![usize::MAX; r * r];
        let mut edges = Vec::new();
        let mut endpoints = Vec::new();
        for ci in 0..r {
            for cj in ci + 1..r {
                pair_base[ci * r + cj] = edges.len();
                for oi in 0..class_sizes[ci] {
                    for oj in 0..class_sizes[cj] {
                        edges.push(Edge {
                            lo: VertexId::new(ci, oi),
                            hi: VertexId::new(cj, oj),
                        });
                        endpoints.push((
                            (class_start[ci] + oi) as u8,
                            (class_start[cj] + oj) as u8,
                        ));
                    }
                }
            }
        }

        let mut adjacency = vec![Vec::new(); total];
        for (idx, &(a, b)) in endpoints.iter().enumerate() {
            adjacency[a as usize].push((b, idx as u32));
            adjacency[b as usize].push((a, idx as u32));
        }

        Ok(Self {
            class_sizes: class_sizes.to_vec(),
            class_start,
            pair_base,
            edges,
            endpoints,
            adjacency,
        })
    }

    /// `K_{n,n}`.
    pub fn balanced_bipartite(n: usize) -> Result<Self, GraphError> {
        Self::new(&[n, n])
    }

    /// `K_{r x n}`: `r` classes of size `n`.
    pub fn equipartite(r: usize, n: usize) -> Result<Self, GraphError> {
        Self::new(&vec![n; r])
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_bipartite(&self) -> bool {
        self.class_sizes.len() == 2
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.class < self.class_sizes.len() && v.offset < self.class_sizes[v.class]
    }

    /// Flat index of `v` in canonical vertex order.
    pub fn vertex_index(&self, v: VertexId) -> Result<usize, GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.class_start[v.class] + v.offset)
    }

    /// Inverse of [`vertex_index`](Self::vertex_index). Panics when out of range.
    pub fn vertex(&self, index: usize) -> VertexId {
        assert!(index < self.vertex_count(), "vertex index out of range");
        let class = match self.class_start.binary_search(&index) {
            Ok(c) => c,
            Err(c) => c - 1,
        };
        VertexId::new(class, index - self.class_start[class])
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(move |i| self.vertex(i))
    }

    pub fn class_vertices(&self, class: usize) -> impl Iterator<Item = VertexId> {
        let n = self.class_sizes.get(class).copied().unwrap_or(0);
        (0..n).map(move |o| VertexId::new(class, o))
    }

    /// Mask of all vertices in `class`.
    pub fn class_mask(&self, class: usize) -> VertexMask {
        let n = self.class_sizes[class];
        let ones = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        ones << self.class_start[class]
    }

    /// All edges in canonical order; an edge's index is its position here.
    pub fn canonical_edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Result<Edge, GraphError> {
        self.edges
            .get(index)
            .copied()
            .ok_or(GraphError::EdgeIndexOutOfRange(index, self.edges.len()))
    }

    /// Canonical index of `e`.
    pub fn edge_index(&self, e: Edge) -> Result<usize, GraphError> {
        let (a, b) = e.endpoints();
        if !self.contains_vertex(a) {
            return Err(GraphError::UnknownVertex(a));
        }
        if !self.contains_vertex(b) {
            return Err(GraphError::UnknownVertex(b));
        }
        let r = self.class_count();
        Ok(self.pair_base[a.class * r + b.class] + a.offset * self.class_sizes[b.class] + b.offset)
    }

    /// Canonical index of the edge joining `a` and `b`.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Result<usize, GraphError> {
        self.edge_index(Edge::new(a, b)?)
    }

    /// Flat endpoint indices of edge `index` (smaller first).
    pub(crate) fn edge_ends(&self, index: usize) -> (usize, usize) {
        let (a, b) = self.endpoints[index];
        (a as usize, b as usize)
    }

    /// `(neighbor flat index, edge index)` pairs of flat vertex `v`, by edge index.
    pub(crate) fn neighbors(&self, v: usize) -> &[(u8, u32)] {
        &self.adjacency[v]
    }

    pub(crate) fn mask_to_vertices(&self, mut mask: VertexMask) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            out.push(self.vertex(i));
            mask &= mask - 1;
        }
        out
    }
}

/// A total edge coloring with colors `1..=t`, stored in canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    t: u32,
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(graph: &MultipartiteGraph, t: u32, colors: Vec<u32>) -> Result<Self, GraphError> {
        if t == 0 {
            return Err(GraphError::NoColors);
        }
        if colors.len() != graph.edge_count() {
            return Err(GraphError::ColoringLength {
                expected: graph.edge_count(),
                got: colors.len(),
            });
        }
        if let Some((edge, &color)) = colors.iter().enumerate().find(|(_, &c)| c == 0 || c > t) {
            return Err(GraphError::ColorOutOfRange { edge, color, t });
        }
        Ok(Self { t, colors })
    }

    /// Every edge gets `color`; the palette is `1..=t`.
    pub fn constant(graph: &MultipartiteGraph, t: u32, color: u32) -> Result<Self, GraphError> {
        Self::new(graph, t, vec![color; graph.edge_count()])
    }

    /// Coloring of `K_{m,n}` where `u_i v_j` gets `((i + j) mod t) + 1`.
    pub fn latin(graph: &MultipartiteGraph, t: u32) -> Result<Self, GraphError> {
        if t == 0 {
            return Err(GraphError::NoColors);
        }
        let colors = graph
            .canonical_edges()
            .iter()
            .map(|e| {
                let (a, b) = e.endpoints();
                ((a.offset + b.offset) as u32 % t) + 1
            })
            .collect();
        Self::new(graph, t, colors)
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Color of edge `index`. Panics if out of range.
    pub fn color_at(&self, index: usize) -> u32 {
        self.colors[index]
    }

    pub fn color_of(&self, graph: &MultipartiteGraph, e: Edge) -> Result<u32, GraphError> {
        let idx = graph.edge_index(e)?;
        self.colors
            .get(idx)
            .copied()
            .ok_or(GraphError::EdgeIndexOutOfRange(idx, self.colors.len()))
    }

    /// Number of distinct colors actually used.
    pub fn distinct_colors(&self) -> usize {
        let mut seen = vec![false; self.t as usize + 1];
        let mut count = 0;
        for &c in &self.colors {
            if !seen[c as usize] {
                seen[c as usize] = true;
                count += 1;
            }
        }
        count
    }

    /// Replace every occurrence of `from` by `into`; the palette is unchanged.
    pub fn merge_colors(&self, from: u32, into: u32) -> Self {
        let colors = self
            .colors
            .iter()
            .map(|&c| if c == from { into } else { c })
            .collect();
        Self { t: self.t, colors }
    }
}
