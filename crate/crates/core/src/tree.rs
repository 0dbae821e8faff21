//! Terminal sets, S-trees, the rainbow predicate and the explicit star and
//! double-star tree families.

use std::fmt;

use thiserror::Error;

use crate::graph::{Coloring, GraphError, MultipartiteGraph, VertexId, VertexMask};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("a terminal set needs at least 2 vertices, got {0}")]
    TooFewTerminals(usize),
    #[error("terminal {0} is listed twice")]
    DuplicateTerminal(VertexId),
    #[error("edge {0} is listed twice")]
    DuplicateEdge(usize),
    #[error("edge set is not a tree (it has a cycle or is disconnected)")]
    NotATree,
    #[error("terminal {0} is not covered by the tree")]
    MissingTerminal(VertexId),
    #[error("non-terminal vertex {0} is a leaf")]
    SteinerLeaf(VertexId),
    #[error("terminal sets differ")]
    TerminalMismatch,
    #[error("center {0} is itself a terminal")]
    CenterIsTerminal(VertexId),
    #[error("class of center {center} contains terminal {terminal}")]
    CenterClassHasTerminal { center: VertexId, terminal: VertexId },
    #[error("pair vertex {0} is a terminal")]
    PairVertexIsTerminal(VertexId),
    #[error("pair vertex {0} would be a non-terminal leaf")]
    PairVertexDangling(VertexId),
    #[error("every class contains a terminal, so there is no star family")]
    NoTerminalFreeClass,
    #[error("terminals hit fewer than two classes, so there is no double-star family")]
    SingleClassTerminals,
}

/// A set of `k >= 2` distinct terminal vertices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TerminalSet {
    vertices: Vec<VertexId>,
    mask: VertexMask,
}

impl TerminalSet {
    pub fn new(graph: &MultipartiteGraph, vertices: &[VertexId]) -> Result<Self, TreeError> {
        if vertices.len() < 2 {
            return Err(TreeError::TooFewTerminals(vertices.len()));
        }
        let mut mask: VertexMask = 0;
        for &v in vertices {
            let bit = 1u128 << graph.vertex_index(v)?;
            if mask & bit != 0 {
                return Err(TreeError::DuplicateTerminal(v));
            }
            mask |= bit;
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        Ok(Self {
            vertices: sorted,
            mask,
        })
    }

    pub(crate) fn from_mask(graph: &MultipartiteGraph, mask: VertexMask) -> Self {
        Self {
            vertices: graph.mask_to_vertices(mask),
            mask,
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn mask(&self) -> VertexMask {
        self.mask
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Classes that contain at least one terminal, ascending.
    pub fn hit_classes(&self) -> Vec<usize> {
        let mut classes: Vec<usize> = self.vertices.iter().map(|v| v.class).collect();
        classes.dedup();
        classes
    }

    pub fn in_class(&self, class: usize) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied().filter(move |v| v.class == class)
    }
}

impl fmt::Display for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A tree connecting a terminal set whose leaves are all terminals.
///
/// Edges are canonical edge indices in ascending order; that list is the
/// tree's signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct STree {
    terminals: TerminalSet,
    edges: Vec<usize>,
    vertex_mask: VertexMask,
}

impl STree {
    /// Checks that `edges` forms a tree covering every terminal with no
    /// non-terminal leaves.
    pub fn new(
        graph: &MultipartiteGraph,
        terminals: &TerminalSet,
        edges: &[usize],
    ) -> Result<Self, TreeError> {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::DuplicateEdge(w[0]));
        }
        for &e in &sorted {
            graph.edge(e)?;
        }

        let n = graph.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut degree = vec![0usize; n];
        let mut mask: VertexMask = 0;
        for &e in &sorted {
            let (a, b) = graph.edge_ends(e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(TreeError::NotATree);
            }
            parent[ra] = rb;
            degree[a] += 1;
            degree[b] += 1;
            mask |= (1u128 << a) | (1u128 << b);
        }
        // acyclic with |V| = |E| + 1 means connected
        if mask.count_ones() as usize != sorted.len() + 1 {
            return Err(TreeError::NotATree);
        }
        let missing = terminals.mask() & !mask;
        if missing != 0 {
            return Err(TreeError::MissingTerminal(graph.vertex(missing.trailing_zeros() as usize)));
        }
        for (v, &d) in degree.iter().enumerate() {
            if d == 1 && terminals.mask() & (1u128 << v) == 0 {
                return Err(TreeError::SteinerLeaf(graph.vertex(v)));
            }
        }
        Ok(Self {
            terminals: terminals.clone(),
            edges: sorted,
            vertex_mask: mask,
        })
    }

    /// Caller guarantees the invariants (used by the enumerator).
    pub(crate) fn from_parts(terminals: TerminalSet, edges: Vec<usize>, vertex_mask: VertexMask) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self {
            terminals,
            edges,
            vertex_mask,
        }
    }

    pub fn terminals(&self) -> &TerminalSet {
        &self.terminals
    }

    /// Canonical edge indices, ascending.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_mask(&self) -> VertexMask {
        self.vertex_mask
    }

    pub fn vertices(&self, graph: &MultipartiteGraph) -> Vec<VertexId> {
        graph.mask_to_vertices(self.vertex_mask)
    }

    /// Vertices of the tree that are not terminals.
    pub fn steiner_vertices(&self, graph: &MultipartiteGraph) -> Vec<VertexId> {
        graph.mask_to_vertices(self.vertex_mask & !self.terminals.mask())
    }
}

/// True iff no two edges of `tree` share a color.
pub fn is_rainbow(tree: &STree, coloring: &Coloring) -> bool {
    edges_rainbow(tree.edges(), coloring)
}

pub(crate) fn edges_rainbow(edges: &[usize], coloring: &Coloring) -> bool {
    if edges.len() > coloring.t() as usize {
        return false;
    }
    let mut seen: u128 = 0;
    let mut wide = Vec::new();
    for &e in edges {
        let c = coloring.color_at(e) as usize;
        if c < 128 {
            if seen & (1 << c) != 0 {
                return false;
            }
            seen |= 1 << c;
        } else {
            if wide.contains(&c) {
                return false;
            }
            wide.push(c);
        }
    }
    true
}

/// The star centered at `center` with one edge to every terminal.
pub fn star_tree(
    graph: &MultipartiteGraph,
    center: VertexId,
    terminals: &TerminalSet,
) -> Result<STree, TreeError> {
    graph.vertex_index(center)?;
    if terminals.contains(center) {
        return Err(TreeError::CenterIsTerminal(center));
    }
    if let Some(terminal) = terminals.in_class(center.class).next() {
        return Err(TreeError::CenterClassHasTerminal { center, terminal });
    }
    let edges = terminals
        .vertices()
        .iter()
        .map(|&s| graph.edge_between(center, s))
        .collect::<Result<Vec<_>, _>>()?;
    STree::new(graph, terminals, &edges)
}

/// The double star on the adjacent pair `(u, v)`: the edge `uv`, `u` joined to
/// the terminals in `v`'s class, and `v` joined to every other terminal.
pub fn double_star_tree(
    graph: &MultipartiteGraph,
    u: VertexId,
    v: VertexId,
    terminals: &TerminalSet,
) -> Result<STree, TreeError> {
    graph.vertex_index(u)?;
    graph.vertex_index(v)?;
    for w in [u, v] {
        if terminals.contains(w) {
            return Err(TreeError::PairVertexIsTerminal(w));
        }
    }
    let mut edges = vec![graph.edge_between(u, v)?];
    let (via_u, via_v): (Vec<VertexId>, Vec<VertexId>) = terminals
        .vertices()
        .iter()
        .partition(|w| w.class == v.class);
    if via_u.is_empty() {
        return Err(TreeError::PairVertexDangling(u));
    }
    if via_v.is_empty() {
        return Err(TreeError::PairVertexDangling(v));
    }
    for w in via_u {
        edges.push(graph.edge_between(u, w)?);
    }
    for w in via_v {
        edges.push(graph.edge_between(v, w)?);
    }
    STree::new(graph, terminals, &edges)
}

/// Stars centered at every vertex of every terminal-free class, in vertex order.
/// The members are pairwise internally disjoint.
pub fn star_family(graph: &MultipartiteGraph, terminals: &TerminalSet) -> Result<Vec<STree>, TreeError> {
    let hit = terminals.hit_classes();
    let free: Vec<usize> = (0..graph.class_count()).filter(|c| !hit.contains(c)).collect();
    if free.is_empty() {
        return Err(TreeError::NoTerminalFreeClass);
    }
    free.into_iter()
        .flat_map(|c| graph.class_vertices(c))
        .map(|center| star_tree(graph, center, terminals))
        .collect()
}

/// The two classes a double-star family is built on: the two lowest classes
/// containing terminals.
pub fn double_star_classes(terminals: &TerminalSet) -> Result<(usize, usize), TreeError> {
    match terminals.hit_classes()[..] {
        [a, b, ..] => Ok((a, b)),
        _ => Err(TreeError::SingleClassTerminals),
    }
}

/// Double stars on pairs `(u_i, v_i)`, where `u_i` is the i-th non-terminal of
/// the first hit class and `v_i` the i-th non-terminal of the second, both in
/// ascending offset order. The members are pairwise internally disjoint.
pub fn double_star_family(
    graph: &MultipartiteGraph,
    terminals: &TerminalSet,
) -> Result<Vec<STree>, TreeError> {
    let (a, b) = double_star_classes(terminals)?;
    let free_a = graph.class_vertices(a).filter(|v| !terminals.contains(*v));
    let free_b: Vec<VertexId> = graph.class_vertices(b).filter(|v| !terminals.contains(*v)).collect();
    free_a
        .zip(free_b)
        .map(|(u, v)| double_star_tree(graph, u, v, terminals))
        .collect()
}
