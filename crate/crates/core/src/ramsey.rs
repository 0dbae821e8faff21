//! Monochromatic complete bipartite subgraphs, and the refutation they give:
//! under a `k`-coloring, a monochromatic `K_{k,k}` contains a `k`-set with no
//! rainbow S-tree at all.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Coloring, MultipartiteGraph, VertexId, VertexMask};
use crate::index::k_subsets;
use crate::packing::max_rainbow_packing;
use crate::steiner::enumerate_steiner_trees;
use crate::tree::{is_rainbow, TerminalSet, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("host graph has {0} classes; a bipartite host is required")]
    NotBipartite(usize),
    #[error("biclique size must be at least 1")]
    ZeroSize,
    #[error("the argument needs k >= 4, got {0}")]
    KTooSmall(usize),
    #[error("coloring uses {used} distinct colors, more than k = {k}")]
    TooManyColors { used: usize, k: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A monochromatic `K_{t,t}`: every pair in `side_u x side_v` has `color`.
/// `side_u` lies in class 0 and `side_v` in class 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biclique {
    pub side_u: Vec<VertexId>,
    pub side_v: Vec<VertexId>,
    pub color: u32,
}

impl Biclique {
    /// True iff every cross pair is an edge of `graph` colored `self.color`.
    pub fn check(&self, graph: &MultipartiteGraph, coloring: &Coloring) -> bool {
        self.side_u.iter().all(|&u| {
            self.side_v.iter().all(|&v| {
                u.class == 0
                    && v.class == 1
                    && graph.edge_between(u, v).is_ok_and(|e| coloring.color_at(e) == self.color)
            })
        })
    }
}

/// `rows[color - 1][i]` has bit `j` set iff edge `(small_i, large_j)` has `color`.
fn color_rows(graph: &MultipartiteGraph, coloring: &Coloring, small: usize) -> Vec<Vec<VertexMask>> {
    let large = 1 - small;
    let (ns, nl) = (graph.class_sizes()[small], graph.class_sizes()[large]);
    let mut rows = vec![vec![0 as VertexMask; ns]; coloring.t() as usize];
    for i in 0..ns {
        for j in 0..nl {
            let e = graph
                .edge_between(VertexId::new(small, i), VertexId::new(large, j))
                .expect("cross-class pair is an edge");
            rows[coloring.color_at(e) as usize - 1][i] |= 1 << j;
        }
    }
    rows
}

/// Finds a monochromatic `K_{t,t}`, if any. Colors are tried in increasing
/// order, then `t`-subsets of the smaller class lexicographically; the other
/// side is the `t` lowest common neighbors. The answer is the first hit in
/// that order.
pub fn find_mono_biclique(
    graph: &MultipartiteGraph,
    coloring: &Coloring,
    t: usize,
) -> Result<Option<Biclique>, RamseyError> {
    if !graph.is_bipartite() {
        return Err(RamseyError::NotBipartite(graph.class_count()));
    }
    if t == 0 {
        return Err(RamseyError::ZeroSize);
    }
    let sizes = graph.class_sizes();
    let small = usize::from(sizes[1] < sizes[0]);
    if t > sizes[small] {
        return Ok(None);
    }
    let rows = color_rows(graph, coloring, small);
    let found = rows.par_iter().enumerate().find_map_first(|(ci, row)| {
        k_subsets(sizes[small], t).find_map(|subset| {
            let mut common = !0 as VertexMask;
            let mut rest = subset;
            while rest != 0 {
                common &= row[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            (common.count_ones() as usize >= t).then(|| (ci as u32 + 1, subset, common))
        })
    });
    Ok(found.map(|(color, subset, common)| {
        let side = |class: usize, mask: VertexMask, take: usize| -> Vec<VertexId> {
            (0..128)
                .filter(|&i| mask >> i & 1 == 1)
                .take(take)
                .map(|i| VertexId::new(class, i))
                .collect()
        };
        let small_side = side(small, subset, t);
        let large_side = side(1 - small, common, t);
        let (side_u, side_v) = if small == 0 {
            (small_side, large_side)
        } else {
            (large_side, small_side)
        };
        Biclique { side_u, side_v, color }
    }))
}

/// A `k`-set with no rainbow S-tree, with the evidence behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub terminals: TerminalSet,
    pub biclique: Biclique,
    /// S-trees with at most `k` edges that were enumerated and checked.
    pub trees_checked: usize,
    /// How many of them were rainbow. The argument says zero.
    pub rainbow_trees: usize,
    /// Independent answer from the packing engine.
    pub max_packing: usize,
}

/// Looks for a monochromatic `K_{k,k}` and, if found, returns `S` made of two
/// vertices of its class-1 side and `k - 2` of its class-0 side.
///
/// Any S-tree with at most `k` edges has at least two edges inside the
/// biclique, so it repeats a color. A rainbow tree under at most `k` colors
/// has at most `k` edges, so `S` has no rainbow tree. Both claims are
/// re-checked: every S-tree with at most `k` edges is enumerated and tested,
/// and the packing engine computes the maximum packing.
pub fn refute_with_mono_biclique(
    graph: &MultipartiteGraph,
    coloring: &Coloring,
    k: usize,
) -> Result<Option<Refutation>, RamseyError> {
    if k < 4 {
        return Err(RamseyError::KTooSmall(k));
    }
    let used = coloring.distinct_colors();
    if used > k {
        return Err(RamseyError::TooManyColors { used, k });
    }
    let Some(biclique) = find_mono_biclique(graph, coloring, k)? else {
        return Ok(None);
    };
    let chosen: Vec<VertexId> = biclique.side_v[..2]
        .iter()
        .chain(&biclique.side_u[..k - 2])
        .copied()
        .collect();
    let terminals = TerminalSet::new(graph, &chosen)?;
    let mut trees_checked = 0;
    let mut rainbow_trees = 0;
    for tree in enumerate_steiner_trees(graph, &terminals, k) {
        trees_checked += 1;
        if is_rainbow(&tree, coloring) {
            rainbow_trees += 1;
        }
    }
    let max_packing = max_rainbow_packing(graph, coloring, &terminals, 1).count;
    Ok(Some(Refutation {
        terminals,
        biclique,
        trees_checked,
        rainbow_trees,
        max_packing,
    }))
}
