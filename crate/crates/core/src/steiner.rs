//! Bounded enumeration of S-trees whose leaves are all terminals.
//!
//! Trees are grown from the least terminal. At each step the smallest
//! frontier edge (one endpoint in the tree, one outside, not yet excluded) is
//! branched on: first included, then excluded for the rest of that subtree of
//! the search. Every tree containing the root is reached along exactly one
//! include/exclude path, so no deduplication is needed and the stream order is
//! fully determined by the canonical edge order.

use crate::graph::{Coloring, MultipartiteGraph, VertexMask};
use crate::tree::{STree, TerminalSet};

/// A tree as produced by the enumerator: ascending edge indices and its
/// vertex mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawTree {
    pub edges: Vec<usize>,
    pub vertex_mask: VertexMask,
}

pub(crate) struct RawSteinerTrees<'a> {
    graph: &'a MultipartiteGraph,
    terminals: VertexMask,
    budget: usize,
    rainbow_under: Option<&'a Coloring>,
    tree_mask: VertexMask,
    tree_edges: Vec<u32>,
    forbidden: Vec<bool>,
    used_colors: Vec<bool>,
    // (edge, vertex it added) for includes, (edge, None) for excludes
    decisions: Vec<(u32, Option<u8>)>,
    resume: bool,
    done: bool,
}

impl<'a> RawSteinerTrees<'a> {
    /// With `rainbow_under` set, only trees that are rainbow under that
    /// coloring are produced (a repeated color prunes the whole branch).
    pub fn new(
        graph: &'a MultipartiteGraph,
        terminals: VertexMask,
        max_edges: usize,
        rainbow_under: Option<&'a Coloring>,
    ) -> Self {
        let budget = max_edges.min(graph.vertex_count().saturating_sub(1));
        let root = terminals.trailing_zeros();
        let used_colors = rainbow_under.map_or(Vec::new(), |c| vec![false; c.t() as usize + 1]);
        Self {
            graph,
            terminals,
            budget,
            rainbow_under,
            tree_mask: 1u128 << root,
            tree_edges: Vec::with_capacity(budget),
            forbidden: vec![false; graph.edge_count()],
            used_colors,
            decisions: Vec::new(),
            resume: false,
            done: terminals == 0,
        }
    }

    fn frontier_edge(&self) -> Option<(u32, usize)> {
        let mut best: Option<(u32, usize)> = None;
        let mut rest = self.tree_mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for &(nb, e) in self.graph.neighbors(v) {
                if best.is_some_and(|(b, _)| e >= b) {
                    break;
                }
                if self.tree_mask & (1u128 << nb) != 0 || self.forbidden[e as usize] {
                    continue;
                }
                best = Some((e, nb as usize));
                break;
            }
        }
        best
    }

    fn include(&mut self, e: u32, outside: usize) {
        self.tree_mask |= 1u128 << outside;
        self.tree_edges.push(e);
        if let Some(c) = self.rainbow_under {
            self.used_colors[c.color_at(e as usize) as usize] = true;
        }
        self.decisions.push((e, Some(outside as u8)));
    }

    fn exclude(&mut self, e: u32) {
        self.forbidden[e as usize] = true;
        self.decisions.push((e, None));
    }

    /// Undo decisions up to the most recent include and flip it to an exclude.
    fn backtrack(&mut self) -> bool {
        while let Some((e, added)) = self.decisions.pop() {
            match added {
                Some(vertex) => {
                    self.tree_edges.pop();
                    self.tree_mask &= !(1u128 << vertex);
                    if let Some(c) = self.rainbow_under {
                        self.used_colors[c.color_at(e as usize) as usize] = false;
                    }
                    self.exclude(e);
                    return true;
                }
                None => self.forbidden[e as usize] = false,
            }
        }
        false
    }

    fn leaves_are_terminals(&self) -> bool {
        let n = self.graph.vertex_count();
        let mut degree = [0u8; crate::graph::MAX_VERTICES];
        for &e in &self.tree_edges {
            let (a, b) = self.graph.edge_ends(e as usize);
            degree[a] = degree[a].saturating_add(1);
            degree[b] = degree[b].saturating_add(1);
        }
        (0..n).all(|v| degree[v] != 1 || self.terminals & (1u128 << v) != 0)
    }

    fn snapshot(&self) -> RawTree {
        let mut edges: Vec<usize> = self.tree_edges.iter().map(|&e| e as usize).collect();
        edges.sort_unstable();
        RawTree {
            edges,
            vertex_mask: self.tree_mask,
        }
    }
}

impl Iterator for RawSteinerTrees<'_> {
    type Item = RawTree;

    fn next(&mut self) -> Option<RawTree> {
        if self.done {
            return None;
        }
        if self.resume {
            self.resume = false;
            if !self.backtrack() {
                self.done = true;
                return None;
            }
        }
        loop {
            let missing = (self.terminals & !self.tree_mask).count_ones() as usize;
            let room = self.budget - self.tree_edges.len();
            if missing <= room {
                if room > 0 {
                    if let Some((e, outside)) = self.frontier_edge() {
                        let repeats = self.rainbow_under.is_some_and(|c| {
                            self.used_colors[c.color_at(e as usize) as usize]
                        });
                        if repeats {
                            self.exclude(e);
                        } else {
                            self.include(e, outside);
                        }
                        continue;
                    }
                }
                if missing == 0 && self.leaves_are_terminals() {
                    self.resume = true;
                    return Some(self.snapshot());
                }
            }
            if !self.backtrack() {
                self.done = true;
                return None;
            }
        }
    }
}

/// Every S-tree of `terminals` with at most `max_edges` edges whose leaves are
/// all terminals, each exactly once, in a deterministic order.
///
/// A budget below `k - 1` yields an empty stream.
pub fn enumerate_steiner_trees<'a>(
    graph: &'a MultipartiteGraph,
    terminals: &'a TerminalSet,
    max_edges: usize,
) -> impl Iterator<Item = STree> + 'a {
    RawSteinerTrees::new(graph, terminals.mask(), max_edges, None)
        .map(move |raw| STree::from_parts(terminals.clone(), raw.edges, raw.vertex_mask))
}

/// Like [`enumerate_steiner_trees`] but restricted to trees that are rainbow
/// under `coloring`. Rainbow trees have at most `t` edges, so the budget is
/// capped there.
pub fn enumerate_rainbow_trees<'a>(
    graph: &'a MultipartiteGraph,
    terminals: &'a TerminalSet,
    coloring: &'a Coloring,
    max_edges: usize,
) -> impl Iterator<Item = STree> + 'a {
    let budget = max_edges.min(coloring.t() as usize);
    RawSteinerTrees::new(graph, terminals.mask(), budget, Some(coloring))
        .map(move |raw| STree::from_parts(terminals.clone(), raw.edges, raw.vertex_mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;
    use crate::tree::{is_rainbow, star_tree};
    use std::collections::HashSet;

    fn v(c: usize, o: usize) -> VertexId {
        VertexId::new(c, o)
    }

    #[test]
    fn single_edge_tree() {
        let g = MultipartiteGraph::new(&[2, 2]).unwrap();
        let s = TerminalSet::new(&g, &[v(0, 0), v(1, 0)]).unwrap();
        let trees: Vec<STree> = enumerate_steiner_trees(&g, &s, 1).collect();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].edges(), &[0]);
    }

    #[test]
    fn spanning_trees_of_k22() {
        let g = MultipartiteGraph::new(&[2, 2]).unwrap();
        let all: Vec<VertexId> = g.vertices().collect();
        let s = TerminalSet::new(&g, &all).unwrap();
        assert_eq!(enumerate_steiner_trees(&g, &s, 3).count(), 4);
    }

    #[test]
    fn k33_three_terminals_in_one_class_gives_the_stars() {
        let g = MultipartiteGraph::new(&[3, 3]).unwrap();
        let s = TerminalSet::new(&g, &[v(0, 0), v(0, 1), v(0, 2)]).unwrap();
        let got: HashSet<Vec<usize>> = enumerate_steiner_trees(&g, &s, 3)
            .map(|t| t.edges().to_vec())
            .collect();
        let want: HashSet<Vec<usize>> = (0..3)
            .map(|o| star_tree(&g, v(1, o), &s).unwrap().edges().to_vec())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn budget_below_k_minus_one_is_empty() {
        let g = MultipartiteGraph::new(&[3, 3]).unwrap();
        let s = TerminalSet::new(&g, &[v(0, 0), v(0, 1), v(1, 2)]).unwrap();
        assert_eq!(enumerate_steiner_trees(&g, &s, 1).count(), 0);
        assert_eq!(enumerate_steiner_trees(&g, &s, 0).count(), 0);
    }

    #[test]
    fn rainbow_filter_matches_post_filter() {
        let g = MultipartiteGraph::new(&[2, 2, 2]).unwrap();
        let colors: Vec<u32> = (0..12).map(|i| (i * 7 % 3) as u32 + 1).collect();
        let c = Coloring::new(&g, 3, colors).unwrap();
        let s = TerminalSet::new(&g, &[v(0, 0), v(1, 1), v(2, 0)]).unwrap();
        let filtered: Vec<STree> = enumerate_rainbow_trees(&g, &s, &c, 5).collect();
        let post: Vec<STree> = enumerate_steiner_trees(&g, &s, 3)
            .filter(|t| is_rainbow(t, &c))
            .collect();
        assert_eq!(filtered, post);
    }

    #[test]
    fn deterministic_order() {
        let g = MultipartiteGraph::new(&[3, 2, 2]).unwrap();
        let s = TerminalSet::new(&g, &[v(0, 0), v(1, 1), v(2, 1)]).unwrap();
        let a: Vec<STree> = enumerate_steiner_trees(&g, &s, 4).collect();
        let b: Vec<STree> = enumerate_steiner_trees(&g, &s, 4).collect();
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }
}
