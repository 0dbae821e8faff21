//! Internally disjoint S-tree packings: the disjointness relation, exact
//! maximum packings, the decision version, and certificate verification.
//!
//! A packing is a clique in the compatibility graph whose vertices are the
//! candidate trees. The maximum is found by branch and bound with a greedy
//! coloring bound (candidates ordered by size, so small trees come first),
//! seeded with a greedy packing. The witness is then recomputed as the
//! lexicographically least packing of that size, comparing packings by their
//! ascending list of tree signatures.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{Coloring, MultipartiteGraph, VertexMask};
use crate::steiner::{RawSteinerTrees, RawTree};
use crate::tree::{is_rainbow, STree, TerminalSet, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("tree {tree} uses edge {edge}, which is not in the graph")]
    DanglingEdge { tree: usize, edge: usize },
}

/// Ordered list of S-trees for one terminal set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    terminals: TerminalSet,
    trees: Vec<STree>,
}

impl Packing {
    pub fn new(terminals: TerminalSet, trees: Vec<STree>) -> Self {
        Self { terminals, trees }
    }

    pub fn empty(terminals: TerminalSet) -> Self {
        Self::new(terminals, Vec::new())
    }

    pub fn terminals(&self) -> &TerminalSet {
        &self.terminals
    }

    pub fn trees(&self) -> &[STree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

/// Why a packing certificate is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TerminalMismatch { tree: usize },
    NotRainbow { tree: usize },
    NotInternallyDisjoint { first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TerminalMismatch { tree } => {
                write!(f, "tree {tree} connects a different terminal set")
            }
            Violation::NotRainbow { tree } => write!(f, "tree {tree} repeats a color"),
            Violation::NotInternallyDisjoint { first, second } => {
                write!(f, "trees {first} and {second} are not internally disjoint")
            }
        }
    }
}

fn disjoint_parts(a_edges: &[usize], a_mask: VertexMask, b_edges: &[usize], b_mask: VertexMask, s: VertexMask) -> bool {
    if a_mask & b_mask & !s != 0 {
        return false;
    }
    let (mut i, mut j) = (0, 0);
    while i < a_edges.len() && j < b_edges.len() {
        match a_edges[i].cmp(&b_edges[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Edge-disjoint and sharing no vertex outside the terminal set.
pub fn internally_disjoint(first: &STree, second: &STree) -> Result<bool, TreeError> {
    if first.terminals() != second.terminals() {
        return Err(TreeError::TerminalMismatch);
    }
    Ok(disjoint_parts(
        first.edges(),
        first.vertex_mask(),
        second.edges(),
        second.vertex_mask(),
        first.terminals().mask(),
    ))
}

/// Checks that every tree is rainbow and all pairs are internally disjoint.
/// Returns the first violation found, trees checked in list order.
pub fn verify_packing(
    graph: &MultipartiteGraph,
    coloring: &Coloring,
    packing: &Packing,
) -> Result<Option<Violation>, PackingError> {
    for (i, tree) in packing.trees().iter().enumerate() {
        if let Some(&edge) = tree.edges().iter().find(|&&e| e >= graph.edge_count()) {
            return Err(PackingError::DanglingEdge { tree: i, edge });
        }
    }
    for (i, tree) in packing.trees().iter().enumerate() {
        if tree.terminals() != packing.terminals() {
            return Ok(Some(Violation::TerminalMismatch { tree: i }));
        }
        if !is_rainbow(tree, coloring) {
            return Ok(Some(Violation::NotRainbow { tree: i }));
        }
    }
    let trees = packing.trees();
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if !internally_disjoint(&trees[i], &trees[j])? {
                return Ok(Some(Violation::NotInternallyDisjoint { first: i, second: j }));
            }
        }
    }
    Ok(None)
}

/// Result of a maximum-packing search: `count = min(cap, maximum)` and a
/// witness with exactly `count` trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingResult {
    pub count: usize,
    pub packing: Packing,
}

/// Candidate trees in signature order with their compatibility matrix.
pub(crate) struct CandidateSet {
    trees: Vec<RawTree>,
    compatible: Vec<FixedBitSet>,
}

impl CandidateSet {
    pub fn new(mut trees: Vec<RawTree>, terminals: VertexMask) -> Self {
        trees.sort_by(|a, b| a.edges.cmp(&b.edges));
        let n = trees.len();
        let mut compatible = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&trees[i], &trees[j]);
                if disjoint_parts(&a.edges, a.vertex_mask, &b.edges, b.vertex_mask, terminals) {
                    compatible[i].insert(j);
                    compatible[j].insert(i);
                }
            }
        }
        Self { trees, compatible }
    }

    pub fn rainbow(graph: &MultipartiteGraph, coloring: &Coloring, terminals: &TerminalSet) -> Self {
        let raw = RawSteinerTrees::new(graph, terminals.mask(), coloring.t() as usize, Some(coloring));
        Self::new(raw.collect(), terminals.mask())
    }

    pub fn colorless(graph: &MultipartiteGraph, terminals: &TerminalSet, max_edges: usize) -> Self {
        let raw = RawSteinerTrees::new(graph, terminals.mask(), max_edges, None);
        Self::new(raw.collect(), terminals.mask())
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    fn all(&self) -> FixedBitSet {
        let mut p = FixedBitSet::with_capacity(self.len());
        p.insert_range(..);
        p
    }

    /// Greedy partition of `p` into classes of pairwise conflicting trees,
    /// visiting vertices in `order`. Returns `(vertex, class number)` sorted by
    /// class number; class numbers bound any clique within the prefix.
    fn color_sort(&self, p: &FixedBitSet, order: &[usize]) -> Vec<(usize, usize)> {
        let mut uncolored = p.clone();
        let mut out = Vec::with_capacity(p.count_ones(..));
        let mut class = 0;
        while !uncolored.is_clear() {
            class += 1;
            let mut open = uncolored.clone();
            for &v in order {
                if open.contains(v) {
                    out.push((v, class));
                    uncolored.remove(v);
                    open.remove(v);
                    open.difference_with(&self.compatible[v]);
                }
            }
        }
        out
    }

    fn greedy_bound(&self, p: &FixedBitSet) -> usize {
        let order: Vec<usize> = p.ones().collect();
        self.color_sort(p, &order).last().map_or(0, |&(_, c)| c)
    }

    /// Size of the largest clique, stopping once `cap` is reached.
    pub fn max_clique(&self, cap: usize) -> usize {
        if cap == 0 || self.trees.is_empty() {
            return 0;
        }
        // small trees first: fewer Steiner vertices leave more room for others
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.trees[i].edges.len(), i));

        let mut greedy: Vec<usize> = Vec::new();
        for &v in &order {
            if greedy.iter().all(|&c| self.compatible[c].contains(v)) {
                greedy.push(v);
            }
        }
        let best = greedy.len().min(cap);

        let mut search = CliqueSearch {
            set: self,
            order,
            best,
            cap,
        };
        search.expand(0, self.all());
        search.best
    }

    /// Lexicographically least clique of exactly `target` members, as
    /// ascending candidate indices.
    pub fn lex_first_clique(&self, target: usize) -> Option<Vec<usize>> {
        let mut chosen = Vec::with_capacity(target);
        if self.lex_extend(&mut chosen, self.all(), target) {
            Some(chosen)
        } else {
            None
        }
    }

    fn lex_extend(&self, chosen: &mut Vec<usize>, mut p: FixedBitSet, target: usize) -> bool {
        if chosen.len() == target {
            return true;
        }
        let need = target - chosen.len();
        if p.count_ones(..) < need || self.greedy_bound(&p) < need {
            return false;
        }
        let members: Vec<usize> = p.ones().collect();
        for v in members {
            p.remove(v);
            let mut next = p.clone();
            next.intersect_with(&self.compatible[v]);
            chosen.push(v);
            if self.lex_extend(chosen, next, target) {
                return true;
            }
            chosen.pop();
            if p.count_ones(..) < need {
                return false;
            }
        }
        false
    }

    pub fn to_packing(&self, terminals: &TerminalSet, members: &[usize]) -> Packing {
        let trees = members
            .iter()
            .map(|&i| {
                let raw = &self.trees[i];
                STree::from_parts(terminals.clone(), raw.edges.clone(), raw.vertex_mask)
            })
            .collect();
        Packing::new(terminals.clone(), trees)
    }
}

struct CliqueSearch<'a> {
    set: &'a CandidateSet,
    order: Vec<usize>,
    best: usize,
    cap: usize,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, size: usize, mut p: FixedBitSet) {
        let colored = self.set.color_sort(&p, &self.order);
        for &(v, class) in colored.iter().rev() {
            if size + class <= self.best || self.best >= self.cap {
                return;
            }
            let mut next = p.clone();
            next.intersect_with(&self.set.compatible[v]);
            if next.is_clear() {
                self.best = self.best.max(size + 1);
            } else {
                self.expand(size + 1, next);
            }
            p.remove(v);
        }
    }
}

fn packing_of(
    terminals: &TerminalSet,
    set: &CandidateSet,
    cap: usize,
) -> PackingResult {
    let count = set.max_clique(cap);
    let members = set
        .lex_first_clique(count)
        .expect("a clique of the maximum size exists");
    PackingResult {
        count,
        packing: set.to_packing(terminals, &members),
    }
}

/// Maximum number (capped at `cap`) of internally disjoint rainbow S-trees,
/// with the lexicographically least witness of that size.
pub fn max_rainbow_packing(
    graph: &MultipartiteGraph,
    coloring: &Coloring,
    terminals: &TerminalSet,
    cap: usize,
) -> PackingResult {
    let set = CandidateSet::rainbow(graph, coloring, terminals);
    packing_of(terminals, &set, cap)
}

/// An `l`-packing of rainbow S-trees if one exists (the lexicographically
/// least one), found without computing the maximum.
pub fn has_l_packing(
    graph: &MultipartiteGraph,
    coloring: &Coloring,
    terminals: &TerminalSet,
    l: usize,
) -> Option<Packing> {
    let set = CandidateSet::rainbow(graph, coloring, terminals);
    set.lex_first_clique(l)
        .map(|members| set.to_packing(terminals, &members))
}

/// Maximum number (capped at `cap`) of internally disjoint S-trees with at
/// most `max_edges` edges, colors ignored.
pub fn max_tree_packing(
    graph: &MultipartiteGraph,
    terminals: &TerminalSet,
    max_edges: usize,
    cap: usize,
) -> PackingResult {
    let set = CandidateSet::colorless(graph, terminals, max_edges);
    packing_of(terminals, &set, cap)
}
