//! Brute-force oracles that share no code with the library's search paths.
//! Trees come from raw edge subsets; packings from exhaustive subfamily search.

#![allow(dead_code)]

use rainbow_core::{Coloring, MultipartiteGraph, TerminalSet, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTree {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

fn endpoints(g: &MultipartiteGraph, e: usize) -> (usize, usize) {
    let (a, b) = g.edge(e).unwrap().endpoints();
    (g.vertex_index(a).unwrap(), g.vertex_index(b).unwrap())
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    r
}

/// Is `edges` a tree containing `s` whose leaves all lie in `s`?
pub fn oracle_is_s_tree(g: &MultipartiteGraph, s: &[usize], edges: &[usize]) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut degree = vec![0usize; n];
    let mut parent: Vec<usize> = (0..n).collect();
    for &e in edges {
        let (a, b) = endpoints(g, e);
        degree[a] += 1;
        degree[b] += 1;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return None; // cycle
        }
        parent[ra] = rb;
    }
    let vertices: Vec<usize> = (0..n).filter(|&v| degree[v] > 0).collect();
    if vertices.len() != edges.len() + 1 {
        return None;
    }
    if s.iter().any(|v| !vertices.contains(v)) {
        return None;
    }
    let root = find(&mut parent, vertices[0]);
    if vertices.iter().any(|&v| find(&mut parent, v) != root) {
        return None;
    }
    if vertices.iter().any(|&v| degree[v] == 1 && !s.contains(&v)) {
        return None;
    }
    Some(vertices)
}

pub fn terminal_indices(g: &MultipartiteGraph, s: &TerminalSet) -> Vec<usize> {
    s.vertices().iter().map(|&v| g.vertex_index(v).unwrap()).collect()
}

/// Every S-tree with at most `max_edges` edges, by trying every edge subset.
pub fn oracle_trees(g: &MultipartiteGraph, s: &TerminalSet, max_edges: usize) -> Vec<OracleTree> {
    let s = terminal_indices(g, s);
    let m = g.edge_count();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(
        g: &MultipartiteGraph,
        s: &[usize],
        m: usize,
        start: usize,
        max_edges: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<OracleTree>,
    ) {
        if !chosen.is_empty() {
            if let Some(vertices) = oracle_is_s_tree(g, s, chosen) {
                out.push(OracleTree {
                    edges: chosen.clone(),
                    vertices,
                });
            }
        }
        if chosen.len() == max_edges {
            return;
        }
        for e in start..m {
            chosen.push(e);
            go(g, s, m, e + 1, max_edges, chosen, out);
            chosen.pop();
        }
    }
    go(g, &s, m, 0, max_edges, &mut chosen, &mut out);
    out
}

pub fn oracle_rainbow(edges: &[usize], c: &Coloring) -> bool {
    let mut colors: Vec<u32> = edges.iter().map(|&e| c.colors()[e]).collect();
    colors.sort_unstable();
    colors.dedup();
    colors.len() == edges.len()
}

/// Edge-disjoint, and the only shared vertices are terminals.
pub fn oracle_disjoint(a: &OracleTree, b: &OracleTree, s: &[usize]) -> bool {
    a.edges.iter().all(|e| !b.edges.contains(e))
        && a.vertices.iter().all(|v| !b.vertices.contains(v) || s.contains(v))
}

/// Largest pairwise internally disjoint subfamily, by exhaustive search.
pub fn oracle_max_family(trees: &[OracleTree], s: &[usize]) -> usize {
    fn go(trees: &[OracleTree], s: &[usize], i: usize, chosen: &mut Vec<usize>) -> usize {
        if i == trees.len() {
            return chosen.len();
        }
        let mut best = go(trees, s, i + 1, chosen);
        if chosen.iter().all(|&j| oracle_disjoint(&trees[i], &trees[j], s)) {
            chosen.push(i);
            best = best.max(go(trees, s, i + 1, chosen));
            chosen.pop();
        }
        best
    }
    go(trees, s, 0, &mut Vec::new())
}

/// Maximum number of internally disjoint rainbow S-trees. Rainbow trees
/// under `t` colors have at most `t` edges; `|V| - 1` also bounds any tree.
pub fn oracle_rainbow_packing(g: &MultipartiteGraph, c: &Coloring, s: &TerminalSet) -> usize {
    let budget = (c.t() as usize).min(g.vertex_count() - 1);
    let trees: Vec<OracleTree> = oracle_trees(g, s, budget)
        .into_iter()
        .filter(|t| oracle_rainbow(&t.edges, c))
        .collect();
    oracle_max_family(&trees, &terminal_indices(g, s))
}

/// All k-subsets of the vertex set, as terminal sets, in lexicographic order.
pub fn all_sets(g: &MultipartiteGraph, k: usize) -> Vec<TerminalSet> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = Vec::new();
    fn go(verts: &[VertexId], k: usize, start: usize, idx: &mut Vec<usize>, g: &MultipartiteGraph, out: &mut Vec<TerminalSet>) {
        if idx.len() == k {
            let vs: Vec<VertexId> = idx.iter().map(|&i| verts[i]).collect();
            out.push(TerminalSet::new(g, &vs).unwrap());
            return;
        }
        for i in start..verts.len() {
            idx.push(i);
            go(verts, k, i + 1, idx, g, out);
            idx.pop();
        }
    }
    go(&verts, k, 0, &mut idx, g, &mut out);
    out
}

/// Does every k-set have `l` internally disjoint rainbow trees? Oracle version.
pub fn oracle_coloring_passes(g: &MultipartiteGraph, c: &Coloring, k: usize, l: usize) -> bool {
    all_sets(g, k).iter().all(|s| oracle_rainbow_packing(g, c, s) >= l)
}

/// Every coloring of `m` edges with colors `1..=t`, as an odometer.
pub fn all_colorings(m: usize, t: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (t as u64).pow(m as u32);
    (0..total).map(move |mut code| {
        (0..m)
            .map(|_| {
                let c = (code % t as u64) as u32 + 1;
                code /= t as u64;
                c
            })
            .collect()
    })
}

/// Least `t` for which some coloring passes, or `None` if none up to `t_max`.
pub fn oracle_rx(g: &MultipartiteGraph, k: usize, l: usize, t_max: u32) -> Option<u32> {
    (1..=t_max).find(|&t| {
        all_colorings(g.edge_count(), t).any(|colors| {
            let c = Coloring::new(g, t, colors).unwrap();
            oracle_coloring_passes(g, &c, k, l)
        })
    })
}

/// Small seeded class-size lists with at most `max_vertices` vertices.
pub fn small_shapes(max_vertices: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(prefix: &mut Vec<usize>, remaining: usize, max_part: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() >= 2 {
            out.push(prefix.clone());
        }
        for p in (1..=max_part.min(remaining)).rev() {
            prefix.push(p);
            go(prefix, remaining - p, p, out);
            prefix.pop();
        }
    }
    go(&mut Vec::new(), max_vertices, max_vertices, &mut out);
    out
}
