//! Fixed inputs shared by the benchmarks.

use rainbow_core::{random_coloring, trial_rng, Coloring, MultipartiteGraph, TerminalSet, VertexId};

pub const SEED: u64 = 0xBE7C;

pub struct Fixture {
    pub graph: MultipartiteGraph,
    pub coloring: Coloring,
    pub terminals: TerminalSet,
}

/// `K_{n,n}` with a seeded uniform `t`-coloring and `S` = two vertices of
/// class 0 plus one of class 1.
pub fn bipartite(n: usize, t: u32) -> Fixture {
    let graph = MultipartiteGraph::balanced_bipartite(n).expect("valid sizes");
    let coloring = random_coloring(&graph, t, &mut trial_rng(SEED, n as u64)).expect("valid colors");
    let terminals = TerminalSet::new(&graph, &[VertexId::new(0, 0), VertexId::new(0, 1), VertexId::new(1, 0)])
        .expect("valid terminals");
    Fixture {
        graph,
        coloring,
        terminals,
    }
}

/// `K_{r x n}` with a seeded uniform `t`-coloring and one terminal per class.
pub fn equipartite(r: usize, n: usize, t: u32) -> Fixture {
    let graph = MultipartiteGraph::equipartite(r, n).expect("valid sizes");
    let coloring = random_coloring(&graph, t, &mut trial_rng(SEED, (r * 1000 + n) as u64)).expect("valid colors");
    let spread: Vec<VertexId> = (0..r).map(|c| VertexId::new(c, 0)).collect();
    let terminals = TerminalSet::new(&graph, &spread).expect("valid terminals");
    Fixture {
        graph,
        coloring,
        terminals,
    }
}
