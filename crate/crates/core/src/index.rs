//! The (k, l)-rainbow index on small instances: whole-coloring verification,
//! exact search over colorings up to symmetry, and the structural bounds that
//! hold for every class size.

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Coloring, MultipartiteGraph, VertexId, VertexMask};
use crate::packing::{has_l_packing, max_tree_packing, CandidateSet};
use crate::parallel::with_jobs;
use crate::symmetry::{edge_automorphisms, growth_string_count, is_canonical, GrowthStrings};
use crate::tree::{TerminalSet, TreeError};

/// Colorings examined per `t` are capped here; beyond it the search refuses
/// to start rather than run for hours.
pub const MAX_COLORINGS_PER_T: u128 = 20_000_000;

/// Automorphism group size above which only class permutations are used.
const AUTOMORPHISM_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("k must be at least 2, got {0}")]
    KTooSmall(usize),
    #[error("k = {k} exceeds the vertex count {vertices}")]
    KTooLarge { k: usize, vertices: usize },
    #[error("l must be at least 1")]
    LTooSmall,
    #[error("t_max = {t_max} exceeds the edge count {edges}")]
    TMaxTooLarge { t_max: u32, edges: usize },
    #[error("bound needs k >= r (k = {k}, r = {r})")]
    KBelowClassCount { k: usize, r: usize },
    #[error("terminal set misses class {0}")]
    UnhitClass(usize),
    #[error("cannot place {k} terminals evenly over classes of sizes {sizes:?}")]
    NoBalancedSet { k: usize, sizes: Vec<usize> },
    #[error("{count} colorings with {t} colors exceed the search limit of {MAX_COLORINGS_PER_T}")]
    SearchTooLarge { t: u32, count: u128 },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

fn check_kl(graph: &MultipartiteGraph, k: usize, l: usize) -> Result<(), IndexError> {
    if k < 2 {
        return Err(IndexError::KTooSmall(k));
    }
    if k > graph.vertex_count() {
        return Err(IndexError::KTooLarge {
            k,
            vertices: graph.vertex_count(),
        });
    }
    if l < 1 {
        return Err(IndexError::LTooSmall);
    }
    Ok(())
}

/// All `k`-subsets of `0..n` as masks, in lexicographic order of their sorted
/// index tuples.
pub(crate) fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = VertexMask> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut first = true;
    std::iter::from_fn(move || {
        if k > n || k == 0 {
            return None;
        }
        if first {
            first = false;
        } else {
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
        Some(idx.iter().fold(0u128, |m, &i| m | (1u128 << i)))
    })
}

/// `None` when every `k`-set has `l` internally disjoint rainbow S-trees;
/// otherwise the lexicographically least failing set.
pub fn verify_coloring(
    graph: &MultipartiteGraph,
    coloring: &Coloring,
    k: usize,
    l: usize,
) -> Result<Option<TerminalSet>, IndexError> {
    check_kl(graph, k, l)?;
    Ok(first_failing_set(graph, coloring, k, l))
}

/// [`verify_coloring`] with terminal sets checked on `jobs` worker threads.
/// The answer does not depend on `jobs`.
pub fn verify_coloring_par(
    graph: &MultipartiteGraph,
    coloring: &Coloring,
    k: usize,
    l: usize,
    jobs: usize,
) -> Result<Option<TerminalSet>, IndexError> {
    check_kl(graph, k, l)?;
    if jobs <= 1 {
        return Ok(first_failing_set(graph, coloring, k, l));
    }
    let subsets: Vec<VertexMask> = k_subsets(graph.vertex_count(), k).collect();
    let failing = with_jobs(jobs, || {
        subsets
            .par_iter()
            .find_first(|&&mask| !set_has_packing(graph, coloring, mask, l))
            .copied()
    });
    Ok(failing.map(|m| TerminalSet::from_mask(graph, m)))
}

fn set_has_packing(graph: &MultipartiteGraph, coloring: &Coloring, mask: VertexMask, l: usize) -> bool {
    let s = TerminalSet::from_mask(graph, mask);
    has_l_packing(graph, coloring, &s, l).is_some()
}

fn first_failing_set(graph: &MultipartiteGraph, coloring: &Coloring, k: usize, l: usize) -> Option<TerminalSet> {
    if k > coloring.t() as usize + 1 {
        // every S-tree has at least k - 1 edges, so nothing is rainbow
        return k_subsets(graph.vertex_count(), k)
            .next()
            .map(|m| TerminalSet::from_mask(graph, m));
    }
    k_subsets(graph.vertex_count(), k)
        .find(|&mask| !set_has_packing(graph, coloring, mask, l))
        .map(|m| TerminalSet::from_mask(graph, m))
}

/// Pass/fail only, trying the most recent failing set first.
fn passes(graph: &MultipartiteGraph, coloring: &Coloring, subsets: &[VertexMask], l: usize, hint: &mut usize) -> bool {
    if !set_has_packing(graph, coloring, subsets[*hint], l) {
        return false;
    }
    for (i, &mask) in subsets.iter().enumerate() {
        if i != *hint && !set_has_packing(graph, coloring, mask, l) {
            *hint = i;
            return false;
        }
    }
    true
}

/// Outcome of an exact rainbow-index search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RxValue {
    /// The index equals this many colors.
    Colors(u32),
    /// Some terminal set lacks `l` internally disjoint S-trees even without
    /// colors, so no coloring works.
    Infeasible,
    /// No coloring with at most `t_max` colors works; the index is larger.
    AboveMax(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RxResult {
    pub value: RxValue,
    /// A passing coloring when `value` is `Colors`.
    pub witness: Option<Coloring>,
    /// The refuting terminal set when `value` is `Infeasible`.
    pub failing_set: Option<TerminalSet>,
    /// The structural lower bound the scan started from.
    pub lower_bound: u32,
    /// Canonical colorings verified across all scanned `t`.
    pub colorings_checked: u64,
}

/// Least number of colors `t <= t_max` admitting a coloring in which every
/// `k`-set has `l` internally disjoint rainbow S-trees.
///
/// Colorings are enumerated up to color permutation and the automorphisms
/// that permute equal classes and offsets; the witness is the least canonical
/// passing coloring in restricted-growth order.
pub fn rx_exact(graph: &MultipartiteGraph, k: usize, l: usize, t_max: u32) -> Result<RxResult, IndexError> {
    rx_exact_par(graph, k, l, t_max, 1)
}

pub fn rx_exact_par(
    graph: &MultipartiteGraph,
    k: usize,
    l: usize,
    t_max: u32,
    jobs: usize,
) -> Result<RxResult, IndexError> {
    check_kl(graph, k, l)?;
    if t_max as usize > graph.edge_count() {
        return Err(IndexError::TMaxTooLarge {
            t_max,
            edges: graph.edge_count(),
        });
    }
    let lower_bound = lower_bound_structural(graph, k, l)?;
    let subsets: Vec<VertexMask> = k_subsets(graph.vertex_count(), k).collect();

    let unbounded = graph.vertex_count() - 1;
    let uncolored_failure = with_jobs(jobs, || {
        subsets.par_iter().find_first(|&&mask| {
            let s = TerminalSet::from_mask(graph, mask);
            max_tree_packing(graph, &s, unbounded, l).count < l
        })
    });
    if let Some(&mask) = uncolored_failure {
        return Ok(RxResult {
            value: RxValue::Infeasible,
            witness: None,
            failing_set: Some(TerminalSet::from_mask(graph, mask)),
            lower_bound,
            colorings_checked: 0,
        });
    }

    let autos = edge_automorphisms(graph, AUTOMORPHISM_LIMIT);
    let mut checked = 0u64;
    for t in lower_bound.max(1)..=t_max {
        let count = growth_string_count(graph.edge_count(), t);
        if count > MAX_COLORINGS_PER_T {
            return Err(IndexError::SearchTooLarge { t, count });
        }
        let canonical: Vec<Vec<u32>> = GrowthStrings::new(graph.edge_count(), t)
            .filter(|c| is_canonical(c, &autos))
            .collect();
        checked += canonical.len() as u64;
        let found = with_jobs(jobs, || {
            canonical
                .par_iter()
                .map_init(
                    || 0usize,
                    |hint, colors| {
                        let coloring = Coloring::new(graph, t, colors.clone()).expect("growth string is a valid coloring");
                        passes(graph, &coloring, &subsets, l, hint).then_some(coloring)
                    },
                )
                .find_first(Option::is_some)
                .flatten()
        });
        if let Some(witness) = found {
            return Ok(RxResult {
                value: RxValue::Colors(t),
                witness: Some(witness),
                failing_set: None,
                lower_bound,
                colorings_checked: checked,
            });
        }
    }
    Ok(RxResult {
        value: RxValue::AboveMax(t_max),
        witness: None,
        failing_set: None,
        lower_bound,
        colorings_checked: checked,
    })
}

/// `C(r, 2) * ceil(k/r)^2 / floor(k/r)`: the most internally disjoint S'-trees
/// with `k - 1` or `k` edges when S' spreads evenly over all `r` classes.
pub fn packing_upper_bound(k: usize, r: usize) -> Result<Ratio<u64>, IndexError> {
    if r < 2 || k < r {
        return Err(IndexError::KBelowClassCount { k, r });
    }
    let (k, r) = (k as u64, r as u64);
    let ceil = k.div_ceil(r);
    let floor = k / r;
    Ok(Ratio::new(r * (r - 1) / 2 * ceil * ceil, floor))
}

/// `k` terminals with `ceil(k/r)` in the first `k mod r` classes and
/// `floor(k/r)` in the rest, lowest offsets first.
pub fn balanced_terminal_set(graph: &MultipartiteGraph, k: usize) -> Result<TerminalSet, IndexError> {
    let sizes = graph.class_sizes();
    let r = sizes.len();
    let (floor, extra) = (k / r, k % r);
    let mut vertices = Vec::with_capacity(k);
    for (c, &n) in sizes.iter().enumerate() {
        let want = floor + usize::from(c < extra);
        if want > n {
            return Err(IndexError::NoBalancedSet {
                k,
                sizes: sizes.to_vec(),
            });
        }
        vertices.extend((0..want).map(|o| VertexId::new(c, o)));
    }
    Ok(TerminalSet::new(graph, &vertices)?)
}

/// A lower bound on the (k, l)-rainbow index valid for every class size:
///
/// * `k - 1`: every S-tree has at least `k - 1` edges;
/// * `k` when some class holds `k` vertices, since `k` terminals inside one
///   class need a tree with at least `k` edges;
/// * `k + 1` when `k >= r`, an evenly spread `k`-set exists and `l` exceeds
///   [`packing_upper_bound`] (trees with at most `k` edges cannot supply `l`
///   disjoint copies);
/// * `4` for bipartite hosts with `k = 3`, `l >= 3` and a class of size at
///   least 2: with `{x, y}` in one class and `z` in the other, every S-tree
///   with at most 3 edges uses `xz` or `yz`, so at most two are disjoint.
pub fn lower_bound_structural(graph: &MultipartiteGraph, k: usize, l: usize) -> Result<u32, IndexError> {
    check_kl(graph, k, l)?;
    let sizes = graph.class_sizes();
    let r = sizes.len();
    let mut bound = (k - 1).max(1);
    if sizes.iter().any(|&n| n >= k) {
        bound = bound.max(k);
    }
    if k >= r && balanced_terminal_set(graph, k).is_ok() {
        let cap = packing_upper_bound(k, r)?;
        if Ratio::from_integer(l as u64) > cap {
            bound = bound.max(k + 1);
        }
    }
    if r == 2 && k == 3 && l >= 3 && sizes.iter().any(|&n| n >= 2) {
        bound = bound.max(4);
    }
    Ok(bound as u32)
}

/// Exact maximum number of internally disjoint S'-trees with `k - 1` or `k`
/// edges, colors ignored. `s_prime` must meet every class.
pub fn max_small_tree_packing(graph: &MultipartiteGraph, s_prime: &TerminalSet) -> Result<usize, IndexError> {
    let hit = s_prime.hit_classes();
    if let Some(c) = (0..graph.class_count()).find(|c| !hit.contains(c)) {
        return Err(IndexError::UnhitClass(c));
    }
    let k = s_prime.k();
    let set = CandidateSet::colorless(graph, s_prime, k);
    Ok(set.max_clique(usize::MAX))
}
