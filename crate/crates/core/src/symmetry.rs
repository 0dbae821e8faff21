//! Canonical forms of edge colorings under color permutations and graph
//! automorphisms.
//!
//! Color symmetry is removed by generating only restricted growth strings
//! (each new color is one more than the largest color used so far, so color
//! classes are ordered by first-use edge index). Automorphism symmetry is
//! removed by keeping a coloring only when no automorphism image, relabelled
//! the same way, is lexicographically smaller.

use crate::graph::{MultipartiteGraph, VertexId};

/// Edge permutations induced by the non-identity automorphisms that permute
/// equal-sized classes and offsets within classes.
///
/// If the full group would exceed `limit` elements, only the class
/// permutations are kept (still a valid reduction, just a weaker one).
pub fn edge_automorphisms(graph: &MultipartiteGraph, limit: usize) -> Vec<Vec<u32>> {
    let sizes = graph.class_sizes();
    let r = sizes.len();
    let class_perms: Vec<Vec<usize>> = permutations(r)
        .into_iter()
        .filter(|p| (0..r).all(|c| sizes[p[c]] == sizes[c]))
        .collect();

    let offset_group: u128 = sizes.iter().map(|&n| factorial(n)).product();
    let full = (class_perms.len() as u128).saturating_mul(offset_group);
    let offset_perms: Vec<Vec<Vec<usize>>> = if full <= limit as u128 {
        sizes.iter().map(|&n| permutations(n)).collect()
    } else {
        sizes.iter().map(|&n| vec![(0..n).collect()]).collect()
    };

    let mut out = Vec::new();
    for cp in &class_perms {
        let mut choice = vec![0usize; r];
        loop {
            let image = |v: VertexId| VertexId::new(cp[v.class], offset_perms[v.class][choice[v.class]][v.offset]);
            let perm: Vec<u32> = graph
                .canonical_edges()
                .iter()
                .map(|e| {
                    let (a, b) = e.endpoints();
                    graph.edge_between(image(a), image(b)).expect("automorphism maps edges to edges") as u32
                })
                .collect();
            if perm.iter().enumerate().any(|(i, &p)| p as usize != i) {
                out.push(perm);
            }
            // odometer over the per-class offset permutations
            let mut c = 0;
            while c < r {
                choice[c] += 1;
                if choice[c] < offset_perms[c].len() {
                    break;
                }
                choice[c] = 0;
                c += 1;
            }
            if c == r {
                break;
            }
        }
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, x| acc.saturating_mul(x))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// True iff no automorphism image of `colors` (relabelled by first use) is
/// lexicographically smaller. `colors` must itself be a restricted growth string.
pub fn is_canonical(colors: &[u32], automorphisms: &[Vec<u32>]) -> bool {
    let mut relabel = Vec::new();
    'perm: for perm in automorphisms {
        relabel.clear();
        relabel.resize(colors.len() + 2, 0u32);
        let mut next = 1;
        for (i, &src) in perm.iter().enumerate() {
            let c = colors[src as usize] as usize;
            if relabel[c] == 0 {
                relabel[c] = next;
                next += 1;
            }
            match relabel[c].cmp(&colors[i]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => continue 'perm,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}

/// Restricted growth strings of length `len` over `1..=t`, lexicographically.
pub struct GrowthStrings {
    t: u32,
    current: Vec<u32>,
    prefix_max: Vec<u32>,
    started: bool,
}

impl GrowthStrings {
    pub fn new(len: usize, t: u32) -> Self {
        Self {
            t,
            current: vec![1; len],
            prefix_max: vec![1; len],
            started: false,
        }
    }
}

impl Iterator for GrowthStrings {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.current.is_empty() || self.t == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        let len = self.current.len();
        let mut i = len;
        while i > 1 {
            i -= 1;
            let limit = (self.prefix_max[i - 1] + 1).min(self.t);
            if self.current[i] < limit {
                self.current[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.current[i]);
                for j in i + 1..len {
                    self.current[j] = 1;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return Some(self.current.clone());
            }
        }
        None
    }
}

/// Number of colorings of `len` edges with at most `t` colors up to color
/// permutation: the sum of Stirling numbers of the second kind S(len, j), j <= t.
pub fn growth_string_count(len: usize, t: u32) -> u128 {
    let t = t as usize;
    let mut row = vec![0u128; t + 1];
    row[0] = 1;
    for _ in 0..len {
        for j in (1..=t).rev() {
            row[j] = row[j].saturating_mul(j as u128).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_strings_small() {
        let all: Vec<Vec<u32>> = GrowthStrings::new(3, 3).collect();
        assert_eq!(
            all,
            vec![
                vec![1, 1, 1],
                vec![1, 1, 2],
                vec![1, 2, 1],
                vec![1, 2, 2],
                vec![1, 2, 3]
            ]
        );
        assert_eq!(GrowthStrings::new(3, 2).count(), 4);
        for (len, t) in [(5, 2), (6, 3), (7, 4), (4, 9)] {
            assert_eq!(GrowthStrings::new(len, t).count() as u128, growth_string_count(len, t));
        }
        // Bell number B(9) = 21147
        assert_eq!(growth_string_count(9, 9), 21147);
    }

    #[test]
    fn automorphism_group_sizes() {
        let k33 = MultipartiteGraph::new(&[3, 3]).unwrap();
        assert_eq!(edge_automorphisms(&k33, 10_000).len(), 72 - 1);
        let k222 = MultipartiteGraph::new(&[2, 2, 2]).unwrap();
        assert_eq!(edge_automorphisms(&k222, 10_000).len(), 48 - 1);
        let k12 = MultipartiteGraph::new(&[1, 2]).unwrap();
        assert_eq!(edge_automorphisms(&k12, 10_000).len(), 1);
        // over the limit only class swaps remain
        assert_eq!(edge_automorphisms(&k33, 10).len(), 1);
    }

    /// Orbit counting by brute force: canonical representatives equal the
    /// number of distinct orbits under automorphisms and color permutations.
    #[test]
    fn canonical_count_matches_orbit_count() {
        for sizes in [vec![1, 1, 1], vec![2, 2], vec![1, 2, 2], vec![2, 3]] {
            let g = MultipartiteGraph::new(&sizes).unwrap();
            let autos = edge_automorphisms(&g, 10_000);
            let m = g.edge_count();
            for t in 1..=3u32 {
                let canon = GrowthStrings::new(m, t).filter(|c| is_canonical(c, &autos)).count();

                let mut seen = std::collections::HashSet::new();
                let total = (t as usize).pow(m as u32);
                let mut orbits = 0;
                for code in 0..total {
                    let colors: Vec<u32> = (0..m).map(|i| ((code / (t as usize).pow(i as u32)) % t as usize) as u32).collect();
                    if seen.contains(&colors) {
                        continue;
                    }
                    orbits += 1;
                    let mut group: Vec<Vec<u32>> = autos.clone();
                    group.push((0..m as u32).collect());
                    for perm in &group {
                        let image: Vec<u32> = perm.iter().map(|&p| colors[p as usize]).collect();
                        for cp in permutations(t as usize) {
                            seen.insert(image.iter().map(|&c| cp[c as usize] as u32).collect::<Vec<_>>());
                        }
                    }
                }
                assert_eq!(canon, orbits, "sizes {sizes:?} t {t}");
            }
        }
    }
}
