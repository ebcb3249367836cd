//! Brute-force references for the combinatorics suite. These walk the
//! incidence matrices edge copy by edge copy and share no code with the
//! cached path enumeration they check.

use crate::diagram::{BratteliDiagram, Edge, Vertex};

/// Every rooted path of length `level`, grouped by terminal vertex, each in
/// depth-first (canonical) order.
pub fn dfs_paths(d: &BratteliDiagram, level: usize) -> Vec<Vec<Vec<Edge>>> {
    fn walk(d: &BratteliDiagram, at: Vertex, level: usize, stack: &mut Vec<Edge>, out: &mut [Vec<Vec<Edge>>]) {
        if at.level == level {
            out[at.index].push(stack.clone());
            return;
        }
        for (j, &k) in d.incidences()[at.level][at.index].iter().enumerate() {
            for copy in 0..k as usize {
                stack.push(Edge::new(at.level, at.index, j, copy));
                walk(d, Vertex::new(at.level + 1, j), level, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = vec![Vec::new(); d.vertex_counts()[level]];
    for root in 0..d.vertex_counts()[0] {
        walk(d, Vertex::new(0, root), level, &mut Vec::new(), &mut out);
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
