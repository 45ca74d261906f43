use std::time::Instant;

use super::CliqueOutcome;
use crate::error::{Error, Result};
use crate::graph::DiffGraph;

pub const ORACLE_VERTEX_CAP: usize = 32;

/// Exhaustive maximal-clique enumeration (Bron-Kerbosch, no pivot, no bounds).
pub fn brute_force_max_clique(graph: &DiffGraph) -> Result<CliqueOutcome> {
    brute_force_max_clique_capped(graph, ORACLE_VERTEX_CAP)
}

pub fn brute_force_max_clique_capped(graph: &DiffGraph, cap: usize) -> Result<CliqueOutcome> {
    let cap = cap.min(ORACLE_VERTEX_CAP);
    if graph.len() > cap {
        return Err(Error::InvalidArgument(format!(
            "brute force oracle limited to {cap} vertices, graph has {}",
            graph.len()
        )));
    }
    let start = Instant::now();
    let n = graph.len();
    let adj: Vec<u32> = (0..n)
        .map(|a| (0..n).filter(|&b| graph.adjacent(a, b)).fold(0u32, |m, b| m | 1 << b))
        .collect();
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut state = Enumeration {
        adj: &adj,
        best: 0,
        nodes: 0,
    };
    state.extend(0, all, 0);
    let witness = (0..n)
        .filter(|&v| state.best >> v & 1 == 1)
        .map(|v| graph.label(v))
        .collect::<Vec<_>>();
    Ok(CliqueOutcome {
        size: witness.len(),
        witness,
        nodes_expanded: state.nodes,
        elapsed: start.elapsed(),
    })
}

struct Enumeration<'a> {
    adj: &'a [u32],
    best: u32,
    nodes: u64,
}

impl Enumeration<'_> {
    fn extend(&mut self, clique: u32, mut candidates: u32, mut excluded: u32) {
        self.nodes += 1;
        if candidates == 0 {
            if excluded == 0 && clique.count_ones() > self.best.count_ones() {
                self.best = clique;
            }
            return;
        }
        while candidates != 0 {
            let v = candidates.trailing_zeros();
            let bit = 1u32 << v;
            let nbrs = self.adj[v as usize];
            self.extend(clique | bit, candidates & nbrs, excluded & nbrs);
            candidates &= !bit;
            excluded |= bit;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_cap() {
        assert_eq!(brute_force_max_clique(&DiffGraph::complete(5)).unwrap().size, 5);
        assert_eq!(brute_force_max_clique(&DiffGraph::complete(18)).unwrap().size, 18);
        assert!(brute_force_max_clique(&DiffGraph::complete(33)).is_err());
        assert!(brute_force_max_clique_capped(&DiffGraph::complete(10), 8).is_err());
    }

    #[test]
    fn path_graph() {
        let g = DiffGraph::from_edges(vec![1, 2, 3, 4], &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let out = brute_force_max_clique(&g).unwrap();
        assert_eq!(out.size, 2);
        assert_eq!(out.witness, vec![1, 2]);
    }
}
