//! Compatibility graphs with bitset adjacency.
//!
//! Vertex indices follow ascending label order. Each row of the adjacency
//! matrix is `words` 64-bit words wide.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sets::{ForbiddenSet, ResidueSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// Offsets `1..N-1` that may sit next to 0 inside `[0, N-1]`.
    ZeroNeighborhood { n: u64 },
    /// Residues modulo `m`.
    Circulant { modulus: u64 },
    /// Built directly from an edge list or as an induced subgraph.
    Plain,
}

/// Which nonzero differences `d` with `|d| <= width` are forbidden in either
/// direction. Zero is never forbidden.
#[derive(Clone, Debug)]
pub struct DifferenceFilter {
    blocked: Vec<bool>,
}

impl DifferenceFilter {
    pub fn new(x: &ForbiddenSet, width: u64) -> Result<Self> {
        let w = i64::try_from(width).map_err(|_| Error::OutOfRange(width as i128))?;
        let mut blocked = vec![false; width as usize + 1];
        if w > 0 {
            for v in x.elements_in_range(-w, w)? {
                if v != 0 {
                    blocked[v.unsigned_abs() as usize] = true;
                }
            }
        }
        Ok(Self { blocked })
    }

    pub fn width(&self) -> u64 {
        self.blocked.len() as u64 - 1
    }

    /// True when `d` or `-d` is a nonzero member of X. Panics past the width.
    pub fn forbids(&self, d: i64) -> bool {
        self.blocked[d.unsigned_abs() as usize]
    }
}

#[derive(Clone, Debug)]
pub struct DiffGraph {
    labels: Vec<i64>,
    words: usize,
    adj: Vec<u64>,
    kind: GraphKind,
}

impl DiffGraph {
    fn empty_with(labels: Vec<i64>, kind: GraphKind) -> Self {
        let words = labels.len().div_ceil(64).max(1);
        let adj = vec![0; words * labels.len()];
        Self {
            labels,
            words,
            adj,
            kind,
        }
    }

    fn connect(&mut self, a: usize, b: usize) {
        self.adj[a * self.words + b / 64] |= 1 << (b % 64);
        self.adj[b * self.words + a / 64] |= 1 << (a % 64);
    }

    /// A plain graph from labels and index pairs. Labels must be strictly
    /// increasing; self-loops are rejected.
    pub fn from_edges(labels: Vec<i64>, edges: &[(usize, usize)]) -> Result<Self> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("labels must be strictly increasing".into()));
        }
        let mut g = Self::empty_with(labels, GraphKind::Plain);
        for &(a, b) in edges {
            if a == b || a >= g.len() || b >= g.len() {
                return Err(Error::InvalidArgument(format!("bad edge ({a}, {b})")));
            }
            g.connect(a, b);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty_with((0..n as i64).collect(), GraphKind::Plain);
        for a in 0..n {
            for b in a + 1..n {
                g.connect(a, b);
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> i64 {
        self.labels[v]
    }

    pub fn index_of(&self, label: i64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.row(a)[b / 64] >> (b % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&u| self.adjacent(v, u))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// The subgraph induced on `vertices`, keeping label order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut vertices = vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let labels = vertices.iter().map(|&v| self.labels[v]).collect();
        let mut g = Self::empty_with(labels, GraphKind::Plain);
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    g.connect(i, j);
                }
            }
        }
        g
    }

    /// Pairwise adjacency of a set of labels.
    pub fn is_clique(&self, labels: &[i64]) -> bool {
        let Some(idx) = labels.iter().map(|&l| self.index_of(l)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        idx.iter()
            .enumerate()
            .all(|(i, &a)| idx[i + 1..].iter().all(|&b| a != b && self.adjacent(a, b)))
    }

    /// DIMACS ascii clique format, vertices numbered from 1.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        match self.kind {
            GraphKind::ZeroNeighborhood { n } => {
                let _ = writeln!(out, "c zero-neighborhood graph, N = {n}");
            }
            GraphKind::Circulant { modulus } => {
                let _ = writeln!(out, "c circulant graph, m = {modulus}");
            }
            GraphKind::Plain => {}
        }
        let _ = writeln!(out, "p edge {} {}", self.len(), self.edge_count());
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.adjacent(a, b) {
                    let _ = writeln!(out, "e {} {}", a + 1, b + 1);
                }
            }
        }
        out
    }
}

/// Graph on offsets `i in [1, N-1]` with `i, -i` not in X; `i ~ j` iff
/// `i - j` and `j - i` are not in X. Its clique number plus one is `D(X, N)`.
pub fn zero_neighborhood_graph(n: u64, x: &ForbiddenSet) -> Result<DiffGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let filter = DifferenceFilter::new(x, n - 1)?;
    zero_neighborhood_graph_with(n, &filter)
}

/// As [`zero_neighborhood_graph`], reusing a precomputed filter of width `>= N-1`.
pub fn zero_neighborhood_graph_with(n: u64, filter: &DifferenceFilter) -> Result<DiffGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    if filter.width() < n - 1 {
        return Err(Error::InvalidArgument(format!(
            "difference filter width {} below N - 1 = {}",
            filter.width(),
            n - 1
        )));
    }
    let labels: Vec<i64> = (1..n as i64).filter(|&i| !filter.forbids(i)).collect();
    let mut g = DiffGraph::empty_with(labels, GraphKind::ZeroNeighborhood { n });
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            if !filter.forbids(g.labels[b] - g.labels[a]) {
                g.connect(a, b);
            }
        }
    }
    Ok(g)
}

/// Graph on `Z/mZ` with `i ~ j` iff neither `i - j` nor `j - i` lies in the residue set.
pub fn circulant_graph(residues: &ResidueSet) -> DiffGraph {
    let m = residues.modulus();
    let mut g = DiffGraph::empty_with((0..m as i64).collect(), GraphKind::Circulant { modulus: m });
    for i in 0..m {
        for j in i + 1..m {
            let d = j - i;
            if !residues.contains(d) && !residues.contains(m - d) {
                g.connect(i as usize, j as usize);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(spec: &str) -> ForbiddenSet {
        spec.parse().unwrap()
    }

    #[test]
    fn primes_at_eight() {
        let g = zero_neighborhood_graph(8, &set("primes")).unwrap();
        assert_eq!(g.labels(), &[1, 4, 6]);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.kind(), GraphKind::ZeroNeighborhood { n: 8 });
    }

    #[test]
    fn primes_at_twelve_contains_published_clique() {
        let g = zero_neighborhood_graph(12, &set("primes")).unwrap();
        assert!(g.is_clique(&[1, 9, 10]));
    }

    #[test]
    fn trivial_sizes() {
        assert!(zero_neighborhood_graph(1, &set("squares")).unwrap().is_empty());
        assert!(zero_neighborhood_graph(0, &set("squares")).is_err());
    }

    #[test]
    fn negative_members_forbid_both_directions() {
        // squares-5 contains -4 and -1, so offsets 1 and 4 disappear.
        let g = zero_neighborhood_graph(6, &set("squares-5")).unwrap();
        assert_eq!(g.labels(), &[2, 3, 5]);
        assert!(!g.adjacent(0, 1)); // difference 1
        assert!(g.adjacent(0, 2)); // difference 3
    }

    #[test]
    fn circulant_examples() {
        let none = circulant_graph(&ResidueSet::new(4, &[1, 2, 3]).unwrap());
        assert_eq!(none.edge_count(), 0);
        let s3 = circulant_graph(&set("squares+3").residues_mod(8).unwrap());
        assert!(s3.adjacent(0, 2));
        assert!(!s3.adjacent(0, 1));
        let full = circulant_graph(&ResidueSet::new(5, &[]).unwrap());
        assert_eq!(full.edge_count(), 10);
    }

    #[test]
    fn dimacs_export() {
        let g = DiffGraph::from_edges(vec![1, 4, 6], &[(0, 2)]).unwrap();
        assert_eq!(g.to_dimacs(), "p edge 3 1\ne 1 3\n");
    }

    #[test]
    fn induced_keeps_labels() {
        let g = DiffGraph::complete(5).induced(&[1, 3, 4]);
        assert_eq!(g.labels(), &[1, 3, 4]);
        assert_eq!(g.edge_count(), 3);
    }
}
