//! Simple undirected graphs on `[n]`, the graph families used as state
//! constructions, seeded random graphs, and the edge-list text format.
//!
//! Edge-list format (UTF-8, LF or CRLF):
//!
//! ```text
//! # comment
//! n 4
//! 1 2
//! 3 4
//! ```
//!
//! The header `n <count>` must be the first non-blank, non-comment line.
//! Each body line is an edge `u v` with `1 ≤ u, v ≤ n`, `u ≠ v`; `#` starts a
//! comment anywhere on a line.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, ParseError, Result};
use crate::f2linalg::F2Matrix;
use crate::subsets::MAX_VERTICES;

/// Simple graph with vertices `1..=n`.
///
/// The adjacency matrix is symmetric with zero diagonal; row `i - 1` belongs
/// to vertex `i`. A copy of each row as a bit mask is kept for the cut-rank
/// kernels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adjacency: F2Matrix,
    neighbors: Vec<u64>,
}

impl Graph {
    /// Graph with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(invalid(format!(
                "vertex count {n} outside supported range 1..={MAX_VERTICES}"
            )));
        }
        Ok(Self {
            n,
            adjacency: F2Matrix::zeros(n, n),
            neighbors: vec![0; n],
        })
    }

    /// Builds a graph from 1-based edges. Rejects self-loops, out-of-range
    /// vertices and duplicates (in either orientation).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            if g.has_edge(u, v) {
                return Err(invalid(format!("duplicate edge {{{u},{v}}}")));
            }
            g.put(u, v, true);
        }
        Ok(g)
    }

    /// Builds a graph from a square 0/1 matrix, which must be symmetric with zero diagonal.
    pub fn from_adjacency(adjacency: F2Matrix) -> Result<Self> {
        let n = adjacency.n_rows();
        if adjacency.n_cols() != n {
            return Err(invalid("adjacency matrix must be square"));
        }
        let mut g = Self::empty(n)?;
        for i in 0..n {
            if adjacency.get(i, i) {
                return Err(invalid(format!("self-loop at vertex {}", i + 1)));
            }
            for j in i + 1..n {
                if adjacency.get(i, j) != adjacency.get(j, i) {
                    return Err(invalid("adjacency matrix is not symmetric"));
                }
                if adjacency.get(i, j) {
                    g.put(i + 1, j + 1, true);
                }
            }
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x == 0 || x > self.n {
                return Err(invalid(format!("vertex {x} out of range 1..={}", self.n)));
            }
        }
        if u == v {
            return Err(invalid(format!("self-loop at vertex {u}")));
        }
        Ok(())
    }

    fn put(&mut self, u: usize, v: usize, on: bool) {
        let (a, b) = (u - 1, v - 1);
        self.adjacency.set(a, b, on);
        self.adjacency.set(b, a, on);
        if on {
            self.neighbors[a] |= 1 << b;
            self.neighbors[b] |= 1 << a;
        } else {
            self.neighbors[a] &= !(1 << b);
            self.neighbors[b] &= !(1 << a);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &F2Matrix {
        &self.adjacency
    }

    /// Neighbourhood of 1-based vertex `v` as a mask (bit `u - 1` for neighbour `u`).
    #[inline]
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.neighbors[v - 1]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u >= 1 && v >= 1 && u <= self.n && v <= self.n && self.adjacency.get(u - 1, v - 1)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbor_mask(v).count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 1..=self.n {
            let mut higher = self.neighbor_mask(u).checked_shr(u as u32).unwrap_or(0);
            while higher != 0 {
                let off = higher.trailing_zeros() as usize;
                out.push((u, u + 1 + off));
                higher &= higher - 1;
            }
        }
        out
    }

    /// Copy of the graph with the pair `{u, v}` toggled.
    pub fn with_toggled(&self, u: usize, v: usize) -> Result<Self> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        let on = !g.has_edge(u, v);
        g.put(u, v, on);
        Ok(g)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        Graph::from_edges(repr.n, &repr.edges).map_err(serde::de::Error::custom)
    }
}

/// Two k-cliques `1..=k` and `k+1..=2k` joined by the matching `{i, k+i}`.
///
/// The adjacency matrix is the block matrix `[[J−I, I], [I, J−I]]`.
pub fn make_turan_pair_graph(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(invalid(format!("two-clique graph needs k ≥ 2, got {k}")));
    }
    let mut g = Graph::empty(2 * k)?;
    for i in 1..=k {
        for j in i + 1..=k {
            g.put(i, j, true);
            g.put(k + i, k + j, true);
        }
        g.put(i, k + i, true);
    }
    Ok(g)
}

/// Circulant graph: `i ~ j` iff the circular distance between them is in `distances`.
///
/// Every distance must satisfy `1 ≤ d ≤ n/2`; `d = n/2` (n even) contributes a
/// single perfect matching.
pub fn make_circulant(n: usize, distances: &[usize]) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    for &d in distances {
        if d == 0 || 2 * d > n {
            return Err(invalid(format!(
                "circulant distance {d} outside 1..={} for n = {n}",
                n / 2
            )));
        }
    }
    for i in 0..n {
        for &d in distances {
            let j = (i + d) % n;
            g.put(i + 1, j + 1, true);
        }
    }
    Ok(g)
}

/// G(n, 1/2) drawn from a ChaCha8 stream seeded with `seed`.
pub fn make_random_graph(n: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph_from_rng(n, &mut rng)
}

/// G(n, 1/2) drawing one fair bit per pair, pairs in lexicographic order.
pub fn random_graph_from_rng(n: usize, rng: &mut impl Rng) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(0.5) {
                g.put(u, v, true);
            }
        }
    }
    Ok(g)
}

/// Parses the edge-list format described in the module docs.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match graph.as_mut() {
            None => {
                let n = match tokens.as_slice() {
                    ["n", count] => count
                        .parse::<usize>()
                        .map_err(|_| ParseError::new(line_no, format!("bad vertex count `{count}`")))?,
                    _ => return Err(ParseError::new(line_no, "expected header `n <count>`")),
                };
                graph = Some(Graph::empty(n).map_err(|e| ParseError::new(line_no, e.to_string()))?);
            }
            Some(g) => {
                let [u, v] = tokens.as_slice() else {
                    return Err(ParseError::new(line_no, "expected edge `u v`"));
                };
                let parse = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| ParseError::new(line_no, format!("bad vertex `{t}`")))
                };
                let (u, v) = (parse(u)?, parse(v)?);
                if u == v {
                    return Err(ParseError::new(line_no, format!("self-loop at vertex {u}")));
                }
                for x in [u, v] {
                    if x == 0 || x > g.n {
                        return Err(ParseError::new(
                            line_no,
                            format!("vertex {x} out of range 1..={}", g.n),
                        ));
                    }
                }
                if g.has_edge(u, v) {
                    return Err(ParseError::new(line_no, format!("duplicate edge {{{u},{v}}}")));
                }
                g.put(u, v, true);
            }
        }
    }
    graph.ok_or_else(|| ParseError::new(0, "missing header `n <count>`"))
}

/// Canonical edge-list text: header, then one `u v` line per edge with `u < v`.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n);
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_simple(g: &Graph) {
        let a = g.adjacency();
        for i in 0..g.n() {
            assert!(!a.get(i, i));
            for j in 0..g.n() {
                assert_eq!(a.get(i, j), a.get(j, i));
            }
        }
    }

    #[test]
    fn t4_matches_displayed_matrix() {
        let expected = F2Matrix::from_rows(&[
            [0u8, 1, 1, 1, 1, 0, 0, 0],
            [1, 0, 1, 1, 0, 1, 0, 0],
            [1, 1, 0, 1, 0, 0, 1, 0],
            [1, 1, 1, 0, 0, 0, 0, 1],
            [1, 0, 0, 0, 0, 1, 1, 1],
            [0, 1, 0, 0, 1, 0, 1, 1],
            [0, 0, 1, 0, 1, 1, 0, 1],
            [0, 0, 0, 1, 1, 1, 1, 0],
        ])
        .unwrap();
        let t4 = make_turan_pair_graph(4).unwrap();
        assert_eq!(t4.adjacency(), &expected);
        let block = t4.adjacency().submatrix(&[0, 1, 2, 3], &[4, 5, 6, 7]).unwrap();
        assert_eq!(block, F2Matrix::identity(4));
        assert_eq!(block.rank(), 4);
    }

    #[test]
    fn t2_and_t3() {
        let t2 = make_turan_pair_graph(2).unwrap();
        assert_eq!(t2.edges(), vec![(1, 2), (1, 3), (2, 4), (3, 4)]);
        assert_eq!(make_turan_pair_graph(3).unwrap().edge_count(), 9);
        assert!(make_turan_pair_graph(1).is_err());
        assert!(make_turan_pair_graph(0).is_err());
    }

    #[test]
    fn turan_pair_edge_count() {
        for k in 2..=16 {
            let g = make_turan_pair_graph(k).unwrap();
            assert_eq!(g.edge_count(), k * (k - 1) + k);
            assert_simple(&g);
        }
    }

    #[test]
    fn circulant_examples() {
        let g = make_circulant(12, &[1, 3, 6]).unwrap();
        let nbrs: Vec<usize> = (1..=12).filter(|&v| g.has_edge(1, v)).collect();
        assert_eq!(nbrs, vec![2, 4, 7, 10, 12]);
        assert!((1..=12).all(|v| g.degree(v) == 5));

        let c4 = make_circulant(4, &[1]).unwrap();
        assert_eq!(c4.edges(), vec![(1, 2), (1, 4), (2, 3), (3, 4)]);

        let k5 = make_circulant(5, &[1, 2]).unwrap();
        assert_eq!(k5.edge_count(), 10);

        assert!(make_circulant(12, &[7]).is_err());
        assert!(make_circulant(12, &[0]).is_err());
        assert!(make_circulant(5, &[3]).is_err());
    }

    #[test]
    fn circulants_are_regular() {
        for n in 3..=14 {
            for d1 in 1..=n / 2 {
                for d2 in d1..=n / 2 {
                    let g = make_circulant(n, &[d1, d2]).unwrap();
                    assert_simple(&g);
                    let deg = g.degree(1);
                    assert!((1..=n).all(|v| g.degree(v) == deg));
                }
            }
        }
    }

    #[test]
    fn random_graph_basics() {
        assert_eq!(make_random_graph(1, 99).unwrap().edge_count(), 0);
        assert_eq!(make_random_graph(8, 5).unwrap(), make_random_graph(8, 5).unwrap());
        assert_ne!(make_random_graph(8, 5).unwrap(), make_random_graph(8, 6).unwrap());
        assert_simple(&make_random_graph(20, 3).unwrap());
    }

    #[test]
    fn random_graph_edge_mean() {
        // Binomial(28, 1/2) per graph: mean 14, sd sqrt(7); mean of 10^4 samples has sd sqrt(7)/100.
        let samples = 10_000;
        let total: usize = (0..samples)
            .map(|s| make_random_graph(8, s).unwrap().edge_count())
            .sum();
        let mean = total as f64 / samples as f64;
        let se = (7.0f64).sqrt() / (samples as f64).sqrt();
        assert!((mean - 14.0).abs() < 3.0 * se, "mean edge count {mean}");
    }

    #[test]
    fn parse_examples() {
        let g = parse_edge_list("n 2\n1 2\n").unwrap();
        assert_eq!(g.edges(), vec![(1, 2)]);

        let g = parse_edge_list("# header comment\r\nn 3   # three\r\n\r\n3 1\r\n").unwrap();
        assert_eq!(g.edges(), vec![(1, 3)]);

        let err = parse_edge_list("n 3\n1 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("self-loop"));

        let err = parse_edge_list("n 3\n1 2\n2 1\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("duplicate"));

        let err = parse_edge_list("n 3\n1 4\n").unwrap_err();
        assert!(err.message.contains("out of range"));
        assert!(parse_edge_list("n 3\n1 2 3\n").is_err());
        assert!(parse_edge_list("n 3\n1 x\n").is_err());
        assert!(parse_edge_list("1 2\n").is_err());
        assert!(parse_edge_list("n 0\n").is_err());
        assert!(parse_edge_list("n 65\n").is_err());
        assert_eq!(parse_edge_list("# nothing\n").unwrap_err().line, 0);
    }

    #[test]
    fn serialize_t4() {
        let text = serialize_edge_list(&make_turan_pair_graph(4).unwrap());
        assert_eq!(text.lines().count(), 1 + 16);
        assert!(text.starts_with("n 8\n1 2\n"));
    }

    #[test]
    fn toggle() {
        let g = Graph::empty(3).unwrap();
        let g2 = g.with_toggled(3, 1).unwrap();
        assert!(g2.has_edge(1, 3));
        assert_eq!(g2.with_toggled(1, 3).unwrap(), g);
        assert!(g.with_toggled(2, 2).is_err());
    }

    #[test]
    fn from_adjacency_validates() {
        let t3 = make_turan_pair_graph(3).unwrap();
        assert_eq!(Graph::from_adjacency(t3.adjacency().clone()).unwrap(), t3);
        let mut bad = F2Matrix::zeros(3, 3);
        bad.set(0, 1, true);
        assert!(Graph::from_adjacency(bad).is_err());
        assert!(Graph::from_adjacency(F2Matrix::identity(2)).is_err());
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(n in 1usize..=64, seed in any::<u64>()) {
            let g = make_random_graph(n, seed).unwrap();
            let text = serialize_edge_list(&g);
            prop_assert_eq!(parse_edge_list(&text).unwrap(), g.clone());
            let json = serde_json::to_string(&g).unwrap();
            prop_assert_eq!(serde_json::from_str::<Graph>(&json).unwrap(), g);
        }
    }
}
