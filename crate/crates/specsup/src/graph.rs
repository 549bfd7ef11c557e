//! Graph data model: bit-row adjacency, bipartitions, exact/heuristic max-cut.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors raised by graph construction and graph operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("loop at vertex {0} is not allowed")]
    Loop(usize),
    #[error("exact max-cut supports n <= {max}, got n = {n}")]
    TooLargeForExact { n: usize, max: usize },
}

/// Largest vertex count for which `max_cut` runs the exact 2^(n-1) sweep.
pub const MAX_EXACT_CUT_N: usize = 28;

/// Immutable simple undirected graph on vertices `0..n`, adjacency as bit rows.
///
/// Row `u` has bit `v` set iff `uv` is an edge. The edge count is cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n, self.m, self.edges())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words], m: 0 }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.set_edge_mut(u, v);
            }
        }
        g.m = n * n.saturating_sub(1) / 2;
        g
    }

    /// Builds a graph from an edge list; duplicate edges are collapsed.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if !g.has_edge(u, v) {
                g.set_edge_mut(u, v);
                g.m += 1;
            }
        }
        Ok(g)
    }

    fn set_edge_mut(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1u64 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1u64 << (u % 64);
    }

    fn clear_edge_mut(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1u64 << (v % 64));
        self.bits[v * self.words + u / 64] &= !(1u64 << (u % 64));
    }

    /// Returns a new graph with the edge `uv` flipped.
    pub fn toggle_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        let mut g = self.clone();
        if g.has_edge(u, v) {
            g.clear_edge_mut(u, v);
            g.m -= 1;
        } else {
            g.set_edge_mut(u, v);
            g.m += 1;
        }
        Ok(g)
    }

    /// Returns a new graph with edge `uv` present.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        if self.has_edge(u, v) {
            Ok(self.clone())
        } else {
            self.toggle_edge(u, v)
        }
    }

    /// Returns a new graph with edge `uv` absent.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        if self.has_edge(u, v) {
            self.toggle_edge(u, v)
        } else {
            Ok(self.clone())
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of common neighbors of `u` and `v`.
    #[inline]
    pub fn common_degree(&self, u: usize, v: usize) -> usize {
        let (ru, rv) = (self.row(u), self.row(v));
        ru.iter().zip(rv).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Degree of `u` restricted to the vertex set given as a bit mask.
    pub fn degree_in(&self, u: usize, mask: &[u64]) -> usize {
        self.row(u).iter().zip(mask).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(self.row(u))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Induced subgraph on the vertices listed in `keep` (relabeled 0..keep.len()).
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::empty(keep.len());
        let mut m = 0;
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge_mut(i, j);
                    m += 1;
                }
            }
        }
        g.m = m;
        g
    }

    /// Graph with one vertex removed and the remainder relabeled in order.
    pub fn delete_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Relabels vertices: vertex `u` of `self` becomes `perm[u]` of the result.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    g.set_edge_mut(perm[u], perm[v]);
                }
            }
        }
        g.m = self.m;
        g
    }

    /// Checks symmetry, zero diagonal, and the cached edge count.
    pub fn check_invariants(&self) -> bool {
        let mut pop = 0usize;
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return false;
            }
            for v in 0..self.n {
                if self.has_edge(u, v) != self.has_edge(v, u) {
                    return false;
                }
            }
            pop += self.degree(u);
        }
        pop == 2 * self.m
    }
}

/// Iterator over set bit positions of a word slice.
pub struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        let cur = if words.is_empty() { 0 } else { words[0] };
        BitIter { words, idx: 0, cur }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Which side of a bipartition a vertex is on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    S,
    T,
}

/// A 2-coloring of the vertices with cached internal and crossing edge counts.
#[derive(Clone, Debug)]
pub struct Bipartition {
    pub side: Vec<Side>,
    pub e_s: usize,
    pub e_t: usize,
    pub e_st: usize,
}

impl Bipartition {
    /// Builds a bipartition from a side assignment, computing the edge caches.
    pub fn new(g: &Graph, side: Vec<Side>) -> Self {
        assert_eq!(side.len(), g.n());
        let (mut e_s, mut e_t, mut e_st) = (0, 0, 0);
        for (u, v) in g.edges() {
            match (side[u], side[v]) {
                (Side::S, Side::S) => e_s += 1,
                (Side::T, Side::T) => e_t += 1,
                _ => e_st += 1,
            }
        }
        Bipartition { side, e_s, e_t, e_st }
    }

    /// Builds a bipartition from the bit mask of S-vertices.
    pub fn from_mask(g: &Graph, mask: u64) -> Self {
        let side = (0..g.n())
            .map(|v| if mask >> v & 1 == 1 { Side::S } else { Side::T })
            .collect();
        Bipartition::new(g, side)
    }

    pub fn s_vertices(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&v| self.side[v] == Side::S).collect()
    }

    pub fn t_vertices(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&v| self.side[v] == Side::T).collect()
    }

    /// Bit mask (as row words) of vertices on the given side.
    pub fn side_mask(&self, which: Side, words: usize) -> Vec<u64> {
        let mut mask = vec![0u64; words];
        for (v, &s) in self.side.iter().enumerate() {
            if s == which {
                mask[v / 64] |= 1u64 << (v % 64);
            }
        }
        mask
    }
}

/// Distance from bipartiteness: `m - maxcut`, with the witness cut.
#[derive(Clone, Debug)]
pub struct BipartiteDistance {
    /// Edges that must be removed to reach a bipartite subgraph (exact mode),
    /// or an upper bound on that number (heuristic mode).
    pub value: usize,
    pub exact: bool,
    pub witness: Bipartition,
}

/// Mode selector for [`max_cut`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutMode {
    Exact,
    Heuristic,
}

/// BFS 2-coloring; returns a proper bipartition if one exists.
pub fn is_bipartite(g: &Graph) -> Option<Bipartition> {
    let n = g.n();
    let mut color: Vec<Option<Side>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(Side::S);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            let next = if cu == Side::S { Side::T } else { Side::S };
            for v in g.neighbors(u) {
                match color[v] {
                    None => {
                        color[v] = Some(next);
                        queue.push_back(v);
                    }
                    Some(cv) => {
                        if cv == cu {
                            return None;
                        }
                    }
                }
            }
        }
    }
    let side: Vec<Side> = color.into_iter().map(|c| c.unwrap()).collect();
    Some(Bipartition::new(g, side))
}

/// Bipartite distance `D(G) = m - maxcut(G)`.
///
/// Exact mode sweeps all 2^(n-1) bipartitions with Gray-code updates and
/// requires `n <= 28`. Heuristic mode runs seeded local search from random
/// starts and returns an upper bound on `D(G)`.
pub fn max_cut(g: &Graph, mode: CutMode) -> Result<BipartiteDistance, GraphError> {
    match mode {
        CutMode::Exact => max_cut_exact(g),
        CutMode::Heuristic => Ok(max_cut_heuristic(g)),
    }
}

fn max_cut_exact(g: &Graph) -> Result<BipartiteDistance, GraphError> {
    let n = g.n();
    if n > MAX_EXACT_CUT_N {
        return Err(GraphError::TooLargeForExact { n, max: MAX_EXACT_CUT_N });
    }
    if n <= 1 {
        let witness = Bipartition::from_mask(g, if n == 1 { 1 } else { 0 });
        return Ok(BipartiteDistance { value: 0, exact: true, witness });
    }
    // Single-word adjacency copies for the sweep.
    let rows: Vec<u64> = (0..n).map(|u| g.row(u)[0]).collect();
    // Vertex n-1 stays on the T side; Gray-code over the rest.
    let sweep_n = n - 1;
    let mut best_cut = 0usize;
    let mut best_mask = 0u64;
    let mut mask = 0u64;
    let mut cut = 0i64;
    for code in 1u64..(1u64 << sweep_n) {
        // Gray-code order: step `code` flips bit trailing_zeros(code).
        let v = code.trailing_zeros() as usize;
        let row = rows[v];
        let d_same; // neighbors currently on v's side (before flip)
        let d_other;
        if mask >> v & 1 == 1 {
            d_same = (row & mask).count_ones() as i64;
            d_other = (row & !mask).count_ones() as i64;
            mask &= !(1 << v);
        } else {
            d_same = (row & !mask).count_ones() as i64;
            d_other = (row & mask).count_ones() as i64;
            mask |= 1 << v;
        }
        // Flipping v turns same-side edges into cut edges and vice versa.
        cut += d_same - d_other;
        if cut as usize > best_cut {
            best_cut = cut as usize;
            best_mask = mask;
        }
    }
    let witness = Bipartition::from_mask(g, best_mask);
    debug_assert_eq!(witness.e_st, best_cut);
    Ok(BipartiteDistance { value: g.m() - best_cut, exact: true, witness })
}

fn max_cut_heuristic(g: &Graph) -> BipartiteDistance {
    let n = g.n();
    if n == 0 {
        let witness = Bipartition::new(g, vec![]);
        return BipartiteDistance { value: 0, exact: false, witness };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let restarts = 8 + n;
    let mut best_side: Vec<Side> = vec![Side::S; n];
    let mut best_cut = 0usize;
    // Also try the BFS 2-coloring start so bipartite graphs reach D = 0.
    let mut starts: Vec<Vec<Side>> = Vec::new();
    if let Some(b) = is_bipartite(g) {
        starts.push(b.side);
    }
    for _ in 0..restarts {
        starts.push((0..n).map(|_| if rng.random_bool(0.5) { Side::S } else { Side::T }).collect());
    }
    for mut side in starts {
        // Local moves: flip any vertex that increases the cut, to a fixed point.
        loop {
            let mut improved = false;
            for v in 0..n {
                let mut same = 0i64;
                let mut other = 0i64;
                for u in g.neighbors(v) {
                    if side[u] == side[v] {
                        same += 1;
                    } else {
                        other += 1;
                    }
                }
                if same > other {
                    side[v] = if side[v] == Side::S { Side::T } else { Side::S };
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        let cut = Bipartition::new(g, side.clone()).e_st;
        if cut > best_cut {
            best_cut = cut;
            best_side = side;
        }
    }
    let witness = Bipartition::new(g, best_side);
    BipartiteDistance { value: g.m() - witness.e_st, exact: false, witness }
}

/// The paper's bad sets for a bipartitioned graph, in exact integer arithmetic.
///
/// `L` collects vertices of degree at most `(1/2 - 1/200) n`; `W` collects
/// vertices with at least `n/150` neighbors inside their own side.
pub fn bad_sets(g: &Graph, p: &Bipartition) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let words = g.words_per_row();
    let s_mask = p.side_mask(Side::S, words);
    let t_mask = p.side_mask(Side::T, words);
    let mut l = Vec::new();
    let mut w = Vec::new();
    for v in 0..n {
        // d(v) <= (1/2 - 1/200) n  <=>  200 d(v) <= 99 n
        if 200 * g.degree(v) <= 99 * n {
            l.push(v);
        }
        let own = match p.side[v] {
            Side::S => g.degree_in(v, &s_mask),
            Side::T => g.degree_in(v, &t_mask),
        };
        // d_own(v) >= n/150  <=>  150 d_own(v) >= n
        if 150 * own >= n {
            w.push(v);
        }
    }
    (l, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;

    fn c5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn from_edges_triangle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.m(), 3);
        assert!(g.check_invariants());
    }

    #[test]
    fn from_edges_empty_and_cycle() {
        let g = Graph::from_edges(4, &[]).unwrap();
        assert_eq!(g.m(), 0);
        let c = c5();
        assert_eq!(c.m(), 5);
        assert!(c.vertices().all(|v| c.degree(v) == 2));
    }

    #[test]
    fn from_edges_dedup() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn from_edges_errors() {
        assert_eq!(
            Graph::from_edges(3, &[(0, 3)]).unwrap_err(),
            GraphError::VertexOutOfRange(3, 3)
        );
        assert_eq!(Graph::from_edges(3, &[(1, 1)]).unwrap_err(), GraphError::Loop(1));
    }

    #[test]
    fn toggle_edge_involution() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p3 = k3.toggle_edge(0, 1).unwrap();
        assert_eq!(p3.m(), 2);
        let back = p3.toggle_edge(0, 1).unwrap();
        assert_eq!(back, k3);
        let e = Graph::empty(2).toggle_edge(0, 1).unwrap();
        assert_eq!(e.m(), 1);
        assert!(Graph::empty(2).toggle_edge(0, 0).is_err());
    }

    #[test]
    fn bipartite_detection() {
        let t82 = construct::turan_bipartite(8).unwrap();
        let b = is_bipartite(&t82).unwrap();
        assert_eq!(b.e_s, 0);
        assert_eq!(b.e_t, 0);
        assert_eq!(b.e_st, t82.m());

        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(is_bipartite(&k3).is_none());

        // C4 + C5 disjoint union contains an odd cycle.
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
        edges.extend([(4, 5), (5, 6), (6, 7), (7, 8), (8, 4)]);
        let g = Graph::from_edges(9, &edges).unwrap();
        assert!(is_bipartite(&g).is_none());
    }

    #[test]
    fn max_cut_small_cases() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let d = max_cut(&k3, CutMode::Exact).unwrap();
        assert_eq!(d.value, 1);
        assert!(d.exact);
        assert_eq!(d.witness.e_s + d.witness.e_t, 1);

        // K5: brute force over all 16 bipartitions gives maxcut 6, D = 4.
        let k5 = Graph::complete(5);
        let d = max_cut(&k5, CutMode::Exact).unwrap();
        assert_eq!(d.value, 4);

        let t = construct::turan_bipartite(9).unwrap();
        assert_eq!(max_cut(&t, CutMode::Exact).unwrap().value, 0);
    }

    #[test]
    fn max_cut_exact_size_error() {
        let g = Graph::empty(29);
        assert!(matches!(
            max_cut(&g, CutMode::Exact),
            Err(GraphError::TooLargeForExact { .. })
        ));
    }

    #[test]
    fn heuristic_upper_bounds_exact() {
        // Heuristic D is an upper bound on exact D on a spread of small graphs.
        let mut graphs = vec![c5(), Graph::complete(6), Graph::empty(5)];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = 1 + rng.random_range(0..8usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            graphs.push(Graph::from_edges(n, &edges).unwrap());
        }
        for g in graphs {
            let exact = max_cut(&g, CutMode::Exact).unwrap();
            let heur = max_cut(&g, CutMode::Heuristic).unwrap();
            assert!(heur.value >= exact.value, "heuristic beat exact on {:?}", g);
            let b = &heur.witness;
            assert_eq!(b.e_s + b.e_t + b.e_st, g.m());
        }
    }

    #[test]
    fn bad_sets_examples() {
        // T_{400,2}: every degree is 200, nothing internal.
        let t = construct::turan_bipartite(400).unwrap();
        let p = is_bipartite(&t).unwrap();
        let (l, w) = bad_sets(&t, &p);
        assert!(l.is_empty());
        assert!(w.is_empty());

        // Star K_{1,399} with the center in S: every leaf has degree 1.
        let edges: Vec<(usize, usize)> = (1..400).map(|v| (0, v)).collect();
        let star = Graph::from_edges(400, &edges).unwrap();
        let mut side = vec![Side::T; 400];
        side[0] = Side::S;
        let p = Bipartition::new(&star, side);
        let (l, _) = bad_sets(&star, &p);
        assert_eq!(l, (1..400).collect::<Vec<_>>());

        // K_{200,200}^{+2}: internal degrees at most 1 < 400/150.
        let g = construct::k_plus2(400).unwrap();
        let side: Vec<Side> =
            (0..400).map(|v| if v < 200 { Side::S } else { Side::T }).collect();
        let p = Bipartition::new(&g, side);
        let (_, w) = bad_sets(&g, &p);
        assert!(w.is_empty());
    }

    #[test]
    fn bipartition_cache_consistency() {
        let g = construct::friendship(3).unwrap();
        let side: Vec<Side> =
            (0..g.n()).map(|v| if v % 2 == 0 { Side::S } else { Side::T }).collect();
        let p = Bipartition::new(&g, side);
        assert_eq!(p.e_s + p.e_t + p.e_st, g.m());
    }
}
