//! Exact substructure counting: triangles, bowties, books, friendship graphs
//! F_k, triangular edges, maximum matchings, and the triangle covering number.

use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("triangle cover: too many triangles ({0}, limit {1})")]
    TooManyTriangles(usize, usize),
}

/// Per-vertex and per-edge triangle statistics.
#[derive(Clone, Debug)]
pub struct TriangleStats {
    /// Total number of triangles t(G).
    pub total: usize,
    /// Triangles through each vertex.
    pub per_vertex: Vec<usize>,
    /// For each edge (u, v) with u < v: |N(u) ∩ N(v)|.
    pub per_edge: Vec<((usize, usize), usize)>,
}

/// Exact triangle counts via bitset row intersections.
pub fn triangle_stats(g: &Graph) -> TriangleStats {
    let n = g.n();
    let mut per_vertex = vec![0usize; n];
    let mut per_edge = Vec::with_capacity(g.m());
    let mut total3 = 0usize;
    for u in 0..n {
        for v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            let c = g.common_degree(u, v);
            per_edge.push(((u, v), c));
            per_vertex[u] += c;
            per_vertex[v] += c;
            total3 += c;
        }
    }
    // Each triangle is counted once per edge, and per_vertex twice per
    // triangle through the two incident edges at the vertex... the edge scan
    // adds |N(u) ∩ N(v)| to both endpoints, so each triangle contributes 2 to
    // each of its three vertices.
    let total = total3 / 3;
    let per_vertex = per_vertex.into_iter().map(|x| x / 2).collect();
    TriangleStats { total, per_vertex, per_edge }
}

/// Largest number of triangles sharing one edge; 0 when triangle-free.
pub fn booksize(g: &Graph) -> usize {
    triangle_stats(g).per_edge.iter().map(|&(_, c)| c).max().unwrap_or(0)
}

/// Number of edges that lie in at least one triangle.
pub fn triangular_edge_count(g: &Graph) -> usize {
    triangle_stats(g).per_edge.iter().filter(|&&(_, c)| c >= 1).count()
}

/// Number of bowtie (F_2) subgraphs: unordered pairs of triangles sharing
/// exactly one vertex, counted at the shared vertex as matchings of size 2
/// in the neighborhood.
pub fn count_bowties(g: &Graph) -> usize {
    let n = g.n();
    let mut total = 0usize;
    for v in 0..n {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        let h = g.induced(&nbrs);
        let e_v = h.m();
        if e_v < 2 {
            continue;
        }
        // pairs of edges sharing an endpoint
        let sharing: usize = h.vertices().map(|u| {
            let d = h.degree(u);
            d * d.saturating_sub(1) / 2
        }).sum();
        total += e_v * (e_v - 1) / 2 - sharing;
    }
    total
}

/// Brute-force bowtie count: enumerate all triangles, then count unordered
/// pairs sharing exactly one vertex. Oracle for [`count_bowties`].
pub fn count_bowties_bruteforce(g: &Graph) -> usize {
    let tris = list_triangles(g);
    let mut count = 0usize;
    for i in 0..tris.len() {
        for j in (i + 1)..tris.len() {
            let shared = tris[i].iter().filter(|v| tris[j].contains(v)).count();
            if shared == 1 {
                count += 1;
            }
        }
    }
    count
}

/// All triangles as sorted vertex triples.
pub fn list_triangles(g: &Graph) -> Vec<[usize; 3]> {
    let n = g.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            let ru = g.row(u);
            let rv = g.row(v);
            for (wi, (a, b)) in ru.iter().zip(rv).enumerate() {
                let mut common = a & b;
                while common != 0 {
                    let w = wi * 64 + common.trailing_zeros() as usize;
                    common &= common - 1;
                    if w > v {
                        out.push([u, v, w]);
                    }
                }
            }
        }
    }
    out
}

/// Does some vertex have a matching of size `k` in its neighborhood?
/// Equivalently: does the graph contain the friendship graph F_k?
pub fn contains_fk(g: &Graph, k: usize) -> bool {
    assert!(k >= 1);
    for v in g.vertices() {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        if nbrs.len() < 2 * k {
            continue;
        }
        let h = g.induced(&nbrs);
        if max_matching(&h) >= k {
            return true;
        }
    }
    false
}

/// Largest `k` such that the graph contains F_k (0 when triangle-free).
pub fn max_fan(g: &Graph) -> usize {
    let mut best = 0;
    for v in g.vertices() {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        if nbrs.len() < 2 * (best + 1) {
            continue;
        }
        let h = g.induced(&nbrs);
        best = best.max(max_matching(&h));
    }
    best
}

/// Maximum matching size on a general graph (Edmonds blossom algorithm).
pub fn max_matching(g: &Graph) -> usize {
    Blossom::new(g).run()
}

/// O(V^3) blossom implementation with base/parent contraction arrays.
struct Blossom<'a> {
    g: &'a Graph,
    n: usize,
    mate: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    queue: Vec<usize>,
    in_queue: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        Blossom {
            g,
            n,
            mate: vec![None; n],
            parent: vec![None; n],
            base: (0..n).collect(),
            queue: Vec::new(),
            in_queue: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn run(&mut self) -> usize {
        // Greedy seed matching speeds up the augmenting phase.
        for u in 0..self.n {
            if self.mate[u].is_none() {
                for v in self.g.neighbors(u) {
                    if self.mate[v].is_none() {
                        self.mate[u] = Some(v);
                        self.mate[v] = Some(u);
                        break;
                    }
                }
            }
        }
        for u in 0..self.n {
            if self.mate[u].is_none() {
                self.augment_from(u);
            }
        }
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut used = vec![false; self.n];
        loop {
            a = self.base[a];
            used[a] = true;
            match self.mate[a] {
                Some(m) => match self.parent[m] {
                    Some(p) => a = p,
                    None => break,
                },
                None => break,
            }
        }
        loop {
            b = self.base[b];
            if used[b] {
                return b;
            }
            b = self.parent[self.mate[b].unwrap()].unwrap();
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let mv = self.mate[v].unwrap();
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mv]] = true;
            self.parent[v] = Some(child);
            child = mv;
            v = self.parent[mv].unwrap();
        }
    }

    fn add_to_queue(&mut self, v: usize) {
        if !self.in_queue[v] {
            self.in_queue[v] = true;
            self.queue.push(v);
        }
    }

    fn augment_from(&mut self, root: usize) {
        self.parent = vec![None; self.n];
        self.base = (0..self.n).collect();
        self.queue.clear();
        self.in_queue = vec![false; self.n];
        self.add_to_queue(root);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let nbrs: Vec<usize> = self.g.neighbors(u).collect();
            for v in nbrs {
                if self.base[u] == self.base[v] || self.mate[u] == Some(v) {
                    continue;
                }
                if v == root || matches!(self.mate[v], Some(mv) if self.parent[mv].is_some()) {
                    // Odd cycle found: contract the blossom.
                    let b = self.lca(u, v);
                    self.in_blossom = vec![false; self.n];
                    self.mark_path(u, b, v);
                    self.mark_path(v, b, u);
                    for i in 0..self.n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = b;
                            self.add_to_queue(i);
                        }
                    }
                } else if self.parent[v].is_none() {
                    self.parent[v] = Some(u);
                    match self.mate[v] {
                        None => {
                            // Augmenting path found; flip it.
                            self.augment_along(v);
                            return;
                        }
                        Some(mv) => {
                            self.add_to_queue(mv);
                        }
                    }
                }
            }
        }
    }

    fn augment_along(&mut self, mut v: usize) {
        while let Some(p) = self.parent[v] {
            let next = self.mate[p];
            self.mate[v] = Some(p);
            self.mate[p] = Some(v);
            match next {
                Some(nv) => v = nv,
                None => break,
            }
        }
    }
}

/// Default cap on the number of triangles the exact cover search accepts.
pub const TAU3_TRIANGLE_LIMIT: usize = 100_000;

/// Exact triangle covering number via branch and bound on the triangle
/// hypergraph, with a greedy upper bound and a disjoint-packing lower bound.
pub fn triangle_cover_number(g: &Graph) -> Result<usize, CountError> {
    let tris = list_triangles(g);
    if tris.len() > TAU3_TRIANGLE_LIMIT {
        return Err(CountError::TooManyTriangles(tris.len(), TAU3_TRIANGLE_LIMIT));
    }
    if tris.is_empty() {
        return Ok(0);
    }
    // Fast path: one vertex covering everything.
    let stats = triangle_stats(g);
    if stats.per_vertex.iter().any(|&c| c == stats.total) {
        return Ok(1);
    }
    let mut best = greedy_cover(g.n(), &tris);
    let mut chosen = vec![false; g.n()];
    branch_cover(&tris, &mut chosen, 0, &mut best);
    Ok(best)
}

/// Cheap check for `tau_3(G) >= 2` used by theorem hypotheses.
pub fn tau3_at_least_2(g: &Graph) -> bool {
    let stats = triangle_stats(g);
    stats.total > 0 && !stats.per_vertex.iter().any(|&c| c == stats.total)
}

fn greedy_cover(n: usize, tris: &[[usize; 3]]) -> usize {
    let mut covered = vec![false; tris.len()];
    let mut remaining = tris.len();
    let mut size = 0;
    while remaining > 0 {
        let mut counts = vec![0usize; n];
        for (i, t) in tris.iter().enumerate() {
            if !covered[i] {
                for &v in t {
                    counts[v] += 1;
                }
            }
        }
        let v = (0..n).max_by_key(|&v| counts[v]).unwrap();
        size += 1;
        for (i, t) in tris.iter().enumerate() {
            if !covered[i] && t.contains(&v) {
                covered[i] = true;
                remaining -= 1;
            }
        }
    }
    size
}

fn packing_lower_bound(tris: &[[usize; 3]], chosen: &[bool]) -> usize {
    // Greedy disjoint packing of uncovered triangles.
    let mut used = vec![false; chosen.len()];
    let mut packed = 0;
    for t in tris {
        if t.iter().any(|&v| chosen[v]) {
            continue;
        }
        if t.iter().all(|&v| !used[v]) {
            for &v in t {
                used[v] = true;
            }
            packed += 1;
        }
    }
    packed
}

fn branch_cover(tris: &[[usize; 3]], chosen: &mut Vec<bool>, size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    let uncovered = tris.iter().find(|t| !t.iter().any(|&v| chosen[v]));
    match uncovered {
        None => {
            *best = size;
        }
        Some(t) => {
            if size + packing_lower_bound(tris, chosen) >= *best {
                return;
            }
            for &v in t {
                chosen[v] = true;
                branch_cover(tris, chosen, size + 1, best);
                chosen[v] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn k4_triangle_stats() {
        let k4 = Graph::complete(4);
        let s = triangle_stats(&k4);
        assert_eq!(s.total, 4);
        assert!(s.per_vertex.iter().all(|&c| c == 3));
        assert!(s.per_edge.iter().all(|&(_, c)| c == 2));
        assert_eq!(s.per_vertex.iter().sum::<usize>(), 3 * s.total);
        assert_eq!(s.per_edge.iter().map(|&(_, c)| c).sum::<usize>(), 3 * s.total);
    }

    #[test]
    fn kplus2_triangles() {
        let g = construct::k_plus2(10).unwrap();
        assert_eq!(triangle_stats(&g).total, 10);
        let t = construct::turan_bipartite(12).unwrap();
        assert_eq!(triangle_stats(&t).total, 0);
    }

    #[test]
    fn booksize_examples() {
        assert_eq!(booksize(&Graph::complete(4)), 2);
        let t = construct::turan_bipartite(12).unwrap();
        let plus = t.toggle_edge(0, 1).unwrap(); // inside edge in one part
        assert_eq!(booksize(&plus), 6);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(booksize(&c5), 0);
    }

    #[test]
    fn bowtie_counts() {
        let f2 = construct::friendship(2).unwrap();
        assert_eq!(count_bowties(&f2), 1);
        assert_eq!(count_bowties(&Graph::complete(5)), 15);
        assert_eq!(count_bowties_bruteforce(&Graph::complete(5)), 15);
        let g = construct::k_plus2(14).unwrap();
        assert_eq!(count_bowties(&g), 7);
        assert_eq!(count_bowties_bruteforce(&g), 7);
        let k33 = construct::turan_bipartite(6).unwrap();
        assert_eq!(count_bowties_bruteforce(&k33), 0);
        assert_eq!(count_bowties_bruteforce(&construct::friendship(3).unwrap()), 3);
    }

    #[test]
    fn bowtie_oracle_agreement_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let n = rng.random_range(1..=10usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            assert_eq!(count_bowties(&g), count_bowties_bruteforce(&g));
        }
    }

    #[test]
    fn fk_containment() {
        for k in 1..=4 {
            let g = construct::friendship(k).unwrap();
            assert!(contains_fk(&g, k));
            assert!(!contains_fk(&g, k + 1));
        }
        assert!(contains_fk(&Graph::complete(5), 2));
        let b = construct::turan_bipartite(8).unwrap();
        for k in 1..=3 {
            assert!(!contains_fk(&b, k));
        }
    }

    #[test]
    fn matching_examples() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(max_matching(&c5), 2);
        assert_eq!(max_matching(&Graph::complete(4)), 2);
        let k37 = construct::complete_bipartite(3, 7);
        assert_eq!(max_matching(&k37), 3);
        // Petersen graph has a perfect matching.
        let petersen = Graph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            ],
        )
        .unwrap();
        assert_eq!(max_matching(&petersen), 5);
        // Two disjoint triangles: matching 2, needs blossom handling.
        let two_tri = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(max_matching(&two_tri), 2);
    }

    #[test]
    fn matching_matches_bruteforce_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..80 {
            let n = rng.random_range(1..=9usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            assert_eq!(max_matching(&g), brute_matching(&g), "on {:?}", g);
        }
    }

    fn brute_matching(g: &Graph) -> usize {
        fn rec(edges: &[(usize, usize)], used: u64) -> usize {
            for (i, &(u, v)) in edges.iter().enumerate() {
                if used >> u & 1 == 0 && used >> v & 1 == 0 {
                    let take = 1 + rec(&edges[i + 1..], used | 1 << u | 1 << v);
                    let skip = rec(&edges[i + 1..], used);
                    return take.max(skip);
                }
            }
            0
        }
        rec(&g.edges(), 0)
    }

    #[test]
    fn tau3_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(triangle_cover_number(&k3).unwrap(), 1);
        for k in 1..=4 {
            assert_eq!(triangle_cover_number(&construct::friendship(k).unwrap()).unwrap(), 1);
        }
        let two_tri = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(triangle_cover_number(&two_tri).unwrap(), 2);
        assert_eq!(triangle_cover_number(&construct::turan_bipartite(8).unwrap()).unwrap(), 0);
        assert_eq!(triangle_cover_number(&Graph::complete(6)).unwrap(), 4);
        assert!(tau3_at_least_2(&two_tri));
        assert!(!tau3_at_least_2(&k3));
    }

    #[test]
    fn triangular_edges_examples() {
        assert_eq!(triangular_edge_count(&Graph::complete(4)), 6);
        assert_eq!(triangular_edge_count(&construct::turan_bipartite(10).unwrap()), 0);
        let plus = construct::turan_bipartite(10).unwrap().toggle_edge(0, 1).unwrap();
        assert_eq!(triangular_edge_count(&plus), 11);
    }
}
