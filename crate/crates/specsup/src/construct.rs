//! Parametrized builders for every named graph family: balanced complete
//! bipartite graphs, embedded-edge variants, friendship graphs, and the
//! cross-edge deletion families reconstructed up to isomorphism.

use crate::canon;
use crate::count;
use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("family requires {what} >= {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },
    #[error("label {0} out of range {1}")]
    LabelOutOfRange(usize, usize),
    #[error("duplicate entry in spec list")]
    Duplicate,
    #[error("loop edge in spec")]
    LoopEdge,
    #[error("cannot delete {want} cross edges, only {have} exist")]
    NotEnoughCrossEdges { want: usize, have: usize },
}

/// A complete bipartite graph K_{s,t} modified by inside edges on either
/// side and removed cross edges. S-labels are `0..s`, T-labels `0..t`
/// (offset by `s` in the built graph).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedBipartiteSpec {
    pub s: usize,
    pub t: usize,
    pub inside_s: Vec<(usize, usize)>,
    pub inside_t: Vec<(usize, usize)>,
    pub missing_cross: Vec<(usize, usize)>,
}

impl EmbeddedBipartiteSpec {
    pub fn plain(s: usize, t: usize) -> Self {
        EmbeddedBipartiteSpec { s, t, inside_s: vec![], inside_t: vec![], missing_cross: vec![] }
    }

    pub fn with_inside_s(mut self, edges: &[(usize, usize)]) -> Self {
        self.inside_s = edges.to_vec();
        self
    }

    pub fn with_inside_t(mut self, edges: &[(usize, usize)]) -> Self {
        self.inside_t = edges.to_vec();
        self
    }

    /// Closed-form edge count `s*t - |missing| + |insideS| + |insideT|`.
    pub fn edge_count(&self) -> usize {
        self.s * self.t - self.missing_cross.len() + self.inside_s.len() + self.inside_t.len()
    }

    fn validate(&self) -> Result<(), ConstructError> {
        let check_pairs = |pairs: &[(usize, usize)], limit: usize, loops: bool| {
            let mut seen = std::collections::HashSet::new();
            for &(a, b) in pairs {
                if a >= limit {
                    return Err(ConstructError::LabelOutOfRange(a, limit));
                }
                if b >= limit {
                    return Err(ConstructError::LabelOutOfRange(b, limit));
                }
                if loops && a == b {
                    return Err(ConstructError::LoopEdge);
                }
                let key = if loops { (a.min(b), a.max(b)) } else { (a, b) };
                if !seen.insert(key) {
                    return Err(ConstructError::Duplicate);
                }
            }
            Ok(())
        };
        check_pairs(&self.inside_s, self.s, true)?;
        check_pairs(&self.inside_t, self.t, true)?;
        // Missing cross pairs: first label on S, second on T.
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &self.missing_cross {
            if a >= self.s {
                return Err(ConstructError::LabelOutOfRange(a, self.s));
            }
            if b >= self.t {
                return Err(ConstructError::LabelOutOfRange(b, self.t));
            }
            if !seen.insert((a, b)) {
                return Err(ConstructError::Duplicate);
            }
        }
        Ok(())
    }
}

/// Builds the graph described by an [`EmbeddedBipartiteSpec`].
pub fn build_embedded(spec: &EmbeddedBipartiteSpec) -> Result<Graph, ConstructError> {
    spec.validate()?;
    let (s, t) = (spec.s, spec.t);
    let missing: std::collections::HashSet<(usize, usize)> =
        spec.missing_cross.iter().copied().collect();
    let mut edges = Vec::with_capacity(spec.edge_count());
    for u in 0..s {
        for v in 0..t {
            if !missing.contains(&(u, v)) {
                edges.push((u, s + v));
            }
        }
    }
    for &(a, b) in &spec.inside_s {
        edges.push((a, b));
    }
    for &(a, b) in &spec.inside_t {
        edges.push((s + a, s + b));
    }
    let g = Graph::from_edges(s + t, &edges).expect("validated spec");
    debug_assert_eq!(g.m(), spec.edge_count());
    Ok(g)
}

/// Complete bipartite graph K_{s,t}.
pub fn complete_bipartite(s: usize, t: usize) -> Graph {
    build_embedded(&EmbeddedBipartiteSpec::plain(s, t)).expect("plain spec")
}

/// Balanced complete bipartite Turán graph T_{n,2} with parts ceil(n/2), floor(n/2).
pub fn turan_bipartite(n: usize) -> Result<Graph, ConstructError> {
    if n == 0 {
        return Err(ConstructError::TooSmall { what: "n", min: 1, got: 0 });
    }
    Ok(complete_bipartite(n.div_ceil(2), n / 2))
}

/// K_{s,t}^+ : one edge embedded in the side of size s.
pub fn kst_plus(s: usize, t: usize) -> Result<Graph, ConstructError> {
    if s < 2 {
        return Err(ConstructError::TooSmall { what: "s", min: 2, got: s });
    }
    build_embedded(&EmbeddedBipartiteSpec::plain(s, t).with_inside_s(&[(0, 1)]))
}

/// K_{s,t}^{+2} : two disjoint edges embedded in the side of size s.
pub fn kst_plus2(s: usize, t: usize) -> Result<Graph, ConstructError> {
    if s < 4 {
        return Err(ConstructError::TooSmall { what: "s", min: 4, got: s });
    }
    build_embedded(&EmbeddedBipartiteSpec::plain(s, t).with_inside_s(&[(0, 1), (2, 3)]))
}

/// K_{s,t}^{++} : one embedded edge in each side.
pub fn kst_plus_plus(s: usize, t: usize) -> Result<Graph, ConstructError> {
    if s < 2 {
        return Err(ConstructError::TooSmall { what: "s", min: 2, got: s });
    }
    if t < 2 {
        return Err(ConstructError::TooSmall { what: "t", min: 2, got: t });
    }
    build_embedded(
        &EmbeddedBipartiteSpec::plain(s, t).with_inside_s(&[(0, 1)]).with_inside_t(&[(0, 1)]),
    )
}

/// The spectral extremal graph for F_2-free graphs: one edge embedded into
/// the part of size floor(n/2).
pub fn k_plus(n: usize) -> Result<Graph, ConstructError> {
    if n < 5 {
        return Err(ConstructError::TooSmall { what: "n", min: 5, got: n });
    }
    kst_plus(n / 2, n.div_ceil(2))
}

/// The bowtie-extremal graph: two disjoint edges embedded into the part of
/// size ceil(n/2).
pub fn k_plus2(n: usize) -> Result<Graph, ConstructError> {
    if n < 7 {
        return Err(ConstructError::TooSmall { what: "n", min: 7, got: n });
    }
    kst_plus2(n.div_ceil(2), n / 2)
}

/// K_{a,b}^{+2} with a = 4b + 3, the tightness example for the
/// sqrt(m) - O(1) triangle-count conjecture.
pub fn kab_plus2(b: usize) -> Result<Graph, ConstructError> {
    if b < 1 {
        return Err(ConstructError::TooSmall { what: "b", min: 1, got: b });
    }
    kst_plus2(4 * b + 3, b)
}

/// Y_{n,2,q}: T_{n,2} with q pairwise disjoint edges embedded into the part
/// of size ceil(n/2).
pub fn y_n2q(n: usize, q: usize) -> Result<Graph, ConstructError> {
    let s = n.div_ceil(2);
    if 2 * q > s {
        return Err(ConstructError::TooSmall { what: "ceil(n/2)", min: 2 * q, got: s });
    }
    let inside: Vec<(usize, usize)> = (0..q).map(|i| (2 * i, 2 * i + 1)).collect();
    build_embedded(&EmbeddedBipartiteSpec::plain(s, n / 2).with_inside_s(&inside))
}

/// Friendship graph F_k: k triangles sharing one common vertex.
pub fn friendship(k: usize) -> Result<Graph, ConstructError> {
    if k == 0 {
        return Err(ConstructError::TooSmall { what: "k", min: 1, got: 0 });
    }
    let n = 2 * k + 1;
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
    for i in 0..k {
        edges.push((2 * i + 1, 2 * i + 2));
    }
    Ok(Graph::from_edges(n, &edges).expect("valid friendship edges"))
}

/// One representative per isomorphism class of graphs obtained by deleting
/// `k` cross edges from `build_embedded(base)`.
///
/// Deletion patterns are enumerated over representative endpoints (inside-edge
/// endpoints plus k interchangeable plain vertices per side) and deduplicated
/// under the symmetries of the base: permutations of the inside-edge structure
/// and of the interchangeable plain vertices. The small-size oracle tests in
/// this module cross-check the class inventory against full canonical dedup.
pub fn figure_deletion_family(
    base: &EmbeddedBipartiteSpec,
    k: usize,
) -> Result<Vec<Graph>, ConstructError> {
    base.validate()?;
    let cross_count = base.s * base.t - base.missing_cross.len();
    if k > cross_count {
        return Err(ConstructError::NotEnoughCrossEdges { want: k, have: cross_count });
    }
    if k == 0 {
        return Ok(vec![build_embedded(base)?]);
    }
    let patterns = deletion_pattern_representatives(base, k);
    let mut out = Vec::with_capacity(patterns.len());
    for pat in &patterns {
        let mut spec = base.clone();
        spec.missing_cross.extend(pat.iter().copied());
        out.push(build_embedded(&spec)?);
    }
    Ok(out)
}

/// Orbit representatives of k-subsets of cross edges under base symmetries.
pub fn deletion_pattern_representatives(
    base: &EmbeddedBipartiteSpec,
    k: usize,
) -> Vec<Vec<(usize, usize)>> {
    let special_s = endpoint_labels(&base.inside_s);
    let special_t = endpoint_labels(&base.inside_t);
    let missing: std::collections::HashSet<(usize, usize)> =
        base.missing_cross.iter().copied().collect();
    // Candidate endpoints: inside-edge endpoints plus k plain vertices per side.
    let mut cand_s = special_s.clone();
    for v in 0..base.s {
        if cand_s.len() >= special_s.len() + k {
            break;
        }
        if !special_s.contains(&v) {
            cand_s.push(v);
        }
    }
    let mut cand_t = special_t.clone();
    for v in 0..base.t {
        if cand_t.len() >= special_t.len() + k {
            break;
        }
        if !special_t.contains(&v) {
            cand_t.push(v);
        }
    }
    let pairs: Vec<(usize, usize)> = cand_s
        .iter()
        .flat_map(|&u| cand_t.iter().map(move |&v| (u, v)))
        .filter(|p| !missing.contains(p))
        .collect();
    let plain_s: Vec<usize> = cand_s.iter().copied().filter(|v| !special_s.contains(v)).collect();
    let plain_t: Vec<usize> = cand_t.iter().copied().filter(|v| !special_t.contains(v)).collect();
    let s_maps = side_label_maps(&special_s, &base.inside_s, &plain_s);
    let t_maps = side_label_maps(&special_t, &base.inside_t, &plain_t);

    let mut reps: std::collections::BTreeMap<Vec<(usize, usize)>, Vec<(usize, usize)>> =
        std::collections::BTreeMap::new();
    let mut subset = Vec::with_capacity(k);
    enumerate_subsets(&pairs, k, 0, &mut subset, &mut |pat| {
        let key = pattern_orbit_key(pat, &s_maps, &t_maps);
        reps.entry(key).or_insert_with(|| pat.to_vec());
    });
    reps.into_values().collect()
}

/// The symmetry group of one side as label maps: inside-edge-preserving
/// permutations of the special labels combined with arbitrary permutations
/// of the interchangeable plain candidates.
fn side_label_maps(
    special: &[usize],
    inside: &[(usize, usize)],
    plain: &[usize],
) -> Vec<std::collections::HashMap<usize, usize>> {
    let base_perms = structure_preserving_perms(special, inside);
    let mut plain_perms: Vec<Vec<usize>> = Vec::new();
    let mut order = plain.to_vec();
    permute(&mut order, 0, &mut |p| plain_perms.push(p.to_vec()));
    let mut out = Vec::with_capacity(base_perms.len() * plain_perms.len());
    for sp in &base_perms {
        for pp in &plain_perms {
            let mut map = sp.clone();
            for (a, b) in plain.iter().zip(pp.iter()) {
                map.insert(*a, *b);
            }
            out.push(map);
        }
    }
    out
}

fn endpoint_labels(edges: &[(usize, usize)]) -> Vec<usize> {
    let mut out: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn enumerate_subsets<T: Copy>(
    items: &[T],
    k: usize,
    start: usize,
    current: &mut Vec<T>,
    f: &mut impl FnMut(&[T]),
) {
    if current.len() == k {
        f(current);
        return;
    }
    let need = k - current.len();
    for i in start..items.len() {
        if items.len() - i < need {
            break;
        }
        current.push(items[i]);
        enumerate_subsets(items, k, i + 1, current, f);
        current.pop();
    }
}

/// All permutations of the special labels that map the inside edge set onto
/// itself, each represented as a label map.
fn structure_preserving_perms(
    special: &[usize],
    inside: &[(usize, usize)],
) -> Vec<std::collections::HashMap<usize, usize>> {
    let edge_set: std::collections::HashSet<(usize, usize)> =
        inside.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut perms = Vec::new();
    let mut order: Vec<usize> = special.to_vec();
    permute(&mut order, 0, &mut |p| {
        let map: std::collections::HashMap<usize, usize> =
            special.iter().copied().zip(p.iter().copied()).collect();
        let ok = edge_set.iter().all(|&(a, b)| {
            let (x, y) = (map[&a], map[&b]);
            edge_set.contains(&(x.min(y), x.max(y)))
        });
        if ok {
            perms.push(map);
        }
    });
    if perms.is_empty() {
        perms.push(std::collections::HashMap::new());
    }
    perms
}

fn permute(items: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == items.len() {
        f(items);
        return;
    }
    for j in i..items.len() {
        items.swap(i, j);
        permute(items, i + 1, f);
        items.swap(i, j);
    }
}

/// Minimal sorted image of a deletion pattern over the two side groups.
fn pattern_orbit_key(
    pattern: &[(usize, usize)],
    s_maps: &[std::collections::HashMap<usize, usize>],
    t_maps: &[std::collections::HashMap<usize, usize>],
) -> Vec<(usize, usize)> {
    let mut best: Option<Vec<(usize, usize)>> = None;
    for sp in s_maps {
        for tp in t_maps {
            let mut mapped: Vec<(usize, usize)> = pattern
                .iter()
                .map(|&(u, v)| {
                    (sp.get(&u).copied().unwrap_or(u), tp.get(&v).copied().unwrap_or(v))
                })
                .collect();
            mapped.sort_unstable();
            if best.as_ref().map(|b| mapped < *b).unwrap_or(true) {
                best = Some(mapped);
            }
        }
    }
    best.unwrap()
}

/// The extremal families with exactly n-3 triangles witnessing tightness of
/// the spectral stability theorem: K^{+2} variants with cross-edge deletions
/// filtered by triangle count.
pub fn fig2_family(n: usize) -> Result<Vec<Graph>, ConstructError> {
    if n < 10 {
        return Err(ConstructError::TooSmall { what: "n", min: 10, got: n });
    }
    let want = n - 3;
    let mut out = Vec::new();
    if n % 2 == 0 {
        let base = EmbeddedBipartiteSpec::plain(n / 2 + 1, n / 2 - 1)
            .with_inside_s(&[(0, 1), (2, 3)]);
        for g in figure_deletion_family(&base, 1)? {
            if count::triangle_stats(&g).total == want {
                out.push(g);
            }
        }
    } else {
        let g = kst_plus2((n + 3) / 2, (n - 3) / 2)?;
        debug_assert_eq!(count::triangle_stats(&g).total, want);
        out.push(g);
        let base = EmbeddedBipartiteSpec::plain((n + 1) / 2, (n - 1) / 2)
            .with_inside_s(&[(0, 1), (2, 3)]);
        for g in figure_deletion_family(&base, 2)? {
            if count::triangle_stats(&g).total == want {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// Constructor registry for family identification and the CLI.
pub fn family_instance(name: &str, n: usize) -> Option<Graph> {
    match name {
        "turan" => turan_bipartite(n).ok(),
        "kplus" => k_plus(n).ok(),
        "kplus2" => k_plus2(n).ok(),
        "friendship" => {
            if n >= 3 && n % 2 == 1 {
                friendship((n - 1) / 2).ok()
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Identifies which named family (if any) a graph is isomorphic to.
pub fn identify_family(g: &Graph) -> Option<&'static str> {
    if g.n() > 64 {
        return None;
    }
    for name in ["turan", "kplus", "kplus2", "friendship"] {
        if let Some(h) = family_instance(name, g.n()) {
            if g.m() == h.m() && canon::are_isomorphic(g, &h) {
                return Some(name);
            }
        }
    }
    None
}
