//! Canonical forms for graphs on up to 64 vertices.
//!
//! The canonical form is the lexicographically minimal upper-triangle bit
//! string of the adjacency matrix over all vertex orderings consistent with
//! iterated degree/partition refinement. Refinement-incompatible orderings
//! cannot be minimal within an isomorphism class scan, so pruning by cell
//! structure and by discovered automorphisms keeps the search sound: two
//! graphs receive equal forms iff they are isomorphic.

use crate::graph::Graph;

/// Canonical form plus the labeling and automorphism generators found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Packed canonical upper-triangle bits in column order (the pair
    /// (i, j), i < j, is bit C(j,2) + i), most significant bit first.
    pub bytes: Vec<u8>,
    /// Maps each original vertex to its canonical position.
    pub perm: Vec<usize>,
    /// Automorphism generators discovered during the search.
    pub generators: Vec<Vec<usize>>,
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    assert!(g.n() <= 64, "canonical form supports n <= 64");
    let n = g.n();
    let rows: Vec<u64> = (0..n).map(|u| g.row(u)[0]).collect();
    if n == 0 {
        return CanonicalForm { bytes: vec![], perm: vec![], generators: vec![] };
    }
    let mut search = Search {
        n,
        rows,
        code_words: (n * (n - 1) / 2).div_ceil(64),
        best: None,
        best_perm: vec![0; n],
        generators: Vec::new(),
        path: Vec::new(),
    };
    let mut cells = vec![(0..n).collect::<Vec<usize>>()];
    refine(&search.rows, &mut cells);
    search.node(cells);
    let best = search.best.expect("search always reaches a leaf");
    CanonicalForm {
        bytes: words_to_bytes(&best, n * (n - 1) / 2),
        perm: search.best_perm,
        generators: search.generators,
    }
}

/// Graph relabeled into its canonical ordering.
pub fn canonical_graph(g: &Graph) -> Graph {
    let c = canonical_form(g);
    g.relabel(&c.perm)
}

/// Isomorphism test via invariants and canonical forms.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    canonical_form(a).bytes == canonical_form(b).bytes
}

fn words_to_bytes(words: &[u64], nbits: usize) -> Vec<u8> {
    let nbytes = nbits.div_ceil(8);
    let mut out = vec![0u8; nbytes];
    for b in 0..nbits {
        if words[b / 64] >> (63 - (b % 64)) & 1 == 1 {
            out[b / 8] |= 1 << (7 - (b % 8));
        }
    }
    out
}

struct Search {
    n: usize,
    rows: Vec<u64>,
    code_words: usize,
    best: Option<Vec<u64>>,
    best_perm: Vec<usize>,
    generators: Vec<Vec<usize>>,
    path: Vec<usize>,
}

impl Search {
    fn node(&mut self, cells: Vec<Vec<usize>>) {
        // Number of leading singleton cells = positions already decided.
        let fixed = cells.iter().take_while(|c| c.len() == 1).count();
        if self.best.is_some() && self.prefix_beats_best(&cells, fixed) {
            return;
        }
        if fixed == cells.len() {
            let perm = leaf_perm(self.n, &cells);
            let code = self.encode(&perm);
            match &self.best {
                None => {
                    self.best = Some(code);
                    self.best_perm = perm;
                }
                Some(best) => match code.cmp(best) {
                    std::cmp::Ordering::Less => {
                        self.best = Some(code);
                        self.best_perm = perm;
                    }
                    std::cmp::Ordering::Equal => {
                        // Equal codes: perm ∘ best_perm^{-1} is an automorphism.
                        let mut best_inv = vec![0; self.n];
                        for (v, &p) in self.best_perm.iter().enumerate() {
                            best_inv[p] = v;
                        }
                        let aut: Vec<usize> = (0..self.n).map(|u| best_inv[perm[u]]).collect();
                        if aut.iter().enumerate().any(|(u, &v)| u != v) {
                            self.generators.push(aut);
                        }
                    }
                    std::cmp::Ordering::Greater => {}
                },
            }
            return;
        }
        // Branch on the first non-singleton cell.
        let target = fixed;
        let candidates = cells[target].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &candidates {
            if self.orbit_pruned(v, &tried) {
                continue;
            }
            let mut child: Vec<Vec<usize>> = Vec::with_capacity(cells.len() + 1);
            child.extend(cells[..target].iter().cloned());
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&u| u != v).collect());
            child.extend(cells[target + 1..].iter().cloned());
            refine(&self.rows, &mut child);
            self.path.push(v);
            self.node(child);
            self.path.pop();
            tried.push(v);
        }
    }

    /// True when candidate v is equivalent to an already-tried candidate
    /// under an automorphism subgroup fixing the current path pointwise.
    fn orbit_pruned(&self, v: usize, tried: &[usize]) -> bool {
        if tried.is_empty() || self.generators.is_empty() {
            return false;
        }
        let fixing: Vec<&Vec<usize>> = self
            .generators
            .iter()
            .filter(|g| self.path.iter().all(|&p| g[p] == p))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        // BFS orbit of v under the fixing generators.
        let mut orbit = 1u64 << v;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for g in &fixing {
                let w = g[u];
                if orbit >> w & 1 == 0 {
                    orbit |= 1 << w;
                    stack.push(w);
                }
            }
        }
        tried.iter().any(|&w| orbit >> w & 1 == 1)
    }

    fn prefix_beats_best(&self, cells: &[Vec<usize>], fixed: usize) -> bool {
        let best = self.best.as_ref().unwrap();
        // Positions 0..fixed hold the leading singletons, so the code bits
        // among those pairs are already determined.
        let mut bit = 0usize;
        for j in 1..fixed {
            let vj = cells[j][0];
            for cell_i in cells.iter().take(j) {
                let vi = cell_i[0];
                let edge = self.rows[vi] >> vj & 1 == 1;
                let best_bit = best[bit / 64] >> (63 - (bit % 64)) & 1 == 1;
                if edge != best_bit {
                    // Greater prefix can never beat the best; smaller must recurse.
                    return edge && !best_bit;
                }
                bit += 1;
            }
        }
        false
    }

    fn encode(&self, perm: &[usize]) -> Vec<u64> {
        // inverse: position -> vertex
        let mut inv = vec![0usize; self.n];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        let mut code = vec![0u64; self.code_words.max(1)];
        let mut bit = 0usize;
        for j in 1..self.n {
            let vj = inv[j];
            for &vi in inv.iter().take(j) {
                if self.rows[vi] >> vj & 1 == 1 {
                    code[bit / 64] |= 1u64 << (63 - (bit % 64));
                }
                bit += 1;
            }
        }
        code
    }
}

fn leaf_perm(n: usize, cells: &[Vec<usize>]) -> Vec<usize> {
    let mut perm = vec![0usize; n];
    for (pos, cell) in cells.iter().enumerate() {
        perm[cell[0]] = pos;
    }
    perm
}

/// Equitable refinement: split cells by neighbor counts into every other
/// cell until stable. New fragments are ordered by count ascending, which is
/// isomorphism-invariant.
fn refine(rows: &[u64], cells: &mut Vec<Vec<usize>>) {
    loop {
        let mut changed = false;
        'outer: for s in 0..cells.len() {
            let mask: u64 = cells[s].iter().fold(0u64, |acc, &v| acc | 1 << v);
            for c in 0..cells.len() {
                if cells[c].len() <= 1 {
                    continue;
                }
                let counts: Vec<u32> = cells[c].iter().map(|&v| (rows[v] & mask).count_ones()).collect();
                if counts.windows(2).all(|w| w[0] == w[1]) {
                    continue;
                }
                // Split by count, ascending.
                let mut pairs: Vec<(u32, usize)> =
                    counts.into_iter().zip(cells[c].iter().copied()).collect();
                pairs.sort_by_key(|&(cnt, v)| (cnt, v));
                let mut fragments: Vec<Vec<usize>> = Vec::new();
                let mut last: Option<u32> = None;
                for (cnt, v) in pairs {
                    if last != Some(cnt) {
                        fragments.push(Vec::new());
                        last = Some(cnt);
                    }
                    fragments.last_mut().unwrap().push(v);
                }
                cells.splice(c..=c, fragments);
                changed = true;
                break 'outer;
            }
        }
        if !changed {
            return;
        }
    }
}
