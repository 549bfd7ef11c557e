//! Isomorph-free exhaustive generation of small graphs and streaming
//! exhaustive verification of the predicate registry.

use crate::canon::{canonical_form, canonical_graph};
use crate::graph::Graph;
use crate::graph6;
use crate::theorems::{self, GraphFacts, Mode, PredicateId, Status, Verdict};
use rayon::prelude::*;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("built-in generation is capped at n = {max}; ingest a graph6 stream for larger orders")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Graph6(#[from] graph6::Graph6Error),
    #[error(transparent)]
    Theorem(#[from] theorems::TheoremError),
}

/// Built-in generation cap.
pub const MAX_GENERATE_N: usize = 10;

/// One representative per isomorphism class of simple graphs on `n` vertices.
///
/// Canonical augmentation: every (k+1)-vertex child is kept iff removing its
/// canonically designated vertex reproduces the parent it was generated
/// from; a per-level canonical-form dedup backstops the acceptance rule.
/// Output is sorted by canonical encoding, so the stream is deterministic.
pub fn generate_all(n: usize) -> Result<Vec<Graph>, EnumerateError> {
    if n > MAX_GENERATE_N {
        return Err(EnumerateError::TooLarge { n, max: MAX_GENERATE_N });
    }
    if n == 0 {
        return Ok(vec![Graph::empty(0)]);
    }
    let mut level: Vec<Graph> = vec![Graph::empty(1)];
    for k in 1..n {
        // Children: parent plus vertex k joined to any subset of 0..k.
        let children: Vec<(Vec<u8>, Graph)> = level
            .par_iter()
            .flat_map_iter(|parent| {
                let parent_bytes = canonical_form(parent).bytes;
                (0u64..(1u64 << k)).filter_map(move |mask| {
                    let mut edges = parent.edges();
                    for v in 0..k {
                        if mask >> v & 1 == 1 {
                            edges.push((v, k));
                        }
                    }
                    let child = Graph::from_edges(k + 1, &edges).expect("valid augmentation");
                    let cf = canonical_form(&child);
                    // canonical deletion: the vertex in the last canonical slot
                    let mut del = 0;
                    for (v, &pos) in cf.perm.iter().enumerate() {
                        if pos == k {
                            del = v;
                        }
                    }
                    let accepted = if del == k {
                        true
                    } else {
                        canonical_form(&child.delete_vertex(del)).bytes == parent_bytes
                    };
                    accepted.then_some((cf.bytes, child))
                })
            })
            .collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::with_capacity(children.len());
        let mut next: Vec<(Vec<u8>, Graph)> = Vec::new();
        for (bytes, child) in children {
            if seen.insert(bytes.clone()) {
                next.push((bytes, child));
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| canonical_graph(&g)).collect();
    }
    Ok(level)
}

/// Known isomorphism-class counts for small orders.
pub const CLASS_COUNTS: [usize; 11] =
    [1, 1, 2, 4, 11, 34, 156, 1044, 12_346, 274_668, 12_005_168];

/// Aggregated result of one predicate over a graph set.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PredicateSummary {
    pub predicate: String,
    pub holds: usize,
    pub fails: usize,
    pub within_tolerance: usize,
    pub not_applicable: usize,
    /// Worst (smallest) conclusion slack over hypothesis-met graphs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_slack_graph6: Option<String>,
    /// Failure witnesses, sorted by graph6.
    pub witnesses: Vec<theorems::Witness>,
    /// Non-failure findings (threshold scans, open problems), sorted.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub findings: Vec<theorems::Witness>,
}

/// Full report of an exhaustive verification run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct VerificationReport {
    pub n: Option<usize>,
    pub graphs: usize,
    pub mode: String,
    pub predicates: Vec<PredicateSummary>,
    pub total_fails: usize,
}

/// Runs every listed predicate on every graph, in parallel, with
/// deterministic aggregation (counts are order-free; witness lists are
/// sorted by graph6).
pub fn exhaustive_verify(
    predicates: &[PredicateId],
    graphs: &[Graph],
    mode: Mode,
) -> Result<VerificationReport, EnumerateError> {
    struct Acc {
        holds: usize,
        fails: usize,
        within: usize,
        na: usize,
        worst: Option<(f64, String)>,
        witnesses: Vec<theorems::Witness>,
        findings: Vec<theorems::Witness>,
    }
    impl Acc {
        fn new() -> Self {
            Acc {
                holds: 0,
                fails: 0,
                within: 0,
                na: 0,
                worst: None,
                witnesses: Vec::new(),
                findings: Vec::new(),
            }
        }
        fn absorb(&mut self, v: &Verdict, g6: &str) {
            match v.status {
                Status::Holds => self.holds += 1,
                Status::Fails => self.fails += 1,
                Status::WithinTolerance => self.within += 1,
                Status::NotApplicable => self.na += 1,
            }
            if v.status == Status::Holds || v.status == Status::Fails {
                if let Some(s) = v.slack {
                    if self.worst.as_ref().map(|(w, wg)| (s, g6) < (*w, wg.as_str())).unwrap_or(true)
                    {
                        self.worst = Some((s, g6.to_string()));
                    }
                }
            }
            if let Some(w) = &v.witness {
                if v.status == Status::Fails {
                    self.witnesses.push(w.clone());
                } else {
                    self.findings.push(w.clone());
                }
            }
        }
        fn merge(mut self, other: Acc) -> Acc {
            self.holds += other.holds;
            self.fails += other.fails;
            self.within += other.within;
            self.na += other.na;
            self.worst = match (self.worst, other.worst) {
                (None, w) | (w, None) => w,
                (Some(a), Some(b)) => Some(if (a.0, &a.1) <= (b.0, &b.1) { a } else { b }),
            };
            self.witnesses.extend(other.witnesses);
            self.findings.extend(other.findings);
            self
        }
    }

    let per_graph = |g: &Graph| -> Result<Vec<Acc>, EnumerateError> {
        let facts = GraphFacts::new(g);
        let g6 = graph6::encode(g)?;
        let mut accs: Vec<Acc> = predicates.iter().map(|_| Acc::new()).collect();
        for (i, &p) in predicates.iter().enumerate() {
            let v = theorems::check_with_facts(p, &facts, mode)?;
            accs[i].absorb(&v, &g6);
        }
        Ok(accs)
    };

    let merged: Result<Vec<Acc>, EnumerateError> = graphs
        .par_iter()
        .map(per_graph)
        .try_reduce(
            || predicates.iter().map(|_| Acc::new()).collect(),
            |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()),
        );
    let merged = merged?;

    let mut out = Vec::with_capacity(predicates.len());
    let mut total_fails = 0;
    for (p, mut acc) in predicates.iter().zip(merged) {
        acc.witnesses.sort_by(|a, b| a.graph6.cmp(&b.graph6));
        acc.findings.sort_by(|a, b| a.graph6.cmp(&b.graph6));
        total_fails += acc.fails;
        out.push(PredicateSummary {
            predicate: p.label().to_string(),
            holds: acc.holds,
            fails: acc.fails,
            within_tolerance: acc.within,
            not_applicable: acc.na,
            worst_slack: acc.worst.as_ref().map(|(s, _)| *s),
            worst_slack_graph6: acc.worst.map(|(_, g)| g),
            witnesses: acc.witnesses,
            findings: acc.findings,
        });
    }
    Ok(VerificationReport {
        n: graphs.first().map(|g| g.n()),
        graphs: graphs.len(),
        mode: match mode {
            Mode::Strict => "strict".into(),
            Mode::Exploratory => "exploratory".into(),
        },
        predicates: out,
        total_fails,
    })
}

/// Parses a graph6 stream, one graph per line; blank lines are skipped.
pub fn read_graph6_stream(text: &str) -> Result<Vec<Graph>, EnumerateError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(graph6::decode(line)?);
    }
    Ok(out)
}
