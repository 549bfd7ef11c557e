//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use specsup::canon::{are_isomorphic, canonical_form};
use specsup::construct::{self, EmbeddedBipartiteSpec};
use specsup::count;
use specsup::enumerate::{exhaustive_verify, generate_all, CLASS_COUNTS};
use specsup::graph::Graph;
use specsup::poly::{rat_i, Surd};
use specsup::registry::{self, PolyName};
use specsup::search::{self, Constraint, CounterKind, InitKind, MoveKind, Schedule, SearchConfig};
use specsup::spectral;
use specsup::theorems::{self, Mode, PredicateId, Status};
use std::sync::OnceLock;

fn graphs_up_to(n: usize) -> &'static [Vec<Graph>] {
    static LEVELS: OnceLock<Vec<Vec<Graph>>> = OnceLock::new();
    let levels = LEVELS.get_or_init(|| {
        (0..=9usize).map(|k| generate_all(k).expect("generation within cap")).collect()
    });
    &levels[..=n]
}

fn pass(criterion: &str, detail: String) {
    println!("ACCEPTANCE {criterion}: PASS - {detail}");
}

#[test]
fn criterion_01_exhaustive_inequality_suite() {
    // Class counts, cross-checked against the independent permutation-filter
    // oracle for n <= 7, and zero failures for the 15 inequality predicates
    // on every graph with n <= 9.
    for n in 1..=7usize {
        assert_eq!(permutation_filter_count(n), CLASS_COUNTS[n], "oracle count at n={n}");
    }
    let mut scanned = 0usize;
    for n in 1..=9usize {
        let graphs = &graphs_up_to(9)[n];
        assert_eq!(graphs.len(), CLASS_COUNTS[n], "class count at n={n}");
        let report = exhaustive_verify(&theorems::EXHAUSTIVE_SUITE, graphs, Mode::Strict)
            .expect("suite evaluates");
        assert_eq!(report.total_fails, 0, "failures at n={n}: {report:?}");
        for p in &report.predicates {
            assert!(p.witnesses.is_empty(), "witnesses at n={n} for {}", p.predicate);
        }
        scanned += graphs.len();
    }
    assert_eq!(graphs_up_to(9)[9].len(), 274_668);
    pass(
        "criterion 1",
        format!("15 predicates, zero failures on {scanned} graphs up to n=9"),
    );
}

/// Independent oracle: a labeled graph is counted iff its edge mask is the
/// lexicographic minimum over all vertex permutations.
fn permutation_filter_count(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permutations(&mut items, 0, &mut perms);
    let pair_index = |u: usize, v: usize| -> usize {
        let (a, b) = (u.min(v), u.max(v));
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let remaps: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| pairs.iter().map(|&(u, v)| pair_index(perm[u], perm[v])).collect())
        .collect();
    let mut count = 0usize;
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut minimal = true;
        'perms: for remap in &remaps {
            let mut image = 0u64;
            for (i, &j) in remap.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    image |= 1 << j;
                }
            }
            if image < mask {
                minimal = false;
                break 'perms;
            }
        }
        if minimal {
            count += 1;
        }
    }
    count
}

fn heap_permutations(items: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == items.len() {
        out.push(items.clone());
        return;
    }
    for j in i..items.len() {
        items.swap(i, j);
        heap_permutations(items, i + 1, out);
        items.swap(i, j);
    }
}

#[test]
fn criterion_02_triangle_identity_equality_classification() {
    // On n <= 8 the graphs satisfying lambda^3 = 3t + m*lambda within 1e-8
    // are exactly the complete bipartite graphs plus isolated vertices.
    let mut equality_graphs = 0usize;
    for n in 1..=8usize {
        for g in &graphs_up_to(8)[n] {
            let m = g.m() as f64;
            let t = count::triangle_stats(g).total as f64;
            let lam = spectral::spectral_radius(g, 1e-10).expect("converges").lambda;
            let expr = lam.powi(3) - 3.0 * t - m * lam;
            // Inside the coarse band, certify with the exact engine.
            let in_equality_set = if expr.abs() <= 1e-5 {
                let lam = spectral::lambda_exact(g).expect("exact lambda");
                let expr = lam.powi(3) - 3.0 * t - m * lam;
                expr.abs() <= 1e-8
            } else {
                false
            };
            let cb = theorems::is_complete_bipartite_plus_isolated(g);
            assert_eq!(
                in_equality_set, cb,
                "classification mismatch at n={n} on {:?} (expr={expr:e})",
                g
            );
            if in_equality_set {
                equality_graphs += 1;
            }
        }
    }
    pass(
        "criterion 2",
        format!("equality set = complete bipartite + isolated ({equality_graphs} graphs), both inclusions"),
    );
}

#[test]
fn criterion_03_turan_numbers_for_the_bowtie() {
    // max m over F2-free graphs is floor(n^2/4)+1 for n in 5..=9, attained
    // exactly by T_{n,2} plus one inside edge (either part for odd n).
    for n in 5..=9usize {
        let bound = n * n / 4 + 1;
        let mut max_m = 0usize;
        let mut extremal: Vec<Vec<u8>> = Vec::new();
        for g in &graphs_up_to(9)[n] {
            if count::count_bowties(g) > 0 {
                continue;
            }
            if g.m() > max_m {
                max_m = g.m();
                extremal.clear();
            }
            if g.m() == max_m {
                extremal.push(canonical_form(g).bytes);
            }
        }
        assert_eq!(max_m, bound, "ex(n, F2) at n={n}");
        extremal.sort();
        let mut expected = vec![
            canonical_form(&construct::kst_plus(n.div_ceil(2), n / 2).unwrap()).bytes,
            canonical_form(&construct::kst_plus(n / 2, n.div_ceil(2)).unwrap()).bytes,
        ];
        expected.sort();
        expected.dedup();
        assert_eq!(extremal, expected, "extremal graphs at n={n}");
    }
    pass("criterion 3", "ex(n,F2) = floor(n^2/4)+1 with the embedded-edge extremal graphs, n=5..9".into());
}

#[test]
fn criterion_04_spectral_f2_theorem_small_n() {
    // The unique lambda-maximizer among F2-free graphs on n in {7,8,9} is
    // K^+ with the edge in the smaller part, margin > 1e-6 over runner-up.
    for n in 7..=9usize {
        let reference = construct::k_plus(n).unwrap();
        let mut best: Option<(f64, &Graph)> = None;
        let mut runner_up = f64::MIN;
        for g in &graphs_up_to(9)[n] {
            if count::count_bowties(g) > 0 {
                continue;
            }
            let lam = spectral::spectral_radius(g, 1e-10).expect("converges").lambda;
            match best {
                None => best = Some((lam, g)),
                Some((bl, _)) if lam > bl => {
                    runner_up = bl;
                    best = Some((lam, g));
                }
                Some(_) => runner_up = runner_up.max(lam),
            }
        }
        let (best_lambda, best_graph) = best.unwrap();
        assert!(are_isomorphic(best_graph, &reference), "maximizer at n={n}");
        assert!(
            best_lambda - runner_up > 1e-6,
            "margin at n={n}: {best_lambda} vs {runner_up}"
        );
    }
    pass("criterion 4", "unique F2-free lambda-maximizer is K^+ at n=7,8,9, margin > 1e-6".into());
}

#[test]
fn criterion_05_quotient_polynomial_crosschecks() {
    for n in [10u64, 50, 113, 114, 200, 201] {
        let name = if n % 2 == 0 { PolyName::F } else { PolyName::G };
        let v = registry::verify_polynomial(name, Some(n), None, None).expect("verifies");
        assert_eq!(v.quotient_matches_exactly, Some(true), "exact polynomial at n={n}");
        assert!(v.root_lambda_gap.unwrap() <= 1e-8, "lambda gap at n={n}");
        let surd_check = &v.sign_checks[0];
        assert_eq!(surd_check.exact_sign, -1, "threshold sign at n={n}");
        assert_eq!(surd_check.matches_quoted_form, Some(true), "closed form at n={n}");
        assert!(v.discrepancies.is_empty(), "discrepancies at n={n}: {:?}", v.discrepancies);
        // lambda^2 > floor(n^2/4) + 4 exactly: the largest root lies above
        // the surd threshold.
        let p = registry::paper_polynomial(name, Some(n), None, None).unwrap();
        let chain = p.sturm_chain();
        let thr = Surd::sqrt_of(rat_i(((n * n / 4) + 4) as i64)).unwrap();
        assert!(
            p.count_roots_above_surd(&chain, &thr).unwrap() >= 1,
            "exact threshold exceedance at n={n}"
        );
    }
    pass(
        "criterion 5",
        "f/g match quotients exactly; |lambda - root| <= 1e-8; threshold signs exact at n in {10,50,113,114,200,201}".into(),
    );
}

#[test]
fn criterion_06_deletion_family_checks() {
    // Every class from the prescribed deletions has lambda < n/2, and each
    // printed polynomial matches exactly one class, with the one documented
    // transcription discrepancy (l6) reported rather than guessed.
    for n in [114usize, 200] {
        for case in 0..5u8 {
            let (s, k) = registry::case_params(case, n);
            let base =
                EmbeddedBipartiteSpec::plain(s, n - s).with_inside_s(&[(0, 1), (2, 3)]);
            let classes = construct::figure_deletion_family(&base, k).unwrap();
            assert!(!classes.is_empty());
            for g in &classes {
                let lam = spectral::spectral_radius(g, 1e-10).expect("converges").lambda;
                assert!(
                    lam < n as f64 / 2.0,
                    "class with lambda {lam} >= n/2 in case {case} at n={n}"
                );
            }
        }
    }
    let mut matched = 0usize;
    let mut reported_discrepancies = Vec::new();
    for i in 1..=12u8 {
        let v = registry::verify_polynomial(PolyName::L(i), Some(114), None, None).unwrap();
        // the half-point evaluation must match the published expansion and be positive
        let half = v
            .sign_checks
            .iter()
            .find(|c| c.claim.contains("(n/2)"))
            .unwrap_or_else(|| panic!("l{i} missing half-point check"));
        assert_eq!(half.exact_sign, 1, "l{i}(n/2) sign");
        assert_eq!(half.matches_quoted_form, Some(true), "l{i}(n/2) expansion");
        if i == 6 {
            // documented transcription discrepancy: no class matches, and the
            // corrected exact polynomial of the leftover figure class is reported
            assert!(v.matched_class.is_none());
            assert!(
                v.discrepancies.iter().any(|d| d.contains("no deletion class matches")),
                "l6 must report the mismatch"
            );
            assert!(
                v.discrepancies.iter().any(|d| d.contains("unclaimed figure class")),
                "l6 must report the corrected polynomial"
            );
            reported_discrepancies.extend(v.discrepancies.clone());
        } else {
            assert!(v.matched_class.is_some(), "l{i} must match a unique class");
            assert!(v.root_lambda_gap.unwrap() <= 1e-8, "l{i} root agreement");
            assert!(v.discrepancies.is_empty(), "l{i}: {:?}", v.discrepancies);
            matched += 1;
        }
    }
    // f3-style exact evaluation: f3(n/2) = 4 exactly.
    for n in [114u64, 200] {
        let f3 = registry::paper_polynomial(PolyName::F3, Some(n), None, None).unwrap();
        assert_eq!(f3.eval(&rat_i((n / 2) as i64)), rat_i(4));
    }
    for d in &reported_discrepancies {
        println!("  reported: {d}");
    }
    pass(
        "criterion 6",
        format!("all deletion classes below n/2 at n=114,200; {matched}/11 polynomials matched uniquely; l6 transcription discrepancy reported"),
    );
}

#[test]
fn criterion_07_extremal_value_reproduction() {
    for n in [10usize, 11, 14, 15, 50, 51] {
        let g = construct::k_plus2(n).unwrap();
        assert_eq!(count::count_bowties(&g), n / 2, "bowties of K^{{+2}} at n={n}");
    }
    for n in 10..=16usize {
        let thr = theorems::lambda_turan_ref(n);
        let family = construct::fig2_family(n).unwrap();
        assert!(!family.is_empty(), "empty family at n={n}");
        for g in &family {
            assert_eq!(count::triangle_stats(g).total, n - 3, "triangles at n={n}");
            assert!(count::tau3_at_least_2(g), "tau3 at n={n}");
            assert_eq!(count::triangle_cover_number(g).unwrap(), 2, "exact tau3 at n={n}");
            let lam = spectral::spectral_radius(g, 1e-10).unwrap().lambda;
            assert!(lam > thr, "lambda {lam} <= lambda(T) {thr} at n={n}");
        }
    }
    for n in [12usize, 20] {
        let g = construct::kst_plus2(n / 2 - 2, n / 2 + 2).unwrap();
        assert_eq!(count::count_bowties(&g), n / 2 + 2, "small-side bowties at n={n}");
        assert_eq!(count::count_bowties_bruteforce(&g), n / 2 + 2);
    }
    pass(
        "criterion 7",
        "bowtie counts of K^{+2} and K_{n/2-2,n/2+2}^{+2}; the n-3-triangle family has lambda > lambda(T) and tau3 = 2".into(),
    );
}

#[test]
fn criterion_08_conjecture_tightness_construction() {
    for b in [3usize, 5, 10] {
        let a = 4 * b + 3;
        let g = construct::kab_plus2(b).unwrap();
        let m = g.m();
        assert_eq!(m, a * b + 2);
        // t = 2b exactly
        assert_eq!(count::triangle_stats(&g).total, 2 * b);
        // 2b = (sqrt(16m - 23) - 3)/4 verified in integer arithmetic
        assert_eq!((8 * b + 3) * (8 * b + 3), 16 * m - 23);
        // lambda > sqrt(m) exactly: quotient polynomial is monic cubic and
        // negative at the surd sqrt(m).
        let n = a + b;
        let classes: Vec<usize> = (0..n)
            .map(|v| if v < 4 { 0 } else if v < a { 1 } else { 2 })
            .collect();
        let q = spectral::equitable_quotient(&g, &classes).unwrap();
        let p = spectral::char_poly(&q);
        let surd = Surd::sqrt_of(rat_i(m as i64)).unwrap();
        assert_eq!(p.sign_at(&surd).unwrap(), -1, "chi(sqrt(m)) < 0 at b={b}");
        let root = p.largest_real_root(None).unwrap();
        let lam = spectral::spectral_radius(&g, 1e-10).unwrap().lambda;
        assert!((root - lam).abs() <= 1e-8);
        assert!(lam > (m as f64).sqrt());
    }
    pass(
        "criterion 8",
        "K_{4b+3,b}^{+2} has lambda > sqrt(m) (exact sign) and exactly 2b = (sqrt(16m-23)-3)/4 triangles, b in {3,5,10}".into(),
    );
}

#[test]
fn criterion_09_counting_oracles() {
    let mut checked = 0usize;
    for n in 1..=7usize {
        for g in &graphs_up_to(7)[n] {
            assert_eq!(
                count::count_bowties(g),
                count::count_bowties_bruteforce(g),
                "bowtie mismatch on {:?}",
                g
            );
            let s = count::triangle_stats(g);
            assert_eq!(s.per_vertex.iter().sum::<usize>(), 3 * s.total);
            assert_eq!(s.per_edge.iter().map(|&(_, c)| c).sum::<usize>(), 3 * s.total);
            checked += 1;
        }
    }
    // 1000 seeded random graphs with n <= 12.
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xACCE97);
    for _ in 0..1000 {
        let n = rng.random_range(1..=12usize);
        let p = rng.random_range(0.15..0.75);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        assert_eq!(count::count_bowties(&g), count::count_bowties_bruteforce(&g));
        let s = count::triangle_stats(&g);
        assert_eq!(s.per_vertex.iter().sum::<usize>(), 3 * s.total);
        assert_eq!(s.per_edge.iter().map(|&(_, c)| c).sum::<usize>(), 3 * s.total);
        checked += 1;
    }
    pass("criterion 9", format!("bowtie oracle and handshake identities on {checked} graphs"));
}

#[test]
fn criterion_10_threshold_theorems_substitute_checks() {
    // (a) exploratory scan below the stated thresholds: conclusions are
    // evaluated anyway; violations are findings, never failures.
    let mut findings = Vec::new();
    for n in 1..=9usize {
        let graphs = &graphs_up_to(9)[n];
        let report = exhaustive_verify(
            &[PredicateId::Main1, PredicateId::Main2],
            graphs,
            Mode::Exploratory,
        )
        .expect("scan");
        assert_eq!(report.total_fails, 0, "below-threshold runs must not fail at n={n}");
        for p in &report.predicates {
            for w in &p.findings {
                findings.push(format!("n={n} {}: {} ({})", p.predicate, w.graph6, w.details));
            }
        }
    }
    for f in &findings {
        println!("  finding: {f}");
    }

    // (b) annealing under the bowtie cap returns the conjectured extremal
    // graph within 1e-6, with the family identified.
    for (n, steps, cooling) in [(20usize, 30_000usize, 0.9997f64), (40, 200_000, 0.99996)] {
        let cfg = SearchConfig {
            n,
            objective: "maximize-lambda".into(),
            constraints: vec![Constraint {
                counter: CounterKind::Bowties,
                max: Some((n / 2) as u64),
                exact: None,
            }],
            moves: MoveKind::SingleFlip,
            schedule: Schedule { t0: if n == 20 { 0.8 } else { 1.2 }, cooling, steps },
            seed: 20240904,
            restarts: if n == 20 { 6 } else { 8 },
            init: InitKind::Empty,
        };
        let res = search::anneal(&cfg).expect("anneal");
        let thr = theorems::lambda_kplus2_ref(n);
        assert!(
            res.best_lambda >= thr - 1e-6,
            "n={n}: best {} below lambda(K^{{+2}}) {}",
            res.best_lambda,
            thr
        );
        assert_eq!(res.matched_family.as_deref(), Some("kplus2"), "family id at n={n}");
        assert!(res.constraint_values["bowties"] <= (n / 2) as u64);
    }

    // (c) determinism: identical seeds and config give identical results.
    let cfg = SearchConfig {
        n: 20,
        objective: "maximize-lambda".into(),
        constraints: vec![Constraint {
            counter: CounterKind::Bowties,
            max: Some(10),
            exact: None,
        }],
        moves: MoveKind::SingleFlip,
        schedule: Schedule { t0: 0.8, cooling: 0.9997, steps: 10_000 },
        seed: 7,
        restarts: 4,
        init: InitKind::Empty,
    };
    let a = serde_json::to_string(&search::anneal(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&search::anneal(&cfg).unwrap()).unwrap();
    assert_eq!(a, b, "identical seeds must give identical search results");

    pass(
        "criterion 10",
        format!(
            "exploratory scan reported {} below-threshold findings; annealing reached K^{{+2}} at n=20,40; seeds reproduce",
            findings.len()
        ),
    );
}
