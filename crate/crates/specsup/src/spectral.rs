//! Spectral radius computation, equitable-partition quotient matrices, and
//! exact characteristic polynomials.

use crate::graph::Graph;
use crate::poly::{rat_i, IntPolynomial, PolyError, Surd};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("power iteration did not reach tolerance {tol} within {iterations} iterations (best residual {residual}, lambda {lambda})")]
    NoConvergence { tol: f64, iterations: usize, residual: f64, lambda: f64 },
    #[error("partition is not equitable: vertex {vertex} sees {got} neighbors in class {class}, expected {expected}")]
    NotEquitable { vertex: usize, class: usize, got: usize, expected: usize },
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("class id {0} out of range {1}")]
    ClassOutOfRange(usize, usize),
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Default tolerance for the iterative engine.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Iteration cap for power iteration.
pub const MAX_ITERATIONS: usize = 500_000;

/// Result of the iterative spectral-radius engine.
#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub lambda: f64,
    /// Non-negative eigenvector estimate, unit Euclidean norm.
    pub perron: Vec<f64>,
    /// Infinity norm of `A*perron - lambda*perron`.
    pub residual: f64,
    pub iterations: usize,
}

/// Spectral radius via power iteration on `A + n I` with Rayleigh-quotient
/// extraction. Starts from the all-ones vector; applies a deterministic
/// index-based perturbation if the iteration stalls.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<SpectralResult, SpectralError> {
    spectral_radius_capped(g, tol, MAX_ITERATIONS)
}

/// [`spectral_radius`] with an explicit iteration budget. The convergence
/// error carries the best estimate, which callers with weaker accuracy
/// needs (the annealing search) may accept.
pub fn spectral_radius_capped(
    g: &Graph,
    tol: f64,
    max_iterations: usize,
) -> Result<SpectralResult, SpectralError> {
    if tol <= 0.0 {
        return Err(SpectralError::BadTolerance);
    }
    let n = g.n();
    if n == 0 || g.m() == 0 {
        let len = n;
        let val = if len > 0 { (1.0 / len as f64).sqrt() } else { 0.0 };
        return Ok(SpectralResult {
            lambda: 0.0,
            perron: vec![val; len],
            residual: 0.0,
            iterations: 0,
        });
    }
    let shift = n as f64;
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut z = vec![0.0f64; n];
    let mut best_residual = f64::INFINITY;
    let mut best_lambda = 0.0;
    let mut last_check = f64::INFINITY;
    let mut iterations = 0usize;
    while iterations < max_iterations {
        iterations += 1;
        matvec(g, &x, &mut z);
        let rq: f64 = x.iter().zip(&z).map(|(a, b)| a * b).sum();
        let residual = x
            .iter()
            .zip(&z)
            .map(|(xi, zi)| (zi - rq * xi).abs())
            .fold(0.0f64, f64::max);
        if residual < best_residual {
            best_residual = residual;
            best_lambda = rq;
        }
        if residual <= tol {
            return Ok(SpectralResult { lambda: rq, perron: x, residual, iterations });
        }
        // next iterate: (A + shift) x, normalized
        let mut norm = 0.0;
        for i in 0..n {
            z[i] += shift * x[i];
            norm += z[i] * z[i];
        }
        let norm = norm.sqrt();
        for i in 0..n {
            x[i] = z[i] / norm;
        }
        // Stall detection every 1000 iterations: if the residual has made
        // essentially no progress, nudge the iterate. The kick is scaled to
        // the residual so it can never destroy accuracy already achieved.
        if iterations % 1000 == 0 {
            if best_residual > 0.98 * last_check && best_residual.is_finite() {
                let eps = best_residual * 0.01;
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi += eps * ((i % 11) as f64 + 1.0) / 11.0;
                }
                let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                for xi in x.iter_mut() {
                    *xi /= norm;
                }
            }
            last_check = best_residual;
        }
    }
    Err(SpectralError::NoConvergence {
        tol,
        iterations,
        residual: best_residual,
        lambda: best_lambda,
    })
}

fn matvec(g: &Graph, x: &[f64], out: &mut [f64]) {
    for u in 0..g.n() {
        let mut acc = 0.0;
        for v in g.neighbors(u) {
            acc += x[v];
        }
        out[u] = acc;
    }
}

/// Quotient matrix of an equitable partition: entry (i, j) counts the
/// neighbors in class j of any vertex of class i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMatrix {
    pub k: usize,
    pub b: Vec<Vec<i64>>,
    pub class_sizes: Vec<usize>,
}

/// Validates equitability exactly and returns the quotient matrix.
pub fn equitable_quotient(g: &Graph, classes: &[usize]) -> Result<QuotientMatrix, SpectralError> {
    assert_eq!(classes.len(), g.n());
    let k = classes.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    for &c in classes {
        if c >= k {
            return Err(SpectralError::ClassOutOfRange(c, k));
        }
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (v, &c) in classes.iter().enumerate() {
        members[c].push(v);
    }
    for (c, m) in members.iter().enumerate() {
        if m.is_empty() {
            return Err(SpectralError::EmptyClass(c));
        }
    }
    let count_row = |v: usize| -> Vec<usize> {
        let mut row = vec![0usize; k];
        for u in g.neighbors(v) {
            row[classes[u]] += 1;
        }
        row
    };
    let mut b = vec![vec![0i64; k]; k];
    for i in 0..k {
        let expected = count_row(members[i][0]);
        for &v in &members[i][1..] {
            let got = count_row(v);
            if got != expected {
                let class = (0..k).find(|&j| got[j] != expected[j]).unwrap();
                return Err(SpectralError::NotEquitable {
                    vertex: v,
                    class,
                    got: got[class],
                    expected: expected[class],
                });
            }
        }
        for j in 0..k {
            b[i][j] = expected[j] as i64;
        }
    }
    Ok(QuotientMatrix { k, b, class_sizes: members.iter().map(|m| m.len()).collect() })
}

/// Exact characteristic polynomial `det(xI - B)` via Faddeev-LeVerrier.
pub fn char_poly(q: &QuotientMatrix) -> IntPolynomial {
    char_poly_of(&q.b)
}

/// Characteristic polynomial of the full adjacency matrix.
pub fn graph_char_poly(g: &Graph) -> IntPolynomial {
    let n = g.n();
    let mut b = vec![vec![0i64; n]; n];
    for u in 0..n {
        for v in g.neighbors(u) {
            b[u][v] = 1;
        }
    }
    char_poly_of(&b)
}

fn char_poly_of(b: &[Vec<i64>]) -> IntPolynomial {
    let k = b.len();
    if k == 0 {
        return IntPolynomial::from_ints(&[1]);
    }
    let b: Vec<Vec<BigRational>> = b
        .iter()
        .map(|row| row.iter().map(|&v| BigRational::from(BigInt::from(v))).collect())
        .collect();
    // Faddeev-LeVerrier: M_1 = I, c_j = -tr(B M_j)/j, M_{j+1} = B M_j + c_j I.
    let mut m: Vec<Vec<BigRational>> = identity(k);
    let mut coeffs = vec![BigRational::zero(); k + 1];
    coeffs[k] = BigRational::one();
    for j in 1..=k {
        let bm = mat_mul(&b, &m);
        let c = -trace(&bm) / BigRational::from(BigInt::from(j as i64));
        coeffs[k - j] = c.clone();
        if j < k {
            m = bm;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c;
                let _ = i;
            }
        }
    }
    IntPolynomial::from_coeffs(coeffs)
}

fn identity(k: usize) -> Vec<Vec<BigRational>> {
    let mut m = vec![vec![BigRational::zero(); k]; k];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    m
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let k = a.len();
    let mut out = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..k {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

fn trace(m: &[Vec<BigRational>]) -> BigRational {
    let mut t = BigRational::zero();
    for (i, row) in m.iter().enumerate() {
        t += &row[i];
    }
    t
}

/// The coarsest equitable partition of a graph, as a class assignment.
///
/// Iterated refinement by neighbor counts into current classes; stabilizes
/// in at most n rounds. The resulting partition always validates in
/// [`equitable_quotient`], which gives an exact quotient polynomial route
/// for arbitrary structured graphs.
pub fn coarsest_equitable_partition(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut classes = vec![0usize; n];
    let mut k = 1usize;
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut counts = vec![0usize; k];
            for u in g.neighbors(v) {
                counts[classes[u]] += 1;
            }
            sigs.push((classes[v], counts));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut new_classes = vec![0usize; n];
        let mut next = 0usize;
        for (i, &v) in order.iter().enumerate() {
            if i > 0 && sigs[v] != sigs[order[i - 1]] {
                next += 1;
            }
            new_classes[v] = next;
        }
        let new_k = next + 1;
        if new_k == k && new_classes == classes {
            return classes;
        }
        classes = new_classes;
        k = new_k;
    }
}

/// Exact spectral radius via the full characteristic polynomial and Sturm
/// root isolation. Intended for small graphs where certified values matter.
pub fn lambda_exact(g: &Graph) -> Result<f64, SpectralError> {
    if g.m() == 0 {
        return Ok(0.0);
    }
    Ok(graph_char_poly(g).largest_real_root(None)?)
}

/// Exact three-way comparison of `lambda(G)` with the surd `a + b sqrt(c)`.
pub fn compare_lambda_surd(g: &Graph, point: &Surd) -> Result<std::cmp::Ordering, SpectralError> {
    use std::cmp::Ordering;
    if g.m() == 0 {
        // lambda = 0 exactly; sign of -point decides.
        let v = crate::poly::SurdValue {
            rational: -point.rational.clone(),
            surd_coeff: -point.surd_coeff.clone(),
            radicand: point.radicand.clone(),
        };
        return Ok(match v.sign() {
            1 => Ordering::Greater,
            0 => Ordering::Equal,
            _ => Ordering::Less,
        });
    }
    let p = graph_char_poly(g);
    let chain = p.sturm_chain();
    let above = p.count_roots_above_surd(&chain, point)?;
    if above > 0 {
        return Ok(Ordering::Greater);
    }
    let at_point = p.sign_at(point)?;
    Ok(if at_point == 0 { Ordering::Equal } else { Ordering::Less })
}

/// The spectral radius of T_{n,2}: sqrt(floor(n^2/4)).
pub fn lambda_turan(n: usize) -> f64 {
    (((n * n) / 4) as f64).sqrt()
}

/// Exact surd for the T_{n,2} threshold.
pub fn turan_threshold_surd(n: usize) -> Surd {
    Surd::sqrt_of(rat_i(((n * n) / 4) as i64)).expect("non-negative")
}

/// Checks that the Perron vector is constant on the classes of a partition,
/// within the given tolerance (after normalizing the max entry to 1).
pub fn perron_class_constant(res: &SpectralResult, classes: &[usize], tol: f64) -> bool {
    let max = res.perron.iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return true;
    }
    let k = classes.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let mut seen: Vec<Option<f64>> = vec![None; k];
    for (v, &c) in classes.iter().enumerate() {
        let val = res.perron[v] / max;
        match seen[c] {
            None => seen[c] = Some(val),
            Some(prev) => {
                if (prev - val).abs() > tol {
                    return false;
                }
            }
        }
    }
    true
}
