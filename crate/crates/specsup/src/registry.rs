//! Registry of the quotient characteristic polynomials attached to the
//! embedded-bipartite families, with exact sign checks of the published
//! constant evaluations and numeric-vs-exact cross verification.

use crate::construct::{self, EmbeddedBipartiteSpec};
use crate::graph::Graph;
use crate::poly::{rat, rat_i, IntPolynomial, Surd};
use crate::spectral::{self, equitable_quotient};
use num::rational::BigRational;
use num::traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RegistryError {
    #[error("unknown polynomial name {0:?}")]
    UnknownName(String),
    #[error("polynomial {name} requires {requirement}")]
    BadParameters { name: &'static str, requirement: &'static str },
    #[error("no class matched the polynomial within tolerance")]
    NoMatch,
    #[error("polynomial matched {0} classes; identification is ambiguous")]
    AmbiguousMatch(usize),
    #[error(transparent)]
    Spectral(#[from] spectral::SpectralError),
    #[error(transparent)]
    Construct(#[from] construct::ConstructError),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

/// Names of the registered polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyName {
    F,
    G,
    L(u8),
    H,
    Fst,
    Bst,
    Dst,
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

impl PolyName {
    pub fn parse(s: &str) -> Result<Self, RegistryError> {
        let name = s.to_ascii_lowercase();
        Ok(match name.as_str() {
            "f" => PolyName::F,
            "g" => PolyName::G,
            "h" => PolyName::H,
            "fst" => PolyName::Fst,
            "b" | "bst" => PolyName::Bst,
            "d" | "dst" => PolyName::Dst,
            "f1" => PolyName::F1,
            "f2" => PolyName::F2,
            "f3" => PolyName::F3,
            "f4" => PolyName::F4,
            "f5" => PolyName::F5,
            "f6" => PolyName::F6,
            _ => {
                if let Some(rest) = name.strip_prefix('l') {
                    if let Ok(i) = rest.parse::<u8>() {
                        if (1..=13).contains(&i) {
                            return Ok(PolyName::L(i));
                        }
                    }
                }
                return Err(RegistryError::UnknownName(s.to_string()));
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            PolyName::F => "f".into(),
            PolyName::G => "g".into(),
            PolyName::L(i) => format!("l{i}"),
            PolyName::H => "h".into(),
            PolyName::Fst => "fst".into(),
            PolyName::Bst => "b".into(),
            PolyName::Dst => "d".into(),
            PolyName::F1 => "f1".into(),
            PolyName::F2 => "f2".into(),
            PolyName::F3 => "f3".into(),
            PolyName::F4 => "f4".into(),
            PolyName::F5 => "f5".into(),
            PolyName::F6 => "f6".into(),
        }
    }
}

fn require(cond: bool, name: &'static str, requirement: &'static str) -> Result<(), RegistryError> {
    if cond {
        Ok(())
    } else {
        Err(RegistryError::BadParameters { name, requirement })
    }
}

/// The polynomial in x with the paper parameters substituted exactly.
/// `n` drives the single-parameter families; `s`, `t` drive h, fst, b, d.
pub fn paper_polynomial(
    name: PolyName,
    n: Option<u64>,
    s: Option<u64>,
    t: Option<u64>,
) -> Result<IntPolynomial, RegistryError> {
    let n_val = || -> Result<BigRational, RegistryError> {
        n.map(|v| rat_i(v as i64)).ok_or(RegistryError::BadParameters {
            name: "n-parameter family",
            requirement: "--n",
        })
    };
    let st_val = || -> Result<(BigRational, BigRational), RegistryError> {
        match (s, t) {
            (Some(s), Some(t)) => Ok((rat_i(s as i64), rat_i(t as i64))),
            _ => Err(RegistryError::BadParameters {
                name: "(s,t)-parameter family",
                requirement: "--s and --t",
            }),
        }
    };
    let even = |name| require(n.map(|v| v % 2 == 0).unwrap_or(false), name, "even n");
    let odd = |name| require(n.map(|v| v % 2 == 1).unwrap_or(false), name, "odd n");

    let p = match name {
        PolyName::F => {
            even("f")?;
            let n = n_val()?;
            let n2 = &n * &n;
            poly(&[&n2 / rat_i(4) - rat_i(2) * &n, -&n2 / rat_i(4), rat_i(-1), rat_i(1)])
        }
        PolyName::G => {
            odd("g")?;
            let n = n_val()?;
            let n2 = &n * &n;
            poly(&[
                &n2 / rat_i(4) - rat_i(2) * &n + rat(7, 4),
                rat(1, 4) - &n2 / rat_i(4),
                rat_i(-1),
                rat_i(1),
            ])
        }
        PolyName::L(i) => {
            even("l-family")?;
            let n = n_val()?;
            ell(i, &n)?
        }
        PolyName::H => {
            let (s, t) = st_val()?;
            let st = &s * &t;
            poly(&[&st - rat_i(2) * &t, -st.clone(), rat_i(-1), rat_i(1)])
        }
        PolyName::Fst => {
            let (s, t) = st_val()?;
            let st = &s * &t;
            poly(&[
                rat_i(-4) * &t - rat_i(2) * &s + &st + rat_i(8),
                rat_i(2) * &st - rat_i(2) * &s - rat_i(4) * &t,
                rat_i(7) - &st,
                rat_i(-2),
                rat_i(1),
            ])
        }
        PolyName::Bst => {
            let (s, t) = st_val()?;
            let st = &s * &t;
            poly(&[
                rat_i(-4) + rat_i(2) * &s + rat_i(2) * &t - &st,
                rat_i(-2) * &s - rat_i(4) * &t + rat_i(3) * &st,
                rat_i(5) - rat_i(2) * &s - rat_i(2) * &t + &st,
                rat_i(1) - &st,
                rat_i(-1),
                rat_i(1),
            ])
        }
        PolyName::Dst => {
            let (s, t) = st_val()?;
            let st = &s * &t;
            poly(&[
                rat_i(0),
                rat_i(-2) * &s - rat_i(2) * &t + rat_i(2) * &st,
                rat_i(4) - &st,
                rat_i(-2),
                rat_i(1),
            ])
        }
        PolyName::F1 => {
            even("f1")?;
            let n = n_val()?;
            let n2 = &n * &n;
            poly(&[
                rat_i(-5) - rat_i(2) * &n + &n2 / rat_i(4),
                rat_i(1) - &n2 / rat_i(4),
                rat_i(-1),
                rat_i(1),
            ])
        }
        PolyName::F2 => {
            even("f2")?;
            let n = n_val()?;
            let n2 = &n * &n;
            poly(&[
                rat_i(3) - rat_i(2) * &n + &n2 / rat_i(4),
                rat_i(1) - &n2 / rat_i(4),
                rat_i(-1),
                rat_i(1),
            ])
        }
        PolyName::F3 => {
            even("f3")?;
            let n = n_val()?;
            let n2 = &n * &n;
            poly(&[
                rat_i(4) - rat_i(2) * &n + &n2 / rat_i(4),
                rat_i(4) - &n2 / rat_i(4),
                rat_i(-1),
                rat_i(1),
            ])
        }
        PolyName::F4 => {
            odd("f4")?;
            let n = n_val()?;
            let n2 = &n * &n;
            poly(&[
                rat_i(0),
                rat(1, 2) + rat_i(4) * &n - &n2 / rat_i(2),
                rat(-3, 2) - &n + &n2 / rat_i(2),
                rat(-1, 4) - rat_i(2) * &n + &n2 / rat_i(4),
                rat(1, 4) - &n2 / rat_i(4),
                rat_i(-1),
                rat_i(1),
            ])
        }
        PolyName::F5 => {
            odd("f5")?;
            let n = n_val()?;
            let n2 = &n * &n;
            poly(&[
                rat(-33, 4) - rat_i(2) * &n + &n2 / rat_i(4),
                rat(9, 4) - &n2 / rat_i(4),
                rat_i(-1),
                rat_i(1),
            ])
        }
        PolyName::F6 => {
            odd("f6")?;
            let n = n_val()?;
            let n2 = &n * &n;
            poly(&[
                rat(15, 4) - rat_i(2) * &n + &n2 / rat_i(4),
                rat(9, 4) - &n2 / rat_i(4),
                rat_i(-1),
                rat_i(1),
            ])
        }
    };
    Ok(p)
}

fn poly(coeffs: &[BigRational]) -> IntPolynomial {
    IntPolynomial::from_coeffs(coeffs.to_vec())
}

fn ell(i: u8, n: &BigRational) -> Result<IntPolynomial, RegistryError> {
    let n2 = n * n;
    let q = |a: i64| rat_i(a);
    let p = match i {
        1 => poly(&[
            q(0),
            q(17) + q(4) * n - &n2 / q(2),
            q(-9) - n + &n2 / q(2),
            q(-10) - q(2) * n + &n2 / q(4),
            q(4) - &n2 / q(4),
            q(-1),
            q(1),
        ]),
        2 => poly(&[
            q(0),
            q(-3) + q(7) * n - q(3) * &n2 / q(4),
            q(-1) - q(3) * n + q(3) * &n2 / q(4),
            q(-2) - q(2) * n + &n2 / q(4),
            q(2) - &n2 / q(4),
            q(-1),
            q(1),
        ]),
        3 => poly(&[
            q(0),
            q(-27) + q(11) * n - &n2,
            q(3) - q(6) * n + &n2,
            q(4) - q(2) * n + &n2 / q(4),
            q(2) - &n2 / q(4),
            q(-1),
            q(1),
        ]),
        4 => poly(&[
            q(24) - q(7) * n + &n2 / q(2),
            q(-28) + q(7) * n - &n2 / q(2),
            q(-5) + q(7) * n - &n2,
            q(-3) - q(4) * n + &n2,
            q(4) - q(2) * n + &n2 / q(4),
            q(2) - &n2 / q(4),
            q(-1),
            q(1),
        ]),
        5 => poly(&[
            q(0),
            q(0),
            q(-15) + q(10) * n - q(5) * &n2 / q(4),
            q(-10) + q(3) * n,
            q(6) - q(7) * n + q(5) * &n2 / q(4),
            q(6) - q(2) * n,
            q(1) - &n2 / q(4),
            q(0),
            q(1),
        ]),
        6 => poly(&[
            q(0),
            q(0),
            q(-10) + q(7) * n - q(3) * &n2 / q(4),
            q(-11) + q(4) * n,
            q(2) - q(5) * n + &n2,
            q(5) - q(2) * n,
            q(1) - &n2 / q(4),
            q(0),
            q(1),
        ]),
        7 => poly(&[
            q(8) - q(3) * n + &n2 / q(4),
            q(-8) + n,
            q(-18) + q(12) * n - q(3) * &n2 / q(2),
            q(-2) + q(2) * n,
            q(1) - q(6) * n + q(5) * &n2 / q(4),
            q(6) - q(2) * n,
            q(1) - &n2 / q(4),
            q(0),
            q(1),
        ]),
        8 => poly(&[
            q(0),
            q(-17) + q(6) * n - &n2 / q(2),
            q(-5) + q(5) * n - &n2 / q(2),
            q(-1) - q(3) * n + q(3) * &n2 / q(4),
            q(2) - q(2) * n + &n2 / q(4),
            q(3) - &n2 / q(4),
            q(-1),
            q(1),
        ]),
        9 => poly(&[
            q(0),
            q(7) - q(5) * n + q(3) * &n2 / q(4),
            q(8) - q(2) * n,
            q(2) - &n2 / q(4),
            q(0),
            q(1),
        ]),
        10 => poly(&[
            q(0),
            q(-15) + q(7) * n - q(3) * &n2 / q(4),
            q(-5) - q(3) * n + q(3) * &n2 / q(4),
            q(6) - q(2) * n + &n2 / q(4),
            q(2) - &n2 / q(4),
            q(-1),
            q(1),
        ]),
        11 => poly(&[
            q(-9) + q(3) * n - &n2 / q(4),
            q(0),
            q(-1) - q(2) * n + &n2 / q(2),
            q(5) - &n2 / q(4),
            q(-2),
            q(1),
        ]),
        12 => poly(&[
            q(0),
            q(6) - q(4) * n + &n2 / q(2),
            q(8) - q(2) * n,
            q(3) - &n2 / q(4),
            q(0),
            q(1),
        ]),
        13 => poly(&[
            q(4) - q(2) * n + &n2 / q(4),
            q(4) - &n2 / q(4),
            q(-1),
            q(1),
        ]),
        _ => return Err(RegistryError::UnknownName(format!("l{i}"))),
    };
    Ok(p)
}

/// The published expansion of the value at n/2, as a polynomial in n,
/// for the names where the proof quotes one.
pub fn quoted_half_value(name: PolyName) -> Option<IntPolynomial> {
    let c = |nums: &[i64], den: i64| {
        IntPolynomial::from_coeffs(nums.iter().map(|&v| rat(v, den)).collect())
    };
    Some(match name {
        PolyName::L(1) => c(&[0, 544, -16, -112, 8], 64),
        PolyName::L(2) => c(&[0, -96, 208, -88, 4], 64),
        PolyName::L(3) => c(&[0, -864, 400, -96, 8], 64),
        PolyName::L(4) => c(&[3072, -2688, 352, 144, -64, 8], 128),
        PolyName::L(5) => c(&[0, 0, -960, 320, 112, -64, 8], 256),
        PolyName::L(6) => c(&[0, 0, -640, 96, 112, -40, 4], 256),
        PolyName::L(7) => c(&[2048, -1792, -960, 704, -16, -48, 8], 256),
        PolyName::L(8) => c(&[0, -1088, 224, 112, -48, 8], 128),
        PolyName::L(9) => c(&[0, 112, -16, 4], 32),
        PolyName::L(10) => c(&[0, -480, 144, -24, 4], 64),
        PolyName::L(11) => c(&[-288, 96, -16, 4], 32),
        PolyName::L(12) => c(&[0, 96, 0, 4], 32),
        PolyName::L(13) | PolyName::F3 => IntPolynomial::from_ints(&[4]),
        _ => return None,
    })
}

/// Graph construction plus equitable partition realizing a named polynomial
/// as its quotient characteristic polynomial, when one is canonical.
pub fn polynomial_graph(
    name: PolyName,
    n: Option<u64>,
    s: Option<u64>,
    t: Option<u64>,
) -> Result<Option<(Graph, Vec<usize>)>, RegistryError> {
    let need_n = || -> Result<usize, RegistryError> {
        n.map(|v| v as usize).ok_or(RegistryError::BadParameters {
            name: "n-parameter family",
            requirement: "--n",
        })
    };
    let need_st = || -> Result<(usize, usize), RegistryError> {
        match (s, t) {
            (Some(s), Some(t)) => Ok((s as usize, t as usize)),
            _ => Err(RegistryError::BadParameters {
                name: "(s,t)-parameter family",
                requirement: "--s and --t",
            }),
        }
    };
    let plus2 = |s: usize, t: usize| -> Result<Option<(Graph, Vec<usize>)>, RegistryError> {
        let g = construct::kst_plus2(s, t)?;
        let classes = (0..s + t)
            .map(|v| if v < 4 { 0 } else if v < s { 1 } else { 2 })
            .collect();
        Ok(Some((g, classes)))
    };
    match name {
        PolyName::F => {
            let n = need_n()?;
            plus2(n / 2, n / 2)
        }
        PolyName::G => {
            let n = need_n()?;
            plus2((n + 1) / 2, (n - 1) / 2)
        }
        PolyName::F1 => {
            let n = need_n()?;
            plus2(n / 2 - 1, n / 2 + 1)
        }
        PolyName::F2 => {
            let n = need_n()?;
            plus2(n / 2 + 1, n / 2 - 1)
        }
        PolyName::F3 | PolyName::L(13) => {
            let n = need_n()?;
            plus2(n / 2 + 2, n / 2 - 2)
        }
        PolyName::F5 => {
            let n = need_n()?;
            plus2((n - 3) / 2, (n + 3) / 2)
        }
        PolyName::F6 => {
            let n = need_n()?;
            plus2((n + 3) / 2, (n - 3) / 2)
        }
        PolyName::H => {
            let (s, t) = need_st()?;
            let g = construct::kst_plus(s, t)?;
            let classes = (0..s + t)
                .map(|v| if v < 2 { 0 } else if v < s { 1 } else { 2 })
                .collect();
            Ok(Some((g, classes)))
        }
        PolyName::Fst => {
            // G1: S-edges u1u2, u3u4; T-edge v1v2; v1 ~ u1,u3 only; v2 ~ u2,u4 only.
            let (s, t) = need_st()?;
            let spec = EmbeddedBipartiteSpec {
                s,
                t,
                inside_s: vec![(0, 1), (2, 3)],
                inside_t: vec![(0, 1)],
                missing_cross: vec![(1, 0), (3, 0), (0, 1), (2, 1)],
            };
            let g = construct::build_embedded(&spec)?;
            let classes = (0..s + t)
                .map(|v| {
                    if v < 4 {
                        0
                    } else if v < s {
                        2
                    } else if v < s + 2 {
                        1
                    } else {
                        3
                    }
                })
                .collect();
            Ok(Some((g, classes)))
        }
        PolyName::Bst => {
            // H1: v1 adjacent to both ends of the S-edge, v2 to neither.
            let (s, t) = need_st()?;
            let spec = EmbeddedBipartiteSpec {
                s,
                t,
                inside_s: vec![(0, 1)],
                inside_t: vec![(0, 1)],
                missing_cross: vec![(0, 1), (1, 1)],
            };
            let g = construct::build_embedded(&spec)?;
            let classes = (0..s + t)
                .map(|v| {
                    if v < 2 {
                        0
                    } else if v < s {
                        3
                    } else if v == s {
                        1
                    } else if v == s + 1 {
                        2
                    } else {
                        4
                    }
                })
                .collect();
            Ok(Some((g, classes)))
        }
        PolyName::Dst => {
            // H2: v1 ~ u1 only, v2 ~ u2 only.
            let (s, t) = need_st()?;
            let spec = EmbeddedBipartiteSpec {
                s,
                t,
                inside_s: vec![(0, 1)],
                inside_t: vec![(0, 1)],
                missing_cross: vec![(1, 0), (0, 1)],
            };
            let g = construct::build_embedded(&spec)?;
            let classes = (0..s + t)
                .map(|v| {
                    if v < 2 {
                        0
                    } else if v < s {
                        2
                    } else if v < s + 2 {
                        1
                    } else {
                        3
                    }
                })
                .collect();
            Ok(Some((g, classes)))
        }
        PolyName::F4 => {
            // K^{+2|}: delete one cross edge at a matched vertex of K_{(n-1)/2,(n+1)/2}^{+2}.
            let n = need_n()?;
            let s = (n - 1) / 2;
            let t = (n + 1) / 2;
            let spec = EmbeddedBipartiteSpec {
                s,
                t,
                inside_s: vec![(0, 1), (2, 3)],
                inside_t: vec![],
                missing_cross: vec![(0, 0)],
            };
            let g = construct::build_embedded(&spec)?;
            let classes = (0..s + t)
                .map(|v| {
                    if v == 0 {
                        0
                    } else if v == 1 {
                        1
                    } else if v < 4 {
                        2
                    } else if v < s {
                        4
                    } else if v == s {
                        3
                    } else {
                        5
                    }
                })
                .collect();
            Ok(Some((g, classes)))
        }
        PolyName::L(_) => Ok(None),
    }
}

/// Match tolerance stated for the class identification.
pub const MATCH_TOL: f64 = 1e-6;
/// A true match (root of the class's own quotient polynomial) agrees to the
/// accuracy of the solvers; impostor classes sit orders of magnitude away.
const EXACT_MATCH_TOL: f64 = 1e-9;

/// Identifies the unique class whose spectral radius agrees with the largest
/// real root of the polynomial within `1e-6` at every sample. When several
/// classes fall inside that tolerance (distinct deletion classes can lie
/// 1e-7 apart at large n), the identification is accepted only if exactly
/// one class agrees at solver accuracy and every other candidate is at
/// least an order of magnitude farther.
///
/// `family_at` must produce the classes in a sample-independent order.
pub fn match_polynomial_to_class(
    family_at: &dyn Fn(u64) -> Result<Vec<Graph>, RegistryError>,
    poly_at: &dyn Fn(u64) -> Result<IntPolynomial, RegistryError>,
    samples: &[u64],
) -> Result<usize, RegistryError> {
    assert!(!samples.is_empty());
    let mut worst: Option<Vec<f64>> = None;
    for &n in samples {
        let classes = family_at(n)?;
        let p = poly_at(n)?;
        let half = n as f64 / 2.0;
        let root = p.largest_real_root(Some((half - 1.5, half + 1.5)))?;
        let diffs: Vec<f64> = classes.iter().map(|g| (spectral_radius(g) - root).abs()).collect();
        worst = Some(match worst {
            None => diffs,
            Some(prev) => prev.iter().zip(&diffs).map(|(a, b)| a.max(*b)).collect(),
        });
    }
    let worst = worst.unwrap();
    let hits: Vec<usize> = worst
        .iter()
        .enumerate()
        .filter(|(_, &d)| d <= MATCH_TOL)
        .map(|(i, _)| i)
        .collect();
    match hits.len() {
        0 => Err(RegistryError::NoMatch),
        1 => Ok(hits[0]),
        k => {
            let best = hits
                .iter()
                .copied()
                .min_by(|&a, &b| worst[a].partial_cmp(&worst[b]).unwrap())
                .unwrap();
            let separated = hits.iter().all(|&i| {
                i == best || worst[i] >= (10.0 * worst[best]).max(1e-8)
            });
            if worst[best] <= EXACT_MATCH_TOL && separated {
                Ok(best)
            } else {
                Err(RegistryError::AmbiguousMatch(k))
            }
        }
    }
}

fn spectral_radius(g: &Graph) -> f64 {
    spectral::spectral_radius(g, 1e-10)
        .map(|r| r.lambda)
        .unwrap_or(f64::NAN)
}

/// One sign-claim check: the exact sign of a polynomial at a point together
/// with the published closed form, when the proof quotes one.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SignCheck {
    pub claim: String,
    pub exact_sign: i32,
    pub matches_quoted_form: Option<bool>,
}

/// Full verification record for one named polynomial at given parameters.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PolyVerification {
    pub name: String,
    pub poly: String,
    pub largest_root: f64,
    pub lambda_iterative: Option<f64>,
    pub root_lambda_gap: Option<f64>,
    pub quotient_matches_exactly: Option<bool>,
    pub matched_class: Option<usize>,
    pub class_count: Option<usize>,
    pub sign_checks: Vec<SignCheck>,
    pub discrepancies: Vec<String>,
}

/// Verifies one registered polynomial: exact quotient-polynomial identity
/// when the construction is canonical, class matching for the deletion
/// families, iterative-vs-exact agreement, and the published sign claims.
pub fn verify_polynomial(
    name: PolyName,
    n: Option<u64>,
    s: Option<u64>,
    t: Option<u64>,
) -> Result<PolyVerification, RegistryError> {
    let p = paper_polynomial(name, n, s, t)?;
    let bracket = n.map(|n| (n as f64 / 2.0 - 1.5, n as f64 / 2.0 + 1.5));
    let largest_root = p.largest_real_root(bracket)?;
    let mut out = PolyVerification {
        name: name.label(),
        poly: format!("{p:?}"),
        largest_root,
        lambda_iterative: None,
        root_lambda_gap: None,
        quotient_matches_exactly: None,
        matched_class: None,
        class_count: None,
        sign_checks: Vec::new(),
        discrepancies: Vec::new(),
    };

    if let Some((g, classes)) = polynomial_graph(name, n, s, t)? {
        let q = equitable_quotient(&g, &classes)?;
        let qp = spectral::char_poly(&q);
        let exact_match = qp == p;
        out.quotient_matches_exactly = Some(exact_match);
        if !exact_match {
            out.discrepancies.push(format!(
                "quotient characteristic polynomial differs: computed {qp:?}"
            ));
        }
        let lam = spectral::spectral_radius(&g, 1e-10)?.lambda;
        out.lambda_iterative = Some(lam);
        out.root_lambda_gap = Some((lam - largest_root).abs());
    } else if let (PolyName::L(i), Some(nv)) = (name, n) {
        // Deletion-family polynomials: identify the class by root agreement.
        if (1..=12).contains(&i) {
            let (family, samples) = l_family_for(i, nv);
            let matched = match_polynomial_to_class(
                &family,
                &|nn| paper_polynomial(name, Some(nn), None, None),
                &samples,
            );
            match matched {
                Ok(idx) => {
                    out.matched_class = Some(idx);
                    let classes = family(nv)?;
                    out.class_count = Some(classes.len());
                    let lam = spectral::spectral_radius(&classes[idx], 1e-10)?.lambda;
                    out.lambda_iterative = Some(lam);
                    out.root_lambda_gap = Some((lam - largest_root).abs());
                }
                Err(RegistryError::NoMatch) => {
                    out.discrepancies.push("no deletion class matches this polynomial".into());
                    for line in l_slot_analysis(i, nv)? {
                        out.discrepancies.push(line);
                    }
                }
                Err(RegistryError::AmbiguousMatch(k)) => {
                    out.discrepancies.push(format!("{k} deletion classes match"));
                }
                Err(e) => return Err(e),
            }
        }
    }

    // Published sign claims.
    if let Some(nv) = n {
        let nr = rat_i(nv as i64);
        match name {
            PolyName::F => {
                // f(sqrt(n^2/4+4)) = 2(-2 - n + sqrt(16 + n^2)) < 0
                let radicand = &nr * &nr / rat_i(4) + rat_i(4);
                let point = Surd::sqrt_of(radicand)?;
                let val = p.eval_surd(&point)?;
                let expected_rat = rat_i(-4) - rat_i(2) * &nr;
                let expected_coeff = rat_i(4); // 2 sqrt(16+n^2) = 4 sqrt((16+n^2)/4)
                let matches = val.rational == expected_rat && val.surd_coeff == expected_coeff;
                out.sign_checks.push(SignCheck {
                    claim: "f(sqrt(n^2/4+4)) < 0".into(),
                    exact_sign: val.sign(),
                    matches_quoted_form: Some(matches),
                });
                if !matches {
                    out.discrepancies
                        .push("closed form of f at the threshold surd differs".into());
                }
            }
            PolyName::G => {
                let radicand = (&nr * &nr - rat_i(1)) / rat_i(4) + rat_i(4);
                let point = Surd::sqrt_of(radicand)?;
                let val = p.eval_surd(&point)?;
                let expected_rat = rat_i(-2) - rat_i(2) * &nr;
                let expected_coeff = rat_i(4); // 2 sqrt(15+n^2) = 4 sqrt((15+n^2)/4)
                let matches = val.rational == expected_rat && val.surd_coeff == expected_coeff;
                out.sign_checks.push(SignCheck {
                    claim: "g(sqrt((n^2-1)/4+4)) < 0".into(),
                    exact_sign: val.sign(),
                    matches_quoted_form: Some(matches),
                });
                if !matches {
                    out.discrepancies
                        .push("closed form of g at the threshold surd differs".into());
                }
            }
            _ => {}
        }
        // Value at n/2 versus the quoted expansion.
        if let Some(quoted) = quoted_half_value(name) {
            let direct = p.eval(&(nr.clone() / rat_i(2)));
            let published = quoted.eval(&nr);
            let sign = if direct.is_zero() {
                0
            } else if direct > BigRational::zero() {
                1
            } else {
                -1
            };
            let agree = direct == published;
            out.sign_checks.push(SignCheck {
                claim: format!("{}(n/2) > 0", name.label()),
                exact_sign: sign,
                matches_quoted_form: Some(agree),
            });
            if !agree {
                out.discrepancies.push(format!(
                    "direct evaluation at n/2 gives {direct}, published expansion gives {published}"
                ));
            }
        }
    }
    Ok(out)
}

/// When a deletion polynomial matches no class, identify the candidate
/// figure classes (those whose deletions each destroy one triangle) that no
/// other polynomial of the same case claims, and report their exact quotient
/// characteristic polynomials.
fn l_slot_analysis(i: u8, n: u64) -> Result<Vec<String>, RegistryError> {
    let case = l_case(i);
    let (s, k) = case_params(case, n as usize);
    let base = EmbeddedBipartiteSpec::plain(s, n as usize - s).with_inside_s(&[(0, 1), (2, 3)]);
    let classes = construct::figure_deletion_family(&base, k)?;
    let siblings: Vec<u8> = match case {
        0 => vec![1],
        1 => vec![2],
        2 => (3..=8).collect(),
        3 => (9..=12).collect(),
        _ => vec![13],
    };
    let mut sibling_polys = Vec::new();
    for j in siblings {
        sibling_polys.push(paper_polynomial(PolyName::L(j), Some(n), None, None)?);
    }
    // Figure candidates destroy exactly one triangle per deleted edge.
    let base_triangles = 2 * (n as usize - s);
    let mut out = Vec::new();
    for g in &classes {
        if crate::count::triangle_stats(g).total != base_triangles - k {
            continue;
        }
        let partition = spectral::coarsest_equitable_partition(g);
        let q = equitable_quotient(g, &partition)?;
        let p = spectral::char_poly(&q);
        if sibling_polys.iter().any(|sp| *sp == p) {
            continue;
        }
        out.push(format!(
            "unclaimed figure class with exact quotient polynomial: {p:?}"
        ));
    }
    Ok(out)
}

/// The deletion family and default samples attached to each l-polynomial:
/// the five cases of the structural lemma keyed by part size.
pub fn l_family_for(
    i: u8,
    n: u64,
) -> (Box<dyn Fn(u64) -> Result<Vec<Graph>, RegistryError>>, Vec<u64>) {
    let case = l_case(i);
    let family = move |nn: u64| -> Result<Vec<Graph>, RegistryError> {
        let (s, k) = case_params(case, nn as usize);
        let base = EmbeddedBipartiteSpec::plain(s, nn as usize - s).with_inside_s(&[(0, 1), (2, 3)]);
        Ok(construct::figure_deletion_family(&base, k)?)
    };
    let samples = if n >= 200 { vec![114, n] } else { vec![n, 200] };
    (Box::new(family), samples)
}

/// Which of the five part-size cases each l-polynomial belongs to.
fn l_case(i: u8) -> u8 {
    match i {
        1 => 0,          // s = n/2 - 2, one deletion
        2 => 1,          // s = n/2 - 1, two deletions
        3..=8 => 2,      // s = n/2, three deletions
        9..=12 => 3,     // s = n/2 + 1, two deletions
        _ => 4,          // s = n/2 + 2, no deletion
    }
}

/// (part size s, deletion count k) for a case index at order n.
pub fn case_params(case: u8, n: usize) -> (usize, usize) {
    match case {
        0 => (n / 2 - 2, 1),
        1 => (n / 2 - 1, 2),
        2 => (n / 2, 3),
        3 => (n / 2 + 1, 2),
        _ => (n / 2 + 2, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_i;

    #[test]
    fn h_example() {
        // h with s = t = 5: x^3 - x^2 - 25x + 15
        let p = paper_polynomial(PolyName::H, None, Some(5), Some(5)).unwrap();
        assert_eq!(p.coeffs(), &[rat_i(15), rat_i(-25), rat_i(-1), rat_i(1)]);
    }

    #[test]
    fn f_matches_quotient() {
        for n in [10u64, 50, 114] {
            let v = verify_polynomial(PolyName::F, Some(n), None, None).unwrap();
            assert_eq!(v.quotient_matches_exactly, Some(true), "n={n}");
            assert!(v.root_lambda_gap.unwrap() < 1e-8, "n={n}");
            assert_eq!(v.sign_checks[0].exact_sign, -1);
            assert_eq!(v.sign_checks[0].matches_quoted_form, Some(true));
        }
    }

    #[test]
    fn g_matches_quotient() {
        for n in [11u64, 51, 113, 201] {
            let v = verify_polynomial(PolyName::G, Some(n), None, None).unwrap();
            assert_eq!(v.quotient_matches_exactly, Some(true), "n={n}");
            assert!(v.root_lambda_gap.unwrap() < 1e-8, "n={n}");
            assert_eq!(v.sign_checks[0].exact_sign, -1);
            assert_eq!(v.sign_checks[0].matches_quoted_form, Some(true));
        }
    }

    #[test]
    fn structured_families_match_quotients() {
        for n in [14u64, 50] {
            for name in [PolyName::F1, PolyName::F2, PolyName::F3] {
                let v = verify_polynomial(name, Some(n), None, None).unwrap();
                assert_eq!(v.quotient_matches_exactly, Some(true), "{name:?} n={n}");
                assert!(v.root_lambda_gap.unwrap() < 1e-8);
            }
        }
        for n in [15u64, 51] {
            for name in [PolyName::F4, PolyName::F5, PolyName::F6] {
                let v = verify_polynomial(name, Some(n), None, None).unwrap();
                assert_eq!(v.quotient_matches_exactly, Some(true), "{name:?} n={n}");
                assert!(v.root_lambda_gap.unwrap() < 1e-8);
            }
        }
        for (s, t) in [(7u64, 7u64), (10, 9)] {
            for name in [PolyName::H, PolyName::Fst, PolyName::Bst, PolyName::Dst] {
                let v = verify_polynomial(name, None, Some(s), Some(t)).unwrap();
                assert_eq!(v.quotient_matches_exactly, Some(true), "{name:?} ({s},{t})");
                assert!(v.root_lambda_gap.unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn f3_value_at_half_is_four() {
        let p = paper_polynomial(PolyName::F3, Some(20), None, None).unwrap();
        assert_eq!(p.eval(&rat_i(10)), rat_i(4));
        let p = paper_polynomial(PolyName::L(13), Some(114), None, None).unwrap();
        assert_eq!(p.eval(&rat_i(57)), rat_i(4));
    }

    #[test]
    fn dst_regular_case_has_root_at_half() {
        // s = t = n/2 makes the graph n/2-regular.
        let p = paper_polynomial(PolyName::Dst, None, Some(10), Some(10)).unwrap();
        assert_eq!(p.eval(&rat_i(10)), rat_i(0));
        let root = p.largest_real_root(None).unwrap();
        assert!((root - 10.0).abs() < 1e-10);
    }

    #[test]
    fn ell_sign_claims_at_sample() {
        // All quoted expansions match the direct evaluation at n = 114 and
        // the true values are positive.
        for i in 1..=13u8 {
            let v = verify_polynomial(PolyName::L(i), Some(114), None, None);
            // skip the class matching here (slow); only check signs via the registry
            let v = match v {
                Ok(v) => v,
                Err(e) => panic!("l{i}: {e}"),
            };
            let sign_check = v
                .sign_checks
                .iter()
                .find(|c| c.claim.contains("(n/2)"))
                .unwrap_or_else(|| panic!("l{i} missing half check"));
            assert_eq!(sign_check.exact_sign, 1, "l{i} value at n/2 should be positive");
            assert_eq!(sign_check.matches_quoted_form, Some(true), "l{i} expansion");
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(PolyName::parse("f").unwrap(), PolyName::F);
        assert_eq!(PolyName::parse("l7").unwrap(), PolyName::L(7));
        assert_eq!(PolyName::parse("L13").unwrap(), PolyName::L(13));
        assert_eq!(PolyName::parse("b").unwrap(), PolyName::Bst);
        assert!(PolyName::parse("l14").is_err());
        assert!(PolyName::parse("zz").is_err());
    }

    #[test]
    fn parity_errors() {
        assert!(paper_polynomial(PolyName::F, Some(11), None, None).is_err());
        assert!(paper_polynomial(PolyName::G, Some(10), None, None).is_err());
        assert!(paper_polynomial(PolyName::H, None, Some(5), None).is_err());
    }
}
