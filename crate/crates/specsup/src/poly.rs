//! Exact univariate polynomials over the rationals: arithmetic, Sturm
//! sequences, largest-real-root isolation, and sign evaluation at quadratic
//! surds `a + b*sqrt(c)`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("polynomial has no real root")]
    NoRealRoot,
    #[error("surd radicand must be non-negative")]
    NegativeRadicand,
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_i(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

/// Polynomial with exact rational coefficients, ascending degree order.
///
/// The zero polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigRational>,
}

impl std::fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if i == 1 {
                write!(f, "{c}*x")?;
            } else {
                write!(f, "{c}*x^{i}")?;
            }
        }
        Ok(())
    }
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    /// Convenience constructor from integer coefficients, ascending.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat_i(c)).collect())
    }

    pub fn monomial(degree: usize, coeff: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = coeff;
        Self::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * BigRational::from(BigInt::from(i)));
        }
        Self::from_coeffs(out)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Euclidean remainder of `self` by `other` (`other` nonzero).
    pub fn rem(&self, other: &Self) -> Self {
        assert!(!other.is_zero());
        let mut r = self.clone();
        let dl = other.degree();
        let lead = other.leading();
        while !r.is_zero() && r.degree() >= dl {
            let shift = r.degree() - dl;
            let factor = r.leading() / lead.clone();
            let sub = other.mul(&Self::monomial(shift, factor));
            r = r.sub(&sub);
            // Guard against non-cancellation from arithmetic bugs.
            debug_assert!(r.is_zero() || r.degree() < shift + dl || r.coeff(shift + dl).is_zero());
        }
        r
    }

    /// Evaluates the polynomial at `a + b*sqrt(c)` exactly.
    pub fn eval_surd(&self, point: &Surd) -> Result<SurdValue, PolyError> {
        if point.radicand.is_negative() {
            return Err(PolyError::NegativeRadicand);
        }
        let mut acc = SurdValue {
            rational: BigRational::zero(),
            surd_coeff: BigRational::zero(),
            radicand: point.radicand.clone(),
        };
        for c in self.coeffs.iter().rev() {
            // acc = acc * (a + b sqrt(c)) + coeff
            let p = &acc.rational;
            let q = &acc.surd_coeff;
            let new_r = p * &point.rational + q * &point.surd_coeff * &point.radicand + c;
            let new_q = p * &point.surd_coeff + q * &point.rational;
            acc.rational = new_r;
            acc.surd_coeff = new_q;
        }
        Ok(acc)
    }

    /// Exact sign of `p(a + b*sqrt(c))`: -1, 0, or 1.
    pub fn sign_at(&self, point: &Surd) -> Result<i32, PolyError> {
        Ok(self.eval_surd(point)?.sign())
    }

    /// Sign of the polynomial at +infinity (sign of the leading coefficient).
    pub fn sign_at_pos_infinity(&self) -> i32 {
        sign_of(&self.leading())
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn cauchy_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let mut max = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let q = c.abs() / lead.clone();
            if q > max {
                max = q;
            }
        }
        max + BigRational::one()
    }

    /// Sturm chain of the squarefree part procedure (standard chain of `p`).
    pub fn sturm_chain(&self) -> Vec<IntPolynomial> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[k - 2].rem(&chain[k - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(normalize_for_chain(r));
        }
        chain
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    ///
    /// Requires `a < b`. Uses the precomputed Sturm chain.
    pub fn count_roots_in(&self, chain: &[IntPolynomial], a: &BigRational, b: &BigRational) -> usize {
        let va = sign_variations(chain.iter().map(|p| sign_of(&p.eval(a))));
        let vb = sign_variations(chain.iter().map(|p| sign_of(&p.eval(b))));
        va.saturating_sub(vb)
    }

    /// Number of distinct real roots strictly greater than the surd point.
    /// Zero chain values are skipped, so the count stays correct when the
    /// point itself is a root.
    pub fn count_roots_above_surd(
        &self,
        chain: &[IntPolynomial],
        point: &Surd,
    ) -> Result<usize, PolyError> {
        let mut signs_at = Vec::with_capacity(chain.len());
        for p in chain {
            signs_at.push(p.eval_surd(point)?.sign());
        }
        let va = sign_variations(signs_at.into_iter());
        let vinf = sign_variations(chain.iter().map(|p| p.sign_at_pos_infinity()));
        Ok(va.saturating_sub(vinf))
    }

    /// Largest real root, isolated with Sturm sequences over exact rationals
    /// and refined by bisection to about 1e-12. An optional bracket hint
    /// narrows the initial search interval.
    pub fn largest_real_root(&self, bracket: Option<(f64, f64)>) -> Result<f64, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.degree() == 0 {
            return Err(PolyError::NoRealRoot);
        }
        let chain = self.sturm_chain();
        let bound = self.cauchy_bound();
        let (mut lo, mut hi) = (-bound.clone(), bound.clone());
        if let Some((a, b)) = bracket {
            let ra = BigRational::from_float(a);
            let rb = BigRational::from_float(b);
            if let (Some(ra), Some(rb)) = (ra, rb) {
                // Use the hint only when it brackets the largest root.
                if ra < rb
                    && rb <= hi
                    && self.count_roots_in(&chain, &ra, &rb) >= 1
                    && self.count_roots_in(&chain, &rb, &hi) == 0
                {
                    lo = ra;
                    hi = rb;
                }
            }
        }
        let total = self.count_roots_in(&chain, &lo, &hi);
        if total == 0 {
            return Err(PolyError::NoRealRoot);
        }
        // Shrink [lo, hi] so exactly the largest root remains, then bisect.
        let two = rat_i(2);
        for _ in 0..200 {
            let width = &hi - &lo;
            if width.to_f64().unwrap_or(1.0) < 1e-13 {
                break;
            }
            let mid = (&lo + &hi) / &two;
            if self.count_roots_in(&chain, &mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let approx = (lo.to_f64().unwrap() + hi.to_f64().unwrap()) / 2.0;
        Ok(polish_root_newton(self, approx))
    }
}

fn polish_root_newton(p: &IntPolynomial, mut x: f64) -> f64 {
    let d = p.derivative();
    for _ in 0..8 {
        let fx = p.eval_f64(x);
        let dx = d.eval_f64(x);
        if dx == 0.0 || !fx.is_finite() {
            break;
        }
        let step = fx / dx;
        if !step.is_finite() || step.abs() > 1.0 {
            break;
        }
        x -= step;
        if step.abs() < 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Rescales a chain element to keep coefficients small; the positive factor
/// preserves all sign information.
fn normalize_for_chain(p: IntPolynomial) -> IntPolynomial {
    if p.is_zero() {
        return p;
    }
    let lead = p.leading().abs();
    p.scale(&(BigRational::one() / lead))
}

pub fn sign_of(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_variations<I: Iterator<Item = i32>>(signs: I) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// An exact point of the form `a + b*sqrt(c)` with rational `a`, `b`, `c >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Surd {
    pub rational: BigRational,
    pub surd_coeff: BigRational,
    pub radicand: BigRational,
}

impl Surd {
    pub fn new(rational: BigRational, surd_coeff: BigRational, radicand: BigRational) -> Result<Self, PolyError> {
        if radicand.is_negative() {
            return Err(PolyError::NegativeRadicand);
        }
        Ok(Surd { rational, surd_coeff, radicand })
    }

    /// `sqrt(c)` for a non-negative rational `c`.
    pub fn sqrt_of(radicand: BigRational) -> Result<Self, PolyError> {
        Surd::new(BigRational::zero(), BigRational::one(), radicand)
    }

    pub fn from_rational(x: BigRational) -> Self {
        Surd { rational: x, surd_coeff: BigRational::zero(), radicand: BigRational::zero() }
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN)
            + self.surd_coeff.to_f64().unwrap_or(f64::NAN)
                * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

/// Exact value `p + q*sqrt(c)` resulting from surd evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct SurdValue {
    pub rational: BigRational,
    pub surd_coeff: BigRational,
    pub radicand: BigRational,
}

impl SurdValue {
    /// Exact sign of `p + q*sqrt(c)`.
    pub fn sign(&self) -> i32 {
        let p = &self.rational;
        let q = &self.surd_coeff;
        if q.is_zero() || self.radicand.is_zero() {
            return sign_of(p);
        }
        let sp = sign_of(p);
        let sq = sign_of(q);
        if sp == sq {
            return sp;
        }
        if sp == 0 {
            return sq;
        }
        if sq == 0 {
            return sp;
        }
        // Opposite signs: compare p^2 with q^2 * c.
        let lhs = p * p;
        let rhs = q * q * &self.radicand;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sp,
            std::cmp::Ordering::Less => sq,
            std::cmp::Ordering::Equal => 0,
        }
    }
}
