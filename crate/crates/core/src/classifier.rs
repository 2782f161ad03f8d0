//! `A_k` certification.
//!
//! Two independent routes:
//! - [`newton_ak_certify`] checks a prepared `(x, z)` series against the
//!   Newton segment from `(0,2)` to `(k+1,0)`;
//! - [`split_and_classify`] handles an arbitrary corank-one germ through the
//!   splitting lemma, `f ~ unit * z^2 + g(x)`, and reads `k` from `ord g`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{format_rational, Monomial, Rational, SparsePoly, Var};
use crate::series::{TruncatedSeries, Weights};

/// Evidence that a prepared series is `c2 * z^2 + c * x^(k+1)` plus terms
/// strictly above the segment.
#[derive(Clone, Debug, PartialEq)]
pub struct AkCertificate {
    pub k: u64,
    pub coeff_z2: Rational,
    pub coeff_xk1: Rational,
    pub weights: Weights,
    pub cutoff: u64,
    /// Terms on or below the segment other than its endpoints.
    pub violations: Vec<(Monomial, Rational)>,
}

impl AkCertificate {
    pub fn is_certified(&self) -> bool {
        self.violations.is_empty() && !self.coeff_z2.is_zero() && !self.coeff_xk1.is_zero()
    }
}

/// Outcome of the splitting-lemma classifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AkResult {
    Ak(u64),
    Smooth,
    NotCorankOne,
    Undetermined(u64),
}

impl std::fmt::Display for AkResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AkResult::Ak(k) => write!(f, "A_{k}"),
            AkResult::Smooth => write!(f, "smooth"),
            AkResult::NotCorankOne => write!(f, "not corank one"),
            AkResult::Undetermined(cap) => write!(f, "undetermined (cap {cap})"),
        }
    }
}

/// True when `(i, j)` lies strictly above the segment `(0,2)-(k+1,0)`,
/// i.e. `i/(k+1) + j/2 > 1`.
pub fn strictly_above_segment(m: &Monomial, k: u64) -> bool {
    2 * m.ex as u64 + (k + 1) * m.ey as u64 > 2 * (k + 1)
}

pub fn newton_ak_certify(f: &TruncatedSeries, expected_k: u64) -> Result<AkCertificate> {
    let window = Weights::segment(expected_k);
    let required = 2 * (expected_k + 1);
    if f.weights() != window {
        return Err(Error::MismatchedContract(format!(
            "expected weights (2, {}), got {:?}",
            expected_k + 1,
            f.weights()
        )));
    }
    if f.cutoff() < required {
        return Err(Error::WindowTooSmall { cutoff: f.cutoff(), required });
    }
    let z2 = Monomial::new(0, 2);
    let xk1 = Monomial::new((expected_k + 1) as u32, 0);
    let violations = f
        .body()
        .terms()
        .filter(|(m, _)| **m != z2 && **m != xk1 && !strictly_above_segment(m, expected_k))
        .map(|(m, c)| (*m, c.clone()))
        .collect();
    Ok(AkCertificate {
        k: expected_k,
        coeff_z2: f.body().coeff(z2),
        coeff_xk1: f.body().coeff(xk1),
        weights: window,
        cutoff: f.cutoff(),
        violations,
    })
}

fn check_critical(f: &SparsePoly) -> Result<()> {
    if !f.constant_term().is_zero() {
        return Err(Error::NotACriticalGerm("f(0,0) is not zero".into()));
    }
    if !f.homogeneous_part(1).is_zero() {
        return Err(Error::NotACriticalGerm("linear part is not zero".into()));
    }
    Ok(())
}

/// `2 - rank` of the Hessian at the origin.
pub fn hessian_corank(f: &SparsePoly) -> Result<u8> {
    check_critical(f)?;
    let (a, b, c) = quadratic_coeffs(f);
    // Hessian is [[2a, b], [b, 2c]].
    let det = rat(4) * &a * &c - &b * &b;
    Ok(if !det.is_zero() {
        0
    } else if a.is_zero() && b.is_zero() && c.is_zero() {
        2
    } else {
        1
    })
}

fn rat(n: i64) -> Rational {
    crate::poly::rat(n)
}

fn quadratic_coeffs(f: &SparsePoly) -> (Rational, Rational, Rational) {
    (f.coeff_of(2, 0), f.coeff_of(1, 1), f.coeff_of(0, 2))
}

/// Splitting-lemma classifier for plane-curve germs at the origin.
///
/// Precision starts at 16 coefficients and doubles; `ord g` is searched up to
/// `cap`, beyond which the answer is `Undetermined(cap)`.
pub fn split_and_classify(f: &SparsePoly, cap: u64) -> Result<AkResult> {
    if !f.constant_term().is_zero() {
        return Err(Error::NotACriticalGerm("f(0,0) is not zero".into()));
    }
    if !f.homogeneous_part(1).is_zero() {
        return Ok(AkResult::Smooth);
    }
    match hessian_corank(f)? {
        0 => return Ok(AkResult::Ak(1)),
        2 => return Ok(AkResult::NotCorankOne),
        _ => {}
    }
    let g = normalize_quadratic(f);
    let split = SplitGerm::new(&g);
    let target = cap + 1;
    let mut h = XSeries::zero(0);
    let mut h_prec = 2u64;
    let mut prec = 16u64.min(target);
    loop {
        h = split.critical_branch(h, h_prec, prec);
        h_prec = prec;
        let residual = split.f.eval(&h, prec);
        if let Some(ord) = residual.order() {
            return Ok(AkResult::Ak(ord - 1));
        }
        if prec >= target {
            return Ok(AkResult::Undetermined(cap));
        }
        prec = (prec * 2).min(target);
    }
}

/// Linear change making the quadratic part `c * y^2`; the Hessian kernel
/// becomes the new `x`-axis.
fn normalize_quadratic(f: &SparsePoly) -> SparsePoly {
    let (_, b, c) = quadratic_coeffs(f);
    let x = SparsePoly::var(Var::X);
    let y = SparsePoly::var(Var::Y);
    if c.is_zero() {
        // Corank one with c = 0 forces b = 0, a != 0: the kernel is the y-axis.
        f.compose(&y, &x)
    } else {
        let shift = -(&b / (rat(2) * &c));
        let new_y = &y + &x.scale(&shift);
        f.compose(&x, &new_y)
    }
}

/// A bivariate polynomial sliced by powers of `y`, each slice a polynomial
/// in `x`, ready for Horner evaluation at `y = h(x)`.
struct YSlices {
    coeffs: Vec<Vec<(u64, Rational)>>,
}

impl YSlices {
    fn new(p: &SparsePoly) -> Self {
        let deg = p.degree_in(Var::Y).unwrap_or(0) as usize;
        let mut coeffs = vec![Vec::new(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.ey as usize].push((m.ex as u64, c.clone()));
        }
        YSlices { coeffs }
    }

    fn eval(&self, h: &XSeries, prec: u64) -> XSeries {
        let mut acc = XSeries::zero(prec);
        for slice in self.coeffs.iter().rev() {
            acc = acc.mul(h, prec);
            for (e, c) in slice {
                if *e < prec {
                    acc.add_at(*e as usize, c);
                }
            }
        }
        acc
    }
}

struct SplitGerm {
    f: YSlices,
    fy: YSlices,
    fyy: YSlices,
}

impl SplitGerm {
    fn new(g: &SparsePoly) -> Self {
        let fy = g.diff(Var::Y);
        let fyy = fy.diff(Var::Y);
        SplitGerm { f: YSlices::new(g), fy: YSlices::new(&fy), fyy: YSlices::new(&fyy) }
    }

    /// Lifts `h` (correct modulo `x^known`) to the root of `f_y(x, h) = 0`
    /// modulo `x^prec` by Newton steps that double the precision.
    fn critical_branch(&self, mut h: XSeries, mut known: u64, prec: u64) -> XSeries {
        while known < prec {
            known = (known * 2).min(prec);
            h.resize(known);
            let num = self.fy.eval(&h, known);
            let den = self.fyy.eval(&h, known);
            let step = num.mul(&den.inverse(known), known);
            h = h.sub(&step);
        }
        h.resize(prec);
        h
    }
}

/// Dense univariate series in `x` truncated modulo `x^len`.
#[derive(Clone, Debug, PartialEq)]
struct XSeries {
    c: Vec<Rational>,
}

impl XSeries {
    fn zero(len: u64) -> Self {
        XSeries { c: vec![Rational::zero(); len as usize] }
    }

    fn resize(&mut self, len: u64) {
        self.c.resize(len as usize, Rational::zero());
    }

    fn add_at(&mut self, i: usize, v: &Rational) {
        self.c[i] += v;
    }

    fn order(&self) -> Option<u64> {
        self.c.iter().position(|v| !v.is_zero()).map(|i| i as u64)
    }

    fn support(&self) -> Vec<usize> {
        (0..self.c.len()).filter(|&i| !self.c[i].is_zero()).collect()
    }

    fn mul(&self, other: &XSeries, prec: u64) -> XSeries {
        let prec = prec as usize;
        let mut out = vec![Rational::zero(); prec];
        let rhs = other.support();
        for i in self.support() {
            if i >= prec {
                break;
            }
            let a = &self.c[i];
            for &j in &rhs {
                if i + j >= prec {
                    break;
                }
                out[i + j] += a * &other.c[j];
            }
        }
        XSeries { c: out }
    }

    fn sub(&self, other: &XSeries) -> XSeries {
        let n = self.c.len().max(other.c.len());
        let zero = Rational::zero();
        XSeries {
            c: (0..n)
                .map(|i| self.c.get(i).unwrap_or(&zero) - other.c.get(i).unwrap_or(&zero))
                .collect(),
        }
    }

    /// Inverse of a unit series modulo `x^prec`.
    fn inverse(&self, prec: u64) -> XSeries {
        let prec = prec as usize;
        let u0 = self.c[0].clone();
        assert!(!u0.is_zero(), "series inverse of a non-unit");
        let inv0 = Rational::one() / &u0;
        let support: Vec<usize> = self.support().into_iter().filter(|&i| i > 0).collect();
        let mut out = vec![Rational::zero(); prec];
        if prec > 0 {
            out[0] = inv0.clone();
        }
        for n in 1..prec {
            let mut acc = Rational::zero();
            for &i in &support {
                if i > n {
                    break;
                }
                let prev = &out[n - i];
                if !prev.is_zero() {
                    acc += &self.c[i] * prev;
                }
            }
            if !acc.is_zero() {
                out[n] = -(acc * &inv0);
            }
        }
        XSeries { c: out }
    }
}

/// Serializable form of the violation list.
pub fn violations_json(v: &[(Monomial, Rational)]) -> Vec<serde_json::Value> {
    v.iter()
        .map(|(m, c)| serde_json::json!({"e": [m.ex, m.ey], "c": format_rational(c)}))
        .collect()
}
