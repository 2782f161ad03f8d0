//! Exact sparse bivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! lexicographic with `x > y`. Canonical serialization lists terms from the
//! largest monomial down, so `x^2 - y` prints in that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact coefficient type. Always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds an integral rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `n/d`; panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `num` or `num/den`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num` or `num/den` (optional leading minus).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Json(format!("bad rational literal {text:?}"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Variable selector for the two-variable ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    /// First variable (`x`).
    X,
    /// Second variable (`y`, read as `z` for series in prepared coordinates).
    Y,
}

/// An exponent pair `x^ex * y^ey`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub ex: u32,
    pub ey: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { ex: 0, ey: 0 };

    pub const fn new(ex: u32, ey: u32) -> Self {
        Monomial { ex, ey }
    }

    pub fn degree(&self) -> u64 {
        self.ex as u64 + self.ey as u64
    }

    pub fn weighted_degree(&self, wx: u64, wy: u64) -> u64 {
        wx * self.ex as u64 + wy * self.ey as u64
    }

    pub fn exponent(&self, var: Var) -> u32 {
        match var {
            Var::X => self.ex,
            Var::Y => self.ey,
        }
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial::new(self.ex + other.ex, self.ey + other.ey)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.ex.cmp(&other.ex))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial in two variables with exact rational coefficients.
///
/// No stored coefficient is ever zero.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn one() -> Self {
        SparsePoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        SparsePoly::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly { terms }
    }

    /// `c * x^ex * y^ey` with an integer coefficient.
    pub fn monomial(c: i64, ex: u32, ey: u32) -> Self {
        SparsePoly::term(Monomial::new(ex, ey), rat(c))
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => SparsePoly::monomial(1, 1, 0),
            Var::Y => SparsePoly::monomial(1, 0, 1),
        }
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = SparsePoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn canonical_terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_of(&self, ex: u32, ey: u32) -> Rational {
        self.coeff(Monomial::new(ex, ey))
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(Monomial::ONE)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Lowest total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u64) -> SparsePoly {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Multiplies by `x^ex y^ey`.
    pub fn shift(&self, by: Monomial) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (m.times(by), c.clone())).collect(),
        }
    }

    pub fn mul_poly(&self, other: &SparsePoly) -> SparsePoly {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.times(*mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        SparsePoly::from_accumulator(acc)
    }

    /// Product keeping only terms of weighted degree `<= cutoff`.
    pub fn mul_truncated(&self, other: &SparsePoly, wx: u64, wy: u64, cutoff: u64) -> SparsePoly {
        let mut rhs: Vec<(u64, Monomial, &Rational)> = other
            .terms
            .iter()
            .map(|(m, c)| (m.weighted_degree(wx, wy), *m, c))
            .filter(|(w, _, _)| *w <= cutoff)
            .collect();
        rhs.sort_by_key(|t| t.0);
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            let wa = ma.weighted_degree(wx, wy);
            if wa > cutoff {
                continue;
            }
            for (wb, mb, cb) in &rhs {
                if wa + wb > cutoff {
                    break;
                }
                *acc.entry(ma.times(*mb)).or_insert_with(Rational::zero) += ca * *cb;
            }
        }
        SparsePoly::from_accumulator(acc)
    }

    fn from_accumulator(acc: HashMap<Monomial, Rational>) -> SparsePoly {
        SparsePoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> SparsePoly {
        let mut base = self.clone();
        let mut acc = SparsePoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_poly(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_poly(&base);
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: Var) -> SparsePoly {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let dm = match v {
                Var::X => Monomial::new(m.ex - 1, m.ey),
                Var::Y => Monomial::new(m.ex, m.ey - 1),
            };
            out.insert(dm, c * rat(e as i64));
        }
        SparsePoly { terms: out }
    }

    /// Replaces `v` by `r` and expands.
    pub fn subst(&self, v: Var, r: &SparsePoly) -> SparsePoly {
        let other = SparsePoly::var(match v {
            Var::X => Var::Y,
            Var::Y => Var::X,
        });
        match v {
            Var::X => self.compose(r, &other),
            Var::Y => self.compose(&other, r),
        }
    }

    /// Simultaneous substitution `x := rx, y := ry`.
    pub fn compose(&self, rx: &SparsePoly, ry: &SparsePoly) -> SparsePoly {
        let mut px = PowerCache::new(rx);
        let mut py = PowerCache::new(ry);
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            let t = px.get(m.ex).mul_poly(py.get(m.ey)).scale(c);
            out = &out + &t;
        }
        out
    }

    /// Minimum of `wx*ex + wy*ey` over the terms; `None` stands for +∞.
    pub fn weighted_order(&self, wx: u64, wy: u64) -> Option<u64> {
        self.terms.keys().map(|m| m.weighted_degree(wx, wy)).min()
    }

    /// Drops every term of weighted degree above `cutoff`.
    pub fn truncate_weighted(&self, wx: u64, wy: u64, cutoff: u64) -> SparsePoly {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weighted_degree(wx, wy) <= cutoff)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Encodes as `{"vars":["x","y"],"terms":[{"e":[i,j],"c":"n/d"}]}`.
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: vec!["x".into(), "y".into()],
            terms: self
                .canonical_terms()
                .map(|(m, c)| TermJson {
                    e: [m.ex, m.ey],
                    c: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<SparsePoly> {
        if j.vars.len() != 2 {
            return Err(Error::Json(format!("expected 2 variables, got {}", j.vars.len())));
        }
        let mut p = SparsePoly::zero();
        for t in &j.terms {
            p.add_term(Monomial::new(t.e[0], t.e[1]), parse_rational(&t.c)?);
        }
        Ok(p)
    }

    /// Renders the polynomial with the variable names given (used to print
    /// series in `(x, z)`).
    pub fn display_with(&self, names: [&str; 2]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.canonical_terms().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut factors = Vec::new();
            if !a.is_one() || *m == Monomial::ONE {
                factors.push(format_rational(&a));
            }
            for (name, e) in [(names[0], m.ex), (names[1], m.ey)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

struct PowerCache<'a> {
    base: &'a SparsePoly,
    powers: Vec<SparsePoly>,
}

impl<'a> PowerCache<'a> {
    fn new(base: &'a SparsePoly) -> Self {
        PowerCache {
            base,
            powers: vec![SparsePoly::one()],
        }
    }

    fn get(&mut self, e: u32) -> &SparsePoly {
        while self.powers.len() <= e as usize {
            let next = self.powers.last().unwrap().mul_poly(self.base);
            self.powers.push(next);
        }
        &self.powers[e as usize]
    }
}

/// Wire form of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: [u32; 2],
    pub c: String,
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(["x", "y"]))
    }
}

impl FromStr for SparsePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_poly(s)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.mul_poly(rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $f(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SparsePoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p("x^2 + y") + &p("-y"), p("x^2"));
        assert_eq!(&p("x^2 + y") + &SparsePoly::zero(), p("x^2 + y"));
        assert_eq!(&p("x + y") + &p("x - y"), p("2*x"));
        assert!((&p("x+y") - &p("x+y")).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        let q = p("3*x^2*y - 1/2");
        assert_eq!(&SparsePoly::one() * &q, q);
    }

    #[test]
    fn square_of_family_a_at_s0() {
        let a = p("x^4 + 2*x^3*y^2 - 2*x^2*y^4 + 4*x*y^6 - 10*y^8");
        let sq = a.pow(2);
        assert_eq!(sq.coeff_of(3, 10), rat(-56));
        assert_eq!(sq.coeff_of(0, 16), rat(100));
    }

    #[test]
    fn diff_examples() {
        assert_eq!(p("x^2*y").diff(Var::X), p("2*x*y"));
        assert!(p("x^8").diff(Var::Y).is_zero());
        assert_eq!(p("y^2 + x^3").diff(Var::Y), p("2*y"));
    }

    #[test]
    fn subst_examples() {
        // z is carried in the second slot after substitution y := z + x^4.
        let r = p("y + x^4");
        assert_eq!(p("y^2").subst(Var::Y, &r), p("y^2 + 2*x^4*y + x^8"));
        let q = p("x^3 - 2*x*y + 7");
        assert_eq!(q.subst(Var::Y, &SparsePoly::var(Var::Y)), q);
        assert_eq!(p("x*y").subst(Var::X, &p("x + 1")), p("x*y + y"));
    }

    #[test]
    fn weighted_order_examples() {
        assert_eq!(p("y^2").weighted_order(2, 43), Some(86));
        assert_eq!(p("x^43").weighted_order(2, 43), Some(86));
        assert_eq!(SparsePoly::zero().weighted_order(2, 43), None);
    }

    #[test]
    fn canonical_order_is_graded_lex() {
        let q = p("y + x + 1 + x*y + y^2 + x^2");
        let order: Vec<_> = q.canonical_terms().map(|(m, _)| (m.ex, m.ey)).collect();
        assert_eq!(order, vec![(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]);
        assert_eq!(q.to_string(), "x^2 + x*y + y^2 + x + y + 1");
    }

    #[test]
    fn json_round_trip_and_shape() {
        let q = p("x^2 - 3/4*y");
        let j = serde_json::to_string(&q.to_json()).unwrap();
        assert_eq!(
            j,
            r#"{"vars":["x","y"],"terms":[{"e":[2,0],"c":"1"},{"e":[0,1],"c":"-3/4"}]}"#
        );
        let back: PolyJson = serde_json::from_str(&j).unwrap();
        assert_eq!(SparsePoly::from_json(&back).unwrap(), q);
    }

    #[test]
    fn truncated_product_agrees_with_exact_below_cutoff() {
        let a = p("y + x^4 + 3*x^2*y + y^3");
        let b = p("y^2 - x + x^5*y");
        let exact = (&a * &b).truncate_weighted(2, 5, 14);
        assert_eq!(a.mul_truncated(&b, 2, 5, 14), exact);
    }

    #[test]
    fn coefficients_stay_reduced() {
        let q = p("2/4*x + 6/3");
        for (_, c) in q.terms() {
            assert!(num_integer::Integer::gcd(c.numer(), c.denom()).is_one());
        }
        assert_eq!(q.coeff_of(1, 0), ratio(1, 2));
    }
}
