//! Milnor-number oracles for isolated plane-curve germs at the origin.
//!
//! Two routes that share nothing with the certification path:
//!
//! - the truncated local algebra: `D(M) = dim C[x,y]_{<M} / (J + m^M)`, where
//!   `J = (f_x, f_y)`. `D` is non-decreasing, and `D(M+1) = D(M)` implies
//!   `m^M ⊂ J` by Nakayama, so the stable value is `μ` exactly;
//! - the resultant: after a generic shear, `μ` is the order of vanishing of
//!   `Res_y(f_x, f_y)` at `x = 0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, content, rank_mod_p, sparse_rank, PrimeField, Rationals, SparseRow, ZPoly};
use crate::poly::{Monomial, Rational, SparsePoly, Var};

/// Environment variable holding the decimal seed for modular primes.
pub const PRIME_SEED_ENV: &str = "AKFORGE_PRIME_SEED";

/// Seed used when [`PRIME_SEED_ENV`] is unset.
pub const DEFAULT_PRIME_SEED: u64 = 20_240_917;

/// Fallback cap on `M` when no expected value is known.
pub const DEFAULT_M_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MilnorMethod {
    TruncatedLocalAlgebra,
    Resultant,
}

impl MilnorMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            MilnorMethod::TruncatedLocalAlgebra => "truncated-local-algebra",
            MilnorMethod::Resultant => "resultant",
        }
    }
}

/// How ranks are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    /// Two primes drawn from the seed; falls back to exact if they disagree.
    TwoPrime { seed: u64 },
}

/// Arithmetic that actually produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithmeticUsed {
    Exact,
    TwoPrimeModular(u64, u64),
}

impl ArithmeticUsed {
    pub fn describe(&self) -> String {
        match self {
            ArithmeticUsed::Exact => "exact".to_string(),
            ArithmeticUsed::TwoPrimeModular(p1, p2) => format!("two-prime-modular({p1},{p2})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorReport {
    pub mu: u64,
    pub method: MilnorMethod,
    /// `M` at which `D` stabilized, or the resultant valuation.
    pub stabilized_at: u64,
    pub arithmetic: ArithmeticUsed,
}

impl MilnorReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mu": self.mu,
            "method": self.method.as_str(),
            "stabilized_at": self.stabilized_at,
            "arithmetic": self.arithmetic.describe(),
        })
    }
}

/// Reads the prime seed from the environment, or the default.
pub fn prime_seed_from_env() -> Result<u64> {
    match std::env::var(PRIME_SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidInput(format!("{PRIME_SEED_ENV} must be a decimal integer, got {v:?}"))
        }),
        Err(_) => Ok(DEFAULT_PRIME_SEED),
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let f = PrimeField { p: n };
    'outer: for a in BASES {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = f.pow(x, 2);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Two distinct primes in `(2^31, 2^32)` derived from `seed`. Products of
/// residues then fit in a `u64`.
pub fn primes_from_seed(seed: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let mut n = rng.gen_range((1u64 << 31) + 1..(1u64 << 32) - 64) | 1;
        while !is_prime_u64(n) {
            n += 2;
        }
        n
    };
    let p1 = draw();
    let mut p2 = draw();
    while p2 == p1 {
        p2 = draw();
    }
    (p1, p2)
}

/// Column index of a monomial of total degree `< M`, ordered by total degree
/// then by exponent of `x`.
fn column(m: &Monomial) -> usize {
    let n = m.degree() as usize;
    n * (n + 1) / 2 + m.ex as usize
}

fn num_monomials_below(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Terms of `f_x` and `f_y` with coefficients mapped through `conv`.
fn partials<T>(f: &SparsePoly, mut conv: impl FnMut(&Rational) -> Option<T>) -> Option<Vec<Vec<(Monomial, T)>>> {
    [f.diff(Var::X), f.diff(Var::Y)]
        .iter()
        .map(|g| g.terms().map(|(m, c)| conv(c).map(|v| (*m, v))).collect())
        .collect()
}

/// The relation rows `u * f_x`, `u * f_y` truncated below degree `M`, for
/// every monomial `u` of degree `< M`. Shifting preserves the column order,
/// so each row comes out sorted.
fn relation_rows<T: Clone>(partials: &[Vec<(Monomial, T)>], m: usize) -> impl Iterator<Item = SparseRow<T>> + '_ {
    partials.iter().flat_map(move |g| {
        let ord = g.first().map_or(m, |(t, _)| t.degree() as usize);
        (0..m.saturating_sub(ord)).flat_map(move |deg| {
            (0..=deg).filter_map(move |a| {
                let u = Monomial::new(a as u32, (deg - a) as u32);
                let row: SparseRow<T> = g
                    .iter()
                    .map(|(t, c)| (Monomial::new(t.ex + u.ex, t.ey + u.ey), c))
                    .take_while(|(t, _)| (t.degree() as usize) < m)
                    .map(|(t, c)| (column(&t), c.clone()))
                    .collect();
                (!row.is_empty()).then_some(row)
            })
        })
    })
}

fn modular_rank(f: &SparsePoly, m: usize, p: u64) -> Option<usize> {
    let field = PrimeField { p };
    let parts = partials(f, |c| field.reduce_rational(c))?;
    let rows = relation_rows(&parts, m).map(|r| r.into_iter().filter(|e| e.1 != 0).collect());
    Some(rank_mod_p(&field, num_monomials_below(m), rows))
}

/// `D(M)` together with the arithmetic that produced it.
pub fn truncated_dimension(f: &SparsePoly, m: usize, arith: Arithmetic) -> (u64, ArithmeticUsed) {
    let total = num_monomials_below(m);
    if let Arithmetic::TwoPrime { seed } = arith {
        let (p1, p2) = primes_from_seed(seed);
        let (r1, r2) = std::thread::scope(|scope| {
            let h = scope.spawn(|| modular_rank(f, m, p2));
            let r1 = modular_rank(f, m, p1);
            (r1, h.join().expect("modular rank worker panicked"))
        });
        if let (Some(r1), Some(r2)) = (r1, r2) {
            if r1 == r2 {
                return ((total - r1) as u64, ArithmeticUsed::TwoPrimeModular(p1, p2));
            }
        }
    }
    let parts = partials(f, |c| Some(c.clone())).expect("identity conversion");
    let rank = sparse_rank(&Rationals, relation_rows(&parts, m));
    ((total - rank) as u64, ArithmeticUsed::Exact)
}

/// `D(M)` with exact arithmetic.
///
/// ```
/// # use akforge::milnor::milnor_truncated;
/// let f = "y^2 + x^6".parse().unwrap();
/// assert_eq!(milnor_truncated(&f, 8), 5);
/// ```
pub fn milnor_truncated(f: &SparsePoly, m: usize) -> u64 {
    truncated_dimension(f, m, Arithmetic::Exact).0
}

/// Default `M` cap: `2 * expected + 8` if an expectation is given.
pub fn default_m_cap(expected_mu: Option<u64>) -> usize {
    match expected_mu {
        Some(mu) => 2 * mu as usize + 8,
        None => DEFAULT_M_CAP,
    }
}

/// Milnor number by stabilization of `D(M)`.
///
/// `D(M) = D(M+1)` is false below the stable point `M0` and true from it on,
/// and `D` is strictly increasing below `M0`, so `M0` is also the first `M`
/// with `D(M) = μ`. A doubling search finds some stable `M`; a downward
/// gallop followed by bisection then locates `M0`. All computed values are
/// asserted to be non-decreasing and constant from `M0` on.
pub fn milnor_number(f: &SparsePoly, m_cap: usize, arith: Arithmetic) -> Result<MilnorReport> {
    milnor_number_expecting(f, None, m_cap, arith)
}

/// As [`milnor_number`], starting the search at `expected` when given. The
/// hint only affects which `M` are evaluated, never the result.
pub fn milnor_number_expecting(
    f: &SparsePoly,
    expected: Option<u64>,
    m_cap: usize,
    arith: Arithmetic,
) -> Result<MilnorReport> {
    if !f.constant_term().is_zero() {
        return Err(Error::PreconditionViolated("f must vanish at the origin".into()));
    }
    let mut dims = Dimensions { f, arith, values: BTreeMap::new(), modular: None };
    let m_cap = m_cap.max(1);
    let mut stable_at = expected.map_or(1, |e| (e as usize).clamp(1, m_cap));
    while !dims.stable(stable_at) {
        if stable_at >= m_cap {
            return Err(Error::NonIsolatedSuspected { cap: m_cap });
        }
        stable_at = (stable_at * 2).min(m_cap);
    }
    let mu = dims.get(stable_at);

    // First M with D(M) = mu; M0 <= mu since D(M) >= M below M0.
    let mut hi = stable_at.min((mu as usize).max(1));
    let mut lo = 0usize;
    let mut step = 1usize;
    while hi > lo + 1 {
        let probe = hi.saturating_sub(step).max(lo + 1);
        if dims.get(probe) == mu {
            hi = probe;
            step *= 2;
        } else {
            lo = probe;
            break;
        }
    }
    while hi > lo + 1 {
        let mid = lo + (hi - lo) / 2;
        if dims.get(mid) == mu {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if dims.get(hi) != mu {
        // Only reachable when mu = 0 and hi = 1 was assumed.
        return Err(Error::PreconditionViolated("inconsistent stabilization".into()));
    }
    let ordered: Vec<(usize, u64)> = dims.values.iter().map(|(k, v)| (*k, *v)).collect();
    assert!(
        ordered.windows(2).all(|w| w[0].1 <= w[1].1),
        "D(M) must be non-decreasing: {ordered:?}"
    );
    assert!(
        ordered.iter().filter(|(m, _)| *m >= hi).all(|(_, v)| *v == mu),
        "D(M) changed after stabilizing at M = {hi}: {ordered:?}"
    );
    Ok(MilnorReport {
        mu,
        method: MilnorMethod::TruncatedLocalAlgebra,
        stabilized_at: hi as u64,
        arithmetic: dims.modular.unwrap_or(ArithmeticUsed::Exact),
    })
}

/// Memoized `D(M)` values for one germ.
struct Dimensions<'a> {
    f: &'a SparsePoly,
    arith: Arithmetic,
    values: BTreeMap<usize, u64>,
    /// Set once any value came from the modular path.
    modular: Option<ArithmeticUsed>,
}

impl Dimensions<'_> {
    fn get(&mut self, m: usize) -> u64 {
        if let Some(v) = self.values.get(&m) {
            return *v;
        }
        let (v, how) = truncated_dimension(self.f, m, self.arith);
        if how != ArithmeticUsed::Exact {
            self.modular = Some(how);
        }
        self.values.insert(m, v);
        v
    }

    fn stable(&mut self, m: usize) -> bool {
        self.get(m) == self.get(m + 1)
    }
}

/// Number of shear attempts before giving up.
pub const SHEAR_ATTEMPTS: usize = 8;

/// Milnor number as the `x`-adic valuation of `Res_y(f_x, f_y)` after a
/// random shear `x -> x + c*y`.
pub fn milnor_resultant(f: &SparsePoly, shear_seed: u64) -> Result<MilnorReport> {
    if !f.constant_term().is_zero() {
        return Err(Error::PreconditionViolated("f must vanish at the origin".into()));
    }
    let report = |mu: u64| MilnorReport {
        mu,
        method: MilnorMethod::Resultant,
        stabilized_at: mu,
        arithmetic: ArithmeticUsed::Exact,
    };
    if !f.homogeneous_part(1).is_zero() {
        return Ok(report(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(shear_seed);
    for _ in 0..SHEAR_ATTEMPTS {
        let c: i64 = rng.gen_range(1..=64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let sheared = f.compose(
            &(&SparsePoly::var(Var::X) + &SparsePoly::monomial(c, 0, 1)),
            &SparsePoly::var(Var::Y),
        );
        let fx = sheared.diff(Var::X);
        let fy = sheared.diff(Var::Y);
        if fx.is_zero() || fy.is_zero() {
            return Err(Error::NonIsolated);
        }
        let (Some(px), Some(py)) = (as_zx_y(&fx), as_zx_y(&fy)) else {
            continue;
        };
        if !generic_at_x0(&px, &py) {
            continue;
        }
        let res = sylvester_resultant(&px, &py);
        return match res.valuation() {
            Some(v) => Ok(report(v as u64)),
            None => Err(Error::NonIsolated),
        };
    }
    Err(Error::GenericityFailure(SHEAR_ATTEMPTS))
}

/// Coefficients in `y` (index = power of `y`), each a polynomial in `x` over
/// `Z`. Denominators are cleared, which does not move the valuation. Returns
/// `None` if the leading `y`-coefficient vanishes at `x = 0`.
fn as_zx_y(p: &SparsePoly) -> Option<Vec<ZPoly>> {
    let lcm = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let scale = Rational::from_integer(lcm);
    let deg_y = p.degree_in(Var::Y)? as usize;
    let deg_x = p.degree_in(Var::X)? as usize;
    let mut rows = vec![vec![BigInt::zero(); deg_x + 1]; deg_y + 1];
    for (m, c) in p.terms() {
        rows[m.ey as usize][m.ex as usize] = (c * &scale).to_integer();
    }
    let coeffs: Vec<ZPoly> = rows.into_iter().map(ZPoly::new).collect();
    let lead = coeffs.last()?;
    if lead.0.first().is_none_or(|c| c.is_zero()) {
        return None;
    }
    // Primitive parts keep the Sylvester entries small.
    let g = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(&content(c)));
    if g.is_zero() || g.is_one() {
        return Some(coeffs);
    }
    Some(
        coeffs
            .into_iter()
            .map(|c| ZPoly::new(c.0.into_iter().map(|v| v / &g).collect()))
            .collect(),
    )
}

/// The restrictions to `x = 0` may only share the root `y = 0`.
fn generic_at_x0(p: &[ZPoly], q: &[ZPoly]) -> bool {
    let restrict = |c: &[ZPoly]| -> Vec<Rational> {
        c.iter()
            .map(|z| Rational::from_integer(z.0.first().cloned().unwrap_or_default()))
            .collect()
    };
    let g = univariate_gcd(restrict(p), restrict(q));
    // gcd must be a monomial in y.
    g.iter().filter(|c| !c.is_zero()).count() <= 1
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn univariate_gcd(a: Vec<Rational>, b: Vec<Rational>) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let lead = b.last().unwrap().clone();
        while a.len() >= b.len() && !a.is_empty() {
            let shift = a.len() - b.len();
            let q = a.last().unwrap() / &lead;
            for (i, bc) in b.iter().enumerate() {
                a[i + shift] -= &q * bc;
            }
            a = trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// `Res_y(p, q)` as a polynomial in `x`, via the Sylvester matrix.
fn sylvester_resultant(p: &[ZPoly], q: &[ZPoly]) -> ZPoly {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    let n = dp + dq;
    let mut m = vec![vec![ZPoly::default(); n]; n];
    // Rows hold coefficients from the highest power of y down.
    for i in 0..dq {
        for (j, c) in p.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..dp {
        for (j, c) in q.iter().rev().enumerate() {
            m[dq + i][i + j] = c.clone();
        }
    }
    bareiss_det(m)
}
