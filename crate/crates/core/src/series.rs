//! Weighted-truncated bivariate series in prepared coordinates `(x, z)`.
//!
//! A [`TruncatedSeries`] stores every term of weighted degree at most its
//! cutoff. Terms beyond the cutoff are unknown, not zero. With weights
//! `(2, k+1)` and cutoff `2(k+1)` the retained window is exactly what the
//! Newton-segment test from `(0,2)` to `(k+1,0)` inspects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, PolyJson, SparsePoly, Var};

/// Positive weights on `x` and `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weights {
    pub wx: u64,
    pub wz: u64,
}

impl Weights {
    pub fn new(wx: u64, wz: u64) -> Result<Self> {
        if wx == 0 || wz == 0 {
            return Err(Error::InvalidInput(format!(
                "weights must be positive, got ({wx}, {wz})"
            )));
        }
        Ok(Weights { wx, wz })
    }

    /// The Newton-segment window for an `A_k` test: weights `(2, k+1)`.
    pub fn segment(k: u64) -> Self {
        Weights { wx: 2, wz: k + 1 }
    }

    pub fn degree(&self, m: &Monomial) -> u64 {
        m.weighted_degree(self.wx, self.wz)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    body: SparsePoly,
    weights: Weights,
    cutoff: u64,
}

impl TruncatedSeries {
    /// Wraps `body`, discarding terms above the cutoff.
    pub fn new(body: &SparsePoly, weights: Weights, cutoff: u64) -> Self {
        TruncatedSeries {
            body: body.truncate_weighted(weights.wx, weights.wz, cutoff),
            weights,
            cutoff,
        }
    }

    pub fn zero(weights: Weights, cutoff: u64) -> Self {
        TruncatedSeries { body: SparsePoly::zero(), weights, cutoff }
    }

    pub fn body(&self) -> &SparsePoly {
        &self.body
    }

    pub fn weights(&self) -> Weights {
        self.weights
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    fn same_contract(&self, other: &TruncatedSeries) -> Result<()> {
        if self.weights != other.weights || self.cutoff != other.cutoff {
            return Err(Error::MismatchedContract(format!(
                "weights {:?} cutoff {} vs weights {:?} cutoff {}",
                self.weights, self.cutoff, other.weights, other.cutoff
            )));
        }
        Ok(())
    }

    fn with_body(&self, body: SparsePoly) -> Self {
        TruncatedSeries { body, weights: self.weights, cutoff: self.cutoff }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_contract(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_contract(other)?;
        Ok(self.with_body(&self.body + &other.body))
    }

    fn mul_unchecked(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let w = self.weights;
        self.with_body(self.body.mul_truncated(&other.body, w.wx, w.wz, self.cutoff))
    }

    /// Evaluates `p(x, self)` (the series replaces the second variable of `p`)
    /// within this series' window.
    pub fn substitute_into(&self, p: &SparsePoly) -> TruncatedSeries {
        let w = self.weights;
        let mut by_y: BTreeMap<u32, SparsePoly> = BTreeMap::new();
        for (m, c) in p.terms() {
            by_y.entry(m.ey)
                .or_default()
                .add_term(Monomial::new(m.ex, 0), c.clone());
        }
        let mut out = SparsePoly::zero();
        let mut current_exp = 0u32;
        let mut current = TruncatedSeries::new(&SparsePoly::one(), w, self.cutoff);
        for (e, coeff) in by_y {
            if e > current_exp {
                current = current.mul_unchecked(&self.pow(e - current_exp));
                current_exp = e;
            }
            let term = coeff.mul_truncated(&current.body, w.wx, w.wz, self.cutoff);
            out = &out + &term;
        }
        self.with_body(out)
    }

    /// Truncated power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::new(&SparsePoly::one(), self.weights, self.cutoff);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            weights: [self.weights.wx, self.weights.wz],
            cutoff: self.cutoff,
            body: self.body.to_json(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let weights = Weights::new(j.weights[0], j.weights[1])?;
        Ok(TruncatedSeries::new(&SparsePoly::from_json(&j.body)?, weights, j.cutoff))
    }
}

/// `{"weights":[wx,wz],"cutoff":c,"body":<poly json>}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub weights: [u64; 2],
    pub cutoff: u64,
    pub body: PolyJson,
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.mul(b)
}

/// Result of inverting `z = y - A(x, y)`.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub series: TruncatedSeries,
    /// Fixed-point passes until the window stopped changing.
    pub iterations: usize,
}

/// Solves `z = y - A(x, y)` for `y(x, z)` inside the window by the
/// fixed-point iteration `y <- z + A(x, y)`, starting from `y = z`.
///
/// Every term of `A` must have total degree at least 2; then each pass raises
/// the weighted order of the discrepancy by at least `min(wx, wz)`.
pub fn invert_change(a: &SparsePoly, weights: Weights, cutoff: u64) -> Result<TruncatedSeries> {
    invert_change_counted(a, weights, cutoff).map(|inv| inv.series)
}

pub fn invert_change_counted(a: &SparsePoly, weights: Weights, cutoff: u64) -> Result<Inversion> {
    if let Some((m, _)) = a.terms().find(|(m, _)| m.degree() < 2) {
        return Err(Error::PreconditionViolated(format!(
            "A must lie in the square of the maximal ideal; found a term x^{} y^{}",
            m.ex, m.ey
        )));
    }
    let z = TruncatedSeries::new(&SparsePoly::var(Var::Y), weights, cutoff);
    let mut y = z.clone();
    let max_passes = cutoff as usize + 1;
    for pass in 1..=max_passes {
        let next = z.add(&y.substitute_into(a))?;
        if next == y {
            return Ok(Inversion { series: y, iterations: pass });
        }
        y = next;
    }
    // The discrepancy order rises by >= 1 per pass, so the loop above always
    // returns before exhausting `cutoff + 1` passes.
    unreachable!("fixed-point iteration failed to settle within cutoff + 1 passes")
}

/// Composes `F(x, y(x, z))` within the window of `y_series`.
pub fn compose_curve(f: &SparsePoly, y_series: &TruncatedSeries) -> Result<TruncatedSeries> {
    Ok(y_series.substitute_into(f))
}

/// Composes and checks the contract of the result against an expected window.
pub fn compose_curve_in(
    f: &SparsePoly,
    y_series: &TruncatedSeries,
    weights: Weights,
    cutoff: u64,
) -> Result<TruncatedSeries> {
    let expected = TruncatedSeries::zero(weights, cutoff);
    expected.same_contract(y_series)?;
    compose_curve(f, y_series)
}
