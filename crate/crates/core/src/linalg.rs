//! Sparse rank over `Q` and `Z/p`, and fraction-free determinants over
//! `Z[x]`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

/// Minimal field interface for the sparse eliminator.
pub trait FieldOps: Clone {
    type Elem: Clone;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, Debug)]
pub struct Rationals;

impl FieldOps for Rationals {
    type Elem = Rational;
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
}

/// Integers modulo a prime below 2^63.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn reduce_rational(&self, r: &Rational) -> Option<u64> {
        let p = BigInt::from(self.p);
        let den = r.denom().mod_floor(&p);
        if den.is_zero() {
            return None;
        }
        let num = r.numer().mod_floor(&p);
        let num: u64 = num.try_into().ok()?;
        let den: u64 = den.try_into().ok()?;
        Some(self.mul(&num, &self.inv(&den)))
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.p <= u32::MAX as u64 {
            (a * b) % self.p
        } else {
            ((*a as u128 * *b as u128) % self.p as u128) as u64
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        self.pow(*a, self.p - 2)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
}

/// A sparse row: `(column, value)` sorted by column, no zeros.
pub type SparseRow<E> = Vec<(usize, E)>;

/// Rank of the row span, by incremental echelon insertion. Each incoming row
/// is reduced against stored pivots at its leading column until it either
/// vanishes or opens a new pivot. Rows need not be pre-sorted among
/// themselves; entries within a row must be sorted by column.
pub fn sparse_rank<F: FieldOps>(field: &F, rows: impl IntoIterator<Item = SparseRow<F::Elem>>) -> usize {
    let mut pivots: HashMap<usize, SparseRow<F::Elem>> = HashMap::new();
    for mut row in rows {
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else {
                break;
            };
            match pivots.get(&lead) {
                Some(piv) => row = axpy(field, &row, &lead_val, piv),
                None => {
                    let inv = field.inv(&lead_val);
                    let normalized = row
                        .into_iter()
                        .map(|(c, v)| (c, field.mul(&v, &inv)))
                        .collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `row - s * piv`, where `piv` is monic with the same leading column.
fn axpy<F: FieldOps>(field: &F, row: &SparseRow<F::Elem>, s: &F::Elem, piv: &SparseRow<F::Elem>) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let take_row = j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0);
        let take_piv = i >= row.len() || (j < piv.len() && piv[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            let v = field.neg(&field.mul(s, &piv[j].1));
            out.push((piv[j].0, v));
            j += 1;
        } else {
            let v = field.sub(&row[i].1, &field.mul(s, &piv[j].1));
            if !field.is_zero(&v) {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A normalized pivot row; its leading entry is stored first and equals 1.
type PivotRow = Box<[(usize, u64)]>;

/// Rank over `Z/p` with a dense scratch accumulator. Same insertion scheme as
/// [`sparse_rank`], but reductions are applied in place, leading columns
/// popped from a min-heap, so each step costs one pass over a pivot row.
pub fn rank_mod_p(field: &PrimeField, ncols: usize, rows: impl IntoIterator<Item = SparseRow<u64>>) -> usize {
    let mut pivots: Vec<Option<PivotRow>> = vec![None; ncols];
    let mut acc = vec![0u64; ncols];
    let mut queued = vec![false; ncols];
    let mut heap: BinaryHeap<Reverse<usize>> = BinaryHeap::new();
    let mut rank = 0;
    for row in rows {
        for (c, v) in row {
            acc[c] = v;
            if !queued[c] {
                queued[c] = true;
                heap.push(Reverse(c));
            }
        }
        while let Some(Reverse(c)) = heap.pop() {
            queued[c] = false;
            let s = acc[c];
            if s == 0 {
                continue;
            }
            acc[c] = 0;
            match &pivots[c] {
                Some(piv) => {
                    for &(j, v) in &piv[1..] {
                        acc[j] = field.sub(&acc[j], &field.mul(&s, &v));
                        if !queued[j] {
                            queued[j] = true;
                            heap.push(Reverse(j));
                        }
                    }
                }
                None => {
                    let inv = field.inv(&s);
                    let mut out = vec![(c, 1u64)];
                    while let Some(Reverse(j)) = heap.pop() {
                        queued[j] = false;
                        if acc[j] != 0 {
                            out.push((j, field.mul(&acc[j], &inv)));
                            acc[j] = 0;
                        }
                    }
                    pivots[c] = Some(out.into_boxed_slice());
                    rank += 1;
                }
            }
        }
    }
    rank
}

/// Dense univariate polynomial over `Z`, lowest degree first, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZPoly(pub Vec<BigInt>);

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        let zero = BigInt::zero();
        ZPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) - o.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Exact quotient; panics if `d` does not divide `self` in `Z[x]`.
    pub fn exact_div(&self, d: &ZPoly) -> ZPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return ZPoly::default();
        }
        let mut rem = self.0.clone();
        let dl = d.0.len();
        let lead = d.0.last().unwrap();
        assert!(rem.len() >= dl, "inexact polynomial division");
        let mut q = vec![BigInt::zero(); rem.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(lead);
            assert!(r.is_zero(), "inexact coefficient division");
            for (j, dc) in d.0.iter().enumerate() {
                rem[i + j] -= &qc * dc;
            }
            q[i] = qc;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
        ZPoly::new(q)
    }
}

/// Determinant of a square matrix over `Z[x]` by Bareiss' fraction-free
/// elimination with row pivoting.
pub fn bareiss_det(mut m: Vec<Vec<ZPoly>>) -> ZPoly {
    let n = m.len();
    if n == 0 {
        return ZPoly::one();
    }
    let mut negate = false;
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return ZPoly::default(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev);
            }
            m[i][k] = ZPoly::default();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Greatest common divisor of the contents, used to keep Sylvester entries
/// small.
pub fn content(p: &ZPoly) -> BigInt {
    p.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    fn qrow(entries: &[(usize, i64)]) -> SparseRow<Rational> {
        entries.iter().map(|&(c, v)| (c, rat(v))).collect()
    }

    #[test]
    fn rational_rank() {
        let rows = vec![qrow(&[(0, 1), (1, 2)]), qrow(&[(0, 2), (1, 4)]), qrow(&[(1, 1), (2, 1)])];
        assert_eq!(sparse_rank(&Rationals, rows), 2);
        assert_eq!(sparse_rank(&Rationals, Vec::<SparseRow<Rational>>::new()), 0);
    }

    #[test]
    fn modular_rank_can_drop() {
        // Rows (1, 7) and (1, 0) are independent over Q but equal mod 7.
        let f = PrimeField { p: 7 };
        let rows = vec![vec![(0, 1u64), (1, 0)], vec![(0, 1u64)]];
        let rows: Vec<SparseRow<u64>> = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|e| e.1 != 0).collect())
            .collect();
        assert_eq!(sparse_rank(&f, rows), 1);
        let q = vec![qrow(&[(0, 1), (1, 7)]), qrow(&[(0, 1)])];
        assert_eq!(sparse_rank(&Rationals, q), 2);
    }

    #[test]
    fn dense_modular_rank_matches_sparse() {
        let f = PrimeField { p: 2_147_483_659 };
        let rows: Vec<SparseRow<u64>> = vec![
            vec![(0, 1), (2, 5), (4, 1)],
            vec![(1, 3), (2, 1)],
            vec![(0, 2), (1, 3), (2, 11), (4, 2)],
            vec![(3, 7)],
            vec![(0, 4), (2, 20), (3, 14), (4, 4)],
        ];
        assert_eq!(sparse_rank(&f, rows.clone()), 3);
        assert_eq!(rank_mod_p(&f, 5, rows), 3);
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField { p: 1_000_000_007 };
        assert_eq!(f.mul(&f.inv(&12345), &12345), 1);
        assert_eq!(f.reduce_rational(&crate::poly::ratio(1, 2)), Some(500_000_004));
    }

    #[test]
    fn determinant_of_polynomial_matrix() {
        // [[x, 1], [1, x]] -> x^2 - 1
        let m = vec![vec![zp(&[0, 1]), zp(&[1])], vec![zp(&[1]), zp(&[0, 1])]];
        assert_eq!(bareiss_det(m), zp(&[-1, 0, 1]));
        // Zero leading pivot forces a swap: [[0, 1], [1, 0]] -> -1
        let m = vec![vec![zp(&[]), zp(&[1])], vec![zp(&[1]), zp(&[])]];
        assert_eq!(bareiss_det(m), zp(&[-1]));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = vec![
            vec![zp(&[2, 1]), zp(&[0, 3]), zp(&[1])],
            vec![zp(&[1]), zp(&[1, 1]), zp(&[0, 0, 1])],
            vec![zp(&[3]), zp(&[2]), zp(&[1, 1])],
        ];
        let c = |i: usize, j: usize| m[i][j].clone();
        let minor = |a: ZPoly, b: ZPoly, cc: ZPoly, d: ZPoly| a.mul(&b).sub(&cc.mul(&d));
        let expected = c(0, 0)
            .mul(&minor(c(1, 1), c(2, 2), c(1, 2), c(2, 1)))
            .sub(&c(0, 1).mul(&minor(c(1, 0), c(2, 2), c(1, 2), c(2, 0))))
            .sub(&c(0, 2).mul(&minor(c(1, 0), c(2, 1), c(1, 1), c(2, 0))).neg());
        assert_eq!(bareiss_det(m), expected);
    }

    #[test]
    fn exact_division() {
        let a = zp(&[-1, 0, 1]);
        assert_eq!(a.exact_div(&zp(&[1, 1])), zp(&[-1, 1]));
        assert_eq!(zp(&[0, 0, 5]).valuation(), Some(2));
    }
}
