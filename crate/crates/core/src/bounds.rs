//! The degree bound `k(d) <= (d-1)^2 - [d/2]([d/2]-1)`, its lattice-point
//! re-derivation as the negative inertia index of `x^d + y^d + z^2`, and the
//! ratio table for the constructed family.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::poly::{format_rational, Rational};

pub fn upper_bound(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let h = d / 2;
    Ok((d - 1) * (d - 1) - h * h.saturating_sub(1))
}

/// Inertia indices of the intersection form of a quasihomogeneous
/// singularity, from its spectral count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InertiaIndices {
    pub mu_plus: u64,
    pub mu_zero: u64,
    pub mu_minus: u64,
}

impl InertiaIndices {
    pub fn total(&self) -> u64 {
        self.mu_plus + self.mu_zero + self.mu_minus
    }
}

/// Counts for the Brieskorn-Pham germ `sum x_i^{a_i}`.
///
/// Over the monomial basis `b_i in [0, a_i - 2]` the spectral value is
/// `l = sum (b_i + 1)/a_i`. Integral values go to `mu_zero`; otherwise
/// `floor(l)` odd counts negative and even counts positive. With this parity
/// `x^2 + y^2 + z^2` (one value, `3/2`) is negative definite.
pub fn brieskorn_inertia(exponents: &[u64]) -> Result<InertiaIndices> {
    if exponents.iter().any(|&a| a < 2) {
        return Err(Error::InvalidInput("exponents must be at least 2".into()));
    }
    let lcm = exponents.iter().fold(1u64, |acc, &a| acc.lcm(&a));
    let mut counts = InertiaIndices { mu_plus: 0, mu_zero: 0, mu_minus: 0 };
    // Enumerate basis exponents; spectral values in units of 1/lcm.
    let mut idx = vec![0u64; exponents.len()];
    loop {
        let num: u64 = idx
            .iter()
            .zip(exponents)
            .map(|(&b, &a)| (b + 1) * (lcm / a))
            .sum();
        if num.is_multiple_of(lcm) {
            counts.mu_zero += 1;
        } else if (num / lcm) % 2 == 1 {
            counts.mu_minus += 1;
        } else {
            counts.mu_plus += 1;
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(counts);
            }
            idx[pos] += 1;
            if idx[pos] <= exponents[pos] - 2 {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Inertia indices for `x^d + y^d + z^2`.
pub fn steenbrink_inertia(d: u64) -> Result<InertiaIndices> {
    if d < 2 {
        return Err(Error::InvalidInput("degree must be at least 2".into()));
    }
    brieskorn_inertia(&[d, d, 2])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub s: u64,
    pub d: u64,
    pub k_constructed: u64,
    pub upper: u64,
    pub ratio_k: Rational,
    pub ratio_bound: Rational,
}

impl RatioRow {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s": self.s,
            "d": self.d,
            "k": self.k_constructed,
            "upper": self.upper,
            "k_over_d2": format_rational(&self.ratio_k),
            "upper_over_d2": format_rational(&self.ratio_bound),
        })
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.s,
            self.d,
            self.k_constructed,
            self.upper,
            decimal(&self.ratio_k, 6),
            decimal(&self.ratio_bound, 6)
        )
    }
}

pub const CSV_HEADER: &str = "s,d,k,upper,k_over_d2,upper_over_d2";

pub fn ratio_table(s_max: u64) -> Result<Vec<RatioRow>> {
    (0..=s_max)
        .map(|s| {
            let p = FamilyParams::new(s);
            let upper = upper_bound(p.d)?;
            let d2 = BigInt::from(p.d * p.d);
            Ok(RatioRow {
                s,
                d: p.d,
                k_constructed: p.k,
                upper,
                ratio_k: Rational::new(BigInt::from(p.k), d2.clone()),
                ratio_bound: Rational::new(BigInt::from(upper), d2),
            })
        })
        .collect()
}

pub fn ratio_table_csv(rows: &[RatioRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// Rounds a non-negative rational half-up to `places` decimals.
pub fn decimal(r: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let neg = r.numer() < &BigInt::zero();
    let abs = if neg { -r.clone() } else { r.clone() };
    let scaled = abs * Rational::from_integer(scale.clone()) + Rational::new(1.into(), 2.into());
    let n = scaled.floor().to_integer();
    let (int, frac) = n.div_rem(&scale);
    let sign = if neg && !n.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places as usize)
}

/// `3/4 - 3/(2d) + 1/d^2`, the even-degree closed form of `upper_bound(d)/d^2`.
pub fn even_degree_ratio(d: u64) -> Rational {
    let d = BigInt::from(d);
    Rational::new(3.into(), 4.into()) - Rational::new(3.into(), BigInt::from(2) * &d)
        + Rational::new(1.into(), &d * &d)
}

/// `3/4 - 1/d + 1/(4d^2)`, the odd-degree closed form.
pub fn odd_degree_ratio(d: u64) -> Rational {
    let d = BigInt::from(d);
    Rational::new(3.into(), 4.into()) - Rational::new(1.into(), d.clone())
        + Rational::new(1.into(), BigInt::from(4) * &d * &d)
}

pub fn bound_ratio(d: u64) -> Result<Rational> {
    let u = upper_bound(d)?;
    Ok(Rational::new(BigInt::from(u), BigInt::from(d * d)))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
