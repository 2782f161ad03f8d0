//! The curve family `F = y^2 - 2yA + x^{8l} + 4x^{7l}y^m` of degree `28s+9`
//! and its end-to-end certification.

use std::time::Instant;

use serde::Serialize;

use crate::bounds::upper_bound;
use crate::classifier::{newton_ak_certify, violations_json, AkCertificate};
use crate::error::{Error, Result};
use crate::milnor::{default_m_cap, milnor_number_expecting, Arithmetic, MilnorReport};
use crate::poly::{format_rational, SparsePoly};
use crate::series::{compose_curve_in, invert_change_counted, SeriesJson, TruncatedSeries, Weights};

/// Parameters of one family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub s: u64,
    pub l: u64,
    pub m: u64,
    pub d: u64,
    pub k: u64,
}

impl FamilyParams {
    pub fn new(s: u64) -> Self {
        FamilyParams {
            s,
            l: 3 * s + 1,
            m: 7 * s + 2,
            d: 28 * s + 9,
            k: 420 * s * s + 269 * s + 42,
        }
    }
}

/// Validating entry point for signed input.
pub fn family_params(s: i64) -> Result<FamilyParams> {
    let s = u64::try_from(s).map_err(|_| Error::InvalidInput(format!("s must be >= 0, got {s}")))?;
    Ok(FamilyParams::new(s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveInstance {
    pub params: FamilyParams,
    pub f: SparsePoly,
    pub a: SparsePoly,
}

fn mono(c: i64, ex: u64, ey: u64) -> SparsePoly {
    SparsePoly::monomial(c, ex as u32, ey as u32)
}

fn a_poly(p: &FamilyParams) -> SparsePoly {
    let (l, m) = (p.l, p.m);
    [
        mono(1, 4 * l, 0),
        mono(2, 3 * l, m),
        mono(-2, 2 * l, 2 * m),
        mono(4, l, 3 * m),
        mono(-10, 0, 4 * m),
    ]
    .iter()
    .fold(SparsePoly::zero(), |acc, t| &acc + t)
}

/// `A = x^{4l} + 2x^{3l}y^m - 2x^{2l}y^{2m} + 4x^l y^{3m} - 10y^{4m}`.
pub fn build_a(s: i64) -> Result<SparsePoly> {
    Ok(a_poly(&family_params(s)?))
}

pub fn build_f(s: i64) -> Result<CurveInstance> {
    let params = family_params(s)?;
    Ok(instance(params))
}

fn instance(params: FamilyParams) -> CurveInstance {
    let a = a_poly(&params);
    let (l, m) = (params.l, params.m);
    let f = &(&(&mono(1, 0, 2) - &(&mono(2, 0, 1) * &a)) + &mono(1, 8 * l, 0)) + &mono(4, 7 * l, m);
    debug_assert!(f.total_degree() == Some(params.d));
    CurveInstance { params, f, a }
}

/// `56x^{3l}y^{5m} - 56x^{2l}y^{6m} + 80x^l y^{7m} - 100y^{8m}`.
pub fn expected_residual(p: &FamilyParams) -> SparsePoly {
    let (l, m) = (p.l, p.m);
    let terms = [
        mono(56, 3 * l, 5 * m),
        mono(-56, 2 * l, 6 * m),
        mono(80, l, 7 * m),
        mono(-100, 0, 8 * m),
    ];
    terms.iter().fold(SparsePoly::zero(), |acc, t| &acc + t)
}

/// Returns `R = F - (y - A)^2` after checking it equals the expected
/// four-term residual.
pub fn verify_eq2(inst: &CurveInstance) -> Result<SparsePoly> {
    let z = &mono(1, 0, 1) - &inst.a;
    let residual = &inst.f - &(&z * &z);
    let expected = expected_residual(&inst.params);
    if residual != expected {
        return Err(Error::IdentityViolation((&residual - &expected).to_string()));
    }
    Ok(residual)
}

/// Whether and how to run the Milnor cross-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MilnorCheck {
    Skip,
    Run { prime_seed: u64 },
}

/// Largest `k` checked with exact arithmetic.
pub const EXACT_MILNOR_LIMIT: u64 = 100;
/// Largest `k` checked at all; above it the Milnor field is `null`.
pub const MODULAR_MILNOR_LIMIT: u64 = 800;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub d: u64,
    pub upper: u64,
    pub satisfied: bool,
}

#[derive(Clone, Debug)]
pub struct FamilyCertificate {
    pub params: FamilyParams,
    pub weights: Weights,
    pub cutoff: u64,
    pub inversion_passes: usize,
    pub series: TruncatedSeries,
    pub newton: AkCertificate,
    pub milnor: Option<MilnorReport>,
    pub bound: BoundCheck,
}

impl FamilyCertificate {
    /// JSON value; object keys are emitted in sorted order.
    pub fn to_json(&self) -> serde_json::Value {
        let p = &self.params;
        serde_json::json!({
            "family": {"s": p.s, "l": p.l, "m": p.m, "d": p.d, "k": p.k},
            "eq2_identity": "ok",
            "inversion": {
                "weights": [self.weights.wx, self.weights.wz],
                "cutoff": self.cutoff,
                "passes": self.inversion_passes,
            },
            "newton_certificate": {
                "k": self.newton.k,
                "coeff_z2": format_rational(&self.newton.coeff_z2),
                "coeff_x_k_plus_1": format_rational(&self.newton.coeff_xk1),
                "violations": violations_json(&self.newton.violations),
                "series": self.series.to_json(),
            },
            "milnor": self.milnor.as_ref().map(|m| serde_json::json!({
                "value": m.mu,
                "method": m.method.as_str(),
                "stabilized_at": m.stabilized_at,
                "arithmetic": m.arithmetic.describe(),
            })),
            "bound": {"d": self.bound.d, "upper": self.bound.upper, "satisfied": self.bound.satisfied},
        })
    }
}

/// Timing of the certification stages, in seconds.
#[derive(Clone, Debug, Default)]
pub struct StageTimes {
    pub build: f64,
    pub eq2: f64,
    pub invert: f64,
    pub compose: f64,
    pub milnor: f64,
}

pub fn certify_member(s: i64, milnor: MilnorCheck) -> Result<FamilyCertificate> {
    certify_member_timed(s, milnor).map(|(c, _)| c)
}

pub fn certify_member_timed(s: i64, milnor: MilnorCheck) -> Result<(FamilyCertificate, StageTimes)> {
    let mut times = StageTimes::default();
    let clock = Instant::now();
    let inst = build_f(s)?;
    let p = inst.params;
    times.build = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    verify_eq2(&inst)?;
    times.eq2 = clock.elapsed().as_secs_f64();

    let weights = Weights::segment(p.k);
    let cutoff = 2 * (p.k + 1);
    let clock = Instant::now();
    let inversion = invert_change_counted(&inst.a, weights, cutoff)?;
    times.invert = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let series = compose_curve_in(&inst.f, &inversion.series, weights, cutoff)?;
    times.compose = clock.elapsed().as_secs_f64();

    let newton = newton_ak_certify(&series, p.k)?;
    if !newton.is_certified() {
        return Err(Error::CertificationFailed { k: p.k, violations: newton.violations });
    }

    let clock = Instant::now();
    let milnor = match milnor {
        MilnorCheck::Skip => None,
        MilnorCheck::Run { prime_seed } => {
            let arith = if p.k <= EXACT_MILNOR_LIMIT {
                Some(Arithmetic::Exact)
            } else if p.k <= MODULAR_MILNOR_LIMIT {
                Some(Arithmetic::TwoPrime { seed: prime_seed })
            } else {
                None
            };
            match arith {
                Some(arith) => {
                    let report = milnor_number_expecting(&inst.f, Some(p.k), default_m_cap(Some(p.k)), arith)?;
                    if report.mu != p.k {
                        return Err(Error::IdentityViolation(format!(
                            "Milnor number {} differs from k = {}",
                            report.mu, p.k
                        )));
                    }
                    Some(report)
                }
                None => None,
            }
        }
    };
    times.milnor = clock.elapsed().as_secs_f64();

    let upper = upper_bound(p.d)?;
    let cert = FamilyCertificate {
        params: p,
        weights,
        cutoff,
        inversion_passes: inversion.iterations,
        series,
        newton,
        milnor,
        bound: BoundCheck { d: p.d, upper, satisfied: p.k <= upper },
    };
    Ok((cert, times))
}

/// Re-checks a serialized certificate: recomputes the family parameters from
/// `s`, redoes the segment test on the stored series, and compares the
/// stored summary fields.
pub fn recheck_certificate(json: &serde_json::Value) -> Result<AkCertificate> {
    let bad = |what: &str| Error::Json(format!("certificate field {what} missing or malformed"));
    let s = json["family"]["s"].as_u64().ok_or_else(|| bad("family.s"))?;
    let p = FamilyParams::new(s);
    for (key, want) in [("l", p.l), ("m", p.m), ("d", p.d), ("k", p.k)] {
        if json["family"][key].as_u64() != Some(want) {
            return Err(bad(&format!("family.{key}")));
        }
    }
    let nc = &json["newton_certificate"];
    let series: SeriesJson =
        serde_json::from_value(nc["series"].clone()).map_err(|e| Error::Json(e.to_string()))?;
    let series = TruncatedSeries::from_json(&series)?;
    let cert = newton_ak_certify(&series, p.k)?;
    if nc["coeff_x_k_plus_1"].as_str() != Some(format_rational(&cert.coeff_xk1).as_str())
        || nc["coeff_z2"].as_str() != Some(format_rational(&cert.coeff_z2).as_str())
        || nc["k"].as_u64() != Some(p.k)
    {
        return Err(bad("newton_certificate"));
    }
    if !cert.is_certified() {
        return Err(Error::CertificationFailed { k: p.k, violations: cert.violations });
    }
    let upper = upper_bound(p.d)?;
    if json["bound"]["upper"].as_u64() != Some(upper) {
        return Err(bad("bound.upper"));
    }
    Ok(cert)
}

/// True when every coefficient of `p` is an integer and nonzero terms exist.
pub fn is_integral_nonzero(p: &SparsePoly) -> bool {
    !p.is_zero() && p.is_integral()
}
