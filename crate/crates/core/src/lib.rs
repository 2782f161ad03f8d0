//! Exact construction and certification of plane curves of degree `28s+9`
//! carrying an `A_k` singularity with `k = 420s^2 + 269s + 42`.
//!
//! - [`poly`] and [`parse`]: sparse bivariate polynomials over `Q`;
//! - [`series`]: weighted-truncated series, inversion of `z = y - A(x, y)`;
//! - [`family`]: the curve family and its end-to-end certificate;
//! - [`classifier`]: Newton-segment certificate and splitting-lemma classifier;
//! - [`milnor`]: independent Milnor-number oracles;
//! - [`bounds`]: the degree bound and its inertia-index re-derivation.

pub mod bounds;
pub mod classifier;
pub mod error;
pub mod family;
pub mod linalg;
pub mod milnor;
pub mod parse;
pub mod poly;
pub mod series;

pub use classifier::{hessian_corank, newton_ak_certify, split_and_classify, AkCertificate, AkResult};
pub use error::{Error, Result};
pub use family::{build_a, build_f, certify_member, family_params, verify_eq2, CurveInstance, FamilyCertificate, FamilyParams, MilnorCheck};
pub use milnor::{milnor_number, milnor_number_expecting, milnor_resultant, milnor_truncated, Arithmetic, MilnorReport};
pub use parse::parse_poly;
pub use poly::{Monomial, Rational, SparsePoly, Var};
pub use series::{compose_curve, invert_change, series_mul, TruncatedSeries, Weights};
pub use bounds::{ratio_table, steenbrink_inertia, upper_bound, InertiaIndices, RatioRow};
