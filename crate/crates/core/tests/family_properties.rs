//! The constructed family: the defining identity, certificates and bounds.

use akforge::family::{certify_member, recheck_certificate, MilnorCheck};
use akforge::{build_f, split_and_classify, upper_bound, verify_eq2, AkResult, Var};

#[test]
fn defining_identity_holds_for_small_members() {
    for s in 0..=5i64 {
        let inst = build_f(s).unwrap();
        let residual = verify_eq2(&inst).unwrap();
        let (l, m) = (inst.params.l as u32, inst.params.m as u32);
        let coeffs: Vec<i64> = [(3 * l, 5 * m), (2 * l, 6 * m), (l, 7 * m), (0, 8 * m)]
            .iter()
            .map(|&(a, b)| residual.coeff_of(a, b).to_integer().try_into().unwrap())
            .collect();
        assert_eq!(coeffs, [56, -56, 80, -100], "s = {s}");
        assert_eq!(residual.len(), 4);
        assert_eq!(inst.f.total_degree(), Some(inst.params.d), "s = {s}");
        assert_eq!(inst.f.degree_in(Var::X), Some(8 * l), "s = {s}");
    }
}

#[test]
fn certified_members_respect_the_degree_bound() {
    for s in 0..=3i64 {
        let cert = certify_member(s, MilnorCheck::Skip).unwrap();
        let p = cert.params;
        assert!(cert.newton.is_certified());
        assert!(p.k <= upper_bound(p.d).unwrap(), "s = {s}");
        assert!(cert.bound.satisfied);
        let recheck = recheck_certificate(&cert.to_json()).unwrap();
        assert_eq!(recheck.k, p.k);
    }
}

#[test]
fn splitting_lemma_agrees_with_the_newton_certificate() {
    for s in 0..=1i64 {
        let inst = build_f(s).unwrap();
        let k = inst.params.k;
        assert_eq!(split_and_classify(&inst.f, 4096).unwrap(), AkResult::Ak(k), "s = {s}");
    }
}

#[test]
fn exact_milnor_cross_check_on_the_first_member() {
    let cert = certify_member(0, MilnorCheck::Run { prime_seed: 1 }).unwrap();
    assert_eq!(cert.milnor.unwrap().mu, 42);
}
