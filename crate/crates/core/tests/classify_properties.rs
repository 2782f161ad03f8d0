//! `A_k` recognition and Milnor numbers under random coordinate changes.

use akforge::{milnor_number, milnor_resultant, split_and_classify, AkResult, Arithmetic, SparsePoly};
use proptest::prelude::*;

fn normal_form(k: u32) -> SparsePoly {
    &SparsePoly::monomial(1, 0, 2) + &SparsePoly::monomial(1, k + 1, 0)
}

/// An origin-preserving polynomial coordinate change with invertible
/// linear part: `x -> a x + b y + p x^2 + q xy`, `y -> c x + d y + r y^2 + t x^2`.
fn change() -> impl Strategy<Value = (SparsePoly, SparsePoly)> {
    (prop::array::uniform4(-3i64..=3), prop::array::uniform4(-2i64..=2))
        .prop_filter("invertible linear part", |([a, b, c, d], _)| a * d - b * c != 0)
        .prop_map(|([a, b, c, d], [p, q, r, t])| {
            let m = SparsePoly::monomial;
            let rx = [m(a, 1, 0), m(b, 0, 1), m(p, 2, 0), m(q, 1, 1)];
            let ry = [m(c, 1, 0), m(d, 0, 1), m(r, 0, 2), m(t, 2, 0)];
            let sum = |v: [SparsePoly; 4]| v.iter().fold(SparsePoly::zero(), |acc, t| &acc + t);
            (sum(rx), sum(ry))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn classification_survives_coordinate_changes(k in 1u32..=15, (rx, ry) in change()) {
        let g = normal_form(k).compose(&rx, &ry);
        prop_assert_eq!(split_and_classify(&g, 64).unwrap(), AkResult::Ak(k as u64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn milnor_oracles_agree_on_changed_normal_forms(k in 1u32..=8, (rx, ry) in change(), seed in any::<u64>()) {
        let g = normal_form(k).compose(&rx, &ry);
        let local = milnor_number(&g, 64, Arithmetic::Exact).unwrap();
        prop_assert_eq!(local.mu, k as u64);
        prop_assert_eq!(milnor_resultant(&g, seed).unwrap().mu, k as u64);
        let modular = milnor_number(&g, 64, Arithmetic::TwoPrime { seed }).unwrap();
        prop_assert_eq!(modular.mu, k as u64);
    }
}

#[test]
fn milnor_number_of_normal_forms() {
    for k in 1..=20u32 {
        let f = normal_form(k);
        assert_eq!(milnor_number(&f, 64, Arithmetic::Exact).unwrap().mu, k as u64, "k = {k}");
        assert_eq!(milnor_resultant(&f, 1).unwrap().mu, k as u64, "k = {k}");
    }
}

#[test]
fn smooth_and_higher_corank_germs() {
    let p = |s: &str| s.parse::<SparsePoly>().unwrap();
    assert_eq!(split_and_classify(&p("x + y^2"), 16).unwrap(), AkResult::Smooth);
    assert_eq!(split_and_classify(&p("x^3 + y^3"), 16).unwrap(), AkResult::NotCorankOne);
    assert_eq!(split_and_classify(&p("x*y"), 16).unwrap(), AkResult::Ak(1));
}
