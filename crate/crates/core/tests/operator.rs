use std::collections::BTreeMap;

use proptest::prelude::*;
use zygops_core::operator::*;
use zygops_core::spaces::DiskGrid;
use zygops_core::testfns::{make_family, Family};
use zygops_core::{AnalyticMap, Complex, Error};

fn expr(src: &str) -> AnalyticMap {
    AnalyticMap::expression(src, BTreeMap::new()).unwrap()
}

fn grid() -> DiskGrid {
    DiskGrid::new(10, 64).unwrap()
}

fn symbols() -> Vec<(AnalyticMap, AnalyticMap)> {
    vec![
        (expr("1"), expr("z")),
        (expr("1 + z/2"), expr("z/2 + 0.3")),
        (expr("z^2 - 0.5*z"), expr("(z + z^2)/2.5")),
        (expr("log(2/(1 - z/2))"), expr("0.9*z^3")),
    ]
}

fn points(count: usize) -> Vec<Complex> {
    (0..count)
        .map(|i| Complex::from_polar(0.95 * ((i as f64 + 0.5) / count as f64).sqrt(), i as f64 * 2.399_963))
        .collect()
}

#[test]
fn spec_example_derivative_of_cube() {
    let op = OperatorSpec::new(expr("1"), expr("z"), 1, &grid()).unwrap();
    let g = apply_gwco(&op, &AnalyticMap::monomial(3));
    for z in points(10) {
        assert!((g.eval(z).unwrap() - z * z * 3.0).norm() < 1e-13);
    }
}

#[test]
fn expansion_matches_jet_second_derivative() {
    let f = make_family(Family::G, Complex::new(0.3, -0.6), 1.3, 1).unwrap();
    for (u, phi) in symbols() {
        for n in 1..=3 {
            let op = OperatorSpec::new(u.clone(), phi.clone(), n, &grid()).unwrap();
            let image = apply_gwco(&op, &f);
            for z in points(50) {
                let want = image.jet(z, 2).unwrap().derivative(2);
                let got = gwco_second_derivative(&op, &f, z).unwrap();
                assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "n = {n}, z = {z}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn log_domain_monomials_match_direct_path() {
    let pair = SpacePair::new(1.3, 2.0).unwrap();
    for (u, phi) in symbols() {
        for n in 1..=2 {
            let op = OperatorSpec::new(u.clone(), phi.clone(), n, &grid()).unwrap();
            let seq = monomial_sequence(&op, &pair, 50, &grid()).unwrap();
            for term in &seq.terms {
                let direct = monomial_term_direct(&op, &pair, term.j, &grid()).unwrap();
                assert!(
                    (term.value - direct.value).abs() <= 1e-10 * direct.value.max(1e-300),
                    "{} j = {}: {} vs {}",
                    phi,
                    term.j,
                    term.value,
                    direct.value
                );
            }
        }
    }
}

#[test]
fn monomial_sequence_needs_terms() {
    let op = OperatorSpec::new(expr("1"), expr("z"), 1, &grid()).unwrap();
    let pair = SpacePair::new(1.0, 1.0).unwrap();
    assert!(matches!(monomial_sequence(&op, &pair, 0, &grid()), Err(Error::InvalidInput(_))));
}

#[test]
fn non_self_map_rejected() {
    assert!(matches!(
        OperatorSpec::new(expr("1"), expr("1.1*z"), 1, &grid()),
        Err(Error::SelfMapViolation { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn operator_is_linear(
        ar in -2.0..2.0f64, ai in -2.0..2.0f64, br in -2.0..2.0f64, bi in -2.0..2.0f64,
        which in 0usize..4, n in 1usize..4, rz in 0.0..0.9f64, tz in 0.0..6.3f64,
    ) {
        let (u, phi) = symbols().swap_remove(which);
        let op = OperatorSpec::new(u, phi, n, &grid()).unwrap();
        let f = make_family(Family::F, Complex::new(0.5, 0.1), 1.5, n).unwrap();
        let g = expr("z^4 - z + 2");
        let (a, b) = (Complex::new(ar, ai), Complex::new(br, bi));
        let combo = f.scaled(a).sum(&g.scaled(b));
        let z = Complex::from_polar(rz, tz);
        let lhs = apply_gwco(&op, &combo).jet(z, 2).unwrap();
        let jf = apply_gwco(&op, &f).jet(z, 2).unwrap();
        let jg = apply_gwco(&op, &g).jet(z, 2).unwrap();
        for k in 0..=2 {
            let rhs = a * jf.derivative(k) + b * jg.derivative(k);
            prop_assert!((lhs.derivative(k) - rhs).norm() <= 1e-11 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn target_norm_scales_with_symbol(cr in -3.0..3.0f64, ci in -3.0..3.0f64) {
        let (u, phi) = symbols().swap_remove(1);
        let op = OperatorSpec::new(u, phi, 1, &grid()).unwrap();
        let pair = SpacePair::new(1.0, 1.5).unwrap();
        let f = expr("z^3");
        let c = Complex::new(cr, ci);
        let base = gwco_target_norm(&op, &f, &pair, &grid()).unwrap().norm;
        let scaled = gwco_target_norm(&op.with_scaled_symbol(c), &f, &pair, &grid()).unwrap().norm;
        prop_assert!((scaled - c.norm() * base).abs() <= 1e-12 * (1.0 + c.norm() * base));
    }
}
