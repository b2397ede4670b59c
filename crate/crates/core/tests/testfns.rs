use zygops_core::spaces::DiskGrid;
use zygops_core::testfns::*;
use zygops_core::Complex;

fn rising_factorial(q: f64, k: usize) -> f64 {
    (0..k).map(|i| q + i as f64).product()
}

const SETTINGS: [(f64, usize); 3] = [(0.5, 1), (1.5, 2), (2.5, 3)];

/// 5 moduli by 10 angles.
fn a_grid() -> Vec<Complex> {
    let mut out = Vec::new();
    for &r in &[0.1, 0.35, 0.6, 0.8, 0.95] {
        for m in 0..10 {
            out.push(Complex::from_polar(r, std::f64::consts::TAU * (m as f64 + 0.25) / 10.0));
        }
    }
    out
}

fn check_identities(which: Family, alpha: f64, n: usize) {
    for a in a_grid() {
        let f = make_family(which, a, alpha, n).unwrap();
        let orders = identity_orders(which, n);
        let jet = f.jet(a, *orders.iter().max().unwrap()).unwrap();
        let scale = identity_scale(which, a, alpha, n);
        for k in orders {
            let want = expected_derivative(which, a, alpha, n, k).unwrap();
            let got = jet.derivative(k);
            assert!(
                (got - want).norm() <= 1e-9 * scale,
                "{which} alpha={alpha} n={n} a={a} order {k}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn klm_identities_hold_on_grid() {
    for (alpha, n) in SETTINGS {
        for fam in [Family::F, Family::G, Family::H, Family::K, Family::L, Family::M] {
            check_identities(fam, alpha, n);
        }
    }
}

#[test]
fn log_family_identities() {
    for fam in [Family::KLog, Family::LLog, Family::T] {
        check_identities(fam, 1.0, 1);
    }
}

#[test]
fn printed_constants_differ_from_constructed_functions() {
    let a = Complex::new(0.5, 0.2);
    for (fam, alpha, n) in [(Family::M, 1.5, 2), (Family::KLog, 1.0, 1)] {
        let (order, printed) = printed_constant(fam, a, alpha, n).unwrap();
        let f = make_family(fam, a, alpha, n).unwrap();
        let actual = f.jet(a, order).unwrap().derivative(order);
        let want = expected_derivative(fam, a, alpha, n, order).unwrap();
        assert!((actual - want).norm() < 1e-9 * want.norm());
        assert!((actual - printed).norm() > 0.1 * want.norm(), "{fam}: printed value matches");
    }
    assert!(printed_constant(Family::K, a, 1.5, 2).is_none());
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 4]; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]]
}

/// At `z = a` the k-th derivative of the i-th base kernel is
/// `(α+i)_k conj(a)^k (1-|a|^2)^(2-α-k)`, so a combination vanishes at
/// order k iff `Σ c_i (α+i)_k = 0`.
fn oracle_coefficients(alpha: f64, vanish: [usize; 2], pinned: (usize, f64)) -> [f64; 3] {
    let row = |k: usize| {
        [
            rising_factorial(alpha, k),
            rising_factorial(alpha + 1.0, k),
            rising_factorial(alpha + 2.0, k),
            0.0,
        ]
    };
    let mut norm = [0.0; 4];
    norm[pinned.0] = 1.0;
    norm[3] = pinned.1;
    solve3([row(vanish[0]), row(vanish[1]), norm])
}

#[test]
fn coefficients_match_linear_solve() {
    for (alpha, n) in SETTINGS {
        let nf = n as f64;
        let cases = [
            (Family::K, [n, n + 1], (0, alpha + nf)),
            (Family::L, [n, n + 2], (2, alpha * (alpha + 1.0))),
            (Family::M, [n + 1, n + 2], (0, alpha + nf + 1.0)),
        ];
        for (fam, vanish, pinned) in cases {
            let want = oracle_coefficients(alpha, vanish, pinned);
            let got = klm_coefficients(fam, alpha, n).unwrap();
            for i in 0..3 {
                assert!((got[i] - want[i]).abs() <= 1e-10 * want[i].abs().max(1.0), "{fam} {alpha} {n}: {got:?} vs {want:?}");
            }
        }
    }
    let want = oracle_coefficients(1.0, [1, 2], (0, 3.0));
    let got = log_coefficients(Family::KLog).unwrap();
    assert!(got.iter().zip(&want).all(|(g, w)| (g - w).abs() < 1e-12), "{got:?} vs {want:?}");
    let want = oracle_coefficients(1.0, [1, 3], (0, 8.0));
    let got = log_coefficients(Family::LLog).unwrap();
    assert!(got.iter().zip(&want).all(|(g, w)| (g - w).abs() < 1e-12), "{got:?} vs {want:?}");
}

#[test]
fn f_family_is_uniformly_bounded() {
    let grid = DiskGrid::new(12, 64).unwrap();
    let audit = uniform_norm_audit(Family::F, 1.0, 1, 1.0, &AUDIT_MODULI, &grid).unwrap();
    assert!(audit.uniformly_bounded, "{audit:?}");
    let doubled = uniform_norm_audit(Family::F, 1.0, 1, 2.0, &AUDIT_MODULI, &grid).unwrap();
    assert_eq!(doubled.max_norm, 2.0 * audit.max_norm);
    for (a, b) in audit.levels.iter().zip(&doubled.levels) {
        assert_eq!(b.max_norm, 2.0 * a.max_norm);
    }
}

#[test]
fn t_family_audit() {
    let grid = DiskGrid::new(12, 64).unwrap();
    let audit = uniform_norm_audit(Family::T, 1.0, 1, 1.0, &AUDIT_MODULI, &grid).unwrap();
    assert_eq!(audit.levels.len(), AUDIT_MODULI.len());
    assert!(audit.max_norm.is_finite() && audit.max_norm > 0.0);
}

#[test]
fn families_vanish_uniformly_on_compacts() {
    let sup_on_compact = |fam: Family, r: f64| {
        let a = Complex::from_polar(r, 0.4);
        let f = make_family(fam, a, 1.5, 2).unwrap();
        let mut best: f64 = 0.0;
        for i in 0..=8 {
            for m in 0..32 {
                let z = Complex::from_polar(0.5 * i as f64 / 8.0, std::f64::consts::TAU * m as f64 / 32.0);
                best = best.max(f.eval(z).unwrap().norm());
            }
        }
        best
    };
    for fam in [Family::F, Family::G, Family::H, Family::K, Family::L, Family::M] {
        let near = sup_on_compact(fam, 0.5);
        let far = sup_on_compact(fam, 0.999);
        assert!(far < 1e-2 * near, "{fam}: {far} vs {near}");
    }
}

