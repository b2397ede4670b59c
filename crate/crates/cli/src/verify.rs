//! Named property suites run by `zygops verify`.

use std::collections::BTreeMap;

use serde::Serialize;
use zygops_core::characterize::{
    analyze, log_monomial_asymptotic, standard_monomial_asymptotic, AnalysisConfig, Boundedness, Compactness,
};
use zygops_core::gamma::rising_factorial;
use zygops_core::operator::{OperatorSpec, SpacePair};
use zygops_core::spaces::{check_growth_bounds, hnorm_weighted, monomial_norm_oracle, DiskGrid, Weight};
use zygops_core::testfns::{expected_derivative, identity_orders, identity_scale, make_family, Family};
use zygops_core::{AnalyticMap, Complex, Kernel, ClosedForm, Result};

pub const SUITES: [&str; 7] = [
    "jet-closed-forms",
    "klm-identities",
    "log-identities",
    "growth-bounds",
    "oracle-norms",
    "monomial-asymptotics",
    "equivalence-agreement",
];

/// Identity checks, relative to the family's identity scale.
pub const IDENTITY_TOL: f64 = 1e-9;
pub const JET_TOL: f64 = 1e-12;
pub const ORACLE_TOL: f64 = 1e-9;
pub const STANDARD_ASYMPTOTIC_TOL: f64 = 0.02;
pub const LOG_ASYMPTOTIC_TOL: f64 = 0.10;

/// `(α, n)` settings for the k, l, m identities.
pub const KLM_SETTINGS: [(f64, usize); 3] = [(0.5, 1), (1.5, 2), (2.5, 3)];
pub const GROWTH_ALPHAS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub id: String,
    pub passed: bool,
    /// Measured error or quantity.
    pub value: f64,
    /// Acceptance bound for `value`.
    pub bound: f64,
}

impl Check {
    fn new(suite: &str, id: String, value: f64, bound: f64) -> Self {
        Check {
            suite: suite.to_string(),
            id,
            passed: value <= bound,
            value,
            bound,
        }
    }

    fn flag(suite: &str, id: String, passed: bool) -> Self {
        Check {
            suite: suite.to_string(),
            id,
            passed,
            value: if passed { 0.0 } else { 1.0 },
            bound: 0.0,
        }
    }
}

/// 5 moduli × 8 angles.
pub fn identity_a_grid() -> Vec<Complex> {
    let mut out = Vec::with_capacity(40);
    for &r in &[0.1, 0.4, 0.7, 0.9, 0.99] {
        for m in 0..8 {
            out.push(Complex::from_polar(r, std::f64::consts::TAU * (m as f64 + 0.5) / 8.0));
        }
    }
    out
}

fn identity_checks(suite: &str, fam: Family, alpha: f64, n: usize) -> Result<Vec<Check>> {
    let orders = identity_orders(fam, n);
    let top = orders.iter().copied().max().unwrap_or(0);
    let mut worst: BTreeMap<usize, f64> = BTreeMap::new();
    for a in identity_a_grid() {
        let f = make_family(fam, a, alpha, n)?;
        let jet = f.jet(a, top)?;
        let scale = identity_scale(fam, a, alpha, n);
        for &k in &orders {
            let want = expected_derivative(fam, a, alpha, n, k).expect("identity order");
            let err = (jet.derivative(k) - want).norm() / scale;
            let w = worst.entry(k).or_insert(0.0);
            *w = w.max(err);
        }
    }
    Ok(worst
        .into_iter()
        .map(|(k, err)| Check::new(suite, format!("{fam}/alpha={alpha}/n={n}/order={k}"), err, IDENTITY_TOL))
        .collect())
}

fn klm_identities() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (alpha, n) in KLM_SETTINGS {
        for fam in [Family::K, Family::L, Family::M] {
            out.extend(identity_checks("klm-identities", fam, alpha, n)?);
        }
    }
    Ok(out)
}

fn log_identities() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for fam in [Family::KLog, Family::LLog, Family::T] {
        out.extend(identity_checks("log-identities", fam, 1.0, 1)?);
    }
    Ok(out)
}

fn jet_closed_forms() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let points: Vec<Complex> = (0..12).map(|i| Complex::from_polar(0.07 * i as f64, 1.3 * i as f64)).collect();
    for &(re, im, q) in &[(0.5, 0.3, 1.5), (-0.2, 0.7, 2.25), (0.8, 0.0, 0.5)] {
        let coef = Complex::new(re, im);
        let k = AnalyticMap::closed_form(
            ClosedForm::Kernel(Kernel {
                coef,
                q,
                scale: Complex::new(1.0, 0.0),
            }),
            "kernel",
            BTreeMap::new(),
        );
        let mut worst: f64 = 0.0;
        for &z in &points {
            let jet = k.jet(z, 10)?;
            let w = Complex::new(1.0, 0.0) - coef * z;
            for order in 0..=10 {
                let want = coef.powu(order as u32) * rising_factorial(q, order) * (-(q + order as f64) * w.ln()).exp();
                worst = worst.max((jet.derivative(order) - want).norm() / want.norm().max(1e-300));
            }
        }
        out.push(Check::new("jet-closed-forms", format!("kernel/coef={coef}/q={q}"), worst, JET_TOL));
    }
    Ok(out)
}

/// Functions the growth bounds are checked on.
pub fn growth_catalog(alpha: f64) -> Result<Vec<(String, AnalyticMap)>> {
    let e = |s: &str| AnalyticMap::expression(s, BTreeMap::new());
    Ok(vec![
        ("f_a(0.7+0.2i)".into(), make_family(Family::F, Complex::new(0.7, 0.2), alpha, 1)?),
        ("g_a(-0.5i)".into(), make_family(Family::G, Complex::new(0.0, -0.5), alpha, 1)?),
        ("z^3 - 0.25*z + 1".into(), e("z^3 - 0.25*z + 1")?),
        ("(1 - 0.95*z)^0.5".into(), e("(1 - 0.95*z)^0.5")?),
        ("z^5".into(), AnalyticMap::monomial(5)),
    ])
}

fn growth_bounds() -> Result<Vec<Check>> {
    let grid = DiskGrid::new(12, 64)?;
    let mut out = Vec::new();
    for alpha in GROWTH_ALPHAS {
        for (name, f) in growth_catalog(alpha)? {
            let rep = check_growth_bounds(&f, alpha, &grid)?;
            for c in rep.checks {
                out.push(Check::new(
                    "growth-bounds",
                    format!("{}/alpha={alpha}/{name}", c.id),
                    c.max_violation,
                    c.tolerance,
                ));
            }
        }
    }
    Ok(out)
}

fn oracle_norms() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let weights = [
        Weight::standard(0.5)?,
        Weight::standard(1.0)?,
        Weight::standard(2.0)?,
        Weight::Logarithmic,
    ];
    for w in weights {
        let mut worst: f64 = 0.0;
        for n in 1..=64u32 {
            let oracle = monomial_norm_oracle(n as u64, &w);
            let grid = DiskGrid::default().with_probes([oracle.radius]);
            let est = hnorm_weighted(&AnalyticMap::monomial(n), &w, &grid)?;
            worst = worst.max((est.value - oracle.value).abs() / oracle.value);
        }
        let label = match w {
            Weight::StandardAlpha { alpha } => format!("standard/alpha={alpha}"),
            Weight::Logarithmic => "log".to_string(),
        };
        out.push(Check::new("oracle-norms", format!("{label}/n=1..64"), worst, ORACLE_TOL));
    }
    Ok(out)
}

fn monomial_asymptotics() -> Vec<Check> {
    let mut out = Vec::new();
    for alpha in [0.5f64, 1.0, 2.0] {
        let v = standard_monomial_asymptotic(10_000, alpha);
        let limit = (2.0 * alpha / std::f64::consts::E).powf(alpha);
        out.push(Check::new(
            "monomial-asymptotics",
            format!("standard/alpha={alpha}/n=1e4"),
            (v / limit - 1.0).abs(),
            STANDARD_ASYMPTOTIC_TOL,
        ));
    }
    let v = log_monomial_asymptotic(1_000_000);
    out.push(Check::new(
        "monomial-asymptotics",
        "log/n=1e6".into(),
        (v - 1.0).abs(),
        LOG_ASYMPTOTIC_TOL,
    ));
    out
}

struct Case {
    label: &'static str,
    u: &'static str,
    phi: &'static str,
    alpha: f64,
    beta: f64,
    bounded: Boundedness,
    compact: Option<Compactness>,
}

const CASES: [Case; 4] = [
    Case {
        label: "identity/beta=1.25",
        u: "1",
        phi: "z",
        alpha: 0.5,
        beta: 1.25,
        bounded: Boundedness::Unbounded,
        compact: None,
    },
    Case {
        label: "identity/beta=1.5",
        u: "1",
        phi: "z",
        alpha: 0.5,
        beta: 1.5,
        bounded: Boundedness::Bounded,
        compact: Some(Compactness::NotCompact),
    },
    Case {
        label: "identity/beta=1.75",
        u: "1",
        phi: "z",
        alpha: 0.5,
        beta: 1.75,
        bounded: Boundedness::Bounded,
        compact: Some(Compactness::Compact),
    },
    Case {
        label: "half-dilation/beta=2",
        u: "1",
        phi: "z/2",
        alpha: 0.5,
        beta: 2.0,
        bounded: Boundedness::Bounded,
        compact: Some(Compactness::Compact),
    },
];

fn equivalence_agreement(config: &AnalysisConfig) -> Result<Vec<Check>> {
    let suite = "equivalence-agreement";
    let mut out = Vec::new();
    for case in &CASES {
        let e = |s: &str| AnalyticMap::expression(s, BTreeMap::new());
        let op = OperatorSpec::new(e(case.u)?, e(case.phi)?, 1, &config.grid)?;
        let pair = SpacePair::new(case.alpha, case.beta)?;
        let rep = analyze(&op, &pair, config)?;
        out.push(Check::flag(
            suite,
            format!("{}/boundedness", case.label),
            rep.boundedness.verdict == case.bounded,
        ));
        if let (Some(want), Some(c)) = (case.compact, &rep.compactness) {
            out.push(Check::flag(suite, format!("{}/compactness", case.label), c.verdict == want));
            out.push(Check::flag(
                suite,
                format!("{}/zero-agreement", case.label),
                c.essential.zero_agreement,
            ));
        } else if case.compact.is_some() {
            out.push(Check::flag(suite, format!("{}/compactness", case.label), false));
        }
    }
    Ok(out)
}

/// Runs `names` (all suites if empty). Unknown names are rejected before
/// anything runs.
pub fn run_suites(names: &[String], config: &AnalysisConfig) -> std::result::Result<Vec<Check>, SuiteError> {
    let selected: Vec<&str> = if names.is_empty() {
        SUITES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    if let Some(bad) = selected.iter().find(|s| !SUITES.contains(s)) {
        return Err(SuiteError::Unknown(bad.to_string()));
    }
    let mut out = Vec::new();
    for s in selected {
        let checks = match s {
            "jet-closed-forms" => jet_closed_forms(),
            "klm-identities" => klm_identities(),
            "log-identities" => log_identities(),
            "growth-bounds" => growth_bounds(),
            "oracle-norms" => oracle_norms(),
            "monomial-asymptotics" => Ok(monomial_asymptotics()),
            "equivalence-agreement" => equivalence_agreement(config),
            _ => unreachable!("checked above"),
        };
        out.extend(checks.map_err(SuiteError::Core)?);
    }
    Ok(out)
}

#[derive(Debug)]
pub enum SuiteError {
    Unknown(String),
    Core(zygops_core::Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_grid_has_forty_points() {
        assert_eq!(identity_a_grid().len(), 40);
    }

    #[test]
    fn unknown_suite_rejected() {
        let r = run_suites(&["nope".into()], &AnalysisConfig::default());
        assert!(matches!(r, Err(SuiteError::Unknown(_))));
    }

    #[test]
    fn fast_suites_pass() {
        let checks = run_suites(
            &["jet-closed-forms".into(), "klm-identities".into(), "log-identities".into()],
            &AnalysisConfig::default(),
        )
        .unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}
