//! Test-function families built from the kernels `(1 - conj(a) z)^(-q)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{AnalyticMap, ClosedForm, Kernel, ParamValue};
use crate::gamma::rising_factorial;
use crate::spaces::{classify_levels, zygmund_norm, DiskGrid, Verdict};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    F,
    G,
    H,
    K,
    L,
    M,
    KLog,
    LLog,
    T,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::F,
        Family::G,
        Family::H,
        Family::K,
        Family::L,
        Family::M,
        Family::KLog,
        Family::LLog,
        Family::T,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::F => "f",
            Family::G => "g",
            Family::H => "h",
            Family::K => "k",
            Family::L => "l",
            Family::M => "m",
            Family::KLog => "k_log",
            Family::LLog => "l_log",
            Family::T => "t",
        }
    }

    /// Whether the family is defined only for `α = 1, n = 1`.
    pub fn is_log_case(self) -> bool {
        matches!(self, Family::KLog | Family::LLog | Family::T)
    }

    pub fn needs_n(self) -> bool {
        matches!(self, Family::K | Family::L | Family::M)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown test family `{s}`")))
    }
}

fn check_parameter(a: Complex) -> Result<()> {
    if !(a.norm() < 1.0) {
        return Err(Error::InvalidInput(format!("family parameter must satisfy |a| < 1, got {a}")));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// `(1-|a|^2)^(2+i) / (1 - conj(a) z)^(α+i)` for `i = 0, 1, 2` (f, g, h).
fn base_kernel(i: usize, a: Complex, alpha: f64, weight: f64) -> Kernel {
    let t = 1.0 - a.norm_sqr();
    Kernel {
        coef: a.conj(),
        q: alpha + i as f64,
        scale: Complex::new(weight * t.powi(2 + i as i32), 0.0),
    }
}

fn params(a: Complex, alpha: Option<f64>, n: Option<usize>) -> BTreeMap<String, ParamValue> {
    let mut p = BTreeMap::new();
    p.insert("a".to_string(), ParamValue::from_complex(a));
    if let Some(alpha) = alpha {
        p.insert("alpha".to_string(), ParamValue::Real(alpha));
    }
    if let Some(n) = n {
        p.insert("n".to_string(), ParamValue::Real(n as f64));
    }
    p
}

fn combination(a: Complex, alpha: f64, weights: [f64; 3]) -> ClosedForm {
    ClosedForm::KernelSum(
        weights
            .iter()
            .enumerate()
            .map(|(i, &w)| base_kernel(i, a, alpha, w))
            .collect(),
    )
}

/// `f_a`, `g_a` or `h_a`.
pub fn make_fgh(which: Family, a: Complex, alpha: f64) -> Result<AnalyticMap> {
    check_parameter(a)?;
    check_alpha(alpha)?;
    let i = match which {
        Family::F => 0,
        Family::G => 1,
        Family::H => 2,
        other => return Err(Error::InvalidInput(format!("`{other}` is not one of f, g, h"))),
    };
    Ok(AnalyticMap::closed_form(
        ClosedForm::Kernel(base_kernel(i, a, alpha, 1.0)),
        which.id(),
        params(a, Some(alpha), None),
    ))
}

/// Coefficients of `(f_a, g_a, h_a)` in `k_a`, `l_a`, `m_a`.
pub fn klm_coefficients(which: Family, alpha: f64, n: usize) -> Result<[f64; 3]> {
    let nf = n as f64;
    let pair = alpha * (alpha + 1.0);
    Ok(match which {
        Family::K => [alpha + nf, -2.0 * alpha, pair / (alpha + nf + 1.0)],
        Family::L => [
            (alpha + nf) * (alpha + nf + 2.0),
            -alpha * (2.0 * alpha + 2.0 * nf + 3.0),
            pair,
        ],
        Family::M => [alpha + nf + 1.0, -2.0 * alpha, pair / (alpha + nf + 2.0)],
        other => return Err(Error::InvalidInput(format!("`{other}` is not one of k, l, m"))),
    })
}

pub fn make_klm(which: Family, a: Complex, alpha: f64, n: usize) -> Result<AnalyticMap> {
    check_parameter(a)?;
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::InvalidInput("k, l, m families need n >= 1".into()));
    }
    let weights = klm_coefficients(which, alpha, n)?;
    Ok(AnalyticMap::closed_form(
        combination(a, alpha, weights),
        which.id(),
        params(a, Some(alpha), Some(n)),
    ))
}

/// Coefficients of `(f_a, g_a, h_a)` at `α = 1` in the log-case `k_a`, `l_a`.
pub fn log_coefficients(which: Family) -> Result<[f64; 3]> {
    match which {
        Family::KLog => Ok([3.0, -3.0, 1.0]),
        Family::LLog => Ok([8.0, -7.0, 2.0]),
        other => Err(Error::InvalidInput(format!("`{other}` has no fixed combination"))),
    }
}

/// `k_a`, `l_a` (log case, `α = 1`) or `t_a`.
pub fn make_log_family(which: Family, a: Complex) -> Result<AnalyticMap> {
    check_parameter(a)?;
    let form = match which {
        Family::KLog | Family::LLog => combination(a, 1.0, log_coefficients(which)?),
        Family::T => {
            if a.norm() == 0.0 {
                return Err(Error::DegenerateParameter("t family is undefined at a = 0".into()));
            }
            ClosedForm::LogTest(a)
        }
        other => return Err(Error::InvalidInput(format!("`{other}` is not a log-case family"))),
    };
    Ok(AnalyticMap::closed_form(form, which.id(), params(a, None, None)))
}

/// Any family by id. `alpha` and `n` are ignored by the log-case families.
pub fn make_family(which: Family, a: Complex, alpha: f64, n: usize) -> Result<AnalyticMap> {
    match which {
        Family::F | Family::G | Family::H => make_fgh(which, a, alpha),
        Family::K | Family::L | Family::M => make_klm(which, a, alpha, n),
        Family::KLog | Family::LLog | Family::T => make_log_family(which, a),
    }
}

/// Closed-form value of `f^(order)(a)` for the derivative identities attached
/// to each family, or `None` if the family has no identity at that order.
///
/// The values are those produced by the constructed functions: for `m_a`
/// this is `2α(α+1)...(α+n-1)/(α+n+2) · conj(a)^n / (1-|a|^2)^(α+n-2)`, and
/// for the log-case `k_a`, `6 conj(a)^3 / (1-|a|^2)^2`.
pub fn expected_derivative(which: Family, a: Complex, alpha: f64, n: usize, order: usize) -> Option<Complex> {
    let abar = a.conj();
    let t = 1.0 - a.norm_sqr();
    let zero = Complex::new(0.0, 0.0);
    let nf = n as f64;
    match which {
        Family::F | Family::G | Family::H => {
            let i = match which {
                Family::F => 0,
                Family::G => 1,
                _ => 2,
            };
            let q = alpha + i as f64;
            // (1-|a|^2)^(2+i) (q)_k conj(a)^k (1-|a|^2)^(-(q+k))
            Some(abar.powu(order as u32) * rising_factorial(q, order) * t.powf(2.0 + i as f64 - q - order as f64))
        }
        Family::K => {
            if order == n || order == n + 1 {
                Some(zero)
            } else if order == n + 2 {
                Some(abar.powu(n as u32 + 2) * (2.0 * rising_factorial(alpha, n + 1)) / t.powf(alpha + nf))
            } else {
                None
            }
        }
        Family::L => {
            if order == n || order == n + 2 {
                Some(zero)
            } else if order == n + 1 {
                Some(-abar.powu(n as u32 + 1) * rising_factorial(alpha, n + 1) / t.powf(alpha + nf - 1.0))
            } else {
                None
            }
        }
        Family::M => {
            if order == n + 1 || order == n + 2 {
                Some(zero)
            } else if order == n {
                let c = 2.0 * rising_factorial(alpha, n) / (alpha + nf + 2.0);
                Some(abar.powu(n as u32) * c / t.powf(alpha + nf - 2.0))
            } else {
                None
            }
        }
        Family::KLog => match order {
            1 | 2 => Some(zero),
            3 => Some(abar.powu(3) * 6.0 / (t * t)),
            _ => None,
        },
        Family::LLog => match order {
            1 | 3 => Some(zero),
            2 => Some(-abar.powu(2) * 2.0 / t),
            _ => None,
        },
        Family::T => {
            let log_term = (1.0 / t).ln();
            match order {
                1 => Some(Complex::new(log_term, 0.0)),
                2 => Some(abar * 2.0 / t),
                3 => Some(abar.powu(2) * (2.0 / (t * t)) * (1.0 + 1.0 / log_term)),
                _ => None,
            }
        }
    }
}

/// Orders at which [`expected_derivative`] has an identity.
pub fn identity_orders(which: Family, n: usize) -> Vec<usize> {
    match which {
        Family::F | Family::G | Family::H => (0..=n + 2).collect(),
        Family::K | Family::L | Family::M => vec![n, n + 1, n + 2],
        Family::KLog | Family::LLog | Family::T => vec![1, 2, 3],
    }
}

/// Scale used for the vanishing identities: over the family's identity
/// orders, the largest of `|expected|` and the summed term magnitudes
/// `Σ |c_i| |f_i^(k)(a)|`, or 1 if that is smaller.
pub fn identity_scale(which: Family, a: Complex, alpha: f64, n: usize) -> f64 {
    let coeffs = match which {
        Family::K | Family::L | Family::M => klm_coefficients(which, alpha, n).ok(),
        Family::KLog | Family::LLog => log_coefficients(which).ok(),
        _ => None,
    };
    let q = if matches!(which, Family::KLog | Family::LLog) { 1.0 } else { alpha };
    let t = 1.0 - a.norm_sqr();
    let scale = identity_orders(which, n)
        .into_iter()
        .map(|k| {
            let value = expected_derivative(which, a, alpha, n, k).map_or(0.0, |v| v.norm());
            // size of the terms summed in a fixed combination
            let terms: f64 = coeffs.map_or(0.0, |c| {
                (0..3)
                    .map(|i| c[i].abs() * rising_factorial(q + i as f64, k))
                    .sum::<f64>()
                    * a.norm().powi(k as i32)
                    * t.powf(2.0 - q - k as f64)
            });
            value.max(terms)
        })
        .fold(0.0, f64::max);
    scale.max(1.0)
}

/// The derivative constants printed alongside the paper's identities where
/// they differ from [`expected_derivative`]. Returned as
/// `(order, printed value)` so reports can show both.
pub fn printed_constant(which: Family, a: Complex, alpha: f64, n: usize) -> Option<(usize, Complex)> {
    let abar = a.conj();
    let t = 1.0 - a.norm_sqr();
    match which {
        Family::M => {
            let c = (alpha + n as f64 + 2.0) / (2.0 * rising_factorial(alpha, n));
            Some((n, abar.powu(n as u32) * c / t.powf(alpha + n as f64 - 2.0)))
        }
        Family::KLog => Some((3, abar.powu(3) * 16.0 / (t * t))),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditLevel {
    pub modulus: f64,
    pub max_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformNormAudit {
    pub family: Family,
    pub alpha: f64,
    pub n: usize,
    pub scale: f64,
    pub levels: Vec<AuditLevel>,
    pub max_norm: f64,
    pub slope: f64,
    pub uniformly_bounded: bool,
}

/// Default `|a|` levels of the audit.
pub const AUDIT_MODULI: [f64; 4] = [0.5, 0.9, 0.99, 0.999];
pub const AUDIT_ANGLES: usize = 8;

/// `max_a ‖scale · family(a)‖_{Z_α}` over `|a| ∈ moduli`, `AUDIT_ANGLES` angles each.
///
/// The family is called uniformly bounded when the per-level maxima show no
/// growth: the log-slope over the levels is at most `0.05`, the last two
/// levels agree to `1e-3`, or the log-increments shrink and the last is at
/// most `0.05`.
pub fn uniform_norm_audit(
    which: Family,
    alpha: f64,
    n: usize,
    scale: f64,
    moduli: &[f64],
    grid: &DiskGrid,
) -> Result<UniformNormAudit> {
    let mut levels = Vec::with_capacity(moduli.len());
    for &r in moduli {
        let mut max_norm: f64 = 0.0;
        for m in 0..AUDIT_ANGLES {
            let a = Complex::from_polar(r, std::f64::consts::TAU * m as f64 / AUDIT_ANGLES as f64);
            let f = make_family(which, a, alpha, n)?;
            max_norm = max_norm.max(scale.abs() * zygmund_norm(&f, alpha, grid)?.norm);
        }
        levels.push(AuditLevel { modulus: r, max_norm });
    }
    let values: Vec<f64> = levels.iter().map(|l| l.max_norm).collect();
    let slope = crate::spaces::log_slope(&values);
    let settled = match values.as_slice() {
        [.., p, l] => (l - p).abs() <= 1e-3 * l.abs().max(p.abs()),
        _ => true,
    };
    let verdict = classify_levels(&values).1;
    let uniformly_bounded = slope <= crate::spaces::DIVERGENCE_SLOPE
        || settled
        || verdict == Verdict::Converged
        || increments_settle(&values);
    Ok(UniformNormAudit {
        family: which,
        alpha,
        n,
        scale,
        max_norm: values.iter().copied().fold(0.0, f64::max),
        levels,
        slope,
        uniformly_bounded,
    })
}

/// Log-increments between consecutive levels shrink and the last one is
/// below the divergence slope.
fn increments_settle(values: &[f64]) -> bool {
    if values.len() < 3 || values.iter().any(|v| *v <= 0.0) {
        return false;
    }
    let steps: Vec<f64> = values.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let shrinking = steps.windows(2).all(|w| w[1] < w[0]);
    shrinking && steps[steps.len() - 1] <= crate::spaces::DIVERGENCE_SLOPE
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn families_at_origin_are_one() {
        let zero = Complex::new(0.0, 0.0);
        for fam in [Family::F, Family::G, Family::H] {
            let f = make_fgh(fam, zero, 1.3).unwrap();
            assert_eq!(f.eval(Complex::new(0.4, 0.2)).unwrap(), Complex::new(1.0, 0.0));
        }
    }

    #[test]
    fn f_at_its_parameter() {
        let a = Complex::new(0.3, -0.5);
        let alpha = 1.7;
        let f = make_fgh(Family::F, a, alpha).unwrap();
        let want = (1.0 - a.norm_sqr()).powf(2.0 - alpha);
        assert!(rel(f.eval(a).unwrap(), Complex::new(want, 0.0)) < 1e-13);
    }

    #[test]
    fn increments_separate_log_growth_from_saturation() {
        let log_growth: Vec<f64> = [0.5f64, 0.9, 0.99, 0.999].iter().map(|r| (1.0 / (1.0 - r)).ln()).collect();
        assert!(!increments_settle(&log_growth));
        assert!(increments_settle(&[1.35, 1.93, 2.27, 2.36]));
        assert!(!increments_settle(&[1.0, 2.0, 4.0, 8.0]));
    }

    #[test]
    fn t_rejects_zero() {
        assert!(matches!(
            make_log_family(Family::T, Complex::new(0.0, 0.0)),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn parameter_outside_disk() {
        assert!(make_fgh(Family::F, Complex::new(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn ids_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.id().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn k_identity_single_point() {
        let a = Complex::new(0.6, 0.2);
        let (alpha, n) = (1.5, 2);
        let k = make_klm(Family::K, a, alpha, n).unwrap();
        let jet = k.jet(a, n + 2).unwrap();
        let scale = identity_scale(Family::K, a, alpha, n);
        for order in identity_orders(Family::K, n) {
            let want = expected_derivative(Family::K, a, alpha, n, order).unwrap();
            assert!((jet.derivative(order) - want).norm() < 1e-9 * scale.max(want.norm()), "order {order}");
        }
    }
}
