//! Weights, weighted-type / Bloch-type / Zygmund-type norms estimated on a
//! radial grid, and checks of the standard growth inequalities for `Z_α`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::AnalyticMap;
use crate::Complex;

/// Slope threshold (per radial level, natural log) for the divergence test.
pub const DIVERGENCE_SLOPE: f64 = 0.05;
/// Relative change between the last two levels accepted as converged.
pub const CONVERGENCE_REL: f64 = 1e-3;
/// Number of trailing levels used for the slope fit.
pub const SLOPE_WINDOW: usize = 4;
/// Floor applied before taking logarithms of level suprema.
const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `(1 - |z|^2)^alpha`.
    StandardAlpha { alpha: f64 },
    /// `(log 2/(1 - |z|^2))^(-1)`.
    Logarithmic,
}

impl Weight {
    pub fn standard(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidInput(format!("weight exponent must be positive, got {alpha}")));
        }
        Ok(Weight::StandardAlpha { alpha })
    }

    pub fn eval(&self, z: Complex) -> f64 {
        self.eval_radial(z.norm_sqr())
    }

    /// The weight as a function of `|z|^2`.
    pub fn eval_radial(&self, r2: f64) -> f64 {
        let t = 1.0 - r2;
        match self {
            Weight::StandardAlpha { alpha } => t.powf(*alpha),
            Weight::Logarithmic => 1.0 / (2.0 / t).ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceFamily {
    Bloch,
    Zygmund,
    WeightedType,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub family: SpaceFamily,
    pub alpha: f64,
    pub weight: Option<Weight>,
}

/// Sample points `r_k e^{2πi m / M}` with `r_k = 1 - 2^{-k}`, `k = 0..=k_max`,
/// plus optional extra probe radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    k_max: usize,
    angles: usize,
    probes: Vec<f64>,
}

impl Default for DiskGrid {
    fn default() -> Self {
        DiskGrid {
            k_max: 14,
            angles: 256,
            probes: Vec::new(),
        }
    }
}

impl DiskGrid {
    pub fn new(k_max: usize, angles: usize) -> Result<Self> {
        if k_max == 0 || k_max > 40 {
            return Err(Error::InvalidInput(format!("k_max must lie in 1..=40, got {k_max}")));
        }
        if angles == 0 {
            return Err(Error::InvalidInput("angular count must be positive".into()));
        }
        Ok(DiskGrid {
            k_max,
            angles,
            probes: Vec::new(),
        })
    }

    /// Adds probe radii; those outside `[0, r_max]` are dropped.
    pub fn with_probes(mut self, radii: impl IntoIterator<Item = f64>) -> Self {
        let r_max = self.max_radius();
        self.probes.extend(radii.into_iter().filter(|r| (0.0..=r_max).contains(r)));
        self
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn probes(&self) -> &[f64] {
        &self.probes
    }

    pub fn max_radius(&self) -> f64 {
        level_radius(self.k_max)
    }

    pub fn level_radii(&self) -> Vec<f64> {
        (0..=self.k_max).map(level_radius).collect()
    }

    /// Points on a circle; the circle of radius 0 is the single point 0.
    pub fn circle(&self, r: f64) -> Vec<Complex> {
        if r == 0.0 {
            return vec![Complex::new(0.0, 0.0)];
        }
        (0..self.angles)
            .map(|m| Complex::from_polar(r, std::f64::consts::TAU * m as f64 / self.angles as f64))
            .collect()
    }

    /// Every sample point, levels first in increasing radius, then probes.
    pub fn points(&self) -> Vec<Complex> {
        self.level_radii()
            .into_iter()
            .chain(self.probes.iter().copied())
            .flat_map(|r| self.circle(r))
            .collect()
    }
}

pub fn level_radius(k: usize) -> f64 {
    1.0 - 0.5f64.powi(k as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converged,
    Diverging,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSup {
    pub radius: f64,
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupremumEstimate {
    pub value: f64,
    pub argmax: Complex,
    pub per_level: Vec<LevelSup>,
    pub probes: Vec<LevelSup>,
    pub verdict: Verdict,
    pub slope: f64,
}

impl SupremumEstimate {
    /// Multiplies every recorded value by `c >= 0`.
    pub fn scaled(mut self, c: f64) -> Self {
        self.value *= c;
        for l in self.per_level.iter_mut().chain(self.probes.iter_mut()) {
            l.sup *= c;
        }
        self
    }
}

/// Least-squares slope of `ln(max(s, 1e-300))` against the level index.
pub fn log_slope(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let ys: Vec<f64> = values.iter().map(|v| v.max(LOG_FLOOR).ln()).collect();
    let mean_x = (n - 1) as f64 / 2.0;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Slope over the last [`SLOPE_WINDOW`] values and the resulting verdict.
///
/// A clearly decaying tail counts as converged: its supremum is already
/// attained at an earlier level.
pub fn classify_levels(values: &[f64]) -> (f64, Verdict) {
    if values.len() < SLOPE_WINDOW {
        return (0.0, Verdict::Indeterminate);
    }
    let tail = &values[values.len() - SLOPE_WINDOW..];
    let slope = log_slope(tail);
    let last = tail[SLOPE_WINDOW - 1];
    let prev = tail[SLOPE_WINDOW - 2];
    let scale = last.abs().max(prev.abs());
    let settled = scale == 0.0 || (last - prev).abs() < CONVERGENCE_REL * scale;
    let verdict = if slope > DIVERGENCE_SLOPE {
        Verdict::Diverging
    } else if slope < -DIVERGENCE_SLOPE || settled {
        Verdict::Converged
    } else {
        Verdict::Indeterminate
    };
    (slope, verdict)
}

fn finite(v: f64, z: Complex) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("non-finite sample at {z}")))
    }
}

fn max_with_arg(points: &[Complex], values: &[f64]) -> (f64, Complex) {
    let mut best = (f64::NEG_INFINITY, Complex::new(0.0, 0.0));
    for (z, v) in points.iter().zip(values) {
        if *v > best.0 {
            best = (*v, *z);
        }
    }
    best
}

/// Evaluates `f` at every grid point in parallel, then reduces sequentially.
pub fn sample_grid<F>(points: &[Complex], f: F) -> Result<Vec<f64>>
where
    F: Fn(Complex) -> Result<f64> + Sync,
{
    let raw: Vec<Result<f64>> = points.par_iter().map(|&z| f(z).and_then(|v| finite(v, z))).collect();
    raw.into_iter().collect()
}

/// Supremum of a nonnegative sample function over the grid.
pub fn sup_over_grid<F>(grid: &DiskGrid, f: F) -> Result<SupremumEstimate>
where
    F: Fn(Complex) -> Result<f64> + Sync,
{
    let points = grid.points();
    let values = sample_grid(&points, f)?;
    Ok(estimate_from_samples(grid, &points, &values))
}

/// Builds the estimate from values aligned with `grid.points()`.
pub fn estimate_from_samples(grid: &DiskGrid, points: &[Complex], values: &[f64]) -> SupremumEstimate {
    debug_assert_eq!(points.len(), values.len());
    let mut offset = 0;
    let mut value = f64::NEG_INFINITY;
    let mut argmax = Complex::new(0.0, 0.0);
    let mut gather = |radius: f64| {
        let count = grid.circle(radius).len();
        let (sup, arg) = max_with_arg(&points[offset..offset + count], &values[offset..offset + count]);
        offset += count;
        if sup > value {
            value = sup;
            argmax = arg;
        }
        LevelSup { radius, sup }
    };
    let per_level: Vec<LevelSup> = grid.level_radii().into_iter().map(&mut gather).collect();
    let probes: Vec<LevelSup> = grid.probes().iter().map(|&r| gather(r)).collect();
    let sups: Vec<f64> = per_level.iter().map(|l| l.sup).collect();
    let (slope, verdict) = classify_levels(&sups);
    SupremumEstimate {
        value,
        argmax,
        per_level,
        probes,
        verdict,
        slope,
    }
}

/// `sup ν(z) |f(z)|`.
pub fn hnorm_weighted(f: &AnalyticMap, w: &Weight, grid: &DiskGrid) -> Result<SupremumEstimate> {
    sup_over_grid(grid, |z| Ok(w.eval(z) * f.eval(z)?.norm()))
}

/// `sup (1 - |z|^2)^alpha |f^(order)(z)|`.
pub fn weighted_derivative_sup(
    f: &AnalyticMap,
    order: usize,
    alpha: f64,
    grid: &DiskGrid,
) -> Result<SupremumEstimate> {
    sup_over_grid(grid, |z| {
        let d = f.jet(z, order)?.derivative(order);
        Ok((1.0 - z.norm_sqr()).powf(alpha) * d.norm())
    })
}

/// A norm split into its point evaluations at the origin and the seminorm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub norm: f64,
    pub at_origin: f64,
    pub seminorm: SupremumEstimate,
}

pub fn bloch_seminorm(f: &AnalyticMap, alpha: f64, grid: &DiskGrid) -> Result<SupremumEstimate> {
    weighted_derivative_sup(f, 1, alpha, grid)
}

/// `|f(0)| + sup (1 - |z|^2)^α |f'(z)|`.
pub fn bloch_norm(f: &AnalyticMap, alpha: f64, grid: &DiskGrid) -> Result<NormEstimate> {
    let seminorm = bloch_seminorm(f, alpha, grid)?;
    let at_origin = f.eval(Complex::new(0.0, 0.0))?.norm();
    Ok(NormEstimate {
        norm: at_origin + seminorm.value,
        at_origin,
        seminorm,
    })
}

pub fn zygmund_seminorm(f: &AnalyticMap, alpha: f64, grid: &DiskGrid) -> Result<SupremumEstimate> {
    weighted_derivative_sup(f, 2, alpha, grid)
}

/// `|f(0)| + |f'(0)| + sup (1 - |z|^2)^α |f''(z)|`.
pub fn zygmund_norm(f: &AnalyticMap, alpha: f64, grid: &DiskGrid) -> Result<NormEstimate> {
    let seminorm = zygmund_seminorm(f, alpha, grid)?;
    let origin = f.jet(Complex::new(0.0, 0.0), 1)?;
    let at_origin = origin.coeff(0).norm() + origin.coeff(1).norm();
    Ok(NormEstimate {
        norm: at_origin + seminorm.value,
        at_origin,
        seminorm,
    })
}

/// Exact value and maximizing radius of `sup_r r^n ν(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialOracle {
    pub value: f64,
    pub radius: f64,
}

/// `‖z^n‖_ν` by one-dimensional maximization.
///
/// For `ν_α` the maximizer is `r^2 = n/(n + 2α)`. For `ν_log`, with
/// `t = 1 - r^2`, the stationarity condition is `(n/2) t log(2/t) = 1 - t`,
/// whose left side minus right side increases on `(0, 2/e)` and is positive
/// beyond it; the root is found by bisection in `log t`.
pub fn monomial_norm_oracle(n: u64, w: &Weight) -> MonomialOracle {
    let nf = n as f64;
    match w {
        Weight::StandardAlpha { alpha } => {
            if n == 0 {
                return MonomialOracle { value: 1.0, radius: 0.0 };
            }
            let denom = nf + 2.0 * alpha;
            let ln_value = 0.5 * nf * (nf / denom).ln() + alpha * (2.0 * alpha / denom).ln();
            MonomialOracle {
                value: ln_value.exp(),
                radius: (nf / denom).sqrt(),
            }
        }
        Weight::Logarithmic => {
            if n == 0 {
                return MonomialOracle {
                    value: 1.0 / std::f64::consts::LN_2,
                    radius: 0.0,
                };
            }
            let q = |t: f64| 0.5 * nf * t * (2.0 / t).ln() - (1.0 - t);
            let (mut lo, mut hi) = (LOG_FLOOR.ln(), (2.0 / std::f64::consts::E).ln());
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if q(mid.exp()) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = (0.5 * (lo + hi)).exp();
            let ln_value = 0.5 * nf * (-t).ln_1p() - (2.0 / t).ln().ln();
            MonomialOracle {
                value: ln_value.exp(),
                radius: (1.0 - t).sqrt(),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LittleSpaceVerdict {
    InLittleSpace,
    NotInLittleSpace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LittleSpaceProfile {
    pub per_level: Vec<LevelSup>,
    pub slope: f64,
    pub verdict: LittleSpaceVerdict,
}

/// Threshold below which the last level counts as vanished.
pub const LITTLE_SPACE_FLOOR: f64 = 1e-4;

/// Level suprema of `(1 - |z|^2)^α |f''(z)|`.
///
/// The verdict is `InLittleSpace` when the final level is below `1e-4`, or
/// the last three levels strictly decrease at a log-slope below
/// `-DIVERGENCE_SLOPE`.
pub fn little_space_profile(f: &AnalyticMap, alpha: f64, grid: &DiskGrid) -> Result<LittleSpaceProfile> {
    let est = zygmund_seminorm(f, alpha, &DiskGrid { probes: Vec::new(), ..grid.clone() })?;
    let sups: Vec<f64> = est.per_level.iter().map(|l| l.sup).collect();
    let tail = &sups[sups.len().saturating_sub(3)..];
    let slope = log_slope(tail);
    let decreasing = tail.len() == 3 && tail.windows(2).all(|w| w[1] < w[0]);
    let vanished = sups.last().is_some_and(|&s| s < LITTLE_SPACE_FLOOR);
    let verdict = if vanished || (decreasing && slope < -DIVERGENCE_SLOPE) {
        LittleSpaceVerdict::InLittleSpace
    } else {
        LittleSpaceVerdict::NotInLittleSpace
    };
    Ok(LittleSpaceProfile {
        per_level: est.per_level,
        slope,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub id: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub alpha: f64,
    pub norm: f64,
    pub checks: Vec<GrowthCheck>,
}

impl GrowthReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Highest `n` for which `|f^(n+1)| <= ‖f‖ / (1-|z|^2)^(α+n-1)` is checked.
pub const DERIVATIVE_BOUND_MAX_N: usize = 4;

type Bound = (&'static str, usize, Box<dyn Fn(f64, f64) -> f64 + Sync>);

/// Growth bounds for `f ∈ Z_α` (selected by `α`), plus the derivative bound
/// `|f^(n+1)(z)| <= ‖f‖ (1-|z|^2)^{-(α+n-1)}` for `n = 1..=4`.
///
/// Each entry is the maximum over the grid of `(left - right)+`, with the
/// grid-estimated norm on the right.
pub fn check_growth_bounds(f: &AnalyticMap, alpha: f64, grid: &DiskGrid) -> Result<GrowthReport> {
    let norm = zygmund_norm(f, alpha, grid)?.norm;
    let tolerance = 1e-9 * (1.0 + norm);
    let mut bounds: Vec<Bound> = Vec::new();
    // Each closure maps (|z|, ‖f‖) to the right-hand side.
    if alpha < 1.0 {
        let c = 2.0 / (1.0 - alpha);
        bounds.push(("growth-i-derivative", 1, Box::new(move |_, nf| c * nf)));
        bounds.push(("growth-i-value", 0, Box::new(move |_, nf| c * nf)));
    } else if alpha == 1.0 {
        bounds.push(("growth-ii-derivative", 1, Box::new(|r, nf| 2.0 * nf * (2.0 / (1.0 - r)).ln())));
        bounds.push(("growth-ii-value", 0, Box::new(|_, nf| nf)));
    } else {
        let c = 2.0 / (alpha - 1.0);
        bounds.push((
            "growth-iii-derivative",
            1,
            Box::new(move |r, nf| c * nf / (1.0 - r).powf(alpha - 1.0)),
        ));
        if alpha < 2.0 {
            let c = 2.0 / ((alpha - 1.0) * (2.0 - alpha));
            bounds.push(("growth-iv-value", 0, Box::new(move |_, nf| c * nf)));
        } else if alpha == 2.0 {
            bounds.push(("growth-v-value", 0, Box::new(|r, nf| 2.0 * nf * (2.0 / (1.0 - r)).ln())));
        } else {
            let c = 2.0 / ((alpha - 1.0) * (alpha - 2.0));
            bounds.push((
                "growth-vi-value",
                0,
                Box::new(move |r, nf| c * nf / (1.0 - r).powf(alpha - 2.0)),
            ));
        }
    }
    let derivative_ids = ["derivative-bound-n1", "derivative-bound-n2", "derivative-bound-n3", "derivative-bound-n4"];
    for (i, id) in derivative_ids.iter().enumerate().take(DERIVATIVE_BOUND_MAX_N) {
        let n = (i + 1) as f64;
        bounds.push((
            id,
            i + 2,
            Box::new(move |r, nf| nf / (1.0 - r * r).powf(alpha + n - 1.0)),
        ));
    }

    let max_order = bounds.iter().map(|b| b.1).max().unwrap_or(0);
    let points = grid.points();
    let jets: Vec<Vec<Complex>> = {
        let raw: Vec<Result<Vec<Complex>>> = points
            .par_iter()
            .map(|&z| f.jet(z, max_order).map(|j| j.derivatives()))
            .collect();
        raw.into_iter().collect::<Result<_>>()?
    };
    let checks = bounds
        .iter()
        .map(|(id, order, rhs)| {
            let max_violation = points
                .iter()
                .zip(&jets)
                .map(|(z, d)| (d[*order].norm() - rhs(z.norm(), norm)).max(0.0))
                .fold(0.0, f64::max);
            GrowthCheck {
                id: id.to_string(),
                max_violation,
                tolerance,
                passed: max_violation <= tolerance,
            }
        })
        .collect();
    Ok(GrowthReport { alpha, norm, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn expr(src: &str) -> AnalyticMap {
        AnalyticMap::expression(src, BTreeMap::new()).unwrap()
    }

    fn small_grid() -> DiskGrid {
        DiskGrid::new(10, 64).unwrap()
    }

    #[test]
    fn weight_values() {
        let z0 = Complex::new(0.0, 0.0);
        assert_eq!(Weight::standard(1.0).unwrap().eval(z0), 1.0);
        assert!((Weight::Logarithmic.eval(z0) - 1.442_695_040_888_963_4).abs() < 1e-15);
        let z = Complex::from_polar(0.5f64.sqrt(), 0.3);
        assert!((Weight::standard(2.0).unwrap().eval(z) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn constant_has_unit_weighted_norm() {
        let est = hnorm_weighted(&expr("1"), &Weight::standard(1.5).unwrap(), &small_grid()).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.argmax, Complex::new(0.0, 0.0));
    }

    #[test]
    fn bloch_examples() {
        let g = small_grid();
        let z = bloch_norm(&expr("z"), 2.0, &g).unwrap();
        assert!((z.seminorm.value - 1.0).abs() < 1e-15);
        assert!((z.norm - 1.0).abs() < 1e-15);
        let c = bloch_norm(&expr("3"), 1.0, &g).unwrap();
        assert_eq!(c.seminorm.value, 0.0);
        assert!((c.norm - 3.0).abs() < 1e-15);
    }

    #[test]
    fn zygmund_affine_and_square() {
        let g = small_grid();
        let affine = zygmund_norm(&expr("2 - 0.5*z"), 1.0, &g).unwrap();
        assert_eq!(affine.seminorm.value, 0.0);
        assert!((affine.norm - 2.5).abs() < 1e-15);
        let sq = zygmund_norm(&expr("z^2"), 0.7, &g).unwrap();
        assert!((sq.norm - 2.0).abs() < 1e-14);
    }

    #[test]
    fn standard_oracle_small_case() {
        let o = monomial_norm_oracle(2, &Weight::standard(1.0).unwrap());
        assert!((o.value - 0.25).abs() < 1e-15);
        assert!((o.radius - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn log_oracle_is_a_maximum() {
        for n in [1u64, 3, 20, 500] {
            let o = monomial_norm_oracle(n, &Weight::Logarithmic);
            let f = |r: f64| r.powi(n as i32) * Weight::Logarithmic.eval_radial(r * r);
            assert!((f(o.radius) - o.value).abs() < 1e-12 * o.value);
            for dr in [-1e-3, 1e-3] {
                let r = (o.radius + dr).clamp(0.0, 0.999_999);
                assert!(f(r) <= o.value * (1.0 + 1e-12), "n = {n}");
            }
        }
    }

    #[test]
    fn verdicts() {
        let growing: Vec<f64> = (0..8).map(|k| 2f64.powf(0.3 * k as f64)).collect();
        assert_eq!(classify_levels(&growing).1, Verdict::Diverging);
        assert_eq!(classify_levels(&[1.0; 6]).1, Verdict::Converged);
        let decaying: Vec<f64> = (0..8).map(|k| 2f64.powf(-0.5 * k as f64)).collect();
        assert_eq!(classify_levels(&decaying).1, Verdict::Converged);
        let slow: Vec<f64> = (1..9).map(|k| 1.0 + 0.05 * k as f64).collect();
        assert_eq!(classify_levels(&slow).1, Verdict::Indeterminate);
        assert_eq!(classify_levels(&[0.0; 5]), (0.0, Verdict::Converged));
    }

    #[test]
    fn polynomial_is_little() {
        let p = little_space_profile(&expr("z^2"), 1.0, &DiskGrid::default()).unwrap();
        assert_eq!(p.verdict, LittleSpaceVerdict::InLittleSpace);
    }

    #[test]
    fn growth_bounds_hold_for_square_at_half() {
        let rep = check_growth_bounds(&expr("z^2"), 0.5, &small_grid()).unwrap();
        let value = rep.checks.iter().find(|c| c.id == "growth-i-value").unwrap();
        assert_eq!(value.max_violation, 0.0);
        let eq1 = rep.checks.iter().find(|c| c.id == "derivative-bound-n1").unwrap();
        assert!(eq1.passed);
    }
}
