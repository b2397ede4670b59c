//! Boundedness, compactness and essential-norm characterizations of
//! `D^n_{φ,u} : Z_α → Z_β`, and the weighted-type analyzer for `u C_φ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::AnalyticMap;
use crate::operator::{
    gwco_target_norm_sampled, monomial_sequence_sampled, MonomialSequence, MonomialTerm, OperatorSpec, SpacePair,
    SymbolPoint, SymbolSamples,
};
use crate::spaces::{
    classify_levels, estimate_from_samples, log_slope, monomial_norm_oracle, zygmund_norm, DiskGrid,
    SupremumEstimate, Verdict, Weight, DIVERGENCE_SLOPE, SLOPE_WINDOW,
};
use crate::testfns::{make_fgh, Family};
use crate::Complex;

/// Which characterization of the operator applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `max{A, B, C}`.
    General,
    /// `n = 1, 0 < α < 1`: `max{‖u‖_{Z_β}, B, C}`.
    SpecialLowAlpha,
    /// `n = 1, α = 1`: log-weighted `A`, with `B` and `C`.
    LogCase,
}

pub fn route_for(n: usize, alpha: f64) -> Result<Route> {
    if n == 0 {
        return Err(Error::UnsupportedCase(
            "n = 0 is a weighted composition operator; use the weighted-type analyzer".into(),
        ));
    }
    Ok(if n == 1 && alpha < 1.0 {
        Route::SpecialLowAlpha
    } else if n == 1 && alpha == 1.0 {
        Route::LogCase
    } else {
        Route::General
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    A,
    B,
    C,
    /// `(1-|z|^2)^β |u''| max(log 1/(1-|φ|^2), 0)`.
    ALog,
    /// `‖u‖_{Z_β}`.
    UNorm,
}

impl Quantity {
    pub fn id(self) -> &'static str {
        match self {
            Quantity::A => "A",
            Quantity::B => "B",
            Quantity::C => "C",
            Quantity::ALog => "A_log",
            Quantity::UNorm => "u_norm",
        }
    }
}

/// The three quantities used by a route.
pub fn route_quantities(route: Route) -> [Quantity; 3] {
    match route {
        Route::General => [Quantity::A, Quantity::B, Quantity::C],
        Route::SpecialLowAlpha => [Quantity::UNorm, Quantity::B, Quantity::C],
        Route::LogCase => [Quantity::ALog, Quantity::B, Quantity::C],
    }
}

/// Quantities whose limsup gives the essential norm on a route.
pub fn essential_quantities(route: Route) -> [Quantity; 3] {
    match route {
        Route::LogCase => [Quantity::ALog, Quantity::B, Quantity::C],
        _ => [Quantity::A, Quantity::B, Quantity::C],
    }
}

/// Pointwise value of a quantity's integrand. Not defined for `UNorm`.
pub fn integrand(which: Quantity, s: &SymbolPoint, pair: &SpacePair, n: usize) -> f64 {
    let w = s.weight(pair.beta);
    let t = 1.0 - s.phi[0].norm_sqr();
    let [c2, c1, c0] = s.second_derivative_coefficients();
    let base = pair.alpha + n as f64;
    match which {
        Quantity::A => w * c2.norm() / t.powf(base - 2.0),
        Quantity::B => w * c1.norm() / t.powf(base - 1.0),
        Quantity::C => w * c0.norm() / t.powf(base),
        Quantity::ALog => w * c2.norm() * (1.0 / t).ln().max(0.0),
        Quantity::UNorm => f64::NAN,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub grid: DiskGrid,
    /// `ε_m = 2^{-m}` for `m = 1..=eps_levels`.
    pub eps_levels: usize,
    /// Number of monomial terms `J`.
    pub monomial_count: usize,
    /// `|a| = 1 - 2^{-m}` for `m = 1..=a_levels`.
    pub a_levels: usize,
    pub a_angles: usize,
    pub compact_tolerance: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            grid: DiskGrid::default(),
            eps_levels: 12,
            monomial_count: 200,
            a_levels: 8,
            a_angles: 8,
            compact_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimsupLevel {
    /// `ε`, `|a|` or `j`, depending on the profile.
    pub param: f64,
    pub sup: Option<f64>,
}

/// Finite proxy for a limsup: values along a sequence of shrinking
/// boundary neighbourhoods.
///
/// The raw estimate is the value at the last level. An empty last level
/// means the neighbourhoods run out of grid points, so the limsup is over
/// an empty set and equals 0. The profile counts as vanishing when the raw
/// estimate is below the tolerance or the last four nonempty levels decay
/// with log-slope below `-0.05`; in the decaying case the estimate is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimsupProfile {
    pub levels: Vec<LimsupLevel>,
    pub raw_estimate: f64,
    pub slope: f64,
    pub vanishing: bool,
    pub estimate: f64,
}

impl LimsupProfile {
    pub fn from_levels(levels: Vec<LimsupLevel>, tolerance: f64) -> Self {
        let nonempty: Vec<f64> = levels.iter().filter_map(|l| l.sup).collect();
        let last_empty = levels.last().is_none_or(|l| l.sup.is_none());
        if last_empty {
            return LimsupProfile {
                levels,
                raw_estimate: 0.0,
                slope: 0.0,
                vanishing: true,
                estimate: 0.0,
            };
        }
        let raw_estimate = *nonempty.last().unwrap_or(&0.0);
        let slope = if nonempty.len() >= SLOPE_WINDOW {
            log_slope(&nonempty[nonempty.len() - SLOPE_WINDOW..])
        } else {
            0.0
        };
        let decaying = slope < -DIVERGENCE_SLOPE;
        LimsupProfile {
            levels,
            raw_estimate,
            slope,
            vanishing: decaying || raw_estimate < tolerance,
            estimate: if decaying { 0.0 } else { raw_estimate },
        }
    }

    pub fn scaled(mut self, c: f64) -> Self {
        for l in &mut self.levels {
            l.sup = l.sup.map(|v| v * c);
        }
        self.raw_estimate *= c;
        self.estimate *= c;
        self
    }
}

/// Sup-mode value of a quantity. For `UNorm` the per-level profile is that of
/// the seminorm and `value` is the full norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantitySup {
    pub which: Quantity,
    pub estimate: SupremumEstimate,
}

fn quantity_values(which: Quantity, samples: &SymbolSamples, pair: &SpacePair, n: usize) -> Result<Vec<f64>> {
    let values: Vec<f64> = samples.samples.par_iter().map(|s| integrand(which, s, pair, n)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "quantity {} is not finite at {}",
            which.id(),
            samples.points[i]
        )));
    }
    Ok(values)
}

pub fn quantity_sup(op: &OperatorSpec, pair: &SpacePair, which: Quantity, samples: &SymbolSamples) -> Result<QuantitySup> {
    let estimate = if which == Quantity::UNorm {
        let norm = zygmund_norm(op.u(), pair.beta, &samples.grid)?;
        SupremumEstimate {
            value: norm.norm,
            ..norm.seminorm
        }
    } else {
        let values = quantity_values(which, samples, pair, op.n())?;
        estimate_from_samples(&samples.grid, &samples.points, &values)
    };
    Ok(QuantitySup { which, estimate })
}

/// Sup of the integrand over `{z : |φ(z)| >= 1 - 2^{-m}}` for each level.
pub fn quantity_limsup(
    op: &OperatorSpec,
    pair: &SpacePair,
    which: Quantity,
    samples: &SymbolSamples,
    config: &AnalysisConfig,
) -> Result<LimsupProfile> {
    if which == Quantity::UNorm {
        return Err(Error::InvalidInput("the norm of u has no boundary profile".into()));
    }
    let values = quantity_values(which, samples, pair, op.n())?;
    let levels = (1..=config.eps_levels)
        .map(|m| {
            let eps = 0.5f64.powi(m as i32);
            let sup = samples
                .samples
                .iter()
                .zip(&values)
                .filter(|(s, _)| s.phi[0].norm() >= 1.0 - eps)
                .map(|(_, v)| *v)
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
            LimsupLevel { param: eps, sup }
        })
        .collect();
    Ok(LimsupProfile::from_levels(levels, config.compact_tolerance))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityMode {
    Sup,
    Limsup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityABC {
    pub which: Quantity,
    pub mode: QuantityMode,
    pub sup: Option<SupremumEstimate>,
    pub limsup: Option<LimsupProfile>,
}

pub fn quantity_abc(
    op: &OperatorSpec,
    pair: &SpacePair,
    which: Quantity,
    mode: QuantityMode,
    config: &AnalysisConfig,
) -> Result<QuantityABC> {
    if op.n() == 0 {
        return Err(Error::UnsupportedCase("quantities need n >= 1".into()));
    }
    let samples = SymbolSamples::new(op, &config.grid)?;
    Ok(match mode {
        QuantityMode::Sup => QuantityABC {
            which,
            mode,
            sup: Some(quantity_sup(op, pair, which, &samples)?.estimate),
            limsup: None,
        },
        QuantityMode::Limsup => QuantityABC {
            which,
            mode,
            sup: None,
            limsup: Some(quantity_limsup(op, pair, which, &samples, config)?),
        },
    })
}

/// Per-level maxima over angles of `‖D^n_{φ,u} fam_a‖_{Z_β}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyLevels {
    pub family: Family,
    pub levels: Vec<LimsupLevel>,
    pub sup: f64,
    pub slope: f64,
    pub verdict: Verdict,
}

pub fn a_level_moduli(config: &AnalysisConfig) -> Vec<f64> {
    (1..=config.a_levels).map(|m| 1.0 - 0.5f64.powi(m as i32)).collect()
}

fn family_levels(
    op: &OperatorSpec,
    pair: &SpacePair,
    family: Family,
    samples: &SymbolSamples,
    config: &AnalysisConfig,
) -> Result<FamilyLevels> {
    let mut levels = Vec::with_capacity(config.a_levels);
    for r in a_level_moduli(config) {
        let mut best: f64 = 0.0;
        for k in 0..config.a_angles {
            let a = Complex::from_polar(r, std::f64::consts::TAU * k as f64 / config.a_angles as f64);
            let f = make_fgh(family, a, pair.alpha)?;
            best = best.max(gwco_target_norm_sampled(op, &f, pair.beta, samples)?.norm);
        }
        levels.push(LimsupLevel { param: r, sup: Some(best) });
    }
    let values: Vec<f64> = levels.iter().filter_map(|l| l.sup).collect();
    let running: Vec<f64> = values
        .iter()
        .scan(0.0f64, |m, v| {
            *m = m.max(*v);
            Some(*m)
        })
        .collect();
    let (slope, verdict) = classify_levels(&running);
    Ok(FamilyLevels {
        family,
        sup: running.last().copied().unwrap_or(0.0),
        levels,
        slope,
        verdict,
    })
}

/// Monomial terms at `J/8, J/4, J/2, J` and the trend of their running sup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialTrend {
    pub checkpoints: Vec<MonomialTerm>,
    pub running_sup: Vec<f64>,
    pub slope: f64,
    pub verdict: Verdict,
}

fn checkpoints(count: usize) -> Vec<usize> {
    let mut js: Vec<usize> = [count / 8, count / 4, count / 2, count].iter().map(|&j| j.max(1)).collect();
    js.dedup();
    js
}

pub fn monomial_trend(seq: &MonomialSequence) -> MonomialTrend {
    let count = seq.terms.len();
    let js = checkpoints(count);
    let points: Vec<MonomialTerm> = js.iter().map(|&j| seq.terms[j - 1]).collect();
    let running_sup: Vec<f64> = js
        .iter()
        .map(|&j| seq.terms[..j].iter().map(|t| t.value).fold(0.0, f64::max))
        .collect();
    let (slope, verdict) = if running_sup.len() == SLOPE_WINDOW {
        classify_levels(&running_sup)
    } else {
        (0.0, Verdict::Indeterminate)
    };
    MonomialTrend {
        checkpoints: points,
        running_sup,
        slope,
        verdict,
    }
}

/// Limsup proxy of the monomial sequence: values at the checkpoints, with
/// the raw estimate replaced by the sup over `j >= J/2`.
pub fn monomial_tail(seq: &MonomialSequence, tolerance: f64) -> LimsupProfile {
    let count = seq.terms.len();
    let levels: Vec<LimsupLevel> = checkpoints(count)
        .into_iter()
        .map(|j| LimsupLevel {
            param: j as f64,
            sup: Some(seq.terms[j - 1].value),
        })
        .collect();
    let mut profile = LimsupProfile::from_levels(levels, tolerance);
    let tail = seq.terms[(count / 2).saturating_sub(1)..]
        .iter()
        .map(|t| t.value)
        .fold(0.0, f64::max);
    profile.raw_estimate = tail;
    let decaying = profile.slope < -DIVERGENCE_SLOPE;
    profile.vanishing = decaying || tail < tolerance;
    profile.estimate = if decaying { 0.0 } else { tail };
    profile
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `sup_j j^{α-2} ‖D I^{j+1}‖_{Z_β} < ∞`.
    Monomial,
    /// `sup_a ‖D f_a‖, ‖D g_a‖, ‖D h_a‖ < ∞`.
    Families,
    /// The route's three quantities are finite.
    Quantities,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementMatrix {
    pub labels: Vec<String>,
    pub agree: Vec<Vec<bool>>,
}

impl AgreementMatrix {
    fn build<T: PartialEq>(labels: Vec<String>, values: &[T]) -> Self {
        let agree = values.iter().map(|a| values.iter().map(|b| a == b).collect()).collect();
        AgreementMatrix { labels, agree }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub route: Route,
    pub pair: SpacePair,
    pub n: usize,
    pub phi_sup: f64,
    pub quantities: Vec<QuantitySup>,
    pub monomials: MonomialSequence,
    pub monomial_trend: MonomialTrend,
    pub families: Vec<FamilyLevels>,
    pub criteria: Vec<CriterionResult>,
    pub agreement: AgreementMatrix,
    pub verdict: Boundedness,
}

impl BoundednessReport {
    pub fn quantity(&self, which: Quantity) -> Option<&SupremumEstimate> {
        self.quantities.iter().find(|q| q.which == which).map(|q| &q.estimate)
    }

    pub fn criterion(&self, c: Criterion) -> Option<&CriterionResult> {
        self.criteria.iter().find(|r| r.criterion == c)
    }
}

fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut all_converged = true;
    for v in verdicts {
        match v {
            Verdict::Diverging => return Verdict::Diverging,
            Verdict::Indeterminate => all_converged = false,
            Verdict::Converged => {}
        }
    }
    if all_converged {
        Verdict::Converged
    } else {
        Verdict::Indeterminate
    }
}

/// Overall verdict: the route's quantities decide; any other criterion
/// reporting divergence against them makes the result indeterminate.
pub fn overall_verdict(primary: Verdict, others: &[Verdict]) -> Boundedness {
    match primary {
        Verdict::Diverging => Boundedness::Unbounded,
        Verdict::Converged if !others.contains(&Verdict::Diverging) => Boundedness::Bounded,
        _ => Boundedness::Indeterminate,
    }
}

struct Prepared {
    route: Route,
    samples: SymbolSamples,
}

fn prepare(op: &OperatorSpec, pair: &SpacePair, config: &AnalysisConfig) -> Result<Prepared> {
    let route = route_for(op.n(), pair.alpha)?;
    let samples = SymbolSamples::new(op, &config.grid)?;
    Ok(Prepared { route, samples })
}

/// All three boundedness criteria and the route's verdict.
pub fn classify_boundedness(op: &OperatorSpec, pair: &SpacePair, config: &AnalysisConfig) -> Result<BoundednessReport> {
    let Prepared { route, samples } = prepare(op, pair, config)?;
    let mut which = vec![Quantity::A, Quantity::B, Quantity::C];
    match route {
        Route::SpecialLowAlpha => which.push(Quantity::UNorm),
        Route::LogCase => which.push(Quantity::ALog),
        Route::General => {}
    }
    let quantities = which
        .iter()
        .map(|&q| quantity_sup(op, pair, q, &samples))
        .collect::<Result<Vec<_>>>()?;
    let find = |q: Quantity| &quantities.iter().find(|x| x.which == q).expect("computed above").estimate;
    let primary = route_quantities(route);
    let quantity_verdict = combine(primary.iter().map(|&q| find(q).verdict));
    let quantity_value = primary.iter().map(|&q| find(q).value).fold(0.0, f64::max);

    let monomials = monomial_sequence_sampled(op, pair, config.monomial_count, &samples)?;
    let trend = monomial_trend(&monomials);
    let families = [Family::F, Family::G, Family::H]
        .iter()
        .map(|&f| family_levels(op, pair, f, &samples, config))
        .collect::<Result<Vec<_>>>()?;
    let family_verdict = combine(families.iter().map(|f| f.verdict));
    let family_value = families.iter().map(|f| f.sup).fold(0.0, f64::max);

    let criteria = vec![
        CriterionResult {
            criterion: Criterion::Monomial,
            verdict: trend.verdict,
            value: monomials.sup,
        },
        CriterionResult {
            criterion: Criterion::Families,
            verdict: family_verdict,
            value: family_value,
        },
        CriterionResult {
            criterion: Criterion::Quantities,
            verdict: quantity_verdict,
            value: quantity_value,
        },
    ];
    let agreement = AgreementMatrix::build(
        vec!["monomial".into(), "families".into(), "quantities".into()],
        &criteria.iter().map(|c| c.verdict).collect::<Vec<_>>(),
    );
    let verdict = overall_verdict(quantity_verdict, &[trend.verdict, family_verdict]);
    Ok(BoundednessReport {
        route,
        pair: *pair,
        n: op.n(),
        phi_sup: op.phi_sup(),
        quantities,
        monomials,
        monomial_trend: trend,
        families,
        criteria,
        agreement,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedProfile {
    pub name: String,
    pub profile: LimsupProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossEstimates {
    pub families: f64,
    pub monomial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRatios {
    pub families_over_primary: Option<f64>,
    pub monomial_over_primary: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialNormReport {
    pub route: Route,
    pub quantities: Vec<NamedProfile>,
    pub families: Vec<NamedProfile>,
    pub monomial_tail: LimsupProfile,
    /// `max{A, B, C}` of the limsups (log-weighted on the log route).
    pub estimate: f64,
    pub cross_estimates: CrossEstimates,
    pub ratios: EstimateRatios,
    /// Whether each of the three estimators vanishes, in the order
    /// quantities, families, monomial.
    pub vanishing: [bool; 3],
    pub zero_agreement: bool,
    pub compact: bool,
    pub tolerance: f64,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    if den > 0.0 && num.is_finite() {
        Some(num / den)
    } else {
        None
    }
}

/// Essential-norm estimators, reusing the family and monomial data of a
/// boundedness report.
pub fn essential_norm_from(
    op: &OperatorSpec,
    pair: &SpacePair,
    config: &AnalysisConfig,
    bounded: &BoundednessReport,
) -> Result<EssentialNormReport> {
    if bounded.verdict != Boundedness::Bounded {
        return Err(Error::NotBounded);
    }
    let Prepared { route, samples } = prepare(op, pair, config)?;
    let tol = config.compact_tolerance;
    let quantities = essential_quantities(route)
        .iter()
        .map(|&q| {
            Ok(NamedProfile {
                name: q.id().to_string(),
                profile: quantity_limsup(op, pair, q, &samples, config)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let families: Vec<NamedProfile> = bounded
        .families
        .iter()
        .map(|f| NamedProfile {
            name: f.family.id().to_string(),
            profile: LimsupProfile::from_levels(f.levels.clone(), tol),
        })
        .collect();
    let monomial_tail = monomial_tail(&bounded.monomials, tol);
    let max_est = |ps: &[NamedProfile]| ps.iter().map(|p| p.profile.estimate).fold(0.0, f64::max);
    let estimate = max_est(&quantities);
    let cross = CrossEstimates {
        families: max_est(&families),
        monomial: monomial_tail.estimate,
    };
    let vanishing = [
        quantities.iter().all(|p| p.profile.vanishing),
        families.iter().all(|p| p.profile.vanishing),
        monomial_tail.vanishing,
    ];
    Ok(EssentialNormReport {
        route,
        ratios: EstimateRatios {
            families_over_primary: ratio(cross.families, estimate),
            monomial_over_primary: ratio(cross.monomial, estimate),
        },
        quantities,
        families,
        monomial_tail,
        estimate,
        cross_estimates: cross,
        zero_agreement: vanishing.iter().all(|&v| v) || vanishing.iter().all(|&v| !v),
        compact: vanishing.iter().all(|&v| v),
        vanishing,
        tolerance: tol,
    })
}

pub fn essential_norm_estimate(op: &OperatorSpec, pair: &SpacePair, config: &AnalysisConfig) -> Result<EssentialNormReport> {
    let bounded = classify_boundedness(op, pair, config)?;
    essential_norm_from(op, pair, config, &bounded)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    Compact,
    NotCompact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub verdict: Compactness,
    pub essential: EssentialNormReport,
    pub agreement: AgreementMatrix,
}

pub fn compactness_from(essential: EssentialNormReport) -> CompactnessReport {
    let agreement = AgreementMatrix::build(
        vec!["quantities".into(), "families".into(), "monomial".into()],
        &essential.vanishing,
    );
    CompactnessReport {
        verdict: if essential.compact {
            Compactness::Compact
        } else {
            Compactness::NotCompact
        },
        essential,
        agreement,
    }
}

pub fn classify_compactness(op: &OperatorSpec, pair: &SpacePair, config: &AnalysisConfig) -> Result<CompactnessReport> {
    Ok(compactness_from(essential_norm_estimate(op, pair, config)?))
}

/// Boundedness, and compactness when bounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub boundedness: BoundednessReport,
    pub compactness: Option<CompactnessReport>,
    pub note: Option<String>,
}

pub fn analyze(op: &OperatorSpec, pair: &SpacePair, config: &AnalysisConfig) -> Result<AnalysisReport> {
    let boundedness = classify_boundedness(op, pair, config)?;
    match essential_norm_from(op, pair, config, &boundedness) {
        Ok(e) => Ok(AnalysisReport {
            boundedness,
            compactness: Some(compactness_from(e)),
            note: None,
        }),
        Err(Error::NotBounded) => Ok(AnalysisReport {
            boundedness,
            compactness: None,
            note: Some(Error::NotBounded.to_string()),
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedTerm {
    pub n: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedTypeConfig {
    pub grid: DiskGrid,
    /// Largest `n` in `sup_n ‖u φ^n‖_ω / ‖z^n‖_ν`.
    pub max_power: usize,
    pub eps_levels: usize,
    pub compact_tolerance: f64,
}

impl Default for WeightedTypeConfig {
    fn default() -> Self {
        WeightedTypeConfig {
            grid: DiskGrid::default(),
            max_power: 300,
            eps_levels: 12,
            compact_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedTypeReport {
    pub nu: Weight,
    pub omega: Weight,
    pub terms: Vec<WeightedTerm>,
    /// `sup_n ‖u φ^n‖_ω / ‖z^n‖_ν`.
    pub monomial_sup: f64,
    /// `sup_z ω(z)|u(z)| / ν(φ(z))`.
    pub sup_side: SupremumEstimate,
    pub ratio: Option<f64>,
    /// `limsup_n ‖u φ^n‖_ω / ‖z^n‖_ν`.
    pub monomial_limsup: LimsupProfile,
    /// `limsup_{|φ(z)|→1} ω(z)|u(z)| / ν(φ(z))`.
    pub boundary_limsup: LimsupProfile,
}

fn check_weight(w: &Weight) -> Result<()> {
    match w {
        Weight::StandardAlpha { alpha } if !(*alpha > 0.0 && alpha.is_finite()) => {
            Err(Error::UnsupportedWeight(format!("standard weight with exponent {alpha}")))
        }
        _ => Ok(()),
    }
}

/// Both sides of the weighted-type characterization of `u C_φ : H^∞_ν → H^∞_ω`.
pub fn weighted_type_analyze(
    u: &AnalyticMap,
    phi: &AnalyticMap,
    nu: &Weight,
    omega: &Weight,
    config: &WeightedTypeConfig,
) -> Result<WeightedTypeReport> {
    check_weight(nu)?;
    check_weight(omega)?;
    let op = OperatorSpec::new(u.clone(), phi.clone(), 0, &config.grid)?;
    let grid = &config.grid;
    let points = grid.points();
    let sample = |z: Complex| -> Result<(f64, f64, f64)> {
        let w = op.phi().eval(z)?;
        Ok((omega.eval(z) * op.u().eval(z)?.norm(), w.norm(), nu.eval(w)))
    };
    let raw: Vec<Result<(f64, f64, f64)>> = points.par_iter().map(|&z| sample(z)).collect();
    let samples = raw.into_iter().collect::<Result<Vec<_>>>()?;
    let side: Vec<f64> = samples.iter().map(|(wu, _, nuw)| wu / nuw).collect();
    let sup_side = estimate_from_samples(grid, &points, &side);

    let terms: Vec<Result<WeightedTerm>> = (0..=config.max_power)
        .into_par_iter()
        .map(|n| {
            let oracle = monomial_norm_oracle(n as u64, nu);
            let probe = monomial_norm_oracle(n as u64, omega).radius;
            let ln_term = |wu: f64, m: f64| if n == 0 { wu.ln() } else { wu.ln() + n as f64 * m.ln() };
            let mut best = samples
                .iter()
                .map(|(wu, m, _)| ln_term(*wu, *m))
                .fold(f64::NEG_INFINITY, f64::max);
            if probe > 0.0 && probe <= grid.max_radius() {
                for z in grid.circle(probe) {
                    let (wu, m, _) = sample(z)?;
                    best = best.max(ln_term(wu, m));
                }
            }
            Ok(WeightedTerm {
                n,
                ratio: (best - oracle.value.ln()).exp(),
            })
        })
        .collect();
    let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
    let monomial_sup = terms.iter().map(|t| t.ratio).fold(0.0, f64::max);

    let max_power = config.max_power.max(1);
    let js: Vec<usize> = {
        let mut v: Vec<usize> = [max_power / 8, max_power / 4, max_power / 2, max_power]
            .iter()
            .map(|&j| j.max(1))
            .collect();
        v.dedup();
        v
    };
    let mut monomial_limsup = LimsupProfile::from_levels(
        js.iter()
            .map(|&j| LimsupLevel {
                param: j as f64,
                sup: terms.get(j).map(|t| t.ratio),
            })
            .collect(),
        config.compact_tolerance,
    );
    let tail = terms[(max_power / 2).min(terms.len() - 1)..]
        .iter()
        .map(|t| t.ratio)
        .fold(0.0, f64::max);
    let decaying = monomial_limsup.slope < -DIVERGENCE_SLOPE;
    monomial_limsup.raw_estimate = tail;
    monomial_limsup.vanishing = decaying || tail < config.compact_tolerance;
    monomial_limsup.estimate = if decaying { 0.0 } else { tail };

    let boundary_levels = (1..=config.eps_levels)
        .map(|m| {
            let eps = 0.5f64.powi(m as i32);
            let sup = samples
                .iter()
                .zip(&side)
                .filter(|((_, modulus, _), _)| *modulus >= 1.0 - eps)
                .map(|(_, v)| *v)
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
            LimsupLevel { param: eps, sup }
        })
        .collect();
    let boundary_limsup = LimsupProfile::from_levels(boundary_levels, config.compact_tolerance);
    Ok(WeightedTypeReport {
        nu: *nu,
        omega: *omega,
        ratio: ratio(monomial_sup, sup_side.value),
        terms,
        monomial_sup,
        sup_side,
        monomial_limsup,
        boundary_limsup,
    })
}

/// `(n+1)^α ‖z^n‖_{ν_α}`, whose limit is `(2α/e)^α`.
pub fn standard_monomial_asymptotic(n: u64, alpha: f64) -> f64 {
    (n as f64 + 1.0).powf(alpha) * monomial_norm_oracle(n, &Weight::StandardAlpha { alpha }).value
}

/// `(log n) ‖z^n‖_{ν_log}`, whose limsup is 1.
pub fn log_monomial_asymptotic(n: u64) -> f64 {
    (n as f64).ln() * monomial_norm_oracle(n, &Weight::Logarithmic).value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch() {
        assert!(matches!(route_for(0, 1.0), Err(Error::UnsupportedCase(_))));
        assert_eq!(route_for(1, 0.5).unwrap(), Route::SpecialLowAlpha);
        assert_eq!(route_for(1, 1.0).unwrap(), Route::LogCase);
        assert_eq!(route_for(1, 1.5).unwrap(), Route::General);
        assert_eq!(route_for(2, 1.0).unwrap(), Route::General);
    }

    #[test]
    fn empty_profile_is_zero() {
        let p = LimsupProfile::from_levels(
            vec![LimsupLevel { param: 0.5, sup: Some(3.0) }, LimsupLevel { param: 0.25, sup: None }],
            1e-6,
        );
        assert_eq!(p.estimate, 0.0);
        assert!(p.vanishing);
    }

    #[test]
    fn flat_profile_keeps_its_value() {
        let levels = (1..=6).map(|m| LimsupLevel { param: m as f64, sup: Some(1.0) }).collect();
        let p = LimsupProfile::from_levels(levels, 1e-6);
        assert_eq!(p.estimate, 1.0);
        assert!(!p.vanishing);
    }

    #[test]
    fn overall() {
        use Verdict::*;
        assert_eq!(overall_verdict(Diverging, &[Converged]), Boundedness::Unbounded);
        assert_eq!(overall_verdict(Converged, &[Converged, Indeterminate]), Boundedness::Bounded);
        assert_eq!(overall_verdict(Converged, &[Diverging]), Boundedness::Indeterminate);
        assert_eq!(overall_verdict(Indeterminate, &[Converged]), Boundedness::Indeterminate);
    }
}
