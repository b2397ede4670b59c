//! The operator `D^n_{φ,u} f = u · f^(n) ∘ φ`, its images and their
//! Zygmund-type norms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{AnalyticMap, MapDescriptor, MapKind, MAX_MODULUS};
use crate::gamma::ln_falling_factorial;
use crate::spaces::{estimate_from_samples, DiskGrid, SupremumEstimate};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacePair {
    pub alpha: f64,
    pub beta: f64,
}

impl SpacePair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(SpacePair { alpha, beta })
    }
}

#[derive(Debug, Clone)]
pub struct OperatorSpec {
    u: AnalyticMap,
    phi: AnalyticMap,
    n: usize,
    phi_sup: f64,
}

impl OperatorSpec {
    /// Validates that `max |φ| < 1 - 1e-9` over the grid.
    pub fn new(u: AnalyticMap, phi: AnalyticMap, n: usize, grid: &DiskGrid) -> Result<Self> {
        let points = grid.points();
        let moduli: Vec<Result<f64>> = points.par_iter().map(|&z| phi.eval(z).map(|w| w.norm())).collect();
        let mut phi_sup: f64 = 0.0;
        for m in moduli {
            let m = m?;
            if !m.is_finite() {
                return Err(Error::Domain("non-finite symbol value".into()));
            }
            phi_sup = phi_sup.max(m);
        }
        if phi_sup >= MAX_MODULUS {
            return Err(Error::SelfMapViolation { max_modulus: phi_sup });
        }
        Ok(OperatorSpec { u, phi, n, phi_sup })
    }

    pub fn u(&self) -> &AnalyticMap {
        &self.u
    }

    pub fn phi(&self) -> &AnalyticMap {
        &self.phi
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `max |φ|` over the validation grid.
    pub fn phi_sup(&self) -> f64 {
        self.phi_sup
    }

    /// The same operator with `u` replaced by `c · u`.
    pub fn with_scaled_symbol(&self, c: Complex) -> Self {
        OperatorSpec {
            u: self.u.scaled(c),
            ..self.clone()
        }
    }
}

/// `D^n_{φ,u} f` as a lazily evaluated map.
pub fn apply_gwco(op: &OperatorSpec, f: &AnalyticMap) -> AnalyticMap {
    AnalyticMap::from_kind(
        MapKind::WeightedComposition {
            weight: op.u.clone(),
            inner: op.phi.clone(),
            outer: f.clone(),
            derivative: op.n,
        },
        MapDescriptor::Derived {
            description: format!("({}) * ({})^({}) o ({})", op.u, f, op.n, op.phi),
        },
    )
}

/// `u, u', u''` and `φ, φ', φ''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolPoint {
    pub z: Complex,
    pub u: [Complex; 3],
    pub phi: [Complex; 3],
}

impl SymbolPoint {
    pub fn at(op: &OperatorSpec, z: Complex) -> Result<Self> {
        let u = op.u.jet(z, 2)?;
        let phi = op.phi.jet(z, 2)?;
        if !(phi.value().norm() < 1.0) {
            return Err(Error::SelfMapViolation {
                max_modulus: phi.value().norm(),
            });
        }
        Ok(SymbolPoint {
            z,
            u: [u.derivative(0), u.derivative(1), u.derivative(2)],
            phi: [phi.derivative(0), phi.derivative(1), phi.derivative(2)],
        })
    }

    /// Coefficients of `f^(n)∘φ, f^(n+1)∘φ, f^(n+2)∘φ` in `(D f)''`:
    /// `u''`, `2u'φ' + uφ''`, `uφ'^2`.
    pub fn second_derivative_coefficients(&self) -> [Complex; 3] {
        let [u, u1, u2] = self.u;
        let [_, p1, p2] = self.phi;
        [u2, u1 * p1 * 2.0 + u * p2, u * p1 * p1]
    }

    /// Coefficients of the same three terms in `(D f)'`.
    pub fn first_derivative_coefficients(&self) -> [Complex; 3] {
        [self.u[1], self.u[0] * self.phi[1], Complex::new(0.0, 0.0)]
    }

    pub fn weight(&self, beta: f64) -> f64 {
        (1.0 - self.z.norm_sqr()).powf(beta)
    }
}

/// Symbol jets at every point of a grid, in `grid.points()` order.
#[derive(Debug, Clone)]
pub struct SymbolSamples {
    pub grid: DiskGrid,
    pub points: Vec<Complex>,
    pub samples: Vec<SymbolPoint>,
    pub origin: SymbolPoint,
}

impl SymbolSamples {
    pub fn new(op: &OperatorSpec, grid: &DiskGrid) -> Result<Self> {
        let points = grid.points();
        let raw: Vec<Result<SymbolPoint>> = points.par_iter().map(|&z| SymbolPoint::at(op, z)).collect();
        let samples = raw.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(SymbolSamples {
            grid: grid.clone(),
            points,
            samples,
            origin: SymbolPoint::at(op, Complex::new(0.0, 0.0))?,
        })
    }
}

fn outer_derivatives(op: &OperatorSpec, f: &AnalyticMap, w: Complex) -> Result<[Complex; 3]> {
    let n = op.n;
    let jet = f.jet(w, n + 2)?;
    Ok([jet.derivative(n), jet.derivative(n + 1), jet.derivative(n + 2)])
}

fn dot(c: &[Complex; 3], d: &[Complex; 3]) -> Complex {
    c[0] * d[0] + c[1] * d[1] + c[2] * d[2]
}

/// `(D^n_{φ,u} f)''(z)` by the three-term expansion.
pub fn gwco_second_derivative(op: &OperatorSpec, f: &AnalyticMap, z: Complex) -> Result<Complex> {
    let s = SymbolPoint::at(op, z)?;
    let d = outer_derivatives(op, f, s.phi[0])?;
    Ok(dot(&s.second_derivative_coefficients(), &d))
}

/// `‖D^n_{φ,u} f‖_{Z_β}` split into the origin part and the seminorm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetNorm {
    pub norm: f64,
    pub at_origin: f64,
    pub seminorm: SupremumEstimate,
}

/// `|g(0)| + |g'(0)| + sup (1-|z|^2)^β |g''(z)|` for `g = D^n_{φ,u} f`.
pub fn gwco_target_norm(op: &OperatorSpec, f: &AnalyticMap, pair: &SpacePair, grid: &DiskGrid) -> Result<TargetNorm> {
    let samples = SymbolSamples::new(op, grid)?;
    gwco_target_norm_sampled(op, f, pair.beta, &samples)
}

/// As [`gwco_target_norm`] with the symbol jets already sampled.
pub fn gwco_target_norm_sampled(
    op: &OperatorSpec,
    f: &AnalyticMap,
    beta: f64,
    samples: &SymbolSamples,
) -> Result<TargetNorm> {
    let raw: Vec<Result<f64>> = samples
        .samples
        .par_iter()
        .map(|s| {
            let d = outer_derivatives(op, f, s.phi[0])?;
            let v = s.weight(beta) * dot(&s.second_derivative_coefficients(), &d).norm();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(format!("non-finite image derivative at {}", s.z)))
            }
        })
        .collect();
    let values = raw.into_iter().collect::<Result<Vec<_>>>()?;
    let seminorm = estimate_from_samples(&samples.grid, &samples.points, &values);
    let o = &samples.origin;
    let d0 = outer_derivatives(op, f, o.phi[0])?;
    let at_origin = (o.u[0] * d0[0]).norm() + dot(&o.first_derivative_coefficients(), &d0).norm();
    Ok(TargetNorm {
        norm: at_origin + seminorm.value,
        at_origin,
        seminorm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialSequence {
    pub terms: Vec<MonomialTerm>,
    pub sup: f64,
    pub argmax_j: usize,
}

/// `ln |Σ_k c_k (m)_{n+k} w^{m-n-k}|` with falling factorials `(m)_i`,
/// evaluated with a common scale so that large `m` cannot overflow.
fn ln_monomial_combination(c: &[Complex; 3], m: u64, n: usize, w: Complex) -> f64 {
    let ln_w = w.norm().ln();
    let arg_w = w.arg();
    let mut logs = [f64::NEG_INFINITY; 3];
    let mut phases = [Complex::new(0.0, 0.0); 3];
    for k in 0..3 {
        let order = n + k;
        let ln_ff = ln_falling_factorial(m, order);
        if ln_ff == f64::NEG_INFINITY || c[k].norm() == 0.0 {
            continue;
        }
        let power = m - order as u64;
        let (ln_pow, phase) = if power == 0 {
            (0.0, Complex::new(1.0, 0.0))
        } else if w.norm() == 0.0 {
            continue;
        } else {
            (power as f64 * ln_w, Complex::from_polar(1.0, power as f64 * arg_w))
        };
        logs[k] = ln_ff + ln_pow + c[k].norm().ln();
        phases[k] = phase * (c[k] / c[k].norm());
    }
    let scale = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: Complex = (0..3)
        .filter(|&k| logs[k] > f64::NEG_INFINITY)
        .map(|k| phases[k] * (logs[k] - scale).exp())
        .sum();
    scale + sum.norm().ln()
}

fn exp_or_zero(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else {
        x.exp()
    }
}

/// Probe radius maximizing `r^p (1 - r^2)^β`.
fn maximizer_radius(p: f64, beta: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        (p / (p + 2.0 * beta)).sqrt()
    }
}

/// `j^{α-2} ‖D^n_{φ,u} I^{j+1}‖_{Z_β}` for `j = 1..=count`, using exact
/// falling-factorial derivatives of `z^{j+1}` in the log domain.
pub fn monomial_sequence(op: &OperatorSpec, pair: &SpacePair, count: usize, grid: &DiskGrid) -> Result<MonomialSequence> {
    if count == 0 {
        return Err(Error::InvalidInput("monomial sequence needs J >= 1".into()));
    }
    let samples = SymbolSamples::new(op, grid)?;
    monomial_sequence_sampled(op, pair, count, &samples)
}

/// As [`monomial_sequence`] with the symbol jets already sampled.
pub fn monomial_sequence_sampled(
    op: &OperatorSpec,
    pair: &SpacePair,
    count: usize,
    samples: &SymbolSamples,
) -> Result<MonomialSequence> {
    if count == 0 {
        return Err(Error::InvalidInput("monomial sequence needs J >= 1".into()));
    }
    let terms: Vec<Result<MonomialTerm>> = (1..=count)
        .into_par_iter()
        .map(|j| monomial_term_sampled(op, pair, j, samples))
        .collect();
    let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
    let mut best = (f64::NEG_INFINITY, 1);
    for t in &terms {
        if t.value > best.0 {
            best = (t.value, t.j);
        }
    }
    Ok(MonomialSequence {
        terms,
        sup: best.0,
        argmax_j: best.1,
    })
}

fn monomial_term_sampled(op: &OperatorSpec, pair: &SpacePair, j: usize, samples: &SymbolSamples) -> Result<MonomialTerm> {
    let m = j as u64 + 1;
    let n = op.n;
    let ln_scale = (pair.alpha - 2.0) * (j as f64).ln();
    let probe_r = maximizer_radius(m as f64 - n as f64 - 2.0, pair.beta);
    let mut best = f64::NEG_INFINITY;
    let mut consider = |s: &SymbolPoint| {
        let c = s.second_derivative_coefficients();
        let ln = ln_monomial_combination(&c, m, n, s.phi[0]) + pair.beta * (1.0 - s.z.norm_sqr()).ln();
        best = best.max(ln);
    };
    for s in &samples.samples {
        consider(s);
    }
    if probe_r > 0.0 && probe_r <= samples.grid.max_radius() {
        for z in samples.grid.circle(probe_r) {
            consider(&SymbolPoint::at(op, z)?);
        }
    }
    let o = &samples.origin;
    let g0 = ln_monomial_combination(&[o.u[0], Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)], m, n, o.phi[0]);
    let g1 = ln_monomial_combination(&o.first_derivative_coefficients(), m, n, o.phi[0]);
    let value = exp_or_zero(g0 + ln_scale) + exp_or_zero(g1 + ln_scale) + exp_or_zero(best + ln_scale);
    if !value.is_finite() {
        return Err(Error::Domain(format!("monomial term j = {j} overflowed")));
    }
    Ok(MonomialTerm { j, value })
}

/// The same term computed through jets of `z^{j+1}` (no log-domain rescaling).
pub fn monomial_term_direct(op: &OperatorSpec, pair: &SpacePair, j: usize, grid: &DiskGrid) -> Result<MonomialTerm> {
    let f = AnalyticMap::monomial(j as u32 + 1);
    let probe = maximizer_radius(j as f64 + 1.0 - op.n as f64 - 2.0, pair.beta);
    let grid = grid.clone().with_probes([probe].into_iter().filter(|&r| r > 0.0));
    let norm = gwco_target_norm(op, &f, pair, &grid)?.norm;
    Ok(MonomialTerm {
        j,
        value: (j as f64).powf(pair.alpha - 2.0) * norm,
    })
}
