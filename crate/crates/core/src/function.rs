//! Analytic functions on the unit disk with exact jet evaluation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::CompiledExpr;
use crate::jet::{Jet, LOG_BRANCH_TOLERANCE};
use crate::series::PowerSeries;
use crate::Complex;

/// Default cap on the order accepted by [`AnalyticMap::jet`].
pub const DEFAULT_MAX_JET_ORDER: usize = 64;

/// Points farther than this from the origin are outside the working disk.
pub const MAX_MODULUS: f64 = 1.0 - 1e-9;

/// Hard cap for internal jets (composition asks the outer function for
/// `n + K` coefficients).
const INTERNAL_MAX_ORDER: usize = 4096;

/// `scale * (1 - coef * z)^(-q)`.
///
/// `d^k/dz^k = scale * q (q+1) ... (q+k-1) * coef^k * (1 - coef z)^(-(q+k))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub coef: Complex,
    pub q: f64,
    pub scale: Complex,
}

impl Kernel {
    fn jet(&self, z: Complex, order: usize) -> Result<Jet> {
        let w = Complex::new(1.0, 0.0) - self.coef * z;
        if w.norm() < crate::jet::DIVISION_TOLERANCE {
            return Err(Error::Domain("kernel singularity".into()));
        }
        let integer_q = self.q.fract() == 0.0;
        if !integer_q && w.re <= LOG_BRANCH_TOLERANCE {
            return Err(Error::Domain(format!("kernel base {w} outside the principal branch")));
        }
        let base = if integer_q { w.powi(-(self.q as i32)) } else { (-self.q * w.ln()).exp() };
        let step = self.coef / w;
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = self.scale * base;
        for k in 0..=order {
            if k > 0 {
                // (q)_k / k! from (q)_{k-1} / (k-1)!
                term *= step * ((self.q + (k - 1) as f64) / k as f64);
            }
            coeffs.push(term);
        }
        Jet::new(z, coeffs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ClosedForm {
    Constant(Complex),
    Identity,
    /// `s * z`.
    Dilation(Complex),
    Monomial(u32),
    Kernel(Kernel),
    KernelSum(Vec<Kernel>),
    /// `t_a(z) = h(conj(a) z) / conj(a) * (log 1/(1-|a|^2))^(-1)` with
    /// `h(w) = (w - 1)((1 + log 1/(1-w))^2 + 1)`.
    LogTest(Complex),
}

impl ClosedForm {
    fn jet(&self, z: Complex, order: usize) -> Result<Jet> {
        let zero = Complex::new(0.0, 0.0);
        match self {
            ClosedForm::Constant(c) => Ok(Jet::constant(z, *c, order)),
            ClosedForm::Identity => Ok(Jet::variable(z, order)),
            ClosedForm::Dilation(s) => Ok(Jet::variable(z, order).scale(*s)),
            ClosedForm::Monomial(j) => {
                let j = *j as usize;
                let coeffs = (0..=order)
                    .map(|k| {
                        if k > j {
                            zero
                        } else {
                            // binom(j, k) z^(j-k)
                            let binom: f64 =
                                (0..k).map(|i| (j - i) as f64 / (i + 1) as f64).product();
                            z.powu((j - k) as u32) * binom
                        }
                    })
                    .collect();
                Jet::new(z, coeffs)
            }
            ClosedForm::Kernel(k) => k.jet(z, order),
            ClosedForm::KernelSum(ks) => {
                let mut acc = Jet::constant(z, zero, order);
                for k in ks {
                    acc = &acc + &k.jet(z, order)?;
                }
                Ok(acc)
            }
            ClosedForm::LogTest(a) => {
                let abar = a.conj();
                let norm = (1.0 / (1.0 - a.norm_sqr())).ln();
                let one = Complex::new(1.0, 0.0);
                let w = Jet::variable(z, order).scale(abar);
                let log_term = -&(-&w).add_scalar(one).ln()?;
                let bracket = {
                    let p = log_term.add_scalar(one);
                    (&p * &p).add_scalar(one)
                };
                let h = &w.add_scalar(-one) * &bracket;
                Ok(h.scale(one / (abar * norm)))
            }
        }
    }
}

/// Parameter values as they appear in descriptors and config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Complex([f64; 2]),
}

impl ParamValue {
    pub fn as_complex(self) -> Complex {
        match self {
            ParamValue::Real(x) => Complex::new(x, 0.0),
            ParamValue::Complex([re, im]) => Complex::new(re, im),
        }
    }

    pub fn from_complex(c: Complex) -> Self {
        if c.im == 0.0 {
            ParamValue::Real(c.re)
        } else {
            ParamValue::Complex([c.re, c.im])
        }
    }
}

/// Serializable description of where a map came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapDescriptor {
    Expression {
        expr: String,
        params: BTreeMap<String, ParamValue>,
    },
    Catalog {
        catalog: String,
        params: BTreeMap<String, ParamValue>,
    },
    Series {
        coeffs: Vec<[f64; 2]>,
    },
    Derived {
        description: String,
    },
}

#[derive(Debug)]
pub enum MapKind {
    ClosedForm(ClosedForm),
    Expression(CompiledExpr),
    Series(PowerSeries),
    /// `sum_i c_i f_i`.
    Combination(Vec<(Complex, AnalyticMap)>),
    /// `weight(z) * outer^(derivative)(inner(z))`.
    WeightedComposition {
        weight: AnalyticMap,
        inner: AnalyticMap,
        outer: AnalyticMap,
        derivative: usize,
    },
}

/// An analytic function on the disk. Cheap to clone.
#[derive(Clone)]
pub struct AnalyticMap {
    kind: Arc<MapKind>,
    descriptor: Arc<MapDescriptor>,
}

impl fmt::Debug for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnalyticMap({})", self)
    }
}

impl fmt::Display for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.descriptor {
            MapDescriptor::Expression { expr, .. } => f.write_str(expr),
            MapDescriptor::Catalog { catalog, params } => {
                write!(f, "{catalog}")?;
                if !params.is_empty() {
                    let items: Vec<String> = params
                        .iter()
                        .map(|(k, v)| match v {
                            ParamValue::Real(x) => format!("{k}={x}"),
                            ParamValue::Complex([re, im]) => format!("{k}={re}{im:+}i"),
                        })
                        .collect();
                    write!(f, "[{}]", items.join(", "))?;
                }
                Ok(())
            }
            MapDescriptor::Series { coeffs } => write!(f, "series(degree {})", coeffs.len() - 1),
            MapDescriptor::Derived { description } => f.write_str(description),
        }
    }
}

impl AnalyticMap {
    pub fn from_kind(kind: MapKind, descriptor: MapDescriptor) -> Self {
        AnalyticMap {
            kind: Arc::new(kind),
            descriptor: Arc::new(descriptor),
        }
    }

    pub fn closed_form(form: ClosedForm, catalog: &str, params: BTreeMap<String, ParamValue>) -> Self {
        Self::from_kind(
            MapKind::ClosedForm(form),
            MapDescriptor::Catalog {
                catalog: catalog.to_string(),
                params,
            },
        )
    }

    /// Parses and compiles an expression in `z`.
    pub fn expression(src: &str, params: BTreeMap<String, Complex>) -> Result<Self> {
        let compiled = CompiledExpr::parse(src, params)?;
        let descriptor = MapDescriptor::Expression {
            expr: src.trim().to_string(),
            params: compiled
                .params()
                .iter()
                .map(|(k, v)| (k.clone(), ParamValue::from_complex(*v)))
                .collect(),
        };
        Ok(Self::from_kind(MapKind::Expression(compiled), descriptor))
    }

    pub fn series(series: PowerSeries) -> Self {
        let descriptor = MapDescriptor::Series {
            coeffs: series.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        };
        Self::from_kind(MapKind::Series(series), descriptor)
    }

    pub fn constant(c: Complex) -> Self {
        let mut params = BTreeMap::new();
        params.insert("c".into(), ParamValue::from_complex(c));
        Self::closed_form(ClosedForm::Constant(c), "const", params)
    }

    pub fn identity() -> Self {
        Self::closed_form(ClosedForm::Identity, "identity", BTreeMap::new())
    }

    pub fn monomial(power: u32) -> Self {
        let mut params = BTreeMap::new();
        params.insert("j".into(), ParamValue::Real(power as f64));
        Self::closed_form(ClosedForm::Monomial(power), "monomial", params)
    }

    pub fn dilation(s: Complex) -> Self {
        let mut params = BTreeMap::new();
        params.insert("s".into(), ParamValue::from_complex(s));
        Self::closed_form(ClosedForm::Dilation(s), "dilation", params)
    }

    pub fn combination(terms: Vec<(Complex, AnalyticMap)>, description: impl Into<String>) -> Self {
        Self::from_kind(
            MapKind::Combination(terms),
            MapDescriptor::Derived {
                description: description.into(),
            },
        )
    }

    /// `c * self`.
    pub fn scaled(&self, c: Complex) -> Self {
        Self::combination(vec![(c, self.clone())], format!("({c})*({self})"))
    }

    pub fn sum(&self, other: &AnalyticMap) -> Self {
        let one = Complex::new(1.0, 0.0);
        Self::combination(
            vec![(one, self.clone()), (one, other.clone())],
            format!("({self}) + ({other})"),
        )
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn descriptor(&self) -> &MapDescriptor {
        &self.descriptor
    }

    /// Returns the closed form backing this map, if any.
    pub fn as_closed_form(&self) -> Option<&ClosedForm> {
        match &*self.kind {
            MapKind::ClosedForm(c) => Some(c),
            _ => None,
        }
    }

    /// Taylor coefficients of the map at `z` up to `order`.
    pub fn jet(&self, z: Complex, order: usize) -> Result<Jet> {
        self.jet_with_limit(z, order, DEFAULT_MAX_JET_ORDER)
    }

    pub fn jet_with_limit(&self, z: Complex, order: usize, max_order: usize) -> Result<Jet> {
        if order > max_order {
            return Err(Error::OrderTooLarge {
                requested: order,
                max: max_order,
            });
        }
        if !(z.norm() <= MAX_MODULUS) {
            return Err(Error::Domain(format!("point {z} is outside the working disk")));
        }
        self.jet_raw(z, order)
    }

    /// `f(z)`; the same code path as `jet(z, 0)`.
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        Ok(self.jet(z, 0)?.value())
    }

    /// Jet without the public order cap or disk check; used by compositions.
    pub(crate) fn jet_raw(&self, z: Complex, order: usize) -> Result<Jet> {
        if order > INTERNAL_MAX_ORDER {
            return Err(Error::OrderTooLarge {
                requested: order,
                max: INTERNAL_MAX_ORDER,
            });
        }
        match &*self.kind {
            MapKind::ClosedForm(c) => c.jet(z, order),
            MapKind::Expression(e) => e.eval_jet(&Jet::variable(z, order)),
            MapKind::Series(s) => s.jet(z, order),
            MapKind::Combination(terms) => {
                let mut acc = Jet::constant(z, Complex::new(0.0, 0.0), order);
                for (c, f) in terms {
                    acc = &acc + &f.jet_raw(z, order)?.scale(*c);
                }
                Ok(acc)
            }
            MapKind::WeightedComposition {
                weight,
                inner,
                outer,
                derivative,
            } => {
                let phi = inner.jet_raw(z, order)?;
                let w0 = phi.value();
                if !(w0.norm() < 1.0) {
                    return Err(Error::SelfMapViolation {
                        max_modulus: w0.norm(),
                    });
                }
                let f = outer.jet_raw(w0, derivative + order)?.differentiate(*derivative)?;
                let u = weight.jet_raw(z, order)?;
                Ok(&u * &phi.compose(f.coeffs()))
            }
        }
    }
}
