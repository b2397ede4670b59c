//! Builds analytic maps from config entries.

use std::collections::{BTreeMap, BTreeSet};

use zygops_core::function::ClosedForm;
use zygops_core::testfns::{make_family, Family};
use zygops_core::{parse_expression, AnalyticMap, Complex, ParamValue};

use crate::config::{MapSpec, MapTable};
use crate::error::{CliError, CliResult};

/// Catalog ids other than the test families.
pub const BASIC_IDS: [&str; 4] = ["identity", "const", "monomial", "dilation"];

/// Values a catalog entry falls back to when it takes `alpha` or `n` and the
/// entry does not set them.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub alpha: Option<f64>,
    pub n: usize,
}

fn take(params: &mut BTreeMap<String, ParamValue>, key: &str) -> Option<Complex> {
    params.remove(key).map(|v| v.as_complex())
}

fn real(name: &str, key: &str, v: Complex) -> CliResult<f64> {
    if v.im != 0.0 {
        return Err(CliError::config(format!("{name}: `{key}` must be real")));
    }
    Ok(v.re)
}

fn catalog_map(id: &str, params: &BTreeMap<String, ParamValue>, defaults: Defaults) -> CliResult<AnalyticMap> {
    let mut p = params.clone();
    let name = format!("catalog `{id}`");
    let map = match id {
        "identity" => AnalyticMap::identity(),
        "const" => {
            let c = take(&mut p, "c").ok_or_else(|| CliError::config(format!("{name} needs `c`")))?;
            AnalyticMap::closed_form(ClosedForm::Constant(c), id, params.clone())
        }
        "monomial" => {
            let k = take(&mut p, "k").ok_or_else(|| CliError::config(format!("{name} needs `k`")))?;
            let k = real(&name, "k", k)?;
            if k < 0.0 || k.fract() != 0.0 || k > u32::MAX as f64 {
                return Err(CliError::config(format!("{name}: `k` must be a non-negative integer")));
            }
            AnalyticMap::monomial(k as u32)
        }
        "dilation" => {
            let s = take(&mut p, "s").ok_or_else(|| CliError::config(format!("{name} needs `s`")))?;
            AnalyticMap::dilation(s)
        }
        other => {
            let fam: Family = other
                .parse()
                .map_err(|_| CliError::config(format!("unknown catalog id `{other}`")))?;
            let a = take(&mut p, "a").ok_or_else(|| CliError::config(format!("{name} needs `a`")))?;
            let alpha = match take(&mut p, "alpha") {
                Some(v) => real(&name, "alpha", v)?,
                None if fam.is_log_case() => 1.0,
                None => defaults
                    .alpha
                    .ok_or_else(|| CliError::config(format!("{name} needs `alpha` or spaces.alpha")))?,
            };
            let n = match take(&mut p, "n") {
                Some(v) => {
                    let v = real(&name, "n", v)?;
                    if v < 0.0 || v.fract() != 0.0 {
                        return Err(CliError::config(format!("{name}: `n` must be a non-negative integer")));
                    }
                    v as usize
                }
                None => defaults.n,
            };
            make_family(fam, a, alpha, n)?
        }
    };
    if let Some(extra) = p.keys().next() {
        return Err(CliError::config(format!("{name} does not take `{extra}`")));
    }
    Ok(map)
}

pub fn build_map(spec: &MapSpec, defaults: Defaults) -> CliResult<AnalyticMap> {
    match spec {
        MapSpec::Expr(src) => Ok(AnalyticMap::expression(src, BTreeMap::new())?),
        MapSpec::Table(MapTable { expr: Some(src), params, .. }) => {
            let params = params.iter().map(|(k, v)| (k.clone(), v.as_complex())).collect();
            Ok(AnalyticMap::expression(src, params)?)
        }
        MapSpec::Table(MapTable { catalog: Some(id), params, .. }) => catalog_map(id, params, defaults),
        MapSpec::Table(_) => Err(CliError::config("map needs `expr` or `catalog`")),
    }
}

/// Parameter names a spec refers to: declared ones, plus those used in an
/// expression.
pub fn parameter_names(spec: &MapSpec) -> CliResult<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    let src = match spec {
        MapSpec::Expr(src) => Some(src),
        MapSpec::Table(t) => {
            out.extend(t.params.keys().cloned());
            t.expr.as_ref()
        }
    };
    if let Some(src) = src {
        out.extend(parse_expression(src)?.parameters());
    }
    Ok(out)
}

/// `spec` with `name` set to `value` (turns a bare expression into a table).
pub fn with_parameter(spec: &MapSpec, name: &str, value: f64) -> MapSpec {
    let mut table = match spec {
        MapSpec::Expr(src) => MapTable {
            expr: Some(src.clone()),
            catalog: None,
            params: BTreeMap::new(),
        },
        MapSpec::Table(t) => t.clone(),
    };
    table.params.insert(name.to_string(), ParamValue::Real(value));
    MapSpec::Table(table)
}
