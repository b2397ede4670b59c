//! Run configuration: a TOML file plus `--set key=value` overrides.
//!
//! The grammar is documented in `docs/config.md`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zygops_core::characterize::{AnalysisConfig, WeightedTypeConfig};
use zygops_core::spaces::{DiskGrid, Weight};
use zygops_core::ParamValue;

use crate::error::{CliError, CliResult};

pub const MAX_K: usize = 20;
pub const MAX_ANGLES: usize = 4096;
pub const MAX_MONOMIALS: usize = 2000;
pub const MAX_EPS_LEVELS: usize = 40;
pub const MAX_A_LEVELS: usize = 30;
pub const MAX_A_ANGLES: usize = 1024;
pub const MAX_WEIGHTED_POWER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub operator: Option<OperatorBlock>,
    #[serde(default)]
    pub spaces: SpacesBlock,
    #[serde(default)]
    pub grid: GridBlock,
    #[serde(default)]
    pub analysis: AnalysisBlock,
    pub sweep: Option<SweepBlock>,
    pub weighted: Option<WeightedBlock>,
    pub verify: Option<VerifyBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorBlock {
    pub u: MapSpec,
    pub phi: MapSpec,
    pub n: usize,
}

/// A function given as an expression string, or as a table naming an
/// expression or catalog entry together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Expr(String),
    Table(MapTable),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, ParamValue>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacesBlock {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridBlock {
    pub k_max: usize,
    pub m: usize,
    pub eps_levels: usize,
    pub j: usize,
    pub a_levels: usize,
    pub a_angles: usize,
    pub compact_tolerance: f64,
}

impl Default for GridBlock {
    fn default() -> Self {
        let a = AnalysisConfig::default();
        GridBlock {
            k_max: a.grid.k_max(),
            m: a.grid.angles(),
            eps_levels: a.eps_levels,
            j: a.monomial_count,
            a_levels: a.a_levels,
            a_angles: a.a_angles,
            compact_tolerance: a.compact_tolerance,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisBlock {
    /// Exit with the analysis-failure code when the operator is not bounded.
    #[serde(default)]
    pub require_bounded: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub alpha: Option<Vec<f64>>,
    pub beta: Option<Vec<f64>>,
    /// Values for named parameters of `u` and `phi`.
    #[serde(default)]
    pub params: BTreeMap<String, Vec<f64>>,
}

/// A standard weight given by its exponent, or `"log"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Alpha(f64),
    Named(String),
}

impl WeightSpec {
    pub fn resolve(&self) -> CliResult<Weight> {
        match self {
            WeightSpec::Alpha(a) => {
                Weight::standard(*a).map_err(|e| CliError::config(format!("weighted: {e}")))
            }
            WeightSpec::Named(s) if s == "log" => Ok(Weight::Logarithmic),
            WeightSpec::Named(s) => Err(CliError::config(format!(
                "weighted: unknown weight `{s}` (use a positive exponent or \"log\")"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedBlock {
    pub nu: WeightSpec,
    pub omega: WeightSpec,
    #[serde(default = "default_max_power")]
    pub max_power: usize,
}

fn default_max_power() -> usize {
    WeightedTypeConfig::default().max_power
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    /// Suite names; empty means all.
    #[serde(default)]
    pub suites: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: Option<PathBuf>,
}

impl RunConfig {
    /// Reads `path`, applies `overrides` (`key.path=value`) and validates.
    pub fn load(path: &Path, overrides: &[String]) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn from_toml_str(text: &str, overrides: &[String]) -> CliResult<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let config: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> CliResult<()> {
        let g = &self.grid;
        check_range("grid.k_max", g.k_max, 1, MAX_K)?;
        check_range("grid.m", g.m, 1, MAX_ANGLES)?;
        check_range("grid.j", g.j, 1, MAX_MONOMIALS)?;
        check_range("grid.eps_levels", g.eps_levels, 1, MAX_EPS_LEVELS)?;
        check_range("grid.a_levels", g.a_levels, 1, MAX_A_LEVELS)?;
        check_range("grid.a_angles", g.a_angles, 1, MAX_A_ANGLES)?;
        if !(g.compact_tolerance > 0.0 && g.compact_tolerance.is_finite()) {
            return Err(CliError::config("grid.compact_tolerance must be positive"));
        }
        check_positive("spaces.alpha", self.spaces.alpha)?;
        check_positive("spaces.beta", self.spaces.beta)?;
        if let Some(op) = &self.operator {
            for (name, spec) in [("u", &op.u), ("phi", &op.phi)] {
                if let MapSpec::Table(t) = spec {
                    if t.expr.is_some() == t.catalog.is_some() {
                        return Err(CliError::config(format!(
                            "operator.{name}: give exactly one of `expr` or `catalog`"
                        )));
                    }
                }
            }
        }
        if let Some(s) = &self.sweep {
            for (name, list) in [("alpha", &s.alpha), ("beta", &s.beta)] {
                if let Some(v) = list {
                    if v.is_empty() {
                        return Err(CliError::config(format!("sweep.{name} is empty")));
                    }
                    for &x in v {
                        check_positive(&format!("sweep.{name}"), Some(x))?;
                    }
                }
            }
            for (name, v) in &s.params {
                if v.is_empty() {
                    return Err(CliError::config(format!("sweep.params.{name} is empty")));
                }
            }
        }
        if let Some(w) = &self.weighted {
            check_range("weighted.max_power", w.max_power, 1, MAX_WEIGHTED_POWER)?;
            w.nu.resolve()?;
            w.omega.resolve()?;
        }
        Ok(())
    }

    pub fn operator(&self) -> CliResult<&OperatorBlock> {
        self.operator
            .as_ref()
            .ok_or_else(|| CliError::config("missing [operator] block"))
    }

    pub fn alpha(&self) -> CliResult<f64> {
        self.spaces.alpha.ok_or_else(|| CliError::config("missing spaces.alpha"))
    }

    pub fn beta(&self) -> CliResult<f64> {
        self.spaces.beta.ok_or_else(|| CliError::config("missing spaces.beta"))
    }

    pub fn disk_grid(&self) -> CliResult<DiskGrid> {
        Ok(DiskGrid::new(self.grid.k_max, self.grid.m)?)
    }

    pub fn analysis_config(&self) -> CliResult<AnalysisConfig> {
        Ok(AnalysisConfig {
            grid: self.disk_grid()?,
            eps_levels: self.grid.eps_levels,
            monomial_count: self.grid.j,
            a_levels: self.grid.a_levels,
            a_angles: self.grid.a_angles,
            compact_tolerance: self.grid.compact_tolerance,
        })
    }

    pub fn weighted_config(&self, max_power: usize) -> CliResult<WeightedTypeConfig> {
        Ok(WeightedTypeConfig {
            grid: self.disk_grid()?,
            max_power,
            eps_levels: self.grid.eps_levels,
            compact_tolerance: self.grid.compact_tolerance,
        })
    }
}

fn check_range(name: &str, v: usize, lo: usize, hi: usize) -> CliResult<()> {
    if v < lo || v > hi {
        return Err(CliError::config(format!("{name} = {v} is outside [{lo}, {hi}]")));
    }
    Ok(())
}

fn check_positive(name: &str, v: Option<f64>) -> CliResult<()> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::config(format!("{name} must be positive, got {x}"))),
        _ => Ok(()),
    }
}

/// `a.b.c=value`; the value is read as a TOML value, or as a bare string
/// if it does not parse.
fn apply_override(table: &mut toml::Table, spec: &str) -> CliResult<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("--set expects key=value, got `{spec}`")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(CliError::config(format!("bad --set key `{key}`")));
    }
    let raw = raw.trim();
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("just parsed"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let (last, parents) = path.split_last().expect("non-empty");
    let mut cur = table;
    for p in parents {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::config(format!("--set {key}: `{p}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[operator]
u = "1"
phi = "z/2"
n = 1

[spaces]
alpha = 0.5
beta = 2.0
"#;

    #[test]
    fn parses_minimal_config() {
        let c = RunConfig::from_toml_str(BASE, &[]).unwrap();
        assert_eq!(c.operator.unwrap().phi, MapSpec::Expr("z/2".into()));
        assert_eq!(c.grid, GridBlock::default());
    }

    #[test]
    fn overrides_apply_before_validation() {
        let c = RunConfig::from_toml_str(BASE, &["grid.k_max=10".into(), "operator.phi=z/3".into()]).unwrap();
        assert_eq!(c.grid.k_max, 10);
        assert_eq!(c.operator.unwrap().phi, MapSpec::Expr("z/3".into()));
        let e = RunConfig::from_toml_str(BASE, &["grid.k_max=21".into()]).unwrap_err();
        assert!(matches!(e, CliError::Config(_)));
    }

    #[test]
    fn rejects_bad_ranges() {
        for o in ["grid.j=0", "grid.m=5000", "grid.j=2001", "spaces.beta=-1"] {
            assert!(RunConfig::from_toml_str(BASE, &[o.into()]).is_err(), "{o}");
        }
    }

    #[test]
    fn catalog_table() {
        let text = format!("{BASE}\n[sweep]\nbeta = [1.0, 2.0]\n");
        let c = RunConfig::from_toml_str(&text, &[]).unwrap();
        assert_eq!(c.sweep.unwrap().beta.unwrap(), vec![1.0, 2.0]);
        let text = r#"
[operator]
u = { catalog = "const", params = { c = [1.0, 0.5] } }
phi = { expr = "s*z", params = { s = 0.5 } }
n = 2
"#;
        let c = RunConfig::from_toml_str(text, &[]).unwrap();
        let op = c.operator.unwrap();
        assert!(matches!(op.u, MapSpec::Table(MapTable { catalog: Some(_), .. })));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml_str(&format!("{BASE}\n[grid]\nkmax = 3\n"), &[]).is_err());
    }
}
