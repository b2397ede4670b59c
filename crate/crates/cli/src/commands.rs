//! The five subcommands.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use zygops_core::characterize::{
    analyze, monomial_trend, weighted_type_analyze, AnalysisConfig, AnalysisReport, Boundedness, Compactness,
    MonomialTrend, Route, WeightedTypeReport,
};
use zygops_core::operator::{monomial_sequence, MonomialSequence, OperatorSpec, SpacePair};
use zygops_core::AnalyticMap;

use crate::catalog::{build_map, parameter_names, with_parameter, Defaults};
use crate::config::{MapSpec, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{num, to_json, write_atomic, write_report, Clock, Table};
use crate::verify::{run_suites, Check, SuiteError};

pub const DEFAULT_OUT_DIR: &str = "zygops-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Sweep,
    Verify,
    Monomials,
    WeightedType,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
            Command::Monomials => "monomials",
            Command::WeightedType => "weighted-type",
        }
    }
}

/// What a command produced, for the caller to print.
#[derive(Debug)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub report: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorEcho {
    pub u: String,
    pub phi: String,
    pub n: usize,
}

struct Built {
    op: OperatorSpec,
    echo: OperatorEcho,
}

fn build_operator(u: &MapSpec, phi: &MapSpec, n: usize, alpha: Option<f64>, config: &AnalysisConfig) -> CliResult<Built> {
    let defaults = Defaults { alpha, n };
    let u: AnalyticMap = build_map(u, defaults)?;
    let phi: AnalyticMap = build_map(phi, defaults)?;
    let echo = OperatorEcho {
        u: u.to_string(),
        phi: phi.to_string(),
        n,
    };
    Ok(Built {
        op: OperatorSpec::new(u, phi, n, &config.grid)?,
        echo,
    })
}

fn out_dir(config: &RunConfig) -> PathBuf {
    config.output.dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

pub fn run(command: Command, config: &RunConfig) -> CliResult<Outcome> {
    match command {
        Command::Analyze => cmd_analyze(config),
        Command::Sweep => cmd_sweep(config),
        Command::Verify => cmd_verify(config),
        Command::Monomials => cmd_monomials(config),
        Command::WeightedType => cmd_weighted(config),
    }
}

#[derive(Debug, Serialize)]
pub struct AnalysisPayload {
    pub kind: &'static str,
    pub operator: OperatorEcho,
    pub analysis: AnalysisReport,
}

pub const PROFILE_HEADER: [&str; 4] = ["quantity", "level", "radius_or_eps", "value"];
pub const MONOMIAL_HEADER: [&str; 2] = ["j", "value"];

fn write_profiles(dir: &Path, report: &AnalysisReport) -> CliResult<()> {
    let mut t = Table::new(&PROFILE_HEADER)?;
    let b = &report.boundedness;
    for q in &b.quantities {
        for (k, l) in q.estimate.per_level.iter().enumerate() {
            t.row([format!("{}_sup", q.which.id()), k.to_string(), num(Some(l.radius)), num(Some(l.sup))])?;
        }
    }
    for f in &b.families {
        for (m, l) in f.levels.iter().enumerate() {
            t.row([format!("{}_family", f.family.id()), (m + 1).to_string(), num(Some(l.param)), num(l.sup)])?;
        }
    }
    if let Some(c) = &report.compactness {
        for q in &c.essential.quantities {
            for (m, l) in q.profile.levels.iter().enumerate() {
                t.row([format!("{}_limsup", q.name), (m + 1).to_string(), num(Some(l.param)), num(l.sup)])?;
            }
        }
    }
    t.write(&dir.join("profiles.csv"))?;

    write_monomials_csv(dir, &b.monomials)?;

    let mut a = Table::new(&["row", "column", "agree"])?;
    for (i, row) in b.agreement.agree.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            a.row([b.agreement.labels[i].as_str(), b.agreement.labels[j].as_str(), if *v { "true" } else { "false" }])?;
        }
    }
    a.write(&dir.join("agreement.csv"))
}

fn write_monomials_csv(dir: &Path, seq: &MonomialSequence) -> CliResult<()> {
    let mut t = Table::new(&MONOMIAL_HEADER)?;
    for term in &seq.terms {
        t.row([term.j.to_string(), num(Some(term.value))])?;
    }
    t.write(&dir.join("monomials.csv"))
}

fn verdict_lines(report: &AnalysisReport) -> Vec<String> {
    let b = &report.boundedness;
    let mut lines = vec![
        format!("route: {:?}", b.route),
        format!("boundedness: {:?}", b.verdict),
    ];
    match &report.compactness {
        Some(c) => {
            lines.push(format!("compactness: {:?}", c.verdict));
            lines.push(format!("essential norm estimate: {:?}", c.essential.estimate));
        }
        None => {
            if let Some(note) = &report.note {
                lines.push(format!("note: {note}"));
            }
        }
    }
    lines
}

fn cmd_analyze(config: &RunConfig) -> CliResult<Outcome> {
    let mut clock = Clock::start();
    let op_block = config.operator()?;
    let pair = SpacePair::new(config.alpha()?, config.beta()?)?;
    let acfg = config.analysis_config()?;
    let built = build_operator(&op_block.u, &op_block.phi, op_block.n, Some(pair.alpha), &acfg)?;
    clock.lap("setup");
    let analysis = analyze(&built.op, &pair, &acfg)?;
    clock.lap("analysis");
    let dir = out_dir(config);
    write_profiles(&dir, &analysis)?;
    let lines = verdict_lines(&analysis);
    let unbounded = analysis.compactness.is_none();
    let payload = AnalysisPayload {
        kind: "analysis",
        operator: built.echo,
        analysis,
    };
    let report = write_report(&dir, Command::Analyze.name(), config, &payload, clock)?;
    if unbounded && config.analysis.require_bounded {
        return Err(CliError::Analysis(format!(
            "operator is not bounded (report in {})",
            report.display()
        )));
    }
    Ok(Outcome { lines, report })
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub params: BTreeMap<String, f64>,
    pub route: Route,
    pub boundedness: Boundedness,
    pub compactness: Option<Compactness>,
    /// `max{A, B, C}` over the route's quantities (sup mode).
    pub quantity_sup: f64,
    pub essential_norm: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepPayload {
    pub kind: &'static str,
    pub u: MapSpec,
    pub phi: MapSpec,
    pub n: usize,
    pub rows: Vec<SweepRow>,
}

/// Cartesian product in the order alpha, beta, then parameters by name.
fn sweep_cells(config: &RunConfig) -> CliResult<Vec<(f64, f64, BTreeMap<String, f64>)>> {
    let s = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("sweep needs a [sweep] block"))?;
    if s.alpha.is_none() && s.beta.is_none() && s.params.is_empty() {
        return Err(CliError::config("[sweep] has no ranges"));
    }
    let alphas = match &s.alpha {
        Some(v) => v.clone(),
        None => vec![config.alpha()?],
    };
    let betas = match &s.beta {
        Some(v) => v.clone(),
        None => vec![config.beta()?],
    };
    let mut cells = Vec::new();
    for &a in &alphas {
        for &b in &betas {
            let mut partial: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new()];
            for (name, values) in &s.params {
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        values.iter().map(move |&v| {
                            let mut p = p.clone();
                            p.insert(name.clone(), v);
                            p
                        })
                    })
                    .collect();
            }
            cells.extend(partial.into_iter().map(|p| (a, b, p)));
        }
    }
    Ok(cells)
}

fn cmd_sweep(config: &RunConfig) -> CliResult<Outcome> {
    let mut clock = Clock::start();
    let op_block = config.operator()?;
    let cells = sweep_cells(config)?;
    let acfg = config.analysis_config()?;
    let sweep = config.sweep.as_ref().expect("checked by sweep_cells");
    let u_names = parameter_names(&op_block.u)?;
    let phi_names = parameter_names(&op_block.phi)?;
    for name in sweep.params.keys() {
        if !u_names.contains(name) && !phi_names.contains(name) {
            return Err(CliError::config(format!("sweep parameter `{name}` is not used by u or phi")));
        }
    }
    clock.lap("setup");
    let mut rows = Vec::with_capacity(cells.len());
    for (alpha, beta, params) in cells {
        let mut u = op_block.u.clone();
        let mut phi = op_block.phi.clone();
        for (name, &v) in &params {
            if u_names.contains(name) {
                u = with_parameter(&u, name, v);
            }
            if phi_names.contains(name) {
                phi = with_parameter(&phi, name, v);
            }
        }
        let pair = SpacePair::new(alpha, beta)?;
        let built = build_operator(&u, &phi, op_block.n, Some(alpha), &acfg)?;
        let rep = analyze(&built.op, &pair, &acfg)?;
        let b = &rep.boundedness;
        rows.push(SweepRow {
            alpha,
            beta,
            params,
            route: b.route,
            boundedness: b.verdict,
            compactness: rep.compactness.as_ref().map(|c| c.verdict),
            quantity_sup: b
                .criterion(zygops_core::characterize::Criterion::Quantities)
                .map(|c| c.value)
                .unwrap_or(f64::NAN),
            essential_norm: rep.compactness.as_ref().map(|c| c.essential.estimate),
        });
    }
    clock.lap("sweep");
    let dir = out_dir(config);
    let names: Vec<&String> = sweep.params.keys().collect();
    let mut header = vec!["alpha".to_string(), "beta".to_string()];
    header.extend(names.iter().map(|n| n.to_string()));
    header.extend(
        ["route", "boundedness", "compactness", "quantity_sup", "essential_norm"]
            .iter()
            .map(|s| s.to_string()),
    );
    let mut t = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>())?;
    let mut lines = Vec::new();
    for r in &rows {
        let mut fields = vec![num(Some(r.alpha)), num(Some(r.beta))];
        fields.extend(names.iter().map(|n| num(r.params.get(*n).copied())));
        fields.push(format!("{:?}", r.route));
        fields.push(format!("{:?}", r.boundedness));
        fields.push(r.compactness.map(|c| format!("{c:?}")).unwrap_or_default());
        fields.push(num(Some(r.quantity_sup)));
        fields.push(num(r.essential_norm));
        lines.push(fields.join(" "));
        t.row(fields)?;
    }
    t.write(&dir.join("sweep.csv"))?;
    let payload = SweepPayload {
        kind: "sweep",
        u: op_block.u.clone(),
        phi: op_block.phi.clone(),
        n: op_block.n,
        rows,
    };
    let report = write_report(&dir, Command::Sweep.name(), config, &payload, clock)?;
    Ok(Outcome { lines, report })
}

#[derive(Debug, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Serialize)]
pub struct VerifyPayload {
    pub kind: &'static str,
    pub suites: Vec<SuiteSummary>,
    pub all_passed: bool,
    pub checks: Vec<Check>,
}

fn cmd_verify(config: &RunConfig) -> CliResult<Outcome> {
    let mut clock = Clock::start();
    let names = config.verify.as_ref().map(|v| v.suites.clone()).unwrap_or_default();
    let acfg = config.analysis_config()?;
    let checks = run_suites(&names, &acfg).map_err(|e| match e {
        SuiteError::Unknown(s) => CliError::config(format!("unknown verify suite `{s}`")),
        SuiteError::Core(e) => CliError::Core(e),
    })?;
    clock.lap("suites");
    let mut suites: Vec<SuiteSummary> = Vec::new();
    for c in &checks {
        match suites.iter_mut().find(|s| s.suite == c.suite) {
            Some(s) => {
                if c.passed {
                    s.passed += 1
                } else {
                    s.failed += 1
                }
            }
            None => suites.push(SuiteSummary {
                suite: c.suite.clone(),
                passed: c.passed as usize,
                failed: (!c.passed) as usize,
            }),
        }
    }
    let mut jsonl = Vec::new();
    let mut lines = Vec::new();
    for c in &checks {
        let line = serde_json::to_string(c)?;
        jsonl.extend_from_slice(line.as_bytes());
        jsonl.push(b'\n');
        lines.push(line);
    }
    let dir = out_dir(config);
    write_atomic(&dir.join("verify.jsonl"), &jsonl)?;
    let all_passed = checks.iter().all(|c| c.passed);
    let failed: Vec<String> = suites.iter().filter(|s| s.failed > 0).map(|s| s.suite.clone()).collect();
    let payload = VerifyPayload {
        kind: "verify",
        suites,
        all_passed,
        checks,
    };
    let report = write_report(&dir, Command::Verify.name(), config, &payload, clock)?;
    if !all_passed {
        for l in &lines {
            println!("{l}");
        }
        return Err(CliError::Analysis(format!("failing suites: {}", failed.join(", "))));
    }
    Ok(Outcome { lines, report })
}

#[derive(Debug, Serialize)]
pub struct MonomialPayload {
    pub kind: &'static str,
    pub operator: OperatorEcho,
    pub pair: SpacePair,
    pub sequence: MonomialSequence,
    pub trend: MonomialTrend,
}

fn cmd_monomials(config: &RunConfig) -> CliResult<Outcome> {
    let mut clock = Clock::start();
    let op_block = config.operator()?;
    let pair = SpacePair::new(config.alpha()?, config.beta()?)?;
    let acfg = config.analysis_config()?;
    let built = build_operator(&op_block.u, &op_block.phi, op_block.n, Some(pair.alpha), &acfg)?;
    clock.lap("setup");
    let sequence = monomial_sequence(&built.op, &pair, acfg.monomial_count, &acfg.grid)?;
    let trend = monomial_trend(&sequence);
    clock.lap("monomials");
    let dir = out_dir(config);
    write_monomials_csv(&dir, &sequence)?;
    let lines = vec![
        format!("sup: {:?} at j = {}", sequence.sup, sequence.argmax_j),
        format!("trend: {:?}", trend.verdict),
    ];
    let payload = MonomialPayload {
        kind: "monomials",
        operator: built.echo,
        pair,
        sequence,
        trend,
    };
    let report = write_report(&dir, Command::Monomials.name(), config, &payload, clock)?;
    Ok(Outcome { lines, report })
}

#[derive(Debug, Serialize)]
pub struct WeightedPayload {
    pub kind: &'static str,
    pub u: String,
    pub phi: String,
    pub report: WeightedTypeReport,
}

fn cmd_weighted(config: &RunConfig) -> CliResult<Outcome> {
    let mut clock = Clock::start();
    let op_block = config.operator()?;
    let w = config
        .weighted
        .as_ref()
        .ok_or_else(|| CliError::config("weighted-type needs a [weighted] block"))?;
    let (nu, omega) = (w.nu.resolve()?, w.omega.resolve()?);
    let wcfg = config.weighted_config(w.max_power)?;
    let defaults = Defaults {
        alpha: config.spaces.alpha,
        n: op_block.n,
    };
    let u = build_map(&op_block.u, defaults)?;
    let phi = build_map(&op_block.phi, defaults)?;
    clock.lap("setup");
    let report = weighted_type_analyze(&u, &phi, &nu, &omega, &wcfg)?;
    clock.lap("weighted");
    let dir = out_dir(config);
    let mut t = Table::new(&["n", "ratio"])?;
    for term in &report.terms {
        t.row([term.n.to_string(), num(Some(term.ratio))])?;
    }
    t.write(&dir.join("weighted_terms.csv"))?;
    let lines = vec![
        format!("monomial sup: {:?}", report.monomial_sup),
        format!("sup side: {:?}", report.sup_side.value),
        format!("monomial limsup: {:?}", report.monomial_limsup.estimate),
        format!("boundary limsup: {:?}", report.boundary_limsup.estimate),
    ];
    let payload = WeightedPayload {
        kind: "weighted_type",
        u: u.to_string(),
        phi: phi.to_string(),
        report,
    };
    let path = write_report(&dir, Command::WeightedType.name(), config, &payload, clock)?;
    Ok(Outcome { lines, report: path })
}

/// Serialized payload bytes, as written to `payload.json`.
pub fn payload_bytes<P: Serialize>(payload: &P) -> CliResult<Vec<u8>> {
    to_json(payload)
}
