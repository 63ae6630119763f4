//! JSON report model.

use std::collections::BTreeMap;

use mbdfl_core::diagnose::{DiagnoseError, DiagnosisReport, ErrorClass};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub program: String,
    pub tests: String,
    pub config: ConfigSection,
    pub failing_tests: Vec<String>,
    /// One section per strategy run, keyed by strategy name.
    #[serde(flatten)]
    pub sections: BTreeMap<String, Section>,
}

#[derive(Debug, Serialize)]
pub struct ConfigSection {
    pub unwind: u32,
    pub width: u32,
    pub io_multiplier: u64,
    pub refine: bool,
    pub unwind_assert: bool,
    pub mcs_limit: Option<u64>,
    pub product_cap: u64,
    pub conflict_budget: Option<u64>,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Section {
    Ok(StrategySection),
    Failed(FailedSection),
}

#[derive(Debug, Serialize)]
pub struct StrategySection {
    pub strategy: String,
    pub diagnoses: Vec<DiagnosisJson>,
    pub optimum_cost: u64,
    pub cost_scale: u64,
    pub unique_aggregated_count: usize,
    pub per_test_counts: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub stats: StatsJson,
}

#[derive(Debug, Serialize)]
pub struct FailedSection {
    pub strategy: String,
    pub error: ErrorJson,
}

#[derive(Debug, Serialize)]
pub struct ErrorJson {
    pub class: &'static str,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct DiagnosisJson {
    pub lines: Vec<u32>,
    pub cost: u64,
    pub components: Vec<ComponentJson>,
}

#[derive(Debug, Serialize)]
pub struct ComponentJson {
    pub id: usize,
    pub healthy_var: String,
    pub line: u32,
    pub kind: String,
    pub function: String,
    pub weight: u64,
}

#[derive(Debug, Serialize)]
pub struct StatsJson {
    pub vars: usize,
    pub clauses: usize,
    pub soft_clauses: usize,
    pub sat_calls: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
}

pub fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::Localization => "localization",
        ErrorClass::Resource => "resource",
        ErrorClass::Input => "input",
    }
}

impl Section {
    pub fn failed(strategy: &str, e: &DiagnoseError) -> Section {
        Section::Failed(FailedSection {
            strategy: strategy.to_string(),
            error: ErrorJson {
                class: class_name(e.class()),
                message: e.to_string(),
            },
        })
    }

    pub fn from_report(r: &DiagnosisReport, timings: bool) -> Section {
        let diagnoses = r
            .diagnoses
            .iter()
            .map(|d| DiagnosisJson {
                lines: d.lines.iter().copied().collect(),
                cost: d.cost,
                components: d
                    .components
                    .iter()
                    .map(|&c| {
                        let c = r.table.get(c);
                        ComponentJson {
                            id: c.id,
                            healthy_var: c.healthy_var.clone(),
                            line: c.line,
                            kind: c.kind.to_string(),
                            function: c.function.clone(),
                            weight: c.weight,
                        }
                    })
                    .collect(),
            })
            .collect();
        let s = &r.stats;
        Section::Ok(StrategySection {
            strategy: r.strategy.name().to_string(),
            diagnoses,
            optimum_cost: r.optimum_cost,
            cost_scale: r.cost_scale,
            unique_aggregated_count: r.unique_aggregated_count,
            per_test_counts: r.per_test_counts.clone(),
            wall_time_ms: timings.then_some(r.wall_time.as_secs_f64() * 1000.0),
            stats: StatsJson {
                vars: s.vars,
                clauses: s.clauses,
                soft_clauses: s.soft_clauses,
                sat_calls: s.solver.solves,
                decisions: s.solver.decisions,
                propagations: s.solver.propagations,
                conflicts: s.solver.conflicts,
                restarts: s.solver.restarts,
            },
        })
    }
}

/// One line per diagnosis: strategy, cost and lines.
pub fn summary(report: &Report) -> String {
    let mut out = String::new();
    for (name, section) in &report.sections {
        match section {
            Section::Ok(s) if s.diagnoses.is_empty() => out.push_str(&format!("{name:<16} -     (no diagnosis)\n")),
            Section::Ok(s) => {
                for d in &s.diagnoses {
                    let lines: Vec<String> = d.lines.iter().map(u32::to_string).collect();
                    out.push_str(&format!("{name:<16} {:<5} lines {}\n", d.cost, lines.join(", ")));
                }
            }
            Section::Failed(f) => out.push_str(&format!("{name:<16} error {}\n", f.error.message)),
        }
    }
    out
}
