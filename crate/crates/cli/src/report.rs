//! The JSON document printed on standard output.

use std::time::Duration;

use psdparam::definiteness::{Decision, Stage};
use psdparam::hessian::ConvexityReport;
use psdparam::{Certificate, Goal, IntervalMatrix, Method, Property, Status, Tolerance};
use serde::Serialize;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub version: u32,
    pub command: &'static str,
    pub goal: Goal,
    pub status: Status,
    pub method: Method,
    pub property: Property,
    pub certificate: Certificate,
    pub marginal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub settings: Settings,
    pub stages: Vec<StageReport>,
    pub timings_ms: Timings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convexity: Option<ConvexityDiagnostics>,
}

#[derive(Debug, Serialize)]
pub struct Settings {
    pub tolerance_policy: TolerancePolicy,
    /// The resolved problem-wide tolerance.
    pub tolerance: f64,
    pub vertex_budget: u64,
    pub seed: u64,
    pub method_choice: &'static str,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum TolerancePolicy {
    Scaled(f64),
    Fixed(f64),
}

impl From<Tolerance> for TolerancePolicy {
    fn from(t: Tolerance) -> Self {
        match t {
            Tolerance::Scaled(c) => TolerancePolicy::Scaled(c),
            Tolerance::Fixed(v) => TolerancePolicy::Fixed(v),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StageReport {
    pub method: Method,
    pub status: Status,
    pub elapsed_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total: f64,
}

#[derive(Debug, Serialize)]
pub struct ConvexityDiagnostics {
    pub n: usize,
    pub relaxation: IntervalMatrix,
    /// `null` when the dimension is too large for the sign-vertex check.
    pub relaxation_strong_psd: Option<bool>,
    pub hertz_min_eig: Option<f64>,
    pub rohn_bound: f64,
}

impl From<&ConvexityReport> for ConvexityDiagnostics {
    fn from(r: &ConvexityReport) -> Self {
        Self {
            n: r.hessian.n(),
            relaxation: r.relaxation.clone(),
            relaxation_strong_psd: r.relaxation_strong_psd,
            hertz_min_eig: r.hertz_min_eig,
            rohn_bound: r.rohn_bound,
        }
    }
}

pub fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn stage(s: &Stage) -> StageReport {
    StageReport {
        method: s.method,
        status: s.status,
        elapsed_ms: millis(s.elapsed),
    }
}

impl RunReport {
    pub fn new(command: &'static str, goal: Goal, decision: Decision, settings: Settings, total: Duration) -> Self {
        let v = decision.verdict;
        Self {
            version: REPORT_VERSION,
            command,
            goal,
            status: v.status,
            method: v.method,
            property: v.property,
            certificate: v.certificate,
            marginal: v.marginal,
            note: v.note,
            settings,
            stages: decision.stages.iter().map(stage).collect(),
            timings_ms: Timings { total: millis(total) },
            convexity: None,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Proved => 0,
            Status::Disproved => 1,
            Status::Unknown => 2,
        }
    }

    /// One-line human summary for standard error.
    pub fn summary(&self) -> String {
        let mut line = format!(
            "{}: {} by {} (tau = {:.3e})",
            self.goal, self.status, self.method, self.settings.tolerance
        );
        if self.marginal {
            line.push_str(", marginal");
        }
        if let Some(c) = &self.convexity {
            if let Some(h) = c.hertz_min_eig {
                line.push_str(&format!("; relaxation min eig {h:.4}"));
            }
        }
        if let Some(note) = &self.note {
            line.push_str(&format!("; {note}"));
        }
        line
    }
}
