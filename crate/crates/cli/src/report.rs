use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::{ModelSpec, SampleConfig};

pub const SCHEMA: &str = "djet-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The component where a discrepancy came closest to, or furthest past, its
/// tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Worst {
    pub component: String,
    pub point: usize,
    pub generic: f64,
    pub closed_form: f64,
    /// `|Δ| / max(abs, rel·max(|a|, |b|))`; above 1 fails.
    pub ratio: f64,
}

/// Generic against closed form, folded over one object family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub max_abs: f64,
    /// Over components whose magnitude exceeds the absolute tolerance.
    pub max_rel: f64,
    pub worst: Worst,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub max_residual: f64,
    pub worst_point: usize,
    pub tolerance: f64,
    pub points: usize,
    pub pass: bool,
}

/// Build facts only, so that reports from the same binary are identical.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub arch: &'static str,
    pub os: &'static str,
    pub float: &'static str,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            tool: "djet",
            version: env!("CARGO_PKG_VERSION"),
            arch: std::env::consts::ARCH,
            os: std::env::consts::OS,
            float: "IEEE 754 binary64",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub model: ModelSpec,
    pub config: SampleConfig,
    pub metadata: Metadata,
    pub points: usize,
    pub discrepancies: BTreeMap<String, Discrepancy>,
    pub identities: BTreeMap<String, IdentityResult>,
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Verdict from the parts: every discrepancy and identity within
    /// tolerance and no point failed.
    pub(crate) fn settle(&mut self) {
        let ok = self.errors.is_empty()
            && self.discrepancies.values().all(|d| d.pass)
            && self.identities.values().all(|r| r.pass);
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let m = &self.model;
        writeln!(out, "sigma = {}, h11 = {}, K = {}", m.sigma, m.h11, m.einstein_constant)?;
        if let Some(h) = &m.hamiltonian {
            writeln!(out, "hamiltonian = {h}")?;
        }
        writeln!(out, "{} points, seed {}", self.points, self.config.seed)?;
        if !self.discrepancies.is_empty() {
            writeln!(out, "\n{:<16} {:>11} {:>11} {:>9}  worst", "object", "max_abs", "max_rel", "ratio")?;
            for (name, d) in &self.discrepancies {
                writeln!(
                    out,
                    "{:<16} {:>11.3e} {:>11.3e} {:>9.2e}  {} @ {}{}",
                    name,
                    d.max_abs,
                    d.max_rel,
                    d.worst.ratio,
                    d.worst.component,
                    d.worst.point,
                    if d.pass { "" } else { "  FAIL" }
                )?;
            }
        }
        if !self.identities.is_empty() {
            writeln!(out, "\n{:<26} {:>11} {:>9}", "identity", "residual", "tol")?;
            for (name, r) in &self.identities {
                writeln!(
                    out,
                    "{:<26} {:>11.3e} {:>9.0e}{}",
                    name,
                    r.max_residual,
                    r.tolerance,
                    if r.pass { "" } else { "  FAIL" }
                )?;
            }
        }
        for e in &self.errors {
            writeln!(out, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(out, "warning: {w}")?;
        }
        writeln!(out, "\nverdict: {}", if self.passed() { "PASS" } else { "FAIL" })?;
        f.write_str(&out)
    }
}
