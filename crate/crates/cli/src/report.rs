//! Machine-readable report types.
//!
//! Verify reports carry no timing so repeated runs are byte-identical;
//! run reports echo the config and include wall-clock seconds.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Informative entries report residuals without gating the exit code.
    pub informative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub detail: String,
}

impl CheckResult {
    pub fn gate(name: &str, pass: bool, detail: String) -> Self {
        Self {
            name: name.to_owned(),
            pass,
            informative: false,
            residual: None,
            detail,
        }
    }

    pub fn gate_with_residual(name: &str, pass: bool, residual: f64, detail: String) -> Self {
        Self {
            name: name.to_owned(),
            pass,
            informative: false,
            residual: Some(residual),
            detail,
        }
    }

    pub fn informative(name: &str, residual: f64, detail: String) -> Self {
        Self {
            name: name.to_owned(),
            pass: true,
            informative: true,
            residual: Some(residual),
            detail,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub version: String,
    pub ok: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn new(checks: Vec<CheckResult>) -> Self {
        let ok = checks.iter().all(|c| c.pass || c.informative);
        Self {
            version: env!("CARGO_PKG_VERSION").to_owned(),
            ok,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncationResult {
    pub n: usize,
    pub rel_l2: f64,
    pub rel_linf: f64,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub version: String,
    pub mode: String,
    pub bank: String,
    pub config: serde_json::Value,
    pub results: Vec<TruncationResult>,
    pub checks: Vec<CheckResult>,
    pub ok: bool,
    pub runtime_seconds: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
