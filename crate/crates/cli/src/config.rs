//! Experiment configuration: a flat JSON object of scalar and array
//! values. Unknown keys are rejected; every numeric range is validated
//! with a field-by-field diagnostic.

use std::path::PathBuf;

use quatsamp_core::qlct::{LctMatrix, LctParams};
use quatsamp_core::quadrature::QuadratureRule;
use quatsamp_core::spectra::SpectrumKind;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    QftGse,
    Qlct,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::QftGse => "qft-gse",
            Mode::Qlct => "qlct",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BankKind {
    Shannon,
    Oversample,
    Rational,
    Derivative,
}

impl BankKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BankKind::Shannon => "shannon",
            BankKind::Oversample => "oversample",
            BankKind::Rational => "rational",
            BankKind::Derivative => "derivative",
        }
    }

    fn channels_per_axis(self) -> usize {
        match self {
            BankKind::Derivative => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: String,
    #[serde(default)]
    bank: Option<String>,
    #[serde(default)]
    rho: Option<f64>,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    beta: Option<f64>,
    sigma: f64,
    #[serde(default)]
    m: Option<usize>,
    truncation: Vec<usize>,
    spectrum_kind: String,
    spectrum_seed: u64,
    #[serde(default)]
    eval_grid: Option<usize>,
    #[serde(default)]
    region_halfwidth: Option<f64>,
    #[serde(default)]
    quad_panels: Option<usize>,
    #[serde(default)]
    quad_order: Option<usize>,
    out_dir: String,
    #[serde(default)]
    lct_a1: Option<[f64; 4]>,
    #[serde(default)]
    lct_a2: Option<[f64; 4]>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub bank: BankKind,
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub truncation: Vec<usize>,
    pub spectrum_kind: SpectrumKind,
    pub spectrum_seed: u64,
    pub eval_grid: usize,
    pub region_halfwidth: Option<f64>,
    pub rule: QuadratureRule,
    pub out_dir: PathBuf,
    pub lct: LctParams,
    /// Raw config echoed into reports.
    pub echo: serde_json::Value,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn field_err<T>(field: &str, msg: &str) -> Result<T, ConfigError> {
    Err(ConfigError(format!("field `{field}`: {msg}")))
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|e| ConfigError(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let echo: serde_json::Value =
        serde_json::from_str(text).expect("validated by the typed parse above");

    let mode = match raw.mode.as_str() {
        "qft-gse" => Mode::QftGse,
        "qlct" => Mode::Qlct,
        other => return field_err("mode", &format!("unknown mode `{other}`")),
    };

    let bank = match raw.bank.as_deref() {
        None | Some("shannon") => BankKind::Shannon,
        Some("oversample") => BankKind::Oversample,
        Some("rational") => BankKind::Rational,
        Some("derivative") => BankKind::Derivative,
        Some(other) => return field_err("bank", &format!("unknown bank `{other}`")),
    };

    if !raw.sigma.is_finite() || raw.sigma <= 0.0 {
        return field_err("sigma", "must be positive");
    }
    if let Some(m) = raw.m {
        if m < 1 {
            return field_err("m", "must be at least 1");
        }
        if mode == Mode::QftGse && m != bank.channels_per_axis() {
            return field_err(
                "m",
                &format!(
                    "bank `{}` requires m = {}",
                    bank.as_str(),
                    bank.channels_per_axis()
                ),
            );
        }
    }
    if raw.truncation.is_empty() {
        return field_err("truncation", "needs at least one N");
    }
    if raw.truncation.contains(&0) {
        return field_err("truncation", "every N must be positive");
    }

    let rho = raw.rho.unwrap_or(2.0);
    if bank == BankKind::Oversample && (!rho.is_finite() || rho <= 1.0) {
        return field_err("rho", "must exceed 1");
    }
    let alpha = raw.alpha.unwrap_or(1.0);
    let beta = raw.beta.unwrap_or(1.0);
    if bank == BankKind::Rational
        && (alpha <= 0.0 || beta <= 0.0 || !alpha.is_finite() || !beta.is_finite())
    {
        return field_err("alpha/beta", "must be positive");
    }

    let spectrum_kind = match raw.spectrum_kind.as_str() {
        "gauss" => SpectrumKind::Gauss,
        "poly" => SpectrumKind::Poly,
        "random-smooth" => SpectrumKind::RandomSmooth,
        "zero" => SpectrumKind::Zero,
        other => return field_err("spectrum_kind", &format!("unknown kind `{other}`")),
    };

    let eval_grid = raw.eval_grid.unwrap_or(5);
    if eval_grid < 2 {
        return field_err("eval_grid", "must be at least 2");
    }
    if let Some(h) = raw.region_halfwidth {
        if !h.is_finite() || h <= 0.0 {
            return field_err("region_halfwidth", "must be positive");
        }
    }

    let rule = QuadratureRule {
        panels: raw.quad_panels.unwrap_or(QuadratureRule::default().panels),
        order: raw.quad_order.unwrap_or(QuadratureRule::default().order),
    };
    if rule.panels < 1 {
        return field_err("quad_panels", "must be at least 1");
    }
    if rule.order < 2 {
        return field_err("quad_order", "must be at least 2");
    }

    let mat = |name: &'static str, v: Option<[f64; 4]>| -> Result<LctMatrix, ConfigError> {
        match v {
            None => Ok(LctMatrix::fourier()),
            Some([a, b, c, d]) => {
                LctMatrix::new(a, b, c, d).map_err(|e| ConfigError(format!("field `{name}`: {e}")))
            }
        }
    };
    let lct = LctParams::new(mat("lct_a1", raw.lct_a1)?, mat("lct_a2", raw.lct_a2)?);

    Ok(ExperimentConfig {
        mode,
        bank,
        rho,
        alpha,
        beta,
        sigma: raw.sigma,
        truncation: raw.truncation,
        spectrum_kind,
        spectrum_seed: raw.spectrum_seed,
        eval_grid,
        region_halfwidth: raw.region_halfwidth,
        rule,
        out_dir: PathBuf::from(raw.out_dir),
        lct,
        echo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "mode": "qft-gse",
        "bank": "shannon",
        "sigma": 3.141592653589793,
        "truncation": [8, 16],
        "spectrum_kind": "gauss",
        "spectrum_seed": 7,
        "out_dir": "out"
    }"#;

    #[test]
    fn parses_minimal() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.mode, Mode::QftGse);
        assert_eq!(cfg.bank, BankKind::Shannon);
        assert_eq!(cfg.eval_grid, 5);
        assert_eq!(cfg.rule, QuadratureRule::default());
    }

    #[test]
    fn rejects_bad_fields() {
        let bad = MINIMAL.replace("\"sigma\": 3.141592653589793", "\"sigma\": -1.0");
        let err = parse_config(&bad).unwrap_err();
        assert!(err.0.contains("sigma"), "{err}");

        let bad = MINIMAL.replace("[8, 16]", "[]");
        assert!(parse_config(&bad).unwrap_err().0.contains("truncation"));

        let bad = MINIMAL.replace("\"gauss\"", "\"nope\"");
        assert!(parse_config(&bad).unwrap_err().0.contains("spectrum_kind"));
    }

    #[test]
    fn rejects_unknown_keys_with_location() {
        let bad = MINIMAL.replace("\"out_dir\": \"out\"", "\"out_dir\": \"out\", \"typo\": 1");
        let err = parse_config(&bad).unwrap_err();
        assert!(err.0.contains("line"), "{err}");
    }

    #[test]
    fn rejects_inconsistent_m() {
        let bad = MINIMAL.replace("\"bank\": \"shannon\"", "\"bank\": \"shannon\", \"m\": 2");
        assert!(parse_config(&bad).unwrap_err().0.contains("requires m = 1"));
    }

    #[test]
    fn rejects_bad_lct() {
        let bad = MINIMAL.replace(
            "\"mode\": \"qft-gse\"",
            "\"mode\": \"qlct\", \"lct_a1\": [1.0, 0.0, 0.0, 1.0]",
        );
        assert!(parse_config(&bad).unwrap_err().0.contains("lct_a1"));
    }
}
