use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::electrodynamics::{default_params, PhysicalParams};

/// Rejected configuration text or values. `line` is 1-based when the
/// problem is tied to one line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl ConfigError {
    pub fn name(&self) -> &'static str {
        "ConfigParse"
    }

    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }

    fn global(message: impl Into<String>) -> Self {
        Self { line: None, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    HydrogenFde,
    HydrogenCoulomb,
    Compare,
    Torque,
    Balance,
    Spectrum,
    Convergence,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::HydrogenFde,
        Scenario::HydrogenCoulomb,
        Scenario::Compare,
        Scenario::Torque,
        Scenario::Balance,
        Scenario::Spectrum,
        Scenario::Convergence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::HydrogenFde => "hydrogen-fde",
            Scenario::HydrogenCoulomb => "hydrogen-coulomb",
            Scenario::Compare => "compare",
            Scenario::Torque => "torque",
            Scenario::Balance => "balance",
            Scenario::Spectrum => "spectrum",
            Scenario::Convergence => "convergence",
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    /// Accepts the scenario names and the command aliases `simulate` and
    /// `coulomb`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "simulate" => Ok(Scenario::HydrogenFde),
            "coulomb" => Ok(Scenario::HydrogenCoulomb),
            _ => Scenario::ALL
                .into_iter()
                .find(|sc| sc.as_str() == s)
                .ok_or_else(|| format!("unknown scenario '{s}'")),
        }
    }
}

/// Everything a run needs. Fully deterministic: there is no seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub params: PhysicalParams,
    pub t_end: f64,
    /// Length of the prescribed past before `t = 0`.
    pub t_past: f64,
    pub rtol: f64,
    pub atol: f64,
    pub sample_dt: f64,
    pub out: PathBuf,
    pub k_max: usize,
    /// Mass ratio for the torque-balance estimate.
    pub epsilon: f64,
    /// Orbit radius for the torque-balance estimate.
    pub r_e: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let params = default_params();
        Self {
            scenario: Scenario::Compare,
            params,
            t_end: 200.0,
            t_past: 20.0,
            rtol: 1e-10,
            atol: 1e-12,
            sample_dt: 0.05,
            out: PathBuf::from("out"),
            k_max: 10,
            epsilon: params.mu,
            r_e: params.r0,
        }
    }
}

pub const KEYS: [&str; 15] = [
    "scenario", "kappa", "mu", "c", "r0", "omega0", "t_end", "t_past", "rtol", "atol", "sample_dt",
    "out", "k_max", "epsilon", "r_e",
];

fn number(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| ConfigError::at(line, format!("{key}: '{value}' is not a number")))
}

/// Parses `key = value` lines; `#` starts a comment. Missing keys keep their
/// defaults. When `omega0` is absent it follows the (possibly overridden)
/// `kappa`, `mu` and `r0` so that the prescribed orbit stays circular, and
/// `epsilon`, `r_e` default to `mu`, `r0`.
pub fn parse_config(text: &[u8]) -> Result<ScenarioConfig, ConfigError> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let line = text[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        ConfigError::at(line, "invalid UTF-8")
    })?;
    let mut cfg = ScenarioConfig::default();
    let mut seen: Vec<&str> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, format!("expected key = value, got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let key = KEYS
            .into_iter()
            .find(|k| *k == key)
            .ok_or_else(|| ConfigError::at(line, format!("unknown key '{key}'")))?;
        if seen.contains(&key) {
            return Err(ConfigError::at(line, format!("duplicate key '{key}'")));
        }
        seen.push(key);
        match key {
            "scenario" => cfg.scenario = value.parse().map_err(|e: String| ConfigError::at(line, e))?,
            "out" => {
                if value.is_empty() {
                    return Err(ConfigError::at(line, "out: empty path"));
                }
                cfg.out = PathBuf::from(value);
            }
            "k_max" => {
                cfg.k_max = value
                    .parse()
                    .map_err(|_| ConfigError::at(line, format!("k_max: '{value}' is not a count")))?
            }
            _ => {
                let v = number(line, key, value)?;
                match key {
                    "kappa" => cfg.params.kappa = v,
                    "mu" => cfg.params.mu = v,
                    "c" => cfg.params.c = v,
                    "r0" => cfg.params.r0 = v,
                    "omega0" => cfg.params.omega0 = v,
                    "t_end" => cfg.t_end = v,
                    "t_past" => cfg.t_past = v,
                    "rtol" => cfg.rtol = v,
                    "atol" => cfg.atol = v,
                    "sample_dt" => cfg.sample_dt = v,
                    "epsilon" => cfg.epsilon = v,
                    "r_e" => cfg.r_e = v,
                    _ => unreachable!("key list and match agree"),
                }
            }
        }
    }
    let p = &mut cfg.params;
    if !seen.contains(&"omega0") {
        p.omega0 = PhysicalParams::circular_omega(p.kappa, p.mu, p.r0);
    }
    if !seen.contains(&"epsilon") {
        cfg.epsilon = p.mu;
    }
    if !seen.contains(&"r_e") {
        cfg.r_e = p.r0;
    }
    cfg.validate()?;
    Ok(cfg)
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("t_end", self.t_end),
            ("t_past", self.t_past),
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("sample_dt", self.sample_dt),
            ("epsilon", self.epsilon),
            ("r_e", self.r_e),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::global(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.k_max == 0 {
            return Err(ConfigError::global("k_max must be at least 1"));
        }
        self.params.validate().map_err(|e| ConfigError::global(e.to_string()))
    }

    /// Config text that parses back to `self`.
    pub fn render(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("scenario", self.scenario.as_str().to_string());
        put("kappa", p.kappa.to_string());
        put("mu", p.mu.to_string());
        put("c", p.c.to_string());
        put("r0", p.r0.to_string());
        put("omega0", p.omega0.to_string());
        put("t_end", self.t_end.to_string());
        put("t_past", self.t_past.to_string());
        put("rtol", self.rtol.to_string());
        put("atol", self.atol.to_string());
        put("sample_dt", self.sample_dt.to_string());
        put("out", self.out.display().to_string());
        put("k_max", self.k_max.to_string());
        put("epsilon", self.epsilon.to_string());
        put("r_e", self.r_e.to_string());
        s
    }
}
