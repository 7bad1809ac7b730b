//! Scenario spec files: `key = value` lines, `#` comments.
//!
//! ```text
//! input_state = maximally_mixed      # or: pure 1.5707963, 0.0  (θ, φ)
//! charlie = 0, 0, 1
//! alice   = 1, 0, 0
//! debbie  = 0.70710678, 0, 0.70710678
//! bob     = -0.70710678, 0, 0.70710678
//! tolerance = 1e-12                  # optional
//! seed = 7                           # optional
//! ```
//!
//! Vectors within `1e-6` of unit norm are rescaled to unit norm, so
//! eight-digit decimals are accepted. A JSON report (or its `config`
//! object) is accepted in place of a spec file and replays exactly.

use std::path::Path;

use cfriend::tensor::{BlochVector, DensityMatrix};
use cfriend::wigner::ScenarioConfig;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `| |n| - 1 |` that is silently normalized away.
pub const NORM_SLACK: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    MaximallyMixed,
    /// `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`.
    Pure {
        theta: f64,
        phi: f64,
    },
}

impl InputSpec {
    pub fn state(&self) -> DensityMatrix {
        match *self {
            InputSpec::MaximallyMixed => DensityMatrix::maximally_mixed(2),
            InputSpec::Pure { theta, phi } => DensityMatrix::qubit_from_angles(theta, phi),
        }
        .expect("qubit states from finite angles are valid")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub input_state: InputSpec,
    pub charlie: BlochVector,
    pub alice: BlochVector,
    pub debbie: BlochVector,
    pub bob: BlochVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        if text.trim_start().starts_with('{') {
            Self::from_json(&text)
        } else {
            Self::parse(&text)
        }
    }

    /// Reads the `config` echo of a JSON report (or a bare config object),
    /// so a saved report can be replayed bit for bit.
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let located = |e: serde_json::Error| SpecError::Line {
            line: e.line(),
            message: e.to_string(),
        };
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(located)?;
        if let Some(config) = value.get_mut("config") {
            value = config.take();
        }
        serde_json::from_value(value).map_err(|e| SpecError::Line {
            line: 1,
            message: format!("config echo: {e}"),
        })
    }

    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut input_state = None;
        let mut vectors: [Option<BlochVector>; 4] = [None; 4];
        let mut tolerance = None;
        let mut seed = None;
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| SpecError::Line { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            seen.push(key.to_string());
            match key {
                "input_state" => input_state = Some(parse_input(value).map_err(err)?),
                "charlie" | "alice" | "debbie" | "bob" => {
                    let slot = ["charlie", "alice", "debbie", "bob"]
                        .iter()
                        .position(|k| *k == key)
                        .expect("matched above");
                    vectors[slot] = Some(parse_vector(value).map_err(err)?);
                }
                "tolerance" => {
                    let t: f64 = value
                        .parse()
                        .map_err(|_| err(format!("tolerance `{value}` is not a number")))?;
                    if !(t.is_finite() && t > 0.0) {
                        return Err(err(format!("tolerance must be positive, got {value}")));
                    }
                    tolerance = Some(t);
                }
                "seed" => {
                    seed =
                        Some(value.parse().map_err(|_| {
                            err(format!("seed `{value}` is not a nonnegative integer"))
                        })?)
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let [charlie, alice, debbie, bob] = vectors;
        Ok(Self {
            input_state: input_state.unwrap_or(InputSpec::MaximallyMixed),
            charlie: charlie.ok_or(SpecError::Missing("charlie"))?,
            alice: alice.ok_or(SpecError::Missing("alice"))?,
            debbie: debbie.ok_or(SpecError::Missing("debbie"))?,
            bob: bob.ok_or(SpecError::Missing("bob"))?,
            tolerance,
            seed,
        })
    }

    pub fn config(&self) -> ScenarioConfig {
        ScenarioConfig::new(
            self.input_state.state(),
            self.charlie,
            self.alice,
            self.debbie,
            self.bob,
        )
        .expect("input is a qubit")
    }
}

fn parse_numbers(value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{s}` is not a finite number"))
        })
        .collect()
}

fn parse_vector(value: &str) -> Result<BlochVector, String> {
    let v = parse_numbers(value)?;
    let [x, y, z] = v[..] else {
        return Err(format!("expected three components, found {}", v.len()));
    };
    let norm = (x * x + y * y + z * z).sqrt();
    if (norm - 1.0).abs() > NORM_SLACK {
        return Err(format!("vector ({x}, {y}, {z}) has norm {norm}, not 1"));
    }
    BlochVector::normalized(x, y, z).map_err(|e| e.to_string())
}

fn parse_input(value: &str) -> Result<InputSpec, String> {
    if value == "maximally_mixed" {
        return Ok(InputSpec::MaximallyMixed);
    }
    if let Some(rest) = value.strip_prefix("pure") {
        let v = parse_numbers(rest)?;
        let [theta, phi] = v[..] else {
            return Err(format!(
                "pure input needs two angles (θ, φ), found {}",
                v.len()
            ));
        };
        return Ok(InputSpec::Pure { theta, phi });
    }
    Err(format!(
        "input_state must be `maximally_mixed` or `pure θ, φ`, found `{value}`"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER: &str = "\
# optimal settings
input_state = maximally_mixed
charlie = 0, 0, 1
alice = 1, 0, 0
debbie = 0.70710678, 0, 0.70710678
bob = -0.70710678, 0, 0.70710678
";

    #[test]
    fn parses_and_normalizes() {
        let spec = SpecFile::parse(PAPER).unwrap();
        let n = spec.debbie.components();
        assert!(((n[0] * n[0] + n[2] * n[2]).sqrt() - 1.0).abs() < 1e-15);
        assert_eq!(spec.input_state, InputSpec::MaximallyMixed);
        assert_eq!(spec.seed, None);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = PAPER.replace("alice = 1, 0, 0", "alice = 1, 0");
        let err = SpecFile::parse(&bad).unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 4: expected three components, found 2"
        );
        let unknown = format!("{PAPER}colour = blue\n");
        assert!(SpecFile::parse(&unknown)
            .unwrap_err()
            .to_string()
            .starts_with("line 7: unknown key"));
        let dup = format!("{PAPER}bob = 0, 0, 1\n");
        assert!(matches!(
            SpecFile::parse(&dup),
            Err(SpecError::Line { line: 7, .. })
        ));
        let no_eq = PAPER.replace("charlie = 0, 0, 1", "charlie 0 0 1");
        assert!(matches!(
            SpecFile::parse(&no_eq),
            Err(SpecError::Line { line: 3, .. })
        ));
        let long = PAPER.replace("alice = 1, 0, 0", "alice = 1, 0, 0.01");
        assert!(matches!(
            SpecFile::parse(&long),
            Err(SpecError::Line { line: 4, .. })
        ));
    }

    #[test]
    fn missing_keys_and_pure_inputs() {
        let missing = PAPER.replace("bob = -0.70710678, 0, 0.70710678\n", "");
        assert_eq!(SpecFile::parse(&missing), Err(SpecError::Missing("bob")));
        let pure = PAPER.replace("maximally_mixed", "pure 0.5, 1.0");
        let spec = SpecFile::parse(&pure).unwrap();
        assert_eq!(
            spec.input_state,
            InputSpec::Pure {
                theta: 0.5,
                phi: 1.0
            }
        );
        assert!((spec.config().input_state().purity() - 1.0).abs() < 1e-12);
    }
}
