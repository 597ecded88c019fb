//! Scenario files: a symbol pair plus the numerical parameters of a run.

use serde::{Deserialize, Serialize};

use crate::berezin::{RadiusSchedule, DEFAULT_ANGLES, DEFAULT_LEVELS};
use crate::error::{Error, Result};
use crate::geometry::DEFAULT_DELTA;
use crate::quadrature::{QuadratureRule, DEFAULT_ANGULAR, DEFAULT_RADIAL};
use crate::schur::{SchurParameters, DEFAULT_EPSILON};
use crate::symbols::{Symbol, SymbolPair, SymbolSpec};

pub const MAX_TRUNCATION: usize = 512;
pub const MAX_RULE_NODES: usize = 1 << 16;
pub const DEFAULT_TRUNCATIONS: [usize; 4] = [8, 16, 32, 64];

/// On-disk form. Only `name`, `f` and `g` are required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub f: SymbolSpec,
    pub g: SymbolSpec,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default = "default_truncations")]
    pub truncations: Vec<usize>,
    #[serde(default = "default_rule")]
    pub rule: [usize; 2],
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}
fn default_p() -> f64 {
    2.0
}
fn default_delta() -> f64 {
    DEFAULT_DELTA
}
fn default_radii() -> Vec<f64> {
    RadiusSchedule::<f64>::dyadic(DEFAULT_LEVELS, DEFAULT_ANGLES)
        .expect("default schedule")
        .radii()
        .to_vec()
}
fn default_angles() -> usize {
    DEFAULT_ANGLES
}
fn default_truncations() -> Vec<usize> {
    DEFAULT_TRUNCATIONS.to_vec()
}
fn default_rule() -> [usize; 2] {
    [DEFAULT_RADIAL, DEFAULT_ANGULAR]
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub pair: SymbolPair<f64>,
    pub params: SchurParameters<f64>,
    pub schedule: RadiusSchedule<f64>,
    pub truncations: Vec<usize>,
    pub rule_spec: (usize, usize),
    /// The file as read, with defaults filled in.
    pub source: ScenarioFile,
}

fn invalid(e: impl std::fmt::Display) -> Error {
    Error::InvalidScenario(e.to_string())
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(invalid)?;
        Self::from_file(file)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_file(file: ScenarioFile) -> Result<Self> {
        let name_ok = !file.name.is_empty()
            && !file.name.starts_with('.')
            && file
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if !name_ok {
            return Err(invalid(format!(
                "name {:?} must be nonempty, not start with '.', and use only [A-Za-z0-9_.-]",
                file.name
            )));
        }
        let f = Symbol::from_spec(&file.f).map_err(|e| invalid(format!("f: {e}")))?;
        let g = Symbol::from_spec(&file.g).map_err(|e| invalid(format!("g: {e}")))?;
        let params =
            SchurParameters::new(file.epsilon, file.p, file.delta, 0.0).map_err(invalid)?;
        let schedule = RadiusSchedule::new(file.radii.clone(), file.angles).map_err(invalid)?;
        if file.truncations.is_empty() {
            return Err(invalid("truncations must be nonempty"));
        }
        if file.truncations.windows(2).any(|p| p[0] >= p[1]) {
            return Err(invalid("truncations must be strictly increasing"));
        }
        if file.truncations[0] == 0 || *file.truncations.last().expect("nonempty") > MAX_TRUNCATION
        {
            return Err(invalid(format!(
                "truncations must lie in 1..={MAX_TRUNCATION}"
            )));
        }
        let [n_radial, n_angular] = file.rule;
        if n_radial == 0
            || n_angular == 0
            || n_radial > MAX_RULE_NODES
            || n_angular > MAX_RULE_NODES
        {
            return Err(invalid(format!(
                "rule counts must lie in 1..={MAX_RULE_NODES}"
            )));
        }
        Ok(Self {
            name: file.name.clone(),
            pair: SymbolPair::new(f, g),
            params,
            schedule,
            truncations: file.truncations.clone(),
            rule_spec: (n_radial, n_angular),
            source: file,
        })
    }

    /// Gauss–Legendre rule with the scenario's counts.
    pub fn rule(&self) -> QuadratureRule<f64> {
        QuadratureRule::new(self.rule_spec.0, self.rule_spec.1).expect("validated counts")
    }

    /// Boundary-graded rule with the scenario's counts.
    pub fn graded_rule(&self) -> QuadratureRule<f64> {
        QuadratureRule::graded(self.rule_spec.0, self.rule_spec.1, 8).expect("validated counts")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"name":"zz","f":{"type":"poly","coeffs":[[0,0],[1,0]]},"g":{"type":"poly","coeffs":[[0,0],[1,0]]}}"#;

    #[test]
    fn defaults_are_filled() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(s.truncations, vec![8, 16, 32, 64]);
        assert_eq!(s.rule_spec, (64, 256));
        assert_eq!(s.schedule.radii().len(), 12);
        assert_eq!(s.schedule.angular_samples(), 64);
        assert_eq!(s.params, SchurParameters::default());
        assert_eq!(s.pair.f, Symbol::monomial(1).unwrap());
    }

    #[test]
    fn full_file() {
        let text = r#"{"name":"k","f":{"type":"kernel_combo","terms":[{"w":[1,0],"a":[0.3,0.1]}]},
            "g":{"type":"binomial","eta":[1,0],"beta":0.5},"epsilon":0.1,"p":3,"delta":0.2,
            "radii":[0.5,0.75],"angles":8,"truncations":[4,8],"rule":[16,32]}"#;
        let s = Scenario::from_json(text).unwrap();
        assert_eq!(s.params.p, 3.0);
        assert_eq!(s.schedule.radii(), &[0.5, 0.75]);
        assert_eq!(s.rule().node_count(), 16 * 32);
    }

    #[test]
    fn rejections() {
        let base: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
        let with = |k: &str, v: serde_json::Value| {
            let mut o = base.clone();
            o[k] = v;
            Scenario::from_json(&o.to_string())
        };
        let bad = [
            with("name", "".into()),
            with("name", "../x".into()),
            with("epsilon", 0.3.into()),
            with("p", 1.0.into()),
            with("delta", 0.5.into()),
            with("radii", serde_json::json!([0.5, 0.4])),
            with("radii", serde_json::json!([])),
            with("radii", serde_json::json!([0.5, 1.0])),
            with("angles", 0.into()),
            with("truncations", serde_json::json!([8, 8])),
            with("truncations", serde_json::json!([0, 8])),
            with("truncations", serde_json::json!([1024])),
            with("rule", serde_json::json!([0, 8])),
            with(
                "f",
                serde_json::json!({"type":"binomial","eta":[1,0],"beta":1.5}),
            ),
            with("g", serde_json::json!({"type":"mystery"})),
            with("extra", 1.into()),
        ];
        for (i, r) in bad.into_iter().enumerate() {
            assert!(
                matches!(r, Err(Error::InvalidScenario(_))),
                "case {i}: {r:?}"
            );
        }
        assert!(matches!(
            Scenario::from_json("{"),
            Err(Error::InvalidScenario(_))
        ));
        assert!(matches!(
            Scenario::from_json(r#"{"name":"x"}"#),
            Err(Error::InvalidScenario(_))
        ));
    }
}
