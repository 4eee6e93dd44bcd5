//! JSON description of a fuzzy system.
//!
//! ```json
//! {
//!   "memberships": {
//!     "saliency":  { "low": [[0, 1], [0.5, 0]], "medium": [[0, 0], [0.5, 1], [1, 0]], "high": [[0.5, 0], [1, 1]] },
//!     "edge":      { ... },
//!     "intensity": { ... }
//!   },
//!   "rules": [ { "saliency": "low", "edge": "low", "intensity": "low", "output": "M" }, ... ],
//!   "output_peaks": [0.128, 0.157, 0.185, 0.213, 0.242],
//!   "orientation": "importance"
//! }
//! ```
//!
//! Missing top-level fields fall back to the shipped defaults.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::membership::{Level, MembershipFunction, OutputLevel};
use super::system::{FuzzySystem, Rule, RuleBase};
use super::weights::Orientation;
use super::Variable;
use crate::error::{Error, Result};

/// The shipped default configuration.
pub const DEFAULT_CONFIG_JSON: &str = include_str!("../../config/default.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSet {
    pub low: Vec<[f64; 2]>,
    pub medium: Vec<[f64; 2]>,
    pub high: Vec<[f64; 2]>,
}

impl LevelSet {
    fn from_functions(f: &[MembershipFunction; 3]) -> Self {
        let pts = |m: &MembershipFunction| m.vertices().iter().map(|&(x, d)| [x, d]).collect();
        Self {
            low: pts(&f[0]),
            medium: pts(&f[1]),
            high: pts(&f[2]),
        }
    }

    fn to_functions(&self, variable: &str) -> Result<[MembershipFunction; 3]> {
        let build = |name: &str, pts: &[[f64; 2]]| {
            MembershipFunction::new(pts.iter().map(|p| (p[0], p[1])).collect())
                .map_err(|e| Error::Config(format!("{variable}.{name}: {e}")))
        };
        Ok([
            build("low", &self.low)?,
            build("medium", &self.medium)?,
            build("high", &self.high)?,
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MembershipConfig {
    pub saliency: LevelSet,
    pub edge: LevelSet,
    pub intensity: LevelSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleConfig {
    pub saliency: Level,
    pub edge: Level,
    pub intensity: Level,
    pub output: OutputLevel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub memberships: MembershipConfig,
    pub rules: Vec<RuleConfig>,
    pub output_peaks: [f64; 5],
    pub orientation: Orientation,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self::from_system(&FuzzySystem::default(), Orientation::default())
    }
}

impl SystemConfig {
    pub fn from_system(system: &FuzzySystem, orientation: Orientation) -> Self {
        Self {
            memberships: MembershipConfig {
                saliency: LevelSet::from_functions(&system.variable(Variable::Saliency).levels),
                edge: LevelSet::from_functions(&system.variable(Variable::Edge).levels),
                intensity: LevelSet::from_functions(&system.variable(Variable::Intensity).levels),
            },
            rules: system
                .rules()
                .rules()
                .into_iter()
                .map(|r| RuleConfig {
                    saliency: r.saliency,
                    edge: r.edge,
                    intensity: r.intensity,
                    output: r.output,
                })
                .collect(),
            output_peaks: system.output_peaks(),
            orientation,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<FuzzySystem> {
        let rules: Vec<Rule> = self
            .rules
            .iter()
            .map(|r| Rule {
                saliency: r.saliency,
                edge: r.edge,
                intensity: r.intensity,
                output: r.output,
            })
            .collect();
        FuzzySystem::new(
            self.memberships.saliency.to_functions("saliency")?,
            self.memberships.edge.to_functions("edge")?,
            self.memberships.intensity.to_functions("intensity")?,
            RuleBase::from_rules(&rules)?,
            self.output_peaks,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{default_memberships, default_rules};

    #[test]
    fn shipped_config_reproduces_defaults() {
        let cfg = SystemConfig::from_json(DEFAULT_CONFIG_JSON).unwrap();
        let sys = cfg.build().unwrap();
        for v in ["saliency", "edge", "intensity"] {
            let var: Variable = v.parse().unwrap();
            assert_eq!(sys.variable(var).levels, default_memberships(v).unwrap());
        }
        assert_eq!(sys.rules(), &RuleBase::from_rules(&default_rules()).unwrap());
        assert_eq!(cfg.orientation, Orientation::Importance);
        let default = FuzzySystem::default();
        for (a, b) in sys.output_peaks().iter().zip(default.output_peaks()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let cfg = SystemConfig::default();
        let back = SystemConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_config_uses_defaults() {
        let cfg = SystemConfig::from_json(r#"{"orientation": "embedding"}"#).unwrap();
        assert_eq!(cfg.orientation, Orientation::Embedding);
        assert_eq!(cfg.rules.len(), 27);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(SystemConfig::from_json(r#"{"orientaton": "embedding"}"#).is_err());
        let mut cfg = SystemConfig::default();
        cfg.rules.truncate(26);
        assert!(cfg.build().is_err());
        let mut cfg = SystemConfig::default();
        cfg.memberships.edge.low = vec![[0.0, 0.5], [1.0, 0.0]];
        let err = cfg.build().unwrap_err().to_string();
        assert!(err.contains("edge.low"), "{err}");
        let cfg = SystemConfig {
            output_peaks: [0.2, 0.15, 0.185, 0.2, 0.25],
            ..SystemConfig::default()
        };
        assert!(cfg.build().is_err());
    }
}
