//! Fuzzy importance map: membership functions, fuzzy c-means calibration,
//! Mamdani inference and the per-pixel weight map derived from it.

pub mod calibrate;
pub mod config;
pub mod fcm;
pub mod membership;
pub mod system;
pub mod weights;

pub use calibrate::build_edge_memberships;
pub use config::SystemConfig;
pub use fcm::{fcm, FcmParams, FcmResult};
pub use membership::{default_memberships, FuzzyVariable, Level, MembershipFunction, OutputLevel, Variable};
pub use system::{default_output_peaks, default_rules, fuzzy_map, FuzzySystem, Rule, RuleBase, OUTPUT_DOMAIN};
pub use weights::{weight_map, Orientation, WeightMap};
