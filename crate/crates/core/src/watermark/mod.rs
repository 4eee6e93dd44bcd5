//! Watermark-style distortions for exercising the metric: additive DCT
//! embedding, region-masked noise attacks and the important versus
//! non-important attack protocol.

pub mod attack;
pub mod dct;
pub mod embed;
pub mod experiment;

pub use attack::{attack, AttackKind, AttackSpec};
pub use dct::{dct2, idct2, zigzag, Dct};
pub use embed::{embed, EmbedSpec, MID_BAND};
pub use experiment::{decile_regions, run_experiment, AttackPair, ExperimentReport, ExperimentRow, Phase, CSV_HEADER};
