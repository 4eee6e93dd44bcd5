//! End-to-end scoring: features of the reference image, fuzzy map, weight
//! map, then the four metrics.

use crate::error::{Error, Result};
use crate::features::{FeatureConfig, FeatureMaps};
use crate::fuzzy::weight_map;
use crate::fuzzy::{build_edge_memberships, fuzzy_map, FuzzySystem, Orientation, SystemConfig, Variable, WeightMap};
use crate::image::{BlockGrid, GrayImage};
use crate::metrics::ScoreReport;

#[derive(Debug, Clone, Default)]
pub struct Pipeline {
    pub features: FeatureConfig,
    pub system: FuzzySystem,
    pub orientation: Orientation,
    /// When set, edge memberships are refitted by FCM on each reference
    /// image's edge-concentration grid with this seed.
    pub calibrate_edge: Option<u64>,
}

/// Intermediate maps of one reference image.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub features: FeatureMaps,
    pub fuzzy: BlockGrid,
    pub weights: WeightMap,
}

impl Pipeline {
    pub fn from_config(config: &SystemConfig) -> Result<Self> {
        Ok(Self {
            system: config.build()?,
            orientation: config.orientation,
            ..Self::default()
        })
    }

    pub fn analyze(&self, reference: &GrayImage) -> Result<Analysis> {
        let features = FeatureMaps::compute(reference, &self.features)?;
        let system = match self.calibrate_edge {
            Some(seed) => {
                let levels = build_edge_memberships(features.edge_concentration.values(), seed)?;
                self.system.with_memberships(Variable::Edge, levels)
            }
            None => self.system.clone(),
        };
        let fuzzy = fuzzy_map(&features, &system)?;
        let weights = weight_map(&fuzzy, reference.width(), reference.height(), self.orientation)?;
        Ok(Analysis {
            features,
            fuzzy,
            weights,
        })
    }

    pub fn weights(&self, reference: &GrayImage) -> Result<WeightMap> {
        self.analyze(reference).map(|a| a.weights)
    }

    /// Scores `test` against `reference`; the weights depend on the reference only.
    pub fn score(&self, reference: &GrayImage, test: &GrayImage) -> Result<ScoreReport> {
        if !reference.same_dimensions(test) {
            return Err(Error::DimensionMismatch(format!(
                "reference is {}x{}, test is {}x{}",
                reference.width(),
                reference.height(),
                test.width(),
                test.height()
            )));
        }
        ScoreReport::compute(reference, test, &self.weights(reference)?)
    }
}
