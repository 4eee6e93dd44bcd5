use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{upsample_nearest, BlockGrid};

/// Polarity of the weight map relative to the fuzzy importance map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Important blocks receive large weights.
    #[default]
    Importance,
    /// Reflected map `max + min - fmap`: blocks suited to embedding receive
    /// large weights.
    #[serde(alias = "embedding-suitability")]
    Embedding,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Importance => "importance",
            Orientation::Embedding => "embedding",
        })
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "importance" => Ok(Orientation::Importance),
            "embedding" | "embedding-suitability" => Ok(Orientation::Embedding),
            other => Err(Error::param(format!("unknown orientation {other:?}"))),
        }
    }
}

/// Strictly positive per-pixel weights with mean one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMap {
    width: usize,
    height: usize,
    weights: Vec<f64>,
}

impl WeightMap {
    pub fn new(width: usize, height: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} weight map needs {} weights, got {}",
                width * height,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::param("weights must be positive and finite"));
        }
        Ok(Self { width, height, weights })
    }

    pub fn uniform(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            weights: vec![1.0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }

    pub fn mean(&self) -> f64 {
        self.weights.iter().sum::<f64>() / self.weights.len() as f64
    }
}

/// Upsamples a fuzzy map to pixels and rescales it to mean one. A constant map
/// yields weights of exactly one.
pub fn weight_map(fmap: &BlockGrid, width: usize, height: usize, orientation: Orientation) -> Result<WeightMap> {
    if fmap.values().iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::param("fuzzy map values must be positive and finite"));
    }
    let (lo, hi) = (fmap.min(), fmap.max());
    let oriented = match orientation {
        Orientation::Importance => fmap.clone(),
        Orientation::Embedding => fmap.map(|v| (hi + lo) - v),
    };
    let field = upsample_nearest(&oriented, width, height)?;
    if field.is_empty() {
        return Err(Error::param("weight map needs at least one pixel"));
    }
    let first = field[0];
    if field.iter().all(|&v| v == first) {
        return Ok(WeightMap::uniform(width, height));
    }
    let mean = field.iter().sum::<f64>() / field.len() as f64;
    WeightMap::new(width, height, field.into_iter().map(|v| v / mean).collect())
}
