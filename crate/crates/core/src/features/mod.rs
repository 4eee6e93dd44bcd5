//! The three block-level feature maps feeding the fuzzy system: saliency,
//! edge concentration and intensity, each on an 8×8 block grid in `[0, 1]`.

pub mod canny;
pub mod filter;
pub mod saliency;

use std::sync::Arc;

pub use canny::{canny, canny_with, CannyConfig, EdgeMap, Gradient, Thresholds};
pub use saliency::{SaliencyDetector, SpectralResidual, WeightedSaliency};

use crate::error::{Error, Result};
use crate::image::{block_reduce, block_reduce_field, BlockGrid, GrayImage};

/// Block size of every feature grid.
pub const FEATURE_BLOCK: usize = 8;

/// Per-block mean of the 3×3 local variance of the binary edge map, before
/// normalization. Neighborhoods are pixel-centered, zero-padded at the image
/// border, and may straddle block boundaries.
pub fn edge_concentration_raw(edges: &EdgeMap) -> BlockGrid {
    let (w, h) = (edges.width(), edges.height());
    let mut variance = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut count = 0u32;
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    count += edges.is_edge(nx, ny) as u32;
                }
            }
            // population variance of nine binary samples: p(1 - p)
            let p = count as f64 / 9.0;
            variance[y * w + x] = p * (1.0 - p);
        }
    }
    block_reduce_field(&variance, w, h, FEATURE_BLOCK).expect("variance field matches edge map")
}

/// [`edge_concentration_raw`] normalized by its global maximum.
pub fn edge_concentration(edges: &EdgeMap) -> BlockGrid {
    let mut grid = edge_concentration_raw(edges);
    grid.normalize_by_max();
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntensityScaling {
    /// Block means are used as-is (samples already lie in `[0, 1]`).
    #[default]
    Identity,
    /// Block means divided by their global maximum.
    GlobalMax,
}

pub fn intensity_map(img: &GrayImage, scaling: IntensityScaling) -> BlockGrid {
    let mut grid = block_reduce(img, FEATURE_BLOCK).expect("feature block size is non-zero");
    if scaling == IntensityScaling::GlobalMax {
        grid.normalize_by_max();
    }
    grid
}

/// Detector output, min-max normalized to `[0, 1]` and block-averaged.
pub fn saliency(img: &GrayImage, detector: &dyn SaliencyDetector) -> Result<BlockGrid> {
    let mut field = detector
        .detect(img)
        .map_err(|e| Error::Detector(format!("{}: {e}", detector.name())))?;
    if field.len() != img.len() {
        return Err(Error::Detector(format!(
            "{} returned {} values for {} pixels",
            detector.name(),
            field.len(),
            img.len()
        )));
    }
    if field.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Detector(format!(
            "{} produced negative or non-finite saliency",
            detector.name()
        )));
    }
    filter::normalize_min_max(&mut field);
    block_reduce_field(&field, img.width(), img.height(), FEATURE_BLOCK)
}

#[derive(Debug, Clone)]
pub struct FeatureConfig {
    pub canny: CannyConfig,
    pub intensity: IntensityScaling,
    pub detector: Arc<dyn SaliencyDetector>,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            canny: CannyConfig::default(),
            intensity: IntensityScaling::default(),
            detector: Arc::new(SpectralResidual::default()),
        }
    }
}

/// Saliency, edge-concentration and intensity grids of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMaps {
    pub saliency: BlockGrid,
    pub edge_concentration: BlockGrid,
    pub intensity: BlockGrid,
}

impl FeatureMaps {
    pub fn compute(img: &GrayImage, config: &FeatureConfig) -> Result<Self> {
        if img.width() < FEATURE_BLOCK || img.height() < FEATURE_BLOCK {
            return Err(Error::InvalidImage(format!(
                "feature extraction needs at least {FEATURE_BLOCK}x{FEATURE_BLOCK} pixels, got {}x{}",
                img.width(),
                img.height()
            )));
        }
        let edges = canny_with(img, &config.canny)?;
        Self::new(
            saliency(img, config.detector.as_ref())?,
            edge_concentration(&edges),
            intensity_map(img, config.intensity),
        )
    }

    pub fn new(saliency: BlockGrid, edge_concentration: BlockGrid, intensity: BlockGrid) -> Result<Self> {
        if !saliency.same_shape(&edge_concentration) || !saliency.same_shape(&intensity) {
            return Err(Error::DimensionMismatch("feature grids are not aligned".into()));
        }
        Ok(Self {
            saliency,
            edge_concentration,
            intensity,
        })
    }

    pub fn rows(&self) -> usize {
        self.saliency.rows()
    }

    pub fn cols(&self) -> usize {
        self.saliency.cols()
    }
}
