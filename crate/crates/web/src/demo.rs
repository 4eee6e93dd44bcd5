//! Target-independent state behind the browser bindings.

use wfpsnr::fuzzy::{FuzzySystem, Orientation};
use wfpsnr::image::{decode_pgm, upsample_nearest};
use wfpsnr::metrics::ScoreReport;
use wfpsnr::synthetic::test_image;
use wfpsnr::watermark::{attack, decile_regions, AttackKind, AttackSpec};
use wfpsnr::{Analysis, BlockGrid, Error, GrayImage, Pipeline, RegionMask, Result};

/// Maps rendered by [`Session::layer`].
pub const LAYERS: [&str; 5] = ["weights", "saliency", "edge", "intensity", "fuzzy"];

pub struct Session {
    reference: GrayImage,
    analysis: Analysis,
    important: RegionMask,
    unimportant: RegionMask,
}

/// Grayscale samples as opaque RGBA bytes for an `ImageData`.
pub fn to_rgba(img: &GrayImage) -> Vec<u8> {
    img.to_bytes().into_iter().flat_map(|v| [v, v, v, 255]).collect()
}

impl Session {
    pub fn new(reference: GrayImage, orientation: Orientation) -> Result<Self> {
        let pipeline = Pipeline {
            orientation,
            ..Pipeline::default()
        };
        let analysis = pipeline.analyze(&reference)?;
        let (important, unimportant) = decile_regions(&analysis.weights)?;
        Ok(Self {
            reference,
            analysis,
            important,
            unimportant,
        })
    }

    pub fn synthetic(orientation: Orientation) -> Result<Self> {
        Self::new(test_image(), orientation)
    }

    pub fn from_pgm(bytes: &[u8], orientation: Orientation) -> Result<Self> {
        Self::new(decode_pgm(bytes)?, orientation)
    }

    pub fn reference(&self) -> &GrayImage {
        &self.reference
    }

    fn block_layer(&self, grid: &BlockGrid, stretch: bool) -> Result<GrayImage> {
        let (w, h) = (self.reference.width(), self.reference.height());
        let field = upsample_nearest(grid, w, h)?;
        if stretch {
            GrayImage::from_min_max(w, h, &field)
        } else {
            GrayImage::from_clamped(w, h, field)
        }
    }

    /// One of [`LAYERS`] at pixel resolution, ready for display.
    pub fn layer(&self, name: &str) -> Result<GrayImage> {
        let f = &self.analysis.features;
        let (w, h) = (self.reference.width(), self.reference.height());
        match name {
            "weights" => GrayImage::from_min_max(w, h, self.analysis.weights.weights()),
            "saliency" => self.block_layer(&f.saliency, false),
            "edge" => self.block_layer(&f.edge_concentration, false),
            "intensity" => self.block_layer(&f.intensity, false),
            "fuzzy" => self.block_layer(&self.analysis.fuzzy, true),
            other => Err(Error::InvalidParameter(format!("unknown layer {other:?}"))),
        }
    }

    pub fn region(&self, name: &str) -> Result<RegionMask> {
        match name {
            "important" => Ok(self.important.clone()),
            "non-important" => Ok(self.unimportant.clone()),
            "all" => Ok(RegionMask::full(self.reference.width(), self.reference.height())),
            other => Err(Error::InvalidParameter(format!("unknown region {other:?}"))),
        }
    }

    /// Attacks `region` of the reference and scores the result against it.
    pub fn attack(&self, kind: &str, param: f64, region: &str, seed: u64) -> Result<(GrayImage, ScoreReport)> {
        let kind: AttackKind = kind.parse()?;
        let spec = AttackSpec {
            kind,
            param,
            region: self.region(region)?,
            seed,
        };
        let attacked = attack(&self.reference, &spec)?;
        let report = ScoreReport::compute(&self.reference, &attacked, &self.analysis.weights)?;
        Ok((attacked, report))
    }
}

/// Default-system inference on one feature triple.
pub fn infer(saliency: f64, edge: f64, intensity: f64) -> Result<f64> {
    thread_local! {
        static SYSTEM: FuzzySystem = FuzzySystem::default();
    }
    SYSTEM.with(|s| s.infer(saliency, edge, intensity))
}
