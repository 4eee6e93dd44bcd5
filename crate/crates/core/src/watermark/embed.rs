use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dct::{zigzag, Dct};
use crate::error::{Error, Result};
use crate::image::{GrayImage, RegionMask};

/// Zig-zag positions eligible for modification, DC excluded.
pub const MID_BAND: std::ops::RangeInclusive<usize> = 3..=20;

/// Additive mid-frequency DCT embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedSpec {
    pub block_size: usize,
    pub strength: f64,
    pub block_fraction: f64,
    pub region: Option<RegionMask>,
    pub seed: u64,
}

impl EmbedSpec {
    /// Coefficients changed in every selected block.
    pub const COEFFICIENTS_PER_BLOCK: usize = 2;

    pub fn new(strength: f64, seed: u64) -> Self {
        Self {
            block_size: 16,
            strength,
            block_fraction: 1.0,
            region: None,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.block_size < 8 {
            return Err(Error::param(format!(
                "block size must be at least 8, got {}",
                self.block_size
            )));
        }
        if !self.strength.is_finite() || self.strength < 0.0 {
            return Err(Error::param(format!(
                "strength must be finite and non-negative, got {}",
                self.strength
            )));
        }
        if !(self.block_fraction > 0.0 && self.block_fraction <= 1.0) {
            return Err(Error::param(format!(
                "block fraction must lie in (0, 1], got {}",
                self.block_fraction
            )));
        }
        Ok(())
    }
}

/// Raster-order origins of the full blocks at least half covered by `region`.
pub fn eligible_blocks(width: usize, height: usize, block: usize, region: Option<&RegionMask>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for by in 0..height / block {
        for bx in 0..width / block {
            let (x0, y0) = (bx * block, by * block);
            let covered = match region {
                None => block * block,
                Some(mask) => (y0..y0 + block)
                    .flat_map(|y| (x0..x0 + block).map(move |x| (x, y)))
                    .filter(|&(x, y)| mask.contains(x, y))
                    .count(),
            };
            if 2 * covered >= block * block {
                out.push((x0, y0));
            }
        }
    }
    out
}

pub fn embed(img: &GrayImage, spec: &EmbedSpec) -> Result<GrayImage> {
    spec.validate()?;
    let b = spec.block_size;
    let (w, h) = (img.width(), img.height());
    if w < b || h < b {
        return Err(Error::InvalidImage(format!(
            "{w}x{h} image is smaller than one {b}x{b} block"
        )));
    }
    if let Some(mask) = &spec.region {
        if !mask.matches(img) {
            return Err(Error::DimensionMismatch(format!(
                "region is {}x{}, image is {w}x{h}",
                mask.width(),
                mask.height()
            )));
        }
    }
    let eligible = eligible_blocks(w, h, b, spec.region.as_ref());
    if eligible.is_empty() {
        return Err(Error::param("embedding region covers no block"));
    }
    if spec.strength == 0.0 {
        return Ok(img.clone());
    }
    let count = ((spec.block_fraction * eligible.len() as f64).ceil() as usize).min(eligible.len());
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut chosen = index::sample(&mut rng, eligible.len(), count).into_vec();
    chosen.sort_unstable();

    let dct = Dct::new(b)?;
    let band: Vec<(usize, usize)> = zigzag(b)[MID_BAND].to_vec();
    let blocks_per_row = w / b;
    let mut data = img.data().to_vec();
    for &i in &chosen {
        let (x0, y0) = eligible[i];
        let block_index = (y0 / b * blocks_per_row + x0 / b) as u64;
        let mut block_rng = ChaCha8Rng::seed_from_u64(spec.seed ^ block_index);
        let picks = index::sample(&mut block_rng, band.len(), EmbedSpec::COEFFICIENTS_PER_BLOCK);

        let block: Vec<f64> = (0..b * b).map(|k| data[(y0 + k / b) * w + x0 + k % b]).collect();
        let mut coeffs = dct.forward(&block)?;
        for p in picks {
            let (r, c) = band[p];
            coeffs[r * b + c] += spec.strength;
        }
        let marked = dct.inverse(&coeffs)?;
        for (k, v) in marked.into_iter().enumerate() {
            data[(y0 + k / b) * w + x0 + k % b] = v;
        }
    }
    GrayImage::from_clamped(w, h, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::mse;

    fn textured(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| 0.4 + 0.2 * ((x * 7 + y * 3) % 11) as f64 / 11.0).unwrap()
    }

    #[test]
    fn zero_strength_is_identity() {
        let img = textured(40, 36);
        let out = embed(&img, &EmbedSpec::new(0.0, 3)).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn deterministic_per_seed() {
        let img = textured(64, 64);
        let mut spec = EmbedSpec::new(0.05, 11);
        spec.block_fraction = 0.5;
        let a = embed(&img, &spec).unwrap();
        assert_eq!(a, embed(&img, &spec).unwrap());
        spec.seed = 12;
        assert_ne!(a, embed(&img, &spec).unwrap());
    }

    #[test]
    fn energy_matches_parseval_in_clamp_free_regime() {
        let img = textured(64, 48);
        let s = 0.5 / 256.0;
        let out = embed(&img, &EmbedSpec::new(s, 5)).unwrap();
        let expected = 2.0 * s * s / 256.0;
        let got = mse(&img, &out).unwrap();
        assert!(
            (got - expected).abs() < 1e-12 * expected.max(1e-300) + 1e-18,
            "{got} vs {expected}"
        );
    }

    #[test]
    fn only_selected_full_blocks_change() {
        let img = textured(40, 40);
        let region = RegionMask::from_fn(40, 40, |x, y| x < 16 && y < 16);
        let mut spec = EmbedSpec::new(0.1, 1);
        spec.region = Some(region);
        let out = embed(&img, &spec).unwrap();
        for y in 0..40 {
            for x in 0..40 {
                if x >= 16 || y >= 16 {
                    assert_eq!(out.get(x, y), img.get(x, y));
                }
            }
        }
        assert_ne!(out, img);
        assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn fraction_controls_block_count() {
        let img = textured(64, 64);
        let mut spec = EmbedSpec::new(0.1, 8);
        spec.block_fraction = 0.3;
        let out = embed(&img, &spec).unwrap();
        let changed = eligible_blocks(64, 64, 16, None)
            .into_iter()
            .filter(|&(x0, y0)| {
                (0..256).any(|k| out.get(x0 + k % 16, y0 + k / 16) != img.get(x0 + k % 16, y0 + k / 16))
            })
            .count();
        assert_eq!(changed, 5); // ⌈0.3 · 16⌉
    }

    #[test]
    fn errors() {
        let img = textured(12, 40);
        assert!(embed(&img, &EmbedSpec::new(0.1, 0)).is_err());
        let img = textured(32, 32);
        let mut spec = EmbedSpec::new(0.1, 0);
        spec.region = Some(RegionMask::from_fn(32, 32, |_, _| false));
        assert!(embed(&img, &spec).is_err());
        let mut spec = EmbedSpec::new(0.1, 0);
        spec.block_size = 4;
        assert!(embed(&img, &spec).is_err());
        assert!(embed(&img, &EmbedSpec::new(f64::NAN, 0)).is_err());
    }
}
