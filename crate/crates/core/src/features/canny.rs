//! Canny edge detection: Gaussian smoothing, Sobel gradients, 4-direction
//! non-maximum suppression and 8-connected double-threshold hysteresis.

use std::collections::VecDeque;

use super::filter::gaussian_blur;
use crate::error::{Error, Result};
use crate::image::GrayImage;

/// tan(22.5°)
const TAN_22_5: f64 = 0.414_213_562_373_095_1;

/// Binary edge map with the dimensions of its source image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} edge map needs {} bits, got {}",
                width * height,
                bits.len()
            )));
        }
        Ok(Self { width, height, bits })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn is_edge(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_image(&self) -> GrayImage {
        let data = self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        GrayImage::new(self.width, self.height, data).expect("edge map dimensions are valid")
    }
}

/// Quantized gradient orientation used by non-maximum suppression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
    /// Gradient along (+1, +1) in image coordinates (y down).
    Diagonal,
    /// Gradient along (+1, -1).
    AntiDiagonal,
}

impl Direction {
    /// Invariant under negation of the gradient.
    pub fn quantize(gx: f64, gy: f64) -> Self {
        let (ax, ay) = (gx.abs(), gy.abs());
        if ay <= ax * TAN_22_5 {
            Direction::Horizontal
        } else if ax <= ay * TAN_22_5 {
            Direction::Vertical
        } else if (gx > 0.0) == (gy > 0.0) {
            Direction::Diagonal
        } else {
            Direction::AntiDiagonal
        }
    }

    /// Neighbor offsets `(strict, non_strict)`: a pixel survives suppression when
    /// it is strictly greater than the first and at least the second, so plateaus
    /// two pixels wide keep exactly one pixel.
    pub fn neighbors(self) -> ((isize, isize), (isize, isize)) {
        match self {
            Direction::Horizontal => ((-1, 0), (1, 0)),
            Direction::Vertical => ((0, -1), (0, 1)),
            Direction::Diagonal => ((-1, -1), (1, 1)),
            Direction::AntiDiagonal => ((1, -1), (-1, 1)),
        }
    }
}

/// Sobel gradients of the smoothed image.
#[derive(Debug, Clone)]
pub struct Gradient {
    pub width: usize,
    pub height: usize,
    pub gx: Vec<f64>,
    pub gy: Vec<f64>,
    pub magnitude: Vec<f64>,
}

impl Gradient {
    pub fn compute(img: &GrayImage, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::param(format!("canny sigma must be positive, got {sigma}")));
        }
        let (w, h) = (img.width(), img.height());
        // Centering makes the gradient of 1 - s the exact negation of the
        // gradient of s for dyadic inputs.
        let centered: Vec<f64> = img.data().iter().map(|&s| s - 0.5).collect();
        let smooth = gaussian_blur(&centered, w, h, sigma);
        let at = |x: isize, y: isize| {
            let x = x.clamp(0, w as isize - 1) as usize;
            let y = y.clamp(0, h as isize - 1) as usize;
            smooth[y * w + x]
        };
        let mut gx = vec![0.0; w * h];
        let mut gy = vec![0.0; w * h];
        let mut magnitude = vec![0.0; w * h];
        for y in 0..h as isize {
            for x in 0..w as isize {
                let dx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                    - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
                let dy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                    - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
                let i = y as usize * w + x as usize;
                gx[i] = dx;
                gy[i] = dy;
                magnitude[i] = dx.hypot(dy);
            }
        }
        Ok(Self {
            width: w,
            height: h,
            gx,
            gy,
            magnitude,
        })
    }

    /// Nearest-rank percentile of the strictly positive magnitudes, if any.
    pub fn nonzero_percentile(&self, q: f64) -> Option<f64> {
        let mut nz: Vec<f64> = self.magnitude.iter().copied().filter(|&m| m > 0.0).collect();
        if nz.is_empty() {
            return None;
        }
        nz.sort_by(f64::total_cmp);
        let rank = ((q * nz.len() as f64).ceil() as usize).clamp(1, nz.len());
        Some(nz[rank - 1])
    }

    /// Magnitudes after non-maximum suppression; the one-pixel border is zeroed.
    pub fn suppress_non_maxima(&self) -> Vec<f64> {
        let (w, h) = (self.width, self.height);
        let mut out = vec![0.0; w * h];
        if w < 3 || h < 3 {
            return out;
        }
        for y in 1..h - 1 {
            for x in 1..w - 1 {
                let i = y * w + x;
                let m = self.magnitude[i];
                if m <= 0.0 {
                    continue;
                }
                let ((sx, sy), (nx, ny)) = Direction::quantize(self.gx[i], self.gy[i]).neighbors();
                let strict = self.magnitude[(y as isize + sy) as usize * w + (x as isize + sx) as usize];
                let loose = self.magnitude[(y as isize + ny) as usize * w + (x as isize + nx) as usize];
                if m > strict && m >= loose {
                    out[i] = m;
                }
            }
        }
        out
    }
}

/// Threshold selection for [`canny`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thresholds {
    /// Explicit `(low, high)` gradient-magnitude thresholds.
    Fixed { low: f64, high: f64 },
    /// `high` = the given percentile of nonzero gradient magnitudes,
    /// `low` = `ratio * high`.
    Percentile { quantile: f64, ratio: f64 },
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds::Percentile {
            quantile: 0.9,
            ratio: 0.4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CannyConfig {
    pub sigma: f64,
    pub thresholds: Thresholds,
}

impl Default for CannyConfig {
    fn default() -> Self {
        Self {
            sigma: 1.4,
            thresholds: Thresholds::default(),
        }
    }
}

/// Canny with explicit thresholds.
pub fn canny(img: &GrayImage, sigma: f64, t_low: f64, t_high: f64) -> Result<EdgeMap> {
    check_size(img)?;
    if !(0.0 <= t_low && t_low < t_high) {
        return Err(Error::param(format!(
            "canny thresholds must satisfy 0 <= low < high, got low={t_low} high={t_high}"
        )));
    }
    let grad = Gradient::compute(img, sigma)?;
    Ok(hysteresis(
        &grad.suppress_non_maxima(),
        grad.width,
        grad.height,
        t_low,
        t_high,
    ))
}

/// Canny using the threshold policy in `config`. An image without any
/// gradient yields an empty edge map.
pub fn canny_with(img: &GrayImage, config: &CannyConfig) -> Result<EdgeMap> {
    match config.thresholds {
        Thresholds::Fixed { low, high } => canny(img, config.sigma, low, high),
        Thresholds::Percentile { quantile, ratio } => {
            check_size(img)?;
            if !(0.0 < quantile && quantile <= 1.0 && (0.0..1.0).contains(&ratio)) {
                return Err(Error::param(format!(
                    "percentile thresholds need quantile in (0, 1] and ratio in [0, 1), got {quantile}/{ratio}"
                )));
            }
            let grad = Gradient::compute(img, config.sigma)?;
            let (w, h) = (img.width(), img.height());
            match grad.nonzero_percentile(quantile) {
                Some(high) => Ok(hysteresis(&grad.suppress_non_maxima(), w, h, ratio * high, high)),
                None => EdgeMap::new(w, h, vec![false; w * h]),
            }
        }
    }
}

fn check_size(img: &GrayImage) -> Result<()> {
    if img.width() < 3 || img.height() < 3 {
        return Err(Error::InvalidImage(format!(
            "canny needs at least 3x3 pixels, got {}x{}",
            img.width(),
            img.height()
        )));
    }
    Ok(())
}

fn hysteresis(thinned: &[f64], w: usize, h: usize, low: f64, high: f64) -> EdgeMap {
    let mut bits = vec![false; w * h];
    let mut queue = VecDeque::new();
    for (i, &m) in thinned.iter().enumerate() {
        if m > 0.0 && m >= high {
            bits[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if !bits[j] && thinned[j] > 0.0 && thinned[j] >= low {
                    bits[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    EdgeMap {
        width: w,
        height: h,
        bits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn step_image() -> GrayImage {
        GrayImage::from_fn(32, 32, |x, _| if x < 16 { 0.0 } else { 1.0 }).unwrap()
    }

    fn dyadic_image(seed: u64, w: usize, h: usize) -> GrayImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // blocky structure plus dyadic noise so 1 - s is exact
        let base: Vec<f64> = (0..16).map(|_| rng.random_range(0..=16) as f64 / 16.0).collect();
        GrayImage::from_fn(w, h, |x, y| {
            let b = base[(y * 4 / h) * 4 + x * 4 / w];
            (b + rng.random_range(0..4) as f64 / 64.0).min(1.0)
        })
        .unwrap()
    }

    #[test]
    fn constant_image_has_no_edges() {
        let img = GrayImage::filled(20, 20, 0.37).unwrap();
        assert_eq!(canny(&img, 1.4, 0.1, 0.2).unwrap().count(), 0);
        assert_eq!(canny_with(&img, &CannyConfig::default()).unwrap().count(), 0);
    }

    #[test]
    fn vertical_step_gives_single_column() {
        let edges = canny(&step_image(), 1.4, 0.2, 0.5).unwrap();
        let mut columns = std::collections::BTreeSet::new();
        for y in 0..32 {
            for x in 0..32 {
                if edges.is_edge(x, y) {
                    columns.insert(x);
                }
            }
        }
        assert_eq!(columns.len(), 1, "edge columns {columns:?}");
        let col = *columns.iter().next().unwrap();
        assert!(col == 15 || col == 16);
        for y in 2..30 {
            assert!(edges.is_edge(col, y), "row {y} missing");
        }
        // same with the percentile policy
        let auto = canny_with(&step_image(), &CannyConfig::default()).unwrap();
        assert!(auto.count() >= 28);
        assert!((0..32).all(|y| (0..32).all(|x| !auto.is_edge(x, y) || x == col)));
    }

    #[test]
    fn edge_count_invariant_under_inversion() {
        for seed in 0..8 {
            let img = dyadic_image(seed, 40, 36);
            let inv = GrayImage::new(40, 36, img.data().iter().map(|s| 1.0 - s).collect()).unwrap();
            let a = canny_with(&img, &CannyConfig::default()).unwrap();
            let b = canny_with(&inv, &CannyConfig::default()).unwrap();
            assert_eq!(a.count(), b.count());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn survivors_are_directional_maxima() {
        let img = dyadic_image(99, 48, 48);
        let grad = Gradient::compute(&img, 1.4).unwrap();
        let edges = canny_with(&img, &CannyConfig::default()).unwrap();
        assert!(edges.count() > 0);
        for y in 1..47 {
            for x in 1..47 {
                if !edges.is_edge(x, y) {
                    continue;
                }
                let i = y * 48 + x;
                let ((sx, sy), (nx, ny)) = Direction::quantize(grad.gx[i], grad.gy[i]).neighbors();
                let m = grad.magnitude[i];
                let a = grad.magnitude[((y as isize + sy) * 48 + x as isize + sx) as usize];
                let b = grad.magnitude[((y as isize + ny) * 48 + x as isize + nx) as usize];
                assert!(m >= a && m >= b);
            }
        }
    }

    #[test]
    fn argument_errors() {
        let img = step_image();
        assert!(canny(&img, 1.4, 0.5, 0.5).is_err());
        assert!(canny(&img, 1.4, -0.1, 0.5).is_err());
        assert!(canny(&img, 0.0, 0.1, 0.5).is_err());
        let tiny = GrayImage::filled(2, 5, 0.0).unwrap();
        assert!(matches!(canny(&tiny, 1.4, 0.1, 0.2), Err(Error::InvalidImage(_))));
    }

    #[test]
    fn quantization_is_sign_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let (gx, gy) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            assert_eq!(Direction::quantize(gx, gy), Direction::quantize(-gx, -gy));
        }
        assert_eq!(Direction::quantize(1.0, 0.0), Direction::Horizontal);
        assert_eq!(Direction::quantize(0.0, -1.0), Direction::Vertical);
        assert_eq!(Direction::quantize(1.0, 1.0), Direction::Diagonal);
        assert_eq!(Direction::quantize(-1.0, 1.0), Direction::AntiDiagonal);
    }
}
