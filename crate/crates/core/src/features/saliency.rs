//! Saliency detectors.
//!
//! The default detector is the spectral residual method: the log-amplitude
//! spectrum of a downsampled image minus its local average is recombined with
//! the original phase; the squared inverse transform, smoothed, marks regions
//! whose content departs from the image's overall spectral statistics.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::filter::{gaussian_blur, normalize_min_max};
use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Produces a per-pixel, non-negative saliency field with the image's
/// dimensions (row-major).
pub trait SaliencyDetector: Send + Sync {
    fn name(&self) -> &str;
    fn detect(&self, img: &GrayImage) -> Result<Vec<f64>>;
}

impl fmt::Debug for dyn SaliencyDetector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SaliencyDetector({})", self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralResidual {
    /// Side of the square working resolution.
    pub scale: usize,
    /// Smoothing of the squared reconstruction, in working-resolution pixels.
    pub sigma: f64,
}

impl Default for SpectralResidual {
    fn default() -> Self {
        Self { scale: 64, sigma: 2.5 }
    }
}

impl SaliencyDetector for SpectralResidual {
    fn name(&self) -> &str {
        "spectral-residual"
    }

    fn detect(&self, img: &GrayImage) -> Result<Vec<f64>> {
        let n = self.scale;
        if n < 4 {
            return Err(Error::Detector(format!("working scale {n} is too small")));
        }
        let (w, h) = (img.width(), img.height());
        if img.is_constant() {
            return Ok(vec![0.0; w * h]);
        }
        let small = resample_area(img.data(), w, h, n, n);

        let mut spectrum: Vec<Complex64> = small.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut planner = FftPlanner::new();
        fft2(&mut spectrum, n, planner.plan_fft_forward(n).as_ref());

        // amplitude floor: exact spectral nulls would otherwise dominate the residual
        let floor = spectrum.iter().map(|c| c.norm()).sum::<f64>() / (n * n) as f64 * 1e-2;
        let log_amp: Vec<f64> = spectrum.iter().map(|c| (c.norm() + floor).ln()).collect();
        let averaged = box3_wrapped(&log_amp, n);
        for (i, c) in spectrum.iter_mut().enumerate() {
            let residual = log_amp[i] - averaged[i];
            let phase = c.arg();
            *c = Complex64::from_polar(residual.exp(), phase);
        }
        fft2(&mut spectrum, n, planner.plan_fft_inverse(n).as_ref());

        let energy: Vec<f64> = spectrum.iter().map(|c| c.norm_sqr()).collect();
        let smooth = gaussian_blur(&energy, n, n, self.sigma);
        let mut out = resample_bilinear(&smooth, n, n, w, h);
        for v in &mut out {
            *v = v.max(0.0);
        }
        Ok(out)
    }
}

/// Convex combination of detectors. Each member's field is min-max normalized
/// before weighting, so detectors with different output scales are comparable.
#[derive(Clone)]
pub struct WeightedSaliency {
    members: Vec<(Arc<dyn SaliencyDetector>, f64)>,
    name: String,
}

impl WeightedSaliency {
    pub fn new(members: Vec<(Arc<dyn SaliencyDetector>, f64)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::param("saliency combination needs at least one detector"));
        }
        if members.iter().any(|(_, w)| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::param("saliency weights must be non-negative"));
        }
        let total: f64 = members.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param(format!("saliency weights sum to {total}, expected 1")));
        }
        let name = members
            .iter()
            .map(|(d, w)| format!("{}*{w}", d.name()))
            .collect::<Vec<_>>()
            .join("+");
        Ok(Self { members, name })
    }
}

impl fmt::Debug for WeightedSaliency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedSaliency").field("name", &self.name).finish()
    }
}

impl SaliencyDetector for WeightedSaliency {
    fn name(&self) -> &str {
        &self.name
    }

    fn detect(&self, img: &GrayImage) -> Result<Vec<f64>> {
        let mut acc = vec![0.0; img.len()];
        for (detector, weight) in &self.members {
            let mut field = detector
                .detect(img)
                .map_err(|e| Error::Detector(format!("{}: {e}", detector.name())))?;
            if field.len() != acc.len() {
                return Err(Error::Detector(format!(
                    "{} returned {} values for {} pixels",
                    detector.name(),
                    field.len(),
                    acc.len()
                )));
            }
            normalize_min_max(&mut field);
            for (a, v) in acc.iter_mut().zip(&field) {
                *a += weight * v;
            }
        }
        Ok(acc)
    }
}

fn fft2(data: &mut [Complex64], n: usize, fft: &dyn rustfft::Fft<f64>) {
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n {
        for y in 0..n {
            column[y] = data[y * n + x];
        }
        fft.process(&mut column);
        for y in 0..n {
            data[y * n + x] = column[y];
        }
    }
}

/// 3x3 mean with periodic wrap, matching the periodicity of the spectrum.
fn box3_wrapped(field: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for y in 0..n {
        for x in 0..n {
            let mut acc = 0.0;
            for dy in [n - 1, 0, 1] {
                for dx in [n - 1, 0, 1] {
                    acc += field[((y + dy) % n) * n + (x + dx) % n];
                }
            }
            out[y * n + x] = acc / 9.0;
        }
    }
    out
}

/// Area-weighted resampling; exact box averaging when shrinking.
pub fn resample_area(src: &[f64], sw: usize, sh: usize, dw: usize, dh: usize) -> Vec<f64> {
    let fx = sw as f64 / dw as f64;
    let fy = sh as f64 / dh as f64;
    let mut out = vec![0.0; dw * dh];
    for dy in 0..dh {
        let (y0, y1) = (dy as f64 * fy, (dy + 1) as f64 * fy);
        for dx in 0..dw {
            let (x0, x1) = (dx as f64 * fx, (dx + 1) as f64 * fx);
            let mut acc = 0.0;
            let mut area = 0.0;
            let mut sy = y0.floor() as usize;
            while (sy as f64) < y1 && sy < sh {
                let wy = (y1.min(sy as f64 + 1.0) - y0.max(sy as f64)).max(0.0);
                let mut sx = x0.floor() as usize;
                while (sx as f64) < x1 && sx < sw {
                    let wx = (x1.min(sx as f64 + 1.0) - x0.max(sx as f64)).max(0.0);
                    acc += wx * wy * src[sy * sw + sx];
                    area += wx * wy;
                    sx += 1;
                }
                sy += 1;
            }
            out[dy * dw + dx] = if area > 0.0 { acc / area } else { 0.0 };
        }
    }
    out
}

/// Bilinear resampling with pixel-center alignment and clamped borders.
pub fn resample_bilinear(src: &[f64], sw: usize, sh: usize, dw: usize, dh: usize) -> Vec<f64> {
    let sample = |x: f64, y: f64| {
        let x = x.clamp(0.0, (sw - 1) as f64);
        let y = y.clamp(0.0, (sh - 1) as f64);
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(sw - 1), (y0 + 1).min(sh - 1));
        let (tx, ty) = (x - x0 as f64, y - y0 as f64);
        let top = src[y0 * sw + x0] * (1.0 - tx) + src[y0 * sw + x1] * tx;
        let bottom = src[y1 * sw + x0] * (1.0 - tx) + src[y1 * sw + x1] * tx;
        top * (1.0 - ty) + bottom * ty
    };
    let sx = sw as f64 / dw as f64;
    let sy = sh as f64 / dh as f64;
    let mut out = Vec::with_capacity(dw * dh);
    for y in 0..dh {
        let fy = (y as f64 + 0.5) * sy - 0.5;
        for x in 0..dw {
            out.push(sample((x as f64 + 0.5) * sx - 0.5, fy));
        }
    }
    out
}
