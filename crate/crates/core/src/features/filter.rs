//! Small separable filters over row-major `f64` fields.

/// Normalized 1-D Gaussian kernel with radius `ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let two_s2 = 2.0 * sigma * sigma;
    let raw: Vec<f64> = (-radius..=radius).map(|i| (-((i * i) as f64) / two_s2).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Separable convolution with replicate borders.
pub fn convolve_separable(field: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let r = (kernel.len() / 2) as isize;
    let (w, h) = (width as isize, height as isize);
    let mut tmp = vec![0.0; field.len()];
    for y in 0..height {
        let row = &field[y * width..(y + 1) * width];
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &wk) in kernel.iter().enumerate() {
                let xx = (x + k as isize - r).clamp(0, w - 1) as usize;
                acc += wk * row[xx];
            }
            tmp[y * width + x as usize] = acc;
        }
    }
    let mut out = vec![0.0; field.len()];
    for y in 0..h {
        for x in 0..width {
            let mut acc = 0.0;
            for (k, &wk) in kernel.iter().enumerate() {
                let yy = (y + k as isize - r).clamp(0, h - 1) as usize;
                acc += wk * tmp[yy * width + x];
            }
            out[y as usize * width + x] = acc;
        }
    }
    out
}

pub fn gaussian_blur(field: &[f64], width: usize, height: usize, sigma: f64) -> Vec<f64> {
    convolve_separable(field, width, height, &gaussian_kernel(sigma))
}

/// Min-max normalization into `[0, 1]`; a constant field maps to all zeros.
pub fn normalize_min_max(field: &mut [f64]) {
    let (lo, hi) = field.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let range = hi - lo;
    if range > 0.0 && range.is_finite() {
        for v in field.iter_mut() {
            *v = ((*v - lo) / range).clamp(0.0, 1.0);
        }
    } else {
        field.fill(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_normalized_and_symmetric() {
        let k = gaussian_kernel(1.4);
        assert_eq!(k.len(), 2 * 5 + 1);
        assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..k.len() {
            assert_eq!(k[i], k[k.len() - 1 - i]);
        }
    }

    #[test]
    fn blur_preserves_constants() {
        let f = vec![0.25; 7 * 5];
        assert!(gaussian_blur(&f, 7, 5, 2.0).iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn min_max_guard() {
        let mut f = vec![3.0; 4];
        normalize_min_max(&mut f);
        assert_eq!(f, vec![0.0; 4]);
        let mut f = vec![1.0, 3.0, 2.0];
        normalize_min_max(&mut f);
        assert_eq!(f, vec![0.0, 1.0, 0.5]);
    }
}
