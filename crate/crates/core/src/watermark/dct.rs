//! Orthonormal type-II 2-D DCT on square blocks.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Cached basis for `b×b` blocks. `basis[k * b + n] = a_k cos(π (2n + 1) k / 2b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dct {
    size: usize,
    basis: Vec<f64>,
}

impl Dct {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::param(format!("DCT block size must be at least 2, got {size}")));
        }
        let b = size as f64;
        let mut basis = vec![0.0; size * size];
        for k in 0..size {
            let a = if k == 0 { (1.0 / b).sqrt() } else { (2.0 / b).sqrt() };
            for n in 0..size {
                basis[k * size + n] = a * (PI * (2 * n + 1) as f64 * k as f64 / (2.0 * b)).cos();
            }
        }
        Ok(Self { size, basis })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check(&self, block: &[f64]) -> Result<()> {
        if block.len() != self.size * self.size {
            return Err(Error::DimensionMismatch(format!(
                "{0}x{0} DCT needs {1} samples, got {2}",
                self.size,
                self.size * self.size,
                block.len()
            )));
        }
        Ok(())
    }

    /// `C X Cᵀ` for a row-major block `X`.
    pub fn forward(&self, block: &[f64]) -> Result<Vec<f64>> {
        self.check(block)?;
        Ok(self.transform(block, false))
    }

    /// `Cᵀ Y C`, the exact inverse of [`Dct::forward`].
    pub fn inverse(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check(coeffs)?;
        Ok(self.transform(coeffs, true))
    }

    fn transform(&self, input: &[f64], inverse: bool) -> Vec<f64> {
        let b = self.size;
        // entry (i, j) of C, or of Cᵀ when inverse
        let m = |i: usize, j: usize| {
            if inverse {
                self.basis[j * b + i]
            } else {
                self.basis[i * b + j]
            }
        };
        let mut tmp = vec![0.0; b * b];
        for r in 0..b {
            for c in 0..b {
                tmp[r * b + c] = (0..b).map(|n| m(r, n) * input[n * b + c]).sum();
            }
        }
        let mut out = vec![0.0; b * b];
        for r in 0..b {
            for c in 0..b {
                out[r * b + c] = (0..b).map(|n| tmp[r * b + n] * m(c, n)).sum();
            }
        }
        out
    }
}

fn side_of(len: usize) -> Result<usize> {
    let side = (len as f64).sqrt().round() as usize;
    if side * side != len {
        return Err(Error::DimensionMismatch(format!(
            "block of {len} samples is not square"
        )));
    }
    Ok(side)
}

/// Forward DCT of a square row-major block; the side is inferred from its length.
pub fn dct2(block: &[f64]) -> Result<Vec<f64>> {
    Dct::new(side_of(block.len())?)?.forward(block)
}

pub fn idct2(coeffs: &[f64]) -> Result<Vec<f64>> {
    Dct::new(side_of(coeffs.len())?)?.inverse(coeffs)
}

/// JPEG zig-zag scan of a `b×b` block as `(row, col)` pairs.
pub fn zigzag(size: usize) -> Vec<(usize, usize)> {
    let mut order = Vec::with_capacity(size * size);
    for s in 0..(2 * size).saturating_sub(1) {
        let lo = s.saturating_sub(size - 1);
        let hi = s.min(size - 1);
        if s % 2 == 0 {
            // walk up and to the right
            for r in (lo..=hi).rev() {
                order.push((r, s - r));
            }
        } else {
            for r in lo..=hi {
                order.push((r, s - r));
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(block: &[f64], b: usize) -> Vec<f64> {
        let a = |k: usize| {
            if k == 0 {
                (1.0 / b as f64).sqrt()
            } else {
                (2.0 / b as f64).sqrt()
            }
        };
        let mut out = vec![0.0; b * b];
        for u in 0..b {
            for v in 0..b {
                let mut acc = 0.0;
                for x in 0..b {
                    for y in 0..b {
                        acc += block[x * b + y]
                            * (PI * (2 * x + 1) as f64 * u as f64 / (2 * b) as f64).cos()
                            * (PI * (2 * y + 1) as f64 * v as f64 / (2 * b) as f64).cos();
                    }
                }
                out[u * b + v] = a(u) * a(v) * acc;
            }
        }
        out
    }

    #[test]
    fn constant_block_has_only_dc() {
        let c = 0.37;
        let y = dct2(&vec![c; 256]).unwrap();
        assert!((y[0] - c * 16.0).abs() < 1e-12);
        assert!(y[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn matches_direct_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for b in [2, 3, 8] {
            let block: Vec<f64> = (0..b * b).map(|_| rng.random()).collect();
            let fast = dct2(&block).unwrap();
            for (f, s) in fast.iter().zip(naive(&block, b)) {
                assert!((f - s).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(dct2(&[0.0; 15]).is_err());
        assert!(dct2(&[0.0; 1]).is_err());
        assert!(Dct::new(16).unwrap().forward(&[0.0; 64]).is_err());
    }

    #[test]
    fn zigzag_prefix() {
        let z = zigzag(4);
        assert_eq!(&z[..6], &[(0, 0), (0, 1), (1, 0), (2, 0), (1, 1), (0, 2)]);
        assert_eq!(z[15], (3, 3));
        let mut seen = z.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 16);
        assert_eq!(zigzag(16).len(), 256);
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let block: Vec<f64> = (0..256).map(|_| rng.random()).collect();
            let dct = Dct::new(16).unwrap();
            let y = dct.forward(&block).unwrap();
            let back = dct.inverse(&y).unwrap();
            for (a, b) in block.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-9);
            }
            let e_x: f64 = block.iter().map(|v| v * v).sum();
            let e_y: f64 = y.iter().map(|v| v * v).sum();
            prop_assert!((e_x - e_y).abs() < 1e-9);
        }
    }
}
