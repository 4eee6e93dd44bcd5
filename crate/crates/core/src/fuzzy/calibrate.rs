//! Data-driven membership functions for edge concentration.
//!
//! Samples are clustered into nine fuzzy clusters, each cluster is modelled as
//! a Gaussian, and the nine Gaussians are merged into three contiguous groups
//! of balanced sample mass. Each group becomes one membership function.

use std::f64::consts::PI;

use super::fcm::{fcm, FcmParams};
use super::membership::MembershipFunction;
use crate::error::{Error, Result};

pub const CALIBRATION_CLUSTERS: usize = 9;
pub const MIN_CALIBRATION_SAMPLES: usize = 27;
const STD_FLOOR: f64 = 1e-3;
const GRID_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
struct ClusterFit {
    mean: f64,
    std: f64,
    soft_mass: f64,
    hard_mass: usize,
}

impl ClusterFit {
    fn density(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.std;
        (-0.5 * z * z).exp() / (self.std * (2.0 * PI).sqrt())
    }
}

/// Low, medium and high membership functions fitted to edge-concentration
/// samples in `[0, 1]`.
pub fn build_edge_memberships(samples: &[f64], seed: u64) -> Result<[MembershipFunction; 3]> {
    if samples.len() < MIN_CALIBRATION_SAMPLES {
        return Err(Error::param(format!(
            "edge calibration needs at least {MIN_CALIBRATION_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::param("edge calibration samples must lie in [0, 1]"));
    }
    let params = FcmParams::new(CALIBRATION_CLUSTERS, seed);
    let result = fcm(samples, &params)?;
    let hard = result.hard_assignments();

    let mut fits: Vec<ClusterFit> = (0..CALIBRATION_CLUSTERS)
        .map(|j| {
            let center = result.centers[j];
            let (mut var, mut soft) = (0.0, 0.0);
            for (i, &x) in samples.iter().enumerate() {
                let u = result.row(i)[j];
                var += u * (x - center) * (x - center);
                soft += u;
            }
            let std = if soft > 0.0 { (var / soft).sqrt() } else { 0.0 };
            ClusterFit {
                mean: center,
                std: std.max(STD_FLOOR),
                soft_mass: soft,
                hard_mass: hard.iter().filter(|&&h| h == j).count(),
            }
        })
        .collect();
    fits.sort_by(|a, b| a.mean.total_cmp(&b.mean));

    let (a, b) = balanced_cuts(&fits.iter().map(|f| f.hard_mass).collect::<Vec<_>>());
    let groups = [&fits[..a], &fits[a..b], &fits[b..]];

    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| i as f64 / (GRID_POINTS - 1) as f64).collect();
    let mut out = Vec::with_capacity(3);
    for members in &groups {
        let curve: Vec<f64> = grid
            .iter()
            .map(|&x| members.iter().map(|f| f.soft_mass * f.density(x)).fold(0.0, f64::max))
            .collect();
        let peak = curve.iter().copied().fold(0.0, f64::max);
        if !(peak > 0.0) {
            return Err(Error::param("edge calibration produced an empty membership group"));
        }
        let vertices = grid.iter().zip(&curve).map(|(&x, &v)| (x, v / peak)).collect();
        out.push(MembershipFunction::new(vertices)?);
    }
    Ok(out.try_into().expect("exactly three groups"))
}

/// Cut points `(a, b)`, `0 < a < b < n`, splitting the sorted clusters into
/// three contiguous groups whose masses are closest to equal (least squares).
fn balanced_cuts(masses: &[usize]) -> (usize, usize) {
    let n = masses.len();
    let total: usize = masses.iter().sum();
    let target = total as f64 / 3.0;
    let prefix: Vec<usize> = std::iter::once(0)
        .chain(masses.iter().scan(0, |acc, &m| {
            *acc += m;
            Some(*acc)
        }))
        .collect();
    let mut best = (1, 2);
    let mut best_cost = f64::INFINITY;
    for a in 1..n - 1 {
        for b in a + 1..n {
            let sizes = [prefix[a], prefix[b] - prefix[a], total - prefix[b]];
            let cost: f64 = sizes.iter().map(|&s| (s as f64 - target).powi(2)).sum();
            if cost < best_cost {
                best_cost = cost;
                best = (a, b);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spikes(seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..300)
            .map(|i| [0.1, 0.5, 0.9][i % 3] + rng.random_range(-0.02..0.02))
            .collect()
    }

    #[test]
    fn recovers_separated_modes() {
        for seed in 0..5 {
            let mfs = build_edge_memberships(&spikes(seed), seed).unwrap();
            for (mf, mode) in mfs.iter().zip([0.1, 0.5, 0.9]) {
                assert_eq!(mf.max_degree(), 1.0);
                assert!((mf.peak() - mode).abs() <= 0.05, "peak {} for mode {mode}", mf.peak());
            }
        }
    }

    #[test]
    fn functions_cover_the_sample_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let uniform: Vec<f64> = (0..400).map(|_| rng.random::<f64>()).collect();
        for data in [spikes(3), uniform] {
            let mfs = build_edge_memberships(&data, 1).unwrap();
            let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for i in 0..=1000 {
                let x = lo + (hi - lo) * i as f64 / 1000.0;
                let cover = mfs.iter().map(|f| f.eval(x)).fold(0.0, f64::max);
                assert!(cover > 0.0, "gap at {x}");
            }
        }
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(build_edge_memberships(&[0.5; 26], 0).is_err());
        let mut v = vec![0.5; 30];
        v[3] = 1.5;
        assert!(build_edge_memberships(&v, 0).is_err());
    }

    #[test]
    fn balanced_cuts_prefers_equal_thirds() {
        assert_eq!(balanced_cuts(&[10, 10, 10, 10, 10, 10, 10, 10, 10]), (3, 6));
        assert_eq!(balanced_cuts(&[30, 0, 0, 0, 30, 0, 0, 0, 30]), (1, 5));
        let (a, b) = balanced_cuts(&[1, 1, 1, 1, 1, 1, 1, 1, 90]);
        assert_eq!(b, 8);
        assert!((1..8).contains(&a));
    }
}
