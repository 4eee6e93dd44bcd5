//! Fuzzy c-means clustering of scalar data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcmParams {
    pub clusters: usize,
    /// Fuzzifier, must exceed 1.
    pub m: f64,
    /// Convergence threshold on the largest center displacement.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl FcmParams {
    pub fn new(clusters: usize, seed: u64) -> Self {
        Self {
            clusters,
            m: 2.0,
            tol: 1e-6,
            max_iter: 300,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcmResult {
    pub centers: Vec<f64>,
    /// Row-major `n × k` membership matrix; every row sums to one.
    pub memberships: Vec<f64>,
    /// Objective `Σ u^m d²` after each iteration.
    pub objective_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl FcmResult {
    pub fn clusters(&self) -> usize {
        self.centers.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.centers.len();
        &self.memberships[i * k..(i + 1) * k]
    }

    /// Index of the largest membership per point, first index on ties.
    pub fn hard_assignments(&self) -> Vec<usize> {
        self.memberships
            .chunks_exact(self.centers.len())
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |b, (j, &u)| if u > b.1 { (j, u) } else { b })
                    .0
            })
            .collect()
    }
}

pub fn fcm(data: &[f64], params: &FcmParams) -> Result<FcmResult> {
    let k = params.clusters;
    if data.is_empty() {
        return Err(Error::param("fcm needs at least one sample"));
    }
    if k == 0 || k > data.len() {
        return Err(Error::param(format!(
            "fcm cluster count {k} must be in 1..={}",
            data.len()
        )));
    }
    if !(params.m > 1.0 && params.m.is_finite()) {
        return Err(Error::param(format!("fcm fuzzifier must exceed 1, got {}", params.m)));
    }
    if !(params.tol >= 0.0) {
        return Err(Error::param("fcm tolerance must be non-negative"));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::param("fcm data must be finite"));
    }

    let mut centers = seed_centers(data, k, params.seed);
    let mut memberships = vec![0.0; data.len() * k];
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        update_memberships(data, &centers, params.m, &mut memberships);
        let next = update_centers(data, &memberships, &centers, params.m);
        history.push(objective(data, &memberships, &next, params.m));
        let shift = centers
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        centers = next;
        if shift < params.tol {
            converged = true;
            break;
        }
    }
    update_memberships(data, &centers, params.m, &mut memberships);
    Ok(FcmResult {
        centers,
        memberships,
        objective_history: history,
        iterations,
        converged,
    })
}

/// Stratified quantile seeding: center `j` is a sorted sample drawn from the
/// `j`-th of `k` equal-count strata.
fn seed_centers(data: &[f64], k: usize, seed: u64) -> Vec<f64> {
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = sorted.len();
    (0..k)
        .map(|j| {
            let u: f64 = rng.random();
            let idx = (((j as f64 + u) / k as f64) * n as f64) as usize;
            sorted[idx.min(n - 1)]
        })
        .collect()
}

fn update_memberships(data: &[f64], centers: &[f64], m: f64, out: &mut [f64]) {
    let k = centers.len();
    let exponent = 2.0 / (m - 1.0);
    for (x, row) in data.iter().zip(out.chunks_exact_mut(k)) {
        let zeros = centers.iter().filter(|&&c| c == *x).count();
        if zeros > 0 {
            // coincident center: crisp membership, shared among duplicates
            for (u, &c) in row.iter_mut().zip(centers) {
                *u = if c == *x { 1.0 / zeros as f64 } else { 0.0 };
            }
            continue;
        }
        let d_min = centers.iter().map(|c| (x - c).abs()).fold(f64::INFINITY, f64::min);
        let mut total = 0.0;
        for (u, c) in row.iter_mut().zip(centers) {
            // (d_min / d_j)^e lies in (0, 1], avoiding overflow for tiny distances
            *u = (d_min / (x - c).abs()).powf(exponent);
            total += *u;
        }
        for u in row.iter_mut() {
            *u /= total;
        }
    }
}

fn update_centers(data: &[f64], memberships: &[f64], previous: &[f64], m: f64) -> Vec<f64> {
    let k = previous.len();
    let mut num = vec![0.0; k];
    let mut den = vec![0.0; k];
    for (x, row) in data.iter().zip(memberships.chunks_exact(k)) {
        for j in 0..k {
            let w = row[j].powf(m);
            num[j] += w * x;
            den[j] += w;
        }
    }
    (0..k)
        .map(|j| if den[j] > 0.0 { num[j] / den[j] } else { previous[j] })
        .collect()
}

pub fn objective(data: &[f64], memberships: &[f64], centers: &[f64], m: f64) -> f64 {
    let k = centers.len();
    data.iter()
        .zip(memberships.chunks_exact(k))
        .map(|(x, row)| {
            row.iter()
                .zip(centers)
                .map(|(u, c)| u.powf(m) * (x - c) * (x - c))
                .sum::<f64>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_symmetric_clusters() {
        let r = fcm(&[0.0, 0.0, 1.0, 1.0], &FcmParams::new(2, 42)).unwrap();
        let mut c = r.centers.clone();
        c.sort_by(f64::total_cmp);
        assert!(c[0].abs() < 1e-3 && (c[1] - 1.0).abs() < 1e-3, "{c:?}");
        for (i, x) in [0.0, 0.0, 1.0, 1.0].iter().enumerate() {
            let nearest = if (r.centers[0] - x).abs() < (r.centers[1] - x).abs() {
                0
            } else {
                1
            };
            assert!(r.row(i)[nearest] > 0.99);
        }
        assert!(r.converged);
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let data = [0.1, 0.4, 0.9, 0.2];
        let r = fcm(&data, &FcmParams::new(1, 7)).unwrap();
        assert!((r.centers[0] - 0.4).abs() < 1e-12);
        assert!(r.memberships.iter().all(|&u| u == 1.0));
    }

    #[test]
    fn argument_errors() {
        assert!(fcm(&[], &FcmParams::new(1, 0)).is_err());
        assert!(fcm(&[0.5, 0.6], &FcmParams::new(3, 0)).is_err());
        assert!(fcm(&[0.5, 0.6], &FcmParams::new(0, 0)).is_err());
        let mut p = FcmParams::new(1, 0);
        p.m = 1.0;
        assert!(fcm(&[0.5], &p).is_err());
    }

    #[test]
    fn seeding_is_deterministic() {
        let data: Vec<f64> = (0..50).map(|i| ((i * 37) % 50) as f64 / 50.0).collect();
        let a = fcm(&data, &FcmParams::new(4, 9)).unwrap();
        let b = fcm(&data, &FcmParams::new(4, 9)).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn rows_sum_to_one_and_objective_never_rises(
            data in prop::collection::vec(0.0f64..1.0, 9..80),
            k in 1usize..9,
            seed in any::<u64>(),
        ) {
            let r = fcm(&data, &FcmParams::new(k, seed)).unwrap();
            for i in 0..data.len() {
                prop_assert!((r.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
            for pair in r.objective_history.windows(2) {
                prop_assert!(pair[1] <= pair[0] * (1.0 + 1e-12) + 1e-15, "{:?}", pair);
            }
        }
    }
}
