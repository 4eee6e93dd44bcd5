use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{GrayImage, RegionMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    /// Pixels saturate to 0 or 1 with probability `param`.
    SaltPepper,
    /// Additive zero-mean noise with standard deviation `param`.
    GaussianNoise,
}

impl AttackKind {
    /// Short tag used in experiment tables.
    pub fn tag(&self) -> &'static str {
        match self {
            AttackKind::SaltPepper => "SP",
            AttackKind::GaussianNoise => "GN",
        }
    }

    pub fn check_param(&self, param: f64) -> Result<()> {
        let ok = match self {
            AttackKind::SaltPepper => (0.0..=1.0).contains(&param),
            AttackKind::GaussianNoise => param >= 0.0 && param.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!("{self} parameter out of range: {param}")))
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackKind::SaltPepper => "salt-pepper",
            AttackKind::GaussianNoise => "gaussian-noise",
        })
    }
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" | "salt-pepper" => Ok(AttackKind::SaltPepper),
            "gn" | "gaussian-noise" => Ok(AttackKind::GaussianNoise),
            other => Err(Error::param(format!("unknown attack kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackSpec {
    pub kind: AttackKind,
    pub param: f64,
    pub region: RegionMask,
    pub seed: u64,
}

/// Applies the attack to masked pixels only; the rest stay bit-identical.
pub fn attack(img: &GrayImage, spec: &AttackSpec) -> Result<GrayImage> {
    spec.kind.check_param(spec.param)?;
    if !spec.region.matches(img) {
        return Err(Error::DimensionMismatch(format!(
            "attack region is {}x{}, image is {}x{}",
            spec.region.width(),
            spec.region.height(),
            img.width(),
            img.height()
        )));
    }
    if spec.param == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut data = img.data().to_vec();
    let masked = data
        .iter_mut()
        .zip(spec.region.bits())
        .filter(|(_, &m)| m)
        .map(|(v, _)| v);
    match spec.kind {
        AttackKind::SaltPepper => {
            for v in masked {
                if rng.random::<f64>() < spec.param {
                    *v = if rng.random::<bool>() { 1.0 } else { 0.0 };
                }
            }
        }
        AttackKind::GaussianNoise => {
            let noise = Normal::new(0.0, spec.param).map_err(|e| Error::param(e.to_string()))?;
            for v in masked {
                *v += noise.sample(&mut rng);
            }
        }
    }
    GrayImage::from_clamped(img.width(), img.height(), data)
}
