use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use super::attack::{attack, AttackKind, AttackSpec};
use crate::error::{Error, Result};
use crate::fuzzy::WeightMap;
use crate::image::{GrayImage, RegionMask};
use crate::metrics::{db_text, db_value, psnr, wfpsnr};

/// Fraction of pixels in each of the top and bottom weight regions.
pub const DECILE: f64 = 0.1;

pub const CSV_HEADER: &str = "attack,kind,param,region,psnr_db,wfpsnr_db";

/// One attack, applied in turn to the important and the non-important region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttackPair {
    pub kind: AttackKind,
    pub param: f64,
    pub seed: u64,
}

impl AttackPair {
    pub fn label(&self) -> String {
        format!("{}({})", self.kind.tag(), self.param)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Important,
    NonImportant,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Important => "important",
            Phase::NonImportant => "non-important",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub pair: AttackPair,
    pub phase: Phase,
    pub psnr: f64,
    pub wfpsnr: f64,
}

impl ExperimentRow {
    /// The weighted score moves in the direction the region's importance predicts.
    pub fn ordering_ok(&self) -> bool {
        match self.phase {
            Phase::Important => self.wfpsnr < self.psnr,
            Phase::NonImportant => self.wfpsnr > self.psnr,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub important_pixels: usize,
    pub nonimportant_pixels: usize,
}

impl ExperimentReport {
    fn verdict(&self, phase: Phase) -> bool {
        let mut rows = self.rows.iter().filter(|r| r.phase == phase).peekable();
        rows.peek().is_some() && rows.all(ExperimentRow::ordering_ok)
    }

    pub fn ordering_important_ok(&self) -> bool {
        self.verdict(Phase::Important)
    }

    pub fn ordering_nonimportant_ok(&self) -> bool {
        self.verdict(Phase::NonImportant)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.pair.label(),
                r.pair.kind,
                r.pair.param,
                r.phase,
                db_text(r.psnr),
                db_text(r.wfpsnr)
            )
            .expect("writing to a string cannot fail");
        }
        out
    }

    pub fn summary_json(&self) -> String {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "attack": r.pair.label(),
                    "kind": r.pair.kind,
                    "param": r.pair.param,
                    "region": r.phase,
                    "psnr_db": db_value(r.psnr),
                    "wfpsnr_db": db_value(r.wfpsnr),
                    "ordering_ok": r.ordering_ok(),
                })
            })
            .collect();
        let summary = json!({
            "ordering_important_ok": self.ordering_important_ok(),
            "ordering_nonimportant_ok": self.ordering_nonimportant_ok(),
            "important_pixels": self.important_pixels,
            "nonimportant_pixels": self.nonimportant_pixels,
            "rows": rows,
        });
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    }
}

/// Pixels whose weight reaches the top decile, and those at or below the
/// bottom decile. Ties at a threshold join that region.
pub fn decile_regions(weights: &WeightMap) -> Result<(RegionMask, RegionMask)> {
    let w = weights.weights();
    let mut sorted = w.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let hi = sorted[((1.0 - DECILE) * n as f64).floor().min((n - 1) as f64) as usize];
    let lo = sorted[((DECILE * n as f64).ceil() as usize).clamp(1, n) - 1];
    if hi <= lo {
        return Err(Error::DegenerateWeights(
            "top and bottom weight deciles coincide, regions are undefined".into(),
        ));
    }
    let mask =
        |f: &dyn Fn(f64) -> bool| RegionMask::new(weights.width(), weights.height(), w.iter().map(|&v| f(v)).collect());
    Ok((mask(&|v| v >= hi)?, mask(&|v| v <= lo)?))
}

/// Attacks the top-decile and bottom-decile weight regions with each pair and
/// scores both phases against the unattacked image.
pub fn run_experiment(img: &GrayImage, weights: &WeightMap, pairs: &[AttackPair]) -> Result<ExperimentReport> {
    if weights.width() != img.width() || weights.height() != img.height() {
        return Err(Error::DimensionMismatch(format!(
            "weight map is {}x{}, image is {}x{}",
            weights.width(),
            weights.height(),
            img.width(),
            img.height()
        )));
    }
    let (important, unimportant) = decile_regions(weights)?;
    let mut rows = Vec::with_capacity(2 * pairs.len());
    for pair in pairs {
        for (phase, region) in [(Phase::Important, &important), (Phase::NonImportant, &unimportant)] {
            let spec = AttackSpec {
                kind: pair.kind,
                param: pair.param,
                region: region.clone(),
                seed: pair.seed,
            };
            let attacked = attack(img, &spec)?;
            rows.push(ExperimentRow {
                pair: *pair,
                phase,
                psnr: psnr(img, &attacked)?,
                wfpsnr: wfpsnr(img, &attacked, weights)?,
            });
        }
    }
    Ok(ExperimentReport {
        rows,
        important_pixels: important.count(),
        nonimportant_pixels: unimportant.count(),
    })
}
