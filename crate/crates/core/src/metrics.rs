//! MSE, PSNR and their fuzzy-weighted counterparts.
//!
//! All images live in `[0, 1]`, so the peak value is `L = 1`. Errors are
//! accumulated in row-major order.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy::WeightMap;
use crate::image::GrayImage;

/// Dynamic range of the internal sample representation.
pub const PEAK: f64 = 1.0;

fn check_pair(x: &GrayImage, y: &GrayImage) -> Result<()> {
    if !x.same_dimensions(y) {
        return Err(Error::DimensionMismatch(format!(
            "images are {}x{} and {}x{}",
            x.width(),
            x.height(),
            y.width(),
            y.height()
        )));
    }
    Ok(())
}

pub fn mse(x: &GrayImage, y: &GrayImage) -> Result<f64> {
    check_pair(x, y)?;
    let sum: f64 = x.data().iter().zip(y.data()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / x.len() as f64)
}

/// `10 log10(L² / e)`, or `+inf` when `e == 0`.
pub fn to_db(error: f64) -> f64 {
    if error == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / error).log10()
    }
}

pub fn psnr(x: &GrayImage, y: &GrayImage) -> Result<f64> {
    mse(x, y).map(to_db)
}

/// Weighted MSE: `(1/N) Σ (x_i - y_i)² w_i`.
pub fn fmse(x: &GrayImage, y: &GrayImage, weights: &WeightMap) -> Result<f64> {
    check_pair(x, y)?;
    if weights.width() != x.width() || weights.height() != x.height() {
        return Err(Error::DimensionMismatch(format!(
            "weight map is {}x{}, images are {}x{}",
            weights.width(),
            weights.height(),
            x.width(),
            x.height()
        )));
    }
    let sum: f64 = x
        .data()
        .iter()
        .zip(y.data())
        .zip(weights.weights())
        .map(|((a, b), w)| (a - b) * (a - b) * w)
        .sum();
    Ok(sum / x.len() as f64)
}

pub fn wfpsnr(x: &GrayImage, y: &GrayImage, weights: &WeightMap) -> Result<f64> {
    fmse(x, y, weights).map(to_db)
}

/// All four scores of one image pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreReport {
    pub mse: f64,
    pub psnr: f64,
    pub fmse: f64,
    pub wfpsnr: f64,
}

impl ScoreReport {
    pub fn compute(reference: &GrayImage, test: &GrayImage, weights: &WeightMap) -> Result<Self> {
        let mse = mse(reference, test)?;
        let fmse = fmse(reference, test, weights)?;
        Ok(Self {
            mse,
            psnr: to_db(mse),
            fmse,
            wfpsnr: to_db(fmse),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("score report serializes")
    }
}

/// Serializes a decibel value, writing infinities as the string `"inf"`.
pub fn db_value(v: f64) -> serde_json::Value {
    if v.is_infinite() && v > 0.0 {
        serde_json::Value::String("inf".into())
    } else {
        serde_json::json!(v)
    }
}

/// Decibel formatting for CSV: finite values with full precision, `inf` otherwise.
pub fn db_text(v: f64) -> String {
    if v.is_infinite() && v > 0.0 {
        "inf".into()
    } else {
        format!("{v}")
    }
}

impl Serialize for ScoreReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ScoreReport", 5)?;
        s.serialize_field("mse", &self.mse)?;
        s.serialize_field("psnr_db", &db_value(self.psnr))?;
        s.serialize_field("fmse", &self.fmse)?;
        s.serialize_field("wfpsnr_db", &db_value(self.wfpsnr))?;
        s.serialize_field("L", &(PEAK as u32))?;
        s.end()
    }
}
