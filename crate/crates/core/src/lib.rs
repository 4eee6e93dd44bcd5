//! Fuzzy, HVS-weighted PSNR for evaluating watermark imperceptibility.
//!
//! The pipeline computes three block-level features of a reference image
//! (saliency, edge concentration, intensity), fuses them with a Mamdani
//! min-max fuzzy system into an importance map, expands that to a per-pixel
//! weight map with mean one, and uses it to weight the squared error of a
//! test image before converting to decibels.

// negated comparisons are used deliberately so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod features;
pub mod fuzzy;
pub mod image;
pub mod metrics;
pub mod pipeline;
pub mod synthetic;
pub mod watermark;

pub use error::{Error, Result};
pub use image::{BlockGrid, GrayImage, RegionMask};
pub use pipeline::{Analysis, Pipeline};
