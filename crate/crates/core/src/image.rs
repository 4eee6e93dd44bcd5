//! Grayscale rasters, block grids and binary PGM (P5) I/O.
//!
//! Samples are stored as `f64` in `[0, 1]`, so the dynamic range used by the
//! metrics is always `L = 1`. Files with maxval 255 or 65535 are normalized on
//! load; writing always produces maxval 255.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Real-valued grayscale image, row-major, samples in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be non-zero, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{width}x{height} image needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::InvalidImage(format!("sample {bad} outside [0, 1]")));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image from a per-pixel function of `(x, y)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Affine min-max rescaling of an arbitrary field into `[0, 1]` for display.
    /// A constant field becomes mid-gray.
    pub fn from_min_max(width: usize, height: usize, field: &[f64]) -> Result<Self> {
        let (lo, hi) = field.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        let range = hi - lo;
        let data = if range > 0.0 && range.is_finite() {
            field.iter().map(|v| ((v - lo) / range).clamp(0.0, 1.0)).collect()
        } else {
            vec![0.5; field.len()]
        };
        Self::new(width, height, data)
    }

    /// Clamps every sample into `[0, 1]` instead of rejecting it. NaN maps to 0.
    pub fn from_clamped(width: usize, height: usize, mut data: Vec<f64>) -> Result<Self> {
        for s in &mut data {
            *s = if s.is_nan() { 0.0 } else { s.clamp(0.0, 1.0) };
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Sample lookup with coordinates clamped to the image (replicate border).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.data[y * self.width + x]
    }

    pub fn same_dimensions(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn is_constant(&self) -> bool {
        let first = self.data[0];
        self.data.iter().all(|&s| s == first)
    }

    /// Quantizes to 8 bits with round-half-up: `floor(s * 255 + 0.5)`.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().map(|&s| quantize(s)).collect()
    }
}

#[inline]
fn quantize(s: f64) -> u8 {
    (s * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Reads a binary PGM file.
pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes)
}

/// Writes `img` as binary PGM with maxval 255.
pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(img)).map_err(|e| Error::io(path, e))
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.to_bytes());
    out
}

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 {
        return Err(Error::MalformedHeader("file shorter than magic number".into()));
    }
    if &bytes[..2] != b"P5" {
        return Err(Error::UnsupportedMagic(
            String::from_utf8_lossy(&bytes[..2]).into_owned(),
        ));
    }
    let mut cursor = 2;
    let width = header_field(bytes, &mut cursor, "width")?;
    let height = header_field(bytes, &mut cursor, "height")?;
    let maxval = header_field(bytes, &mut cursor, "maxval")?;
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cursor) {
        Some(b) if b.is_ascii_whitespace() => cursor += 1,
        _ => return Err(Error::MalformedHeader("missing whitespace after maxval".into())),
    }
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!("zero dimension {width}x{height}")));
    }
    let bytes_per_sample = match maxval {
        255 => 1,
        65535 => 2,
        other => {
            return Err(Error::MalformedHeader(format!(
                "unsupported maxval {other}, expected 255 or 65535"
            )))
        }
    };
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedHeader("dimensions overflow".into()))?;
    let expected = n * bytes_per_sample;
    let payload = &bytes[cursor..];
    if payload.len() < expected {
        return Err(Error::TruncatedPayload {
            expected,
            found: payload.len(),
        });
    }
    let scale = maxval as f64;
    let data = if bytes_per_sample == 1 {
        payload[..n].iter().map(|&b| b as f64 / scale).collect()
    } else {
        payload[..expected]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 / scale)
            .collect()
    };
    GrayImage::new(width, height, data)
}

fn header_field(bytes: &[u8], cursor: &mut usize, name: &str) -> Result<usize> {
    // skip whitespace and comments
    loop {
        match bytes.get(*cursor) {
            Some(b) if b.is_ascii_whitespace() => *cursor += 1,
            Some(b'#') => {
                while let Some(&b) = bytes.get(*cursor) {
                    *cursor += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            }
            Some(_) => break,
            None => {
                return Err(Error::MalformedHeader(format!(
                    "unexpected end of header before {name}"
                )))
            }
        }
    }
    let start = *cursor;
    while bytes.get(*cursor).is_some_and(u8::is_ascii_digit) {
        *cursor += 1;
    }
    if start == *cursor {
        return Err(Error::MalformedHeader(format!("{name} is not a number")));
    }
    std::str::from_utf8(&bytes[start..*cursor])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::MalformedHeader(format!("{name} out of range")))
}

/// Per-block scalar field. Border blocks may cover fewer than
/// `block_size × block_size` pixels when the image size is not a multiple of
/// the block size.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    block_size: usize,
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl BlockGrid {
    pub fn new(block_size: usize, rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::param("block size must be positive"));
        }
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} block grid needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        Ok(Self {
            block_size,
            rows,
            cols,
            values,
        })
    }

    /// Grid of `block_size` blocks covering a `width × height` image.
    pub fn for_image(width: usize, height: usize, block_size: usize, fill: f64) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::param("block size must be positive"));
        }
        let rows = height.div_ceil(block_size);
        let cols = width.div_ceil(block_size);
        Self::new(block_size, rows, cols, vec![fill; rows * cols])
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn same_shape(&self, other: &BlockGrid) -> bool {
        self.block_size == other.block_size && self.rows == other.rows && self.cols == other.cols
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Divides by the global maximum. Grids whose maximum is not positive are
    /// left untouched.
    pub fn normalize_by_max(&mut self) {
        let max = self.max();
        if max > 0.0 {
            for v in &mut self.values {
                *v /= max;
            }
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> BlockGrid {
        BlockGrid {
            block_size: self.block_size,
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Per-block arithmetic mean of `img`.
pub fn block_reduce(img: &GrayImage, block_size: usize) -> Result<BlockGrid> {
    block_reduce_field(img.data(), img.width(), img.height(), block_size)
}

/// [`block_reduce`] over an arbitrary row-major field.
pub fn block_reduce_field(field: &[f64], width: usize, height: usize, block_size: usize) -> Result<BlockGrid> {
    if block_size == 0 {
        return Err(Error::param("block size must be positive"));
    }
    if field.len() != width * height {
        return Err(Error::DimensionMismatch(format!(
            "field of {} values for {width}x{height}",
            field.len()
        )));
    }
    let mut grid = BlockGrid::for_image(width, height, block_size, 0.0)?;
    let cols = grid.cols;
    let mut row_sums = Vec::with_capacity(block_size);
    for br in 0..grid.rows {
        let y0 = br * block_size;
        let y1 = (y0 + block_size).min(height);
        for bc in 0..cols {
            let x0 = bc * block_size;
            let x1 = (x0 + block_size).min(width);
            row_sums.clear();
            row_sums.extend((y0..y1).map(|y| pairwise_sum(&field[y * width + x0..y * width + x1])));
            grid.values[br * cols + bc] = pairwise_sum(&row_sums) / ((y1 - y0) * (x1 - x0)) as f64;
        }
    }
    Ok(grid)
}

/// Pairwise summation; exact for `2^k` copies of one value.
fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n.next_power_of_two() / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Expands a block grid to a per-pixel field by nearest-block lookup. Pixels
/// beyond the grid's extent take the value of the last block row/column.
pub fn upsample_nearest(grid: &BlockGrid, width: usize, height: usize) -> Result<Vec<f64>> {
    if grid.values.is_empty() {
        return Err(Error::param("cannot upsample an empty grid"));
    }
    let bs = grid.block_size;
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        let row = (y / bs).min(grid.rows - 1);
        for x in 0..width {
            let col = (x / bs).min(grid.cols - 1);
            out.push(grid.values[row * grid.cols + col]);
        }
    }
    Ok(out)
}

/// One boolean per pixel selecting a region of an image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl RegionMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} mask needs {} bits, got {}",
                width * height,
                bits.len()
            )));
        }
        Ok(Self { width, height, bits })
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![true; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Self { width, height, bits }
    }

    /// Pixels with sample value at or above one half are selected.
    pub fn from_image(img: &GrayImage) -> Self {
        Self {
            width: img.width(),
            height: img.height(),
            bits: img.data().iter().map(|&s| s >= 0.5).collect(),
        }
    }

    pub fn to_image(&self) -> GrayImage {
        let data = self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        GrayImage::new(self.width, self.height, data).expect("mask dimensions are valid")
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
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn matches(&self, img: &GrayImage) -> bool {
        self.width == img.width() && self.height == img.height()
    }
}
