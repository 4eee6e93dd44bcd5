//! Deterministic synthetic test image: a bright flat background, a dark
//! high-contrast square and a patch of uniform noise texture. Every sample is
//! a multiple of 1/255 so the image survives an 8-bit PGM round trip exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::GrayImage;

pub const WIDTH: usize = 128;
pub const HEIGHT: usize = 128;

const BACKGROUND: u8 = 217;
const SQUARE: u8 = 51;
const SQUARE_SPAN: (usize, usize) = (12, 60);
const PATCH_X: (usize, usize) = (68, 124);
const PATCH_Y: (usize, usize) = (60, 124);
const PATCH_LEVELS: (u8, u8) = (110, 250);
const TEXTURE_SEED: u64 = 0x5eed;

pub fn test_image() -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(TEXTURE_SEED);
    let mut data = Vec::with_capacity(WIDTH * HEIGHT);
    for y in 0..HEIGHT {
        for x in 0..WIDTH {
            let in_square = (SQUARE_SPAN.0..SQUARE_SPAN.1).contains(&x) && (SQUARE_SPAN.0..SQUARE_SPAN.1).contains(&y);
            let in_patch = (PATCH_X.0..PATCH_X.1).contains(&x) && (PATCH_Y.0..PATCH_Y.1).contains(&y);
            let level = if in_square {
                SQUARE
            } else if in_patch {
                rng.random_range(PATCH_LEVELS.0..=PATCH_LEVELS.1)
            } else {
                BACKGROUND
            };
            data.push(level as f64 / 255.0);
        }
    }
    GrayImage::new(WIDTH, HEIGHT, data).expect("synthetic samples lie in [0, 1]")
}
