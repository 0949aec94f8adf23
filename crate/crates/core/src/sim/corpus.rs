//! Synthetic test images.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::image::Image;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusImage {
    ZonePlate,
    Gradient,
    Noise,
    Checkerboard,
}

impl CorpusImage {
    pub const ALL: [CorpusImage; 4] = [
        CorpusImage::ZonePlate,
        CorpusImage::Gradient,
        CorpusImage::Noise,
        CorpusImage::Checkerboard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorpusImage::ZonePlate => "zone-plate",
            CorpusImage::Gradient => "gradient",
            CorpusImage::Noise => "noise",
            CorpusImage::Checkerboard => "checkerboard",
        }
    }

    /// Renders the image. Only `Noise` depends on the seed.
    pub fn generate(self, width: usize, height: usize, seed: u64) -> Result<Image> {
        match self {
            CorpusImage::ZonePlate => zone_plate(width, height),
            CorpusImage::Gradient => diagonal_gradient(width, height),
            CorpusImage::Noise => band_limited_noise(width, height, seed),
            CorpusImage::Checkerboard => checkerboard(width, height),
        }
    }
}

impl fmt::Display for CorpusImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorpusImage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        CorpusImage::ALL
            .into_iter()
            .find(|c| c.name() == key || c.name().replace('-', "") == key)
            .ok_or_else(|| Error::Domain(format!("unknown corpus image {s:?}")))
    }
}

fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Circular zone plate whose local frequency reaches Nyquist at the corners.
pub fn zone_plate(width: usize, height: usize) -> Result<Image> {
    let (cx, cy) = (width as f64 / 2.0, height as f64 / 2.0);
    let r_max = cx.hypot(cy);
    let k = PI / (2.0 * r_max);
    Image::from_fn(width, height, |x, y| {
        let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
        to_u8(128.0 + 100.0 * (k * (dx * dx + dy * dy)).cos())
    })
}

/// Smooth diagonal ramp with a mild sinusoidal texture.
pub fn diagonal_gradient(width: usize, height: usize) -> Result<Image> {
    let span = (width + height) as f64;
    Image::from_fn(width, height, |x, y| {
        let t = (x + y) as f64 / span;
        let texture = 6.0 * (x as f64 * 0.21).sin() * (y as f64 * 0.17).cos();
        to_u8(24.0 + 200.0 * t + texture)
    })
}

/// White noise low-pass filtered with a separable Gaussian (σ = 1.5 px) and
/// stretched to the 8-bit range.
pub fn band_limited_noise(width: usize, height: usize, seed: u64) -> Result<Image> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..width * height).map(|_| rng.random::<f64>() - 0.5).collect();

    let sigma = 1.5f64;
    let radius = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-radius..=radius)
        .map(|t| (-(t * t) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let norm: f64 = kernel.iter().sum();
    let kernel: Vec<f64> = kernel.iter().map(|k| k / norm).collect();

    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let mut tmp = vec![0.0; width * height];
    for y in 0..height {
        for x in 0..width {
            tmp[y * width + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * raw[y * width + clamp(x as isize + i as isize - radius, width)])
                .sum();
        }
    }
    let mut out = vec![0.0; width * height];
    for y in 0..height {
        for x in 0..width {
            out[y * width + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * tmp[clamp(y as isize + i as isize - radius, height) * width + x])
                .sum();
        }
    }
    let (lo, hi) = out
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = (hi - lo).max(f64::EPSILON);
    Image::new(
        width,
        height,
        out.iter().map(|&v| to_u8(16.0 + 223.0 * (v - lo) / range)).collect(),
    )
}

/// Checkerboard with 12-pixel cells (not aligned to the 8×8 block grid).
pub fn checkerboard(width: usize, height: usize) -> Result<Image> {
    Image::from_fn(width, height, |x, y| if (x / 12 + y / 12) % 2 == 0 { 48 } else { 208 })
}
