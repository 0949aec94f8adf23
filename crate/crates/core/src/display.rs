//! Display-resolution adaptation of the weighting matrix.
//!
//! A target display of `x × y` pixels is summarized by the scalar
//! `w = h_t^(-p)`, where `h_t` is the hypotenuse of the largest allowed image
//! and `p` the display hypotenuse normalized by `h_t`. Each weight is raised
//! to `A(i, j) = exp(-d(i, j) / w)`, with `d` the normalized distance from the
//! DC position. Larger displays give smaller `w`, exponents closer to zero,
//! weights closer to one and therefore finer quantization.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fwm::{compute_fwm, FrequencyWeightMatrix, FwmConfig};
use crate::qm::{fwm_to_qm, QmKind, QuantMatrix, QM_SCALE};

/// Largest image dimension representable in a JPEG frame header.
pub const MAX_DIMENSION: u32 = 65535;

const GRID: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplayGeometry {
    pub x: u32,
    pub y: u32,
    pub x_max: u32,
    pub y_max: u32,
    /// Actual hypotenuse in pixels.
    pub h_a: f64,
    /// Theoretical maximum hypotenuse in pixels.
    pub h_t: f64,
    /// `h_a / h_t`.
    pub p: f64,
    /// Display resolution parameter `h_t^(-p)`.
    pub w: f64,
}

impl DisplayGeometry {
    pub fn new(x: u32, y: u32, x_max: u32, y_max: u32) -> Result<Self> {
        display_parameter(x, y, x_max, y_max)
    }

    /// Geometry with the default 65535×65535 maxima.
    pub fn with_default_max(x: u32, y: u32) -> Result<Self> {
        display_parameter(x, y, MAX_DIMENSION, MAX_DIMENSION)
    }

    pub fn preset(preset: Preset) -> Self {
        let (x, y) = preset.dimensions();
        Self::with_default_max(x, y).expect("presets are within the default maxima")
    }
}

impl fmt::Display for DisplayGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.x, self.y)
    }
}

/// Parses `WIDTHxHEIGHT` or a preset name, using the default maxima.
impl FromStr for DisplayGeometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(preset) = s.parse::<Preset>() {
            return Ok(Self::preset(preset));
        }
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::Domain(format!("geometry {s:?} is not WIDTHxHEIGHT or a preset")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<u32>()
                .map_err(|_| Error::Domain(format!("bad dimension {v:?} in geometry {s:?}")))
        };
        Self::with_default_max(parse(w)?, parse(h)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Sd,
    Hd,
    Fhd,
    #[serde(rename = "4k")]
    Uhd4k,
    #[serde(rename = "8k")]
    Uhd8k,
    Max,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Sd,
        Preset::Hd,
        Preset::Fhd,
        Preset::Uhd4k,
        Preset::Uhd8k,
        Preset::Max,
    ];

    pub fn dimensions(self) -> (u32, u32) {
        match self {
            Preset::Sd => (720, 576),
            Preset::Hd => (1280, 720),
            Preset::Fhd => (1920, 1080),
            Preset::Uhd4k => (3840, 2160),
            Preset::Uhd8k => (7680, 4320),
            Preset::Max => (MAX_DIMENSION, MAX_DIMENSION),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Sd => "sd",
            Preset::Hd => "hd",
            Preset::Fhd => "fhd",
            Preset::Uhd4k => "4k",
            Preset::Uhd8k => "8k",
            Preset::Max => "max",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == lower)
            .ok_or_else(|| Error::Domain(format!("unknown preset {s:?}")))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Derives `h_a`, `h_t`, `p` and `w` for a target display.
pub fn display_parameter(x: u32, y: u32, x_max: u32, y_max: u32) -> Result<DisplayGeometry> {
    if x == 0 || y == 0 || x_max == 0 || y_max == 0 {
        return domain(format!("display dimensions must be positive, got {x}x{y} (max {x_max}x{y_max})"));
    }
    if x > x_max || y > y_max {
        return domain(format!("display {x}x{y} exceeds maximum {x_max}x{y_max}"));
    }
    let h_a = f64::from(x).hypot(f64::from(y));
    let h_t = f64::from(x_max).hypot(f64::from(y_max));
    let p = h_a / h_t;
    let w = (-p * h_t.ln()).exp();
    Ok(DisplayGeometry {
        x,
        y,
        x_max,
        y_max,
        h_a,
        h_t,
        p,
        w,
    })
}

/// Distance of `(i, j)` from the DC position, normalized so (7, 7) is 1.
pub fn normalized_distance(i: usize, j: usize) -> Result<f64> {
    if i >= GRID || j >= GRID {
        return domain(format!("position ({i}, {j}) outside the 8×8 grid"));
    }
    let far = ((GRID - 1) * (GRID - 1) * 2) as f64;
    Ok((((i * i + j * j) as f64) / far).sqrt())
}

pub fn adaptation_exponent(d: f64, w: f64) -> Result<f64> {
    if !(w > 0.0) {
        return domain(format!("display parameter w must be positive, got {w}"));
    }
    if !(0.0..=1.0).contains(&d) {
        return domain(format!("normalized distance must lie in [0, 1], got {d}"));
    }
    Ok((-d / w).exp())
}

/// Per-position distances and exponents for one display parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationField {
    pub n: usize,
    pub a_values: Vec<f64>,
    pub d_values: Vec<f64>,
}

impl AdaptationField {
    pub fn new(w: f64) -> Result<Self> {
        let mut a_values = Vec::with_capacity(GRID * GRID);
        let mut d_values = Vec::with_capacity(GRID * GRID);
        for i in 0..GRID {
            for j in 0..GRID {
                let d = normalized_distance(i, j)?;
                a_values.push(adaptation_exponent(d, w)?);
                d_values.push(d);
            }
        }
        Ok(Self {
            n: GRID,
            a_values,
            d_values,
        })
    }

    pub fn exponent(&self, i: usize, j: usize) -> f64 {
        self.a_values[i * self.n + j]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.d_values[i * self.n + j]
    }
}

/// Raises each weight to its position's adaptation exponent.
pub fn adapt_fwm(fwm: &FrequencyWeightMatrix, geometry: &DisplayGeometry) -> Result<FrequencyWeightMatrix> {
    if fwm.n() != GRID {
        return domain(format!("adaptation needs an 8×8 weighting matrix, got {0}×{0}", fwm.n()));
    }
    let field = AdaptationField::new(geometry.w)?;
    let values = fwm
        .values()
        .iter()
        .zip(&field.a_values)
        .map(|(h, a)| h.powf(*a))
        .collect();
    FrequencyWeightMatrix::new(GRID, values)
}

/// Adaptive QM for a display. Intra and inter matrices share the same
/// derivation and differ only in their kind tag.
pub fn adaptive_qm(geometry: &DisplayGeometry, kind: QmKind) -> Result<QuantMatrix> {
    let base = compute_fwm(&FwmConfig::default())?;
    let adapted = adapt_fwm(&base, geometry)?;
    Ok(fwm_to_qm(&adapted, QM_SCALE)?.with_kind(kind))
}
