//! HVS contrast-sensitivity frequency weighting.
//!
//! The weighting matrix `H(u, v)` is sampled from a CSF-based modulation
//! transfer function on an `n × n` grid of discrete spatial frequencies. An
//! angular term lowers sensitivity around 45° so diagonal frequencies are
//! weighted less than horizontal or vertical ones. Weights are clamped to 1.0
//! wherever the normalized radial frequency does not exceed `f_max`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Constants of the MTF and of the frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FwmConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Peak frequency in cycles per degree; weights below it are clamped to 1.
    pub f_max: f64,
    /// Dot pitch in mm.
    pub delta: f64,
    /// Number of radial frequencies per axis.
    pub n: usize,
    /// Viewing distance.
    pub dis: f64,
    /// Angular symmetry parameter in (0, 1].
    pub s: f64,
}

impl Default for FwmConfig {
    fn default() -> Self {
        Self {
            a: 2.2,
            b: 0.192,
            c: 0.114,
            d: 1.1,
            f_max: 8.0,
            delta: 0.25,
            n: 8,
            dis: 512.0,
            s: 0.7,
        }
    }
}

impl FwmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return domain("grid size n must be at least 1");
        }
        if !(self.delta > 0.0) {
            return domain(format!("dot pitch must be positive, got {}", self.delta));
        }
        if !(self.dis > 0.0) {
            return domain(format!("viewing distance must be positive, got {}", self.dis));
        }
        if !(self.s > 0.0 && self.s <= 1.0) {
            return domain(format!("symmetry parameter must lie in (0, 1], got {}", self.s));
        }
        if !(self.f_max > 0.0) {
            return domain(format!("f_max must be positive, got {}", self.f_max));
        }
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            if !v.is_finite() {
                return domain(format!("MTF constant {name} must be finite"));
            }
        }
        Ok(())
    }
}

/// Square matrix of perceptual weights in (0, 1], row index `u`, column `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyWeightMatrix {
    n: usize,
    values: Vec<f64>,
}

impl FrequencyWeightMatrix {
    /// Builds a matrix from row-major values, checking that every weight is
    /// in (0, 1].
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || values.len() != n * n {
            return domain(format!(
                "expected {}×{} = {} weights, got {}",
                n,
                n,
                n * n,
                values.len()
            ));
        }
        if let Some((idx, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && **v <= 1.0))
        {
            return domain(format!(
                "weight at ({}, {}) is {v}, outside (0, 1]",
                idx / n,
                idx % n
            ));
        }
        Ok(Self { n, values })
    }

    pub fn from_rows<const N: usize>(rows: &[[f64; N]; N]) -> Result<Self> {
        Self::new(N, rows.iter().flatten().copied().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.values[u * self.n + v]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n)
    }

    /// Largest absolute entry-wise difference to `other`, or `None` when the
    /// sizes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        (self.n == other.n).then(|| {
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }
}

/// Discrete frequency in cycles/mm for the 1-based grid `index`.
pub fn discrete_frequency(index: usize, config: &FwmConfig) -> Result<f64> {
    if index < 1 || index > config.n {
        return domain(format!(
            "frequency index {index} outside 1..={}",
            config.n
        ));
    }
    Ok((index - 1) as f64 / (config.delta * 2.0 * config.n as f64))
}

/// Converts a pair of cycles/mm frequencies to a radial frequency in cycles
/// per degree of visual angle at viewing distance `dis`.
pub fn radial_frequency(fu: f64, fv: f64, dis: f64) -> f64 {
    let per_degree = PI / (180.0 * (1.0 / (1.0 + dis * dis).sqrt()).asin());
    per_degree * fu.hypot(fv)
}

/// Angular sensitivity factor `S(θ)` in `[s, 1]`, with `θ = atan2(fu, fv)`
/// and `θ = 0` at the DC position.
pub fn angular_symmetry(fu: f64, fv: f64, s: f64) -> f64 {
    let theta = if fu == 0.0 && fv == 0.0 {
        0.0
    } else {
        fu.atan2(fv)
    };
    (1.0 - s) / 2.0 * (4.0 * theta).cos() + (1.0 + s) / 2.0
}

/// MTF weight for a normalized radial frequency in cycles/degree.
pub fn mtf_weight(f_prime: f64, config: &FwmConfig) -> f64 {
    if f_prime > config.f_max {
        let cf = config.c * f_prime;
        config.a * (config.b + cf) * (-cf.powf(config.d)).exp()
    } else {
        1.0
    }
}

/// Samples the weighting matrix for `config`.
pub fn compute_fwm(config: &FwmConfig) -> Result<FrequencyWeightMatrix> {
    config.validate()?;
    let freqs = (1..=config.n)
        .map(|i| discrete_frequency(i, config))
        .collect::<Result<Vec<_>>>()?;
    let n = config.n;
    let mut values = vec![0.0; n * n];
    // Upper triangle only, then mirror: keeps the matrix bit-exactly symmetric.
    for u in 0..n {
        for v in u..n {
            let (fu, fv) = (freqs[u], freqs[v]);
            let f = radial_frequency(fu, fv, config.dis);
            let f_prime = f / angular_symmetry(fu, fv, config.s);
            let weight = mtf_weight(f_prime, config);
            values[u * n + v] = weight;
            values[v * n + u] = weight;
        }
    }
    FrequencyWeightMatrix::new(n, values)
}
