//! Integer quantization matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fwm::{compute_fwm, FrequencyWeightMatrix, FwmConfig};
use crate::golden::REFERENCE_INTER_QM;

/// Scale applied to a weighting matrix; also the neutral QM entry.
pub const QM_SCALE: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QmKind {
    Intra,
    Inter,
}

impl fmt::Display for QmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QmKind::Intra => "intra",
            QmKind::Inter => "inter",
        })
    }
}

impl FromStr for QmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "intra" => Ok(QmKind::Intra),
            "inter" => Ok(QmKind::Inter),
            other => domain(format!("unknown matrix kind {other:?}, expected intra or inter")),
        }
    }
}

/// An `n × n` matrix of weights in `[1, 255]`, `n ∈ {8, 16, 32}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantMatrix {
    n: usize,
    kind: QmKind,
    entries: Vec<u8>,
}

impl QuantMatrix {
    pub fn new(n: usize, kind: QmKind, entries: Vec<u8>) -> Result<Self> {
        if !matches!(n, 8 | 16 | 32) {
            return domain(format!("matrix side must be 8, 16 or 32, got {n}"));
        }
        if entries.len() != n * n {
            return domain(format!(
                "expected {} entries for a {n}×{n} matrix, got {}",
                n * n,
                entries.len()
            ));
        }
        if let Some(idx) = entries.iter().position(|&e| e == 0) {
            return domain(format!("entry ({}, {}) is 0, must be ≥ 1", idx / n, idx % n));
        }
        Ok(Self { n, kind, entries })
    }

    pub fn from_rows<const N: usize>(kind: QmKind, rows: &[[u8; N]; N]) -> Result<Self> {
        Self::new(N, kind, rows.iter().flatten().copied().collect())
    }

    /// Every entry equal to `value`.
    pub fn flat(n: usize, kind: QmKind, value: u8) -> Result<Self> {
        Self::new(n, kind, vec![value; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> QmKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: QmKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows().map(<[u8]>::to_vec).collect()
    }
}

/// Converts weights to integer entries `round(scale / H)`, rounding half
/// away from zero. The result is tagged intra.
pub fn fwm_to_qm(fwm: &FrequencyWeightMatrix, scale: u32) -> Result<QuantMatrix> {
    if scale == 0 {
        return domain("scale must be at least 1");
    }
    let n = fwm.n();
    let mut entries = Vec::with_capacity(n * n);
    for (idx, &h) in fwm.values().iter().enumerate() {
        if !(h > 0.0) {
            return domain(format!("weight at ({}, {}) is {h}, must be > 0", idx / n, idx % n));
        }
        let q = (f64::from(scale) / h).round();
        if q > 255.0 {
            return Err(Error::Range(format!(
                "entry ({}, {}) = {q} exceeds 255",
                idx / n,
                idx % n
            )));
        }
        entries.push(q as u8);
    }
    QuantMatrix::new(n, QmKind::Intra, entries)
}

/// The HVS-CSF intra matrix for the default weighting configuration.
pub fn default_intra_qm() -> QuantMatrix {
    let fwm = compute_fwm(&FwmConfig::default()).expect("default config is valid");
    fwm_to_qm(&fwm, QM_SCALE).expect("default weights map into [16, 255]")
}

pub fn default_inter_qm() -> QuantMatrix {
    QuantMatrix::from_rows(QmKind::Inter, &REFERENCE_INTER_QM).expect("table is valid")
}

/// Replicates each entry of an 8×8 matrix into a `k × k` block, `k = target_n / 8`.
pub fn upsample_qm(qm8: &QuantMatrix, target_n: usize) -> Result<QuantMatrix> {
    if qm8.n() != 8 {
        return domain(format!("upsampling source must be 8×8, got {0}×{0}", qm8.n()));
    }
    if !matches!(target_n, 16 | 32) {
        return domain(format!("upsampling target must be 16 or 32, got {target_n}"));
    }
    let k = target_n / 8;
    let entries = (0..target_n * target_n)
        .map(|idx| qm8.get(idx / target_n / k, idx % target_n / k))
        .collect();
    QuantMatrix::new(target_n, qm8.kind(), entries)
}
