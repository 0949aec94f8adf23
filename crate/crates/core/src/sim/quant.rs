//! QM-weighted uniform scalar quantization and the rate proxy.

use std::collections::BTreeMap;

use crate::error::{domain, Result};
use crate::qm::QuantMatrix;
use crate::sim::transform::{Block, BLOCK_AREA};

pub const MAX_QP: u8 = 51;

pub type Levels = [i32; BLOCK_AREA];

/// `2^((qp − 4) / 6) · weight / 16`; QP 4 with weight 16 is a unit step.
pub fn quant_step(qp: u8, weight: u8) -> f64 {
    ((f64::from(qp) - 4.0) / 6.0).exp2() * f64::from(weight) / 16.0
}

fn check(qm: &QuantMatrix, qp: u8) -> Result<()> {
    if qp > MAX_QP {
        return domain(format!("QP {qp} outside [0, {MAX_QP}]"));
    }
    if qm.n() != 8 {
        return domain(format!("block quantization needs an 8×8 matrix, got {0}×{0}", qm.n()));
    }
    Ok(())
}

/// Nearest-integer quantization of each coefficient by its weighted step.
pub fn quantize_block(coeffs: &Block, qm: &QuantMatrix, qp: u8) -> Result<Levels> {
    check(qm, qp)?;
    let mut levels = [0i32; BLOCK_AREA];
    for ((level, &c), &weight) in levels.iter_mut().zip(coeffs).zip(qm.entries()) {
        let q = (c.abs() / quant_step(qp, weight)).round();
        *level = q.copysign(c) as i32;
    }
    Ok(levels)
}

pub fn dequantize_block(levels: &Levels, qm: &QuantMatrix, qp: u8) -> Result<Block> {
    check(qm, qp)?;
    let mut out = [0.0; BLOCK_AREA];
    for ((o, &level), &weight) in out.iter_mut().zip(levels).zip(qm.entries()) {
        *o = f64::from(level) * quant_step(qp, weight);
    }
    Ok(out)
}

/// Histogram of quantized levels; merging is order-independent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelStats {
    pub histogram: BTreeMap<i32, u64>,
    pub count: u64,
    pub nonzero: u64,
}

impl LevelStats {
    pub fn add_levels(&mut self, levels: &[i32]) {
        for &l in levels {
            *self.histogram.entry(l).or_insert(0) += 1;
            self.count += 1;
            if l != 0 {
                self.nonzero += 1;
            }
        }
    }

    pub fn merge(&mut self, other: &LevelStats) {
        for (&l, &n) in &other.histogram {
            *self.histogram.entry(l).or_insert(0) += n;
        }
        self.count += other.count;
        self.nonzero += other.nonzero;
    }

    /// Zero-order empirical entropy in bits per symbol.
    pub fn entropy_bits_per_symbol(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let total = self.count as f64;
        self.histogram
            .values()
            .map(|&n| {
                let p = n as f64 / total;
                -p * p.log2()
            })
            .sum()
    }
}

/// Entropy × symbol count, one sign bit per nonzero level, plus the
/// signaled scaling-list payload.
pub fn rate_estimate(stats: &LevelStats, payload_bits: u64) -> f64 {
    stats.entropy_bits_per_symbol() * stats.count as f64 + stats.nonzero as f64 + payload_bits as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qm::{default_intra_qm, QmKind};

    fn flat16() -> QuantMatrix {
        QuantMatrix::flat(8, QmKind::Intra, 16).unwrap()
    }

    #[test]
    fn zero_coefficients_give_zero_levels() {
        let levels = quantize_block(&[0.0; 64], &default_intra_qm(), 37).unwrap();
        assert!(levels.iter().all(|&l| l == 0));
    }

    #[test]
    fn unit_step_at_qp4() {
        assert_eq!(quant_step(4, 16), 1.0);
        assert!((quant_step(10, 16) - 2.0).abs() < 1e-15);
        let mut coeffs = [0.0; 64];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = i as f64 * 0.37 - 11.0;
        }
        let levels = quantize_block(&coeffs, &flat16(), 4).unwrap();
        for (l, c) in levels.iter().zip(&coeffs) {
            assert_eq!(*l, c.round() as i32);
        }
    }

    #[test]
    fn rejects_bad_qp() {
        assert!(quantize_block(&[0.0; 64], &flat16(), 52).is_err());
        assert!(dequantize_block(&[0; 64], &flat16(), 60).is_err());
    }

    #[test]
    fn reconstruction_error_is_half_step() {
        let qm = default_intra_qm();
        let mut coeffs = [0.0; 64];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = ((i * 7919) % 1000) as f64 - 500.0 + 0.123;
        }
        for qp in [0, 22, 37, 51] {
            let deq = dequantize_block(&quantize_block(&coeffs, &qm, qp).unwrap(), &qm, qp).unwrap();
            for i in 0..64 {
                assert!((deq[i] - coeffs[i]).abs() <= quant_step(qp, qm.entries()[i]) / 2.0 + 1e-9);
            }
        }
    }

    #[test]
    fn rate_of_all_zero_levels_is_payload_only() {
        let mut stats = LevelStats::default();
        stats.add_levels(&[0; 640]);
        assert_eq!(rate_estimate(&stats, 72), 72.0);
    }

    #[test]
    fn rate_of_uniform_ternary_levels() {
        let mut stats = LevelStats::default();
        let levels: Vec<i32> = (0..300).map(|i| (i % 3) - 1).collect();
        stats.add_levels(&levels);
        let expected = 3f64.log2() * 300.0 + 200.0;
        assert!((rate_estimate(&stats, 0) - expected).abs() < 1e-9);
    }

    #[test]
    fn merge_matches_single_pass() {
        let a: Vec<i32> = (0..100).map(|i| i % 7 - 3).collect();
        let b: Vec<i32> = (0..50).map(|i| i % 2).collect();
        let mut one = LevelStats::default();
        one.add_levels(&a);
        one.add_levels(&b);
        let mut left = LevelStats::default();
        left.add_levels(&b);
        let mut right = LevelStats::default();
        right.add_levels(&a);
        left.merge(&right);
        assert_eq!(one, left);
    }
}
