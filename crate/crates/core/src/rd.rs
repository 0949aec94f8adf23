//! PSNR and Bjøntegaard-delta rate.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sim::image::Image;

/// Reported for identical images instead of +∞.
pub const PSNR_CAP: f64 = 99.99;

pub fn psnr(reference: &Image, test: &Image) -> Result<f64> {
    if reference.width() != test.width() || reference.height() != test.height() {
        return domain(format!(
            "cannot compare {}x{} with {}x{}",
            reference.width(),
            reference.height(),
            test.width(),
            test.height()
        ));
    }
    let sse: u64 = reference
        .samples()
        .iter()
        .zip(test.samples())
        .map(|(&a, &b)| {
            let d = u64::from(a.abs_diff(b));
            d * d
        })
        .sum();
    if sse == 0 {
        return Ok(PSNR_CAP);
    }
    let mse = sse as f64 / reference.samples().len() as f64;
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Rate/quality points sorted by strictly increasing rate and PSNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RdCurve {
    points: Vec<(f64, f64)>,
}

impl RdCurve {
    pub const MIN_POINTS: usize = 4;

    /// `points` are `(rate_bits, psnr_db)` in any order.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < Self::MIN_POINTS {
            return domain(format!("an RD curve needs at least 4 points, got {}", points.len()));
        }
        if let Some(p) = points.iter().find(|p| !(p.0 > 0.0 && p.0.is_finite() && p.1.is_finite())) {
            return domain(format!("invalid RD point {p:?}: rate must be positive, values finite"));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in points.windows(2) {
            if !(pair[1].0 > pair[0].0 && pair[1].1 > pair[0].1) {
                return domain(format!(
                    "RD curve is not strictly monotone between {:?} and {:?}",
                    pair[0], pair[1]
                ));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn psnr_range(&self) -> (f64, f64) {
        (self.points[0].1, self.points[self.points.len() - 1].1)
    }
}

/// Least-squares cubic through `(x, y)` in the scaled variable
/// `t = (x − center) / scale`; returns coefficients low-order first.
fn fit_cubic(xs: &[f64], ys: &[f64], center: f64, scale: f64) -> Result<[f64; 4]> {
    let mut ata = [[0.0f64; 4]; 4];
    let mut atb = [0.0f64; 4];
    for (&x, &y) in xs.iter().zip(ys) {
        let t = (x - center) / scale;
        let pows = [1.0, t, t * t, t * t * t];
        for i in 0..4 {
            atb[i] += pows[i] * y;
            for j in 0..4 {
                ata[i][j] += pows[i] * pows[j];
            }
        }
    }
    // Gaussian elimination with partial pivoting.
    #[allow(clippy::needless_range_loop)]
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&a, &b| ata[a][col].abs().total_cmp(&ata[b][col].abs()))
            .expect("non-empty range");
        if ata[pivot][col].abs() < 1e-12 {
            return domain("RD curve is degenerate; cannot fit a cubic");
        }
        ata.swap(col, pivot);
        atb.swap(col, pivot);
        for row in col + 1..4 {
            let f = ata[row][col] / ata[col][col];
            for k in col..4 {
                ata[row][k] -= f * ata[col][k];
            }
            atb[row] -= f * atb[col];
        }
    }
    let mut coef = [0.0; 4];
    for row in (0..4).rev() {
        let tail: f64 = (row + 1..4).map(|k| ata[row][k] * coef[k]).sum();
        coef[row] = (atb[row] - tail) / ata[row][row];
    }
    Ok(coef)
}

fn integrate_cubic(coef: &[f64; 4], lo: f64, hi: f64, center: f64, scale: f64) -> f64 {
    let antiderivative = |x: f64| {
        let t = (x - center) / scale;
        scale * (coef[0] * t + coef[1] * t * t / 2.0 + coef[2] * t.powi(3) / 3.0 + coef[3] * t.powi(4) / 4.0)
    };
    antiderivative(hi) - antiderivative(lo)
}

/// Average log-rate difference, `test − anchor`, over the shared PSNR range.
pub fn mean_log_rate_difference(anchor: &RdCurve, test: &RdCurve) -> Result<f64> {
    let (a_lo, a_hi) = anchor.psnr_range();
    let (t_lo, t_hi) = test.psnr_range();
    let (lo, hi) = (a_lo.max(t_lo), a_hi.min(t_hi));
    if !(hi > lo) {
        return domain(format!(
            "PSNR ranges [{a_lo:.3}, {a_hi:.3}] and [{t_lo:.3}, {t_hi:.3}] do not overlap"
        ));
    }
    let mut integrals = [0.0; 2];
    for (slot, curve) in integrals.iter_mut().zip([anchor, test]) {
        let xs: Vec<f64> = curve.points.iter().map(|p| p.1).collect();
        let ys: Vec<f64> = curve.points.iter().map(|p| p.0.log10()).collect();
        let center = xs.iter().sum::<f64>() / xs.len() as f64;
        let scale = ((xs[xs.len() - 1] - xs[0]) / 2.0).max(f64::EPSILON);
        let coef = fit_cubic(&xs, &ys, center, scale)?;
        *slot = integrate_cubic(&coef, lo, hi, center, scale);
    }
    Ok((integrals[1] - integrals[0]) / (hi - lo))
}

/// Bjøntegaard rate difference in percent; negative means `test` needs less
/// rate for the same PSNR.
pub fn bd_rate(anchor: &RdCurve, test: &RdCurve) -> Result<f64> {
    Ok(100.0 * (10f64.powf(mean_log_rate_difference(anchor, test)?) - 1.0))
}
