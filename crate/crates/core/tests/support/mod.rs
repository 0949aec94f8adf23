//! Test-only oracles, independent of the library's implementation paths.
#![allow(dead_code)]

use aqm_core::sim::corpus::CorpusImage;
use aqm_core::sim::pipeline::{run_sweep, LayerLabel, LayerSpec, SweepRow, DEFAULT_QPS};
use aqm_core::{Image, QmSource, RdCurve};

/// Source size used for the desk-scale sweeps: 16:9, divisible into the
/// 1/6, 1/2 and full-size layers on whole 8×8 blocks.
pub const SOURCE_W: usize = 768;
pub const SOURCE_H: usize = 432;
pub const SEED: u64 = 42;

/// Lagrange interpolation of `ys` at `x`.
fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..xs.len() {
        let mut term = ys[i];
        for j in 0..xs.len() {
            if i != j {
                term *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        sum += term;
    }
    sum
}

/// BD-rate by interpolating log10(rate) over PSNR with the Lagrange
/// polynomial through all points and integrating with the composite
/// trapezoid rule. For 4-point curves this is the same cubic the
/// least-squares fit produces, reached by a different route.
pub fn bd_rate_trapezoid(anchor: &[(f64, f64)], test: &[(f64, f64)], steps: usize) -> f64 {
    let split = |c: &[(f64, f64)]| -> (Vec<f64>, Vec<f64>) {
        (c.iter().map(|p| p.1).collect(), c.iter().map(|p| p.0.log10()).collect())
    };
    let (ax, ay) = split(anchor);
    let (tx, ty) = split(test);
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = min(&ax).max(min(&tx));
    let hi = max(&ax).min(max(&tx));
    let h = (hi - lo) / steps as f64;
    let diff = |x: f64| lagrange(&tx, &ty, x) - lagrange(&ax, &ay, x);
    let mut integral = 0.5 * (diff(lo) + diff(hi));
    for k in 1..steps {
        integral += diff(lo + k as f64 * h);
    }
    integral *= h;
    100.0 * (10f64.powf(integral / (hi - lo)) - 1.0)
}

pub fn standard_stack(labels: &[LayerLabel]) -> Vec<LayerSpec> {
    labels.iter().map(|&l| LayerSpec::standard(l, SOURCE_W, SOURCE_H)).collect()
}

pub fn corpus_image(c: CorpusImage) -> Image {
    c.generate(SOURCE_W, SOURCE_H, SEED).expect("corpus sizes are valid")
}

/// Full three-layer sweep over the default QPs for default and adaptive QMs.
pub fn full_sweep(c: CorpusImage) -> Vec<SweepRow> {
    run_sweep(
        &corpus_image(c),
        &standard_stack(&LayerLabel::ALL),
        &DEFAULT_QPS,
        &[QmSource::Default, QmSource::Adaptive],
    )
    .expect("sweep runs")
}

pub fn points(rows: &[SweepRow], label: LayerLabel, source: QmSource) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.label == label && r.qm_source == source)
        .map(|r| (r.rate_bits, r.psnr_db))
        .collect()
}

pub fn curve(rows: &[SweepRow], label: LayerLabel, source: QmSource) -> RdCurve {
    RdCurve::new(points(rows, label, source)).expect("simulator curves are monotone")
}
