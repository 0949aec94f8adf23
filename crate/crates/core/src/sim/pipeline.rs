//! Layered still-image codec: a base layer plus enhancement layers that
//! predict from the upsampled reconstruction of the layer below.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::display::{adaptive_qm, DisplayGeometry, Preset};
use crate::error::{domain, Error, Result};
use crate::qm::{default_intra_qm, QmKind, QuantMatrix};
use crate::rd::psnr;
use crate::scaling_list::{encode_scaling_lists, LayerLists, ScalingListPayload};
use crate::sim::image::{downsample_box, upsample_bilinear, Image};
use crate::sim::quant::{dequantize_block, quantize_block, rate_estimate, LevelStats, Levels, MAX_QP};
use crate::sim::transform::{forward_dct, inverse_dct, Block, BLOCK, BLOCK_AREA};

/// Default QP sweep.
pub const DEFAULT_QPS: [u8; 4] = [22, 27, 32, 37];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LayerLabel {
    #[serde(rename = "BL")]
    Bl,
    #[serde(rename = "EL1")]
    El1,
    #[serde(rename = "EL2")]
    El2,
}

impl LayerLabel {
    pub const ALL: [LayerLabel; 3] = [LayerLabel::Bl, LayerLabel::El1, LayerLabel::El2];

    pub fn name(self) -> &'static str {
        match self {
            LayerLabel::Bl => "BL",
            LayerLabel::El1 => "EL1",
            LayerLabel::El2 => "EL2",
        }
    }

    /// Target display each layer is coded for: HD, 4K and 8K.
    pub fn default_preset(self) -> Preset {
        match self {
            LayerLabel::Bl => Preset::Hd,
            LayerLabel::El1 => Preset::Uhd4k,
            LayerLabel::El2 => Preset::Uhd8k,
        }
    }

    /// Source-to-layer downscaling factor; keeps the 1 : 3 : 6 width ratio
    /// of the HD/4K/8K displays.
    pub fn scale_divisor(self) -> usize {
        match self {
            LayerLabel::Bl => 6,
            LayerLabel::El1 => 2,
            LayerLabel::El2 => 1,
        }
    }
}

impl fmt::Display for LayerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LayerLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LayerLabel::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown layer {s:?}, expected BL, EL1 or EL2")))
    }
}

/// Where a layer's quantization matrix comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum QmSource {
    /// The default HVS-CSF intra matrix.
    Default,
    /// The display-adapted matrix for the layer's geometry.
    Adaptive,
    /// Every entry equal to the given weight.
    Flat(u8),
}

impl QmSource {
    pub fn matrix(self, geometry: &DisplayGeometry) -> Result<QuantMatrix> {
        match self {
            QmSource::Default => Ok(default_intra_qm()),
            QmSource::Adaptive => adaptive_qm(geometry, QmKind::Intra),
            QmSource::Flat(v) => QuantMatrix::flat(8, QmKind::Intra, v),
        }
    }
}

impl fmt::Display for QmSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QmSource::Default => f.write_str("default"),
            QmSource::Adaptive => f.write_str("adaptive"),
            QmSource::Flat(16) => f.write_str("flat"),
            QmSource::Flat(v) => write!(f, "flat:{v}"),
        }
    }
}

impl FromStr for QmSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "default" => Ok(QmSource::Default),
            "adaptive" => Ok(QmSource::Adaptive),
            "flat" => Ok(QmSource::Flat(16)),
            other => match other.strip_prefix("flat:").map(str::parse::<u8>) {
                Some(Ok(v)) if v >= 1 => Ok(QmSource::Flat(v)),
                _ => domain(format!("unknown QM source {s:?}, expected default, adaptive, flat or flat:N")),
            },
        }
    }
}

impl From<QmSource> for String {
    fn from(s: QmSource) -> Self {
        s.to_string()
    }
}

impl TryFrom<String> for QmSource {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerConfig {
    pub label: LayerLabel,
    pub width: usize,
    pub height: usize,
    /// Display the layer's adaptive matrix is built for.
    pub geometry: DisplayGeometry,
    pub qp: u8,
    pub qm_source: QmSource,
}

impl LayerConfig {
    /// The standard layer for `label`, sized from a `src_width × src_height`
    /// source and rounded down to whole 8×8 blocks.
    pub fn standard(label: LayerLabel, src_width: usize, src_height: usize, qp: u8, qm_source: QmSource) -> Self {
        let size = |s: usize| (s / label.scale_divisor() / BLOCK * BLOCK).max(BLOCK);
        Self {
            label,
            width: size(src_width),
            height: size(src_height),
            geometry: DisplayGeometry::preset(label.default_preset()),
            qp,
            qm_source,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.qp > MAX_QP {
            return domain(format!("{}: QP {} outside [0, {MAX_QP}]", self.label, self.qp));
        }
        if self.width < BLOCK || self.height < BLOCK {
            return domain(format!("{}: coded size {}x{} below 8x8", self.label, self.width, self.height));
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<QuantMatrix> {
        self.qm_source.matrix(&self.geometry)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    pub label: LayerLabel,
    pub width: usize,
    pub height: usize,
    pub qp: u8,
    pub qm_source: QmSource,
    pub psnr_db: f64,
    /// Set when the reconstruction is exact and `psnr_db` is the cap.
    pub lossless: bool,
    pub rate_bits: f64,
    pub nonzero: u64,
    pub qm: QuantMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub layers: Vec<LayerReport>,
}

/// Bits needed to signal one intra list for the layer.
fn payload_bits(qm: &QuantMatrix) -> Result<u64> {
    let payload = ScalingListPayload {
        layers: vec![LayerLists { lists: vec![qm.clone()] }],
    };
    Ok(encode_scaling_lists(&payload)?.len() as u64 * 8)
}

/// Codes one layer. Blocks are processed on the current rayon pool; results
/// are gathered in raster block order, so the output does not depend on the
/// worker count.
pub fn encode_layer(input: &Image, config: &LayerConfig, predictor: Option<&Image>) -> Result<(Image, LayerReport)> {
    config.validate()?;
    if input.width() != config.width || input.height() != config.height {
        return domain(format!(
            "{}: input is {}x{} but the layer codes {}x{}",
            config.label,
            input.width(),
            input.height(),
            config.width,
            config.height
        ));
    }
    let prediction = match predictor {
        Some(p) if p.width() > input.width() || p.height() > input.height() => {
            return domain(format!(
                "{}: predictor {}x{} is larger than the layer {}x{}",
                config.label,
                p.width(),
                p.height(),
                input.width(),
                input.height()
            ));
        }
        Some(p) => Some(upsample_bilinear(p, input.width(), input.height())?),
        None => None,
    };
    let qm = config.matrix()?;
    let (w, h) = (input.width(), input.height());
    let (bw, bh) = (w.div_ceil(BLOCK), h.div_ceil(BLOCK));
    let predicted = |x: usize, y: usize| prediction.as_ref().map_or(128.0, |p| f64::from(p.get_clamped(x, y)));

    let blocks: Vec<(Levels, Block)> = (0..bw * bh)
        .into_par_iter()
        .map(|b| {
            let (x0, y0) = ((b % bw) * BLOCK, (b / bw) * BLOCK);
            let mut residual = [0.0; BLOCK_AREA];
            for r in 0..BLOCK {
                for c in 0..BLOCK {
                    let (x, y) = (x0 + c, y0 + r);
                    residual[r * BLOCK + c] = f64::from(input.get_clamped(x, y)) - predicted(x, y);
                }
            }
            let levels = quantize_block(&forward_dct(&residual), &qm, config.qp)?;
            let recon = inverse_dct(&dequantize_block(&levels, &qm, config.qp)?);
            Ok((levels, recon))
        })
        .collect::<Result<_>>()?;

    let mut stats = LevelStats::default();
    for (levels, _) in &blocks {
        stats.add_levels(levels);
    }
    let reconstruction = Image::from_fn(w, h, |x, y| {
        let (bx, by) = (x / BLOCK, y / BLOCK);
        let residual = blocks[by * bw + bx].1[(y % BLOCK) * BLOCK + x % BLOCK];
        (predicted(x, y) + residual).round().clamp(0.0, 255.0) as u8
    })?;

    let psnr_db = psnr(input, &reconstruction)?;
    let report = LayerReport {
        label: config.label,
        width: w,
        height: h,
        qp: config.qp,
        qm_source: config.qm_source,
        psnr_db,
        lossless: reconstruction == *input,
        rate_bits: rate_estimate(&stats, payload_bits(&qm)?),
        nonzero: stats.nonzero,
        qm,
    };
    Ok((reconstruction, report))
}

fn check_order(source: &Image, layers: &[LayerConfig]) -> Result<()> {
    if layers.is_empty() {
        return domain("pipeline needs at least one layer");
    }
    for pair in layers.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        if upper.width < lower.width || upper.height < lower.height {
            return domain(format!(
                "{} ({}x{}) is smaller than the layer below it, {} ({}x{})",
                upper.label, upper.width, upper.height, lower.label, lower.width, lower.height
            ));
        }
    }
    let top = layers.last().expect("non-empty");
    if top.width > source.width() || top.height > source.height() {
        return domain(format!(
            "{} ({}x{}) is larger than the source ({}x{})",
            top.label,
            top.width,
            top.height,
            source.width(),
            source.height()
        ));
    }
    Ok(())
}

/// Codes the layers bottom-up. Each layer's ground truth is the source
/// box-downsampled to its coded size; each enhancement layer predicts from
/// the reconstruction of the layer below.
pub fn run_pipeline(source: &Image, layers: &[LayerConfig]) -> Result<SimReport> {
    check_order(source, layers)?;
    let mut reports = Vec::with_capacity(layers.len());
    let mut reference: Option<Image> = None;
    for config in layers {
        let truth = downsample_box(source, config.width, config.height)?;
        let (recon, report) = encode_layer(&truth, config, reference.as_ref())?;
        reports.push(report);
        reference = Some(recon);
    }
    Ok(SimReport { layers: reports })
}

/// Runs `f` on a dedicated pool of `workers` threads (0 = rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

pub fn run_pipeline_with_workers(source: &Image, layers: &[LayerConfig], workers: usize) -> Result<SimReport> {
    with_workers(workers, || run_pipeline(source, layers))?
}

/// One line of a sweep report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub layer: usize,
    pub label: LayerLabel,
    pub qp: u8,
    pub qm_source: QmSource,
    pub psnr_db: f64,
    pub rate_bits: f64,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "layer,label,qp,qm_source,psnr_db,rate_bits";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.4},{:.3}",
            self.layer, self.label, self.qp, self.qm_source, self.psnr_db, self.rate_bits
        )
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SweepRow::CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// Layer stack template for a sweep; QP and QM source are filled per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub label: LayerLabel,
    pub width: usize,
    pub height: usize,
    pub geometry: DisplayGeometry,
}

impl LayerSpec {
    pub fn standard(label: LayerLabel, src_width: usize, src_height: usize) -> Self {
        let c = LayerConfig::standard(label, src_width, src_height, 0, QmSource::Default);
        Self {
            label,
            width: c.width,
            height: c.height,
            geometry: c.geometry,
        }
    }

    pub fn configure(&self, qp: u8, qm_source: QmSource) -> LayerConfig {
        LayerConfig {
            label: self.label,
            width: self.width,
            height: self.height,
            geometry: self.geometry,
            qp,
            qm_source,
        }
    }
}

/// Runs the pipeline for every (QM source, QP) pair with all layers sharing
/// the QP and source. Rows are ordered by source, then QP, then layer.
pub fn run_sweep(source: &Image, stack: &[LayerSpec], qps: &[u8], sources: &[QmSource]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(stack.len() * qps.len() * sources.len());
    for &qm_source in sources {
        for &qp in qps {
            let layers: Vec<LayerConfig> = stack.iter().map(|s| s.configure(qp, qm_source)).collect();
            let report = run_pipeline(source, &layers)?;
            rows.extend(report.layers.iter().enumerate().map(|(layer, r)| SweepRow {
                layer,
                label: r.label,
                qp,
                qm_source,
                psnr_db: r.psnr_db,
                rate_bits: r.rate_bits,
            }));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rd::PSNR_CAP;
    use crate::sim::corpus::{CorpusImage, DEFAULT_SEED};

    fn config(w: usize, h: usize, qp: u8, qm_source: QmSource) -> LayerConfig {
        LayerConfig {
            label: LayerLabel::Bl,
            width: w,
            height: h,
            geometry: DisplayGeometry::preset(Preset::Hd),
            qp,
            qm_source,
        }
    }

    #[test]
    fn near_lossless_at_qp0() {
        for c in CorpusImage::ALL {
            let img = c.generate(60, 44, DEFAULT_SEED).unwrap();
            let (_, r) = encode_layer(&img, &config(60, 44, 0, QmSource::Flat(16)), None).unwrap();
            assert!(r.psnr_db >= 50.0, "{c}: {}", r.psnr_db);
        }
    }

    #[test]
    fn perfect_predictor_gives_zero_residual() {
        let img = CorpusImage::ZonePlate.generate(64, 48, 0).unwrap();
        let (rec, r) = encode_layer(&img, &config(64, 48, 37, QmSource::Default), Some(&img)).unwrap();
        assert_eq!(rec, img);
        assert_eq!(r.nonzero, 0);
        assert!(r.lossless);
        assert_eq!(r.psnr_db, PSNR_CAP);
    }

    #[test]
    fn rejects_bad_inputs() {
        let img = Image::filled(16, 16, 3).unwrap();
        assert!(encode_layer(&img, &config(16, 16, 52, QmSource::Default), None).is_err());
        assert!(encode_layer(&img, &config(24, 16, 22, QmSource::Default), None).is_err());
        let big = Image::filled(32, 16, 3).unwrap();
        assert!(encode_layer(&img, &config(16, 16, 22, QmSource::Default), Some(&big)).is_err());
    }

    #[test]
    fn pipeline_order_is_checked() {
        let src = CorpusImage::Gradient.generate(96, 48, 0).unwrap();
        let el = LayerConfig::standard(LayerLabel::El1, 96, 48, 22, QmSource::Adaptive);
        let bl = LayerConfig::standard(LayerLabel::Bl, 96, 48, 22, QmSource::Adaptive);
        assert!(run_pipeline(&src, &[el.clone(), bl.clone()]).is_err());
        assert!(run_pipeline(&src, &[]).is_err());
        let too_big = LayerConfig { width: 128, ..el.clone() };
        assert!(run_pipeline(&src, &[bl.clone(), too_big]).is_err());
        assert_eq!(run_pipeline(&src, &[bl, el]).unwrap().layers.len(), 2);
    }

    #[test]
    fn single_layer_is_plain_intra_coding() {
        let src = CorpusImage::Noise.generate(64, 64, 3).unwrap();
        let cfg = config(64, 64, 27, QmSource::Adaptive);
        let report = run_pipeline(&src, std::slice::from_ref(&cfg)).unwrap();
        let (_, direct) = encode_layer(&src, &cfg, None).unwrap();
        assert_eq!(report.layers, vec![direct]);
    }

    #[test]
    fn standard_layer_sizes() {
        let sizes: Vec<(usize, usize)> = LayerLabel::ALL
            .iter()
            .map(|&l| {
                let c = LayerConfig::standard(l, 768, 432, 22, QmSource::Default);
                (c.width, c.height)
            })
            .collect();
        assert_eq!(sizes, vec![(128, 72), (384, 216), (768, 432)]);
    }

    #[test]
    fn qm_source_parsing() {
        for s in [QmSource::Default, QmSource::Adaptive, QmSource::Flat(16), QmSource::Flat(24)] {
            assert_eq!(s.to_string().parse::<QmSource>().unwrap(), s);
        }
        assert!("flat:0".parse::<QmSource>().is_err());
        assert!("sony".parse::<QmSource>().is_err());
        assert_eq!("el2".parse::<LayerLabel>().unwrap(), LayerLabel::El2);
    }

    #[test]
    fn coarse_flat_matrix_loses_to_adaptive_on_the_enhancement_layer() {
        let src = CorpusImage::ZonePlate.generate(192, 96, 0).unwrap();
        let bl = LayerConfig::standard(LayerLabel::Bl, 192, 96, 32, QmSource::Default);
        let el = |s| LayerConfig::standard(LayerLabel::El1, 192, 96, 32, s);
        let a = run_pipeline(&src, &[bl.clone(), el(QmSource::Adaptive)]).unwrap();
        let f = run_pipeline(&src, &[bl, el(QmSource::Flat(24))]).unwrap();
        assert!(a.layers[1].psnr_db > f.layers[1].psnr_db);
    }
}
