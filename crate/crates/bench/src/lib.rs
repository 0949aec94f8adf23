//! Shared fixtures for the benchmarks.

use aqm_core::sim::corpus::{CorpusImage, DEFAULT_SEED};
use aqm_core::sim::pipeline::LayerConfig;
use aqm_core::{adaptive_qm, DisplayGeometry, Image, LayerLabel, LayerLists, Preset, QmKind, QmSource, ScalingListPayload};

pub const SOURCE_W: usize = 768;
pub const SOURCE_H: usize = 432;

pub fn source_image() -> Image {
    CorpusImage::ZonePlate
        .generate(SOURCE_W, SOURCE_H, DEFAULT_SEED)
        .expect("fixture size is valid")
}

/// BL/EL1/EL2 with intra and inter lists each.
pub fn layered_payload() -> ScalingListPayload {
    let layers = [Preset::Hd, Preset::Uhd4k, Preset::Uhd8k]
        .iter()
        .map(|&p| LayerLists {
            lists: [QmKind::Intra, QmKind::Inter]
                .iter()
                .map(|&k| adaptive_qm(&DisplayGeometry::preset(p), k).expect("presets adapt"))
                .collect(),
        })
        .collect();
    ScalingListPayload { layers }
}

pub fn three_layers(qp: u8, qm_source: QmSource) -> Vec<LayerConfig> {
    LayerLabel::ALL
        .iter()
        .map(|&l| LayerConfig::standard(l, SOURCE_W, SOURCE_H, qp, qm_source))
        .collect()
}
