//! Display-resolution adaptive quantization matrices.
//!
//! - [`fwm`]: HVS-CSF frequency weighting matrix.
//! - [`qm`]: integer quantization matrices, default intra/inter tables and
//!   8×8 → 16×16/32×32 replication.
//! - [`display`]: display-geometry adaptation and adaptive matrices.
//! - [`scaling_list`]: per-layer scaling-list bitstream and container.
//! - [`sim`]: layered block-transform codec simulator.
//! - [`rd`]: PSNR and BD-rate.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitstream;
pub mod display;
pub mod error;
pub mod fwm;
pub mod golden;
pub mod qm;
pub mod rd;
pub mod scaling_list;
pub mod sim;

pub use display::{adapt_fwm, adaptive_qm, AdaptationField, DisplayGeometry, Preset};
pub use error::{Error, Result};
pub use fwm::{compute_fwm, FrequencyWeightMatrix, FwmConfig};
pub use qm::{default_inter_qm, default_intra_qm, fwm_to_qm, upsample_qm, QmKind, QuantMatrix};
pub use rd::{bd_rate, psnr, RdCurve};
pub use scaling_list::{LayerLists, ScalingListPayload};
pub use sim::image::Image;
pub use sim::pipeline::{LayerConfig, LayerLabel, QmSource, SimReport};
