//! Per-layer scaling-list signaling.
//!
//! Stream layout (MSB first):
//!
//! ```text
//! ue(layer_count)
//! per layer:  ue(list_count)
//!   per list: u(1) kind (0 = intra, 1 = inter)
//!             64 × se(delta) in up-right diagonal order,
//!             predictor starts at 16 and tracks the last decoded entry
//! zero bits up to the next byte boundary
//! ```
//!
//! The container adds the magic `AQMS` and a version byte in front.
//! Only 8×8 lists are signaled; larger matrices are rebuilt with
//! [`upsample_qm`](crate::qm::upsample_qm).

use serde::{Deserialize, Serialize};

use crate::bitstream::{BitReader, BitWriter};
use crate::error::{domain, Error, Result};
use crate::qm::{QmKind, QuantMatrix};

pub const CONTAINER_MAGIC: [u8; 4] = *b"AQMS";
pub const CONTAINER_VERSION: u8 = 1;

const LIST_SIDE: usize = 8;
const PREDICTOR_START: i32 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOrder {
    n: usize,
    sequence: Vec<(usize, usize)>,
}

impl ScanOrder {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.sequence
    }

    /// Raster index of every scan position.
    pub fn raster_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.sequence.iter().map(move |&(r, c)| r * self.n + c)
    }

    /// `inverse[raster] = scan position`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.n * self.n];
        for (k, idx) in self.raster_indices().enumerate() {
            inv[idx] = k;
        }
        inv
    }
}

/// Anti-diagonals in ascending order, each walked from bottom-left to
/// top-right.
pub fn upright_diagonal_scan(n: usize) -> ScanOrder {
    let mut sequence = Vec::with_capacity(n * n);
    if n > 0 {
        for s in 0..(2 * n - 1) {
            let r_hi = s.min(n - 1);
            let r_lo = s.saturating_sub(n - 1);
            sequence.extend((r_lo..=r_hi).rev().map(|r| (r, s - r)));
        }
    }
    ScanOrder { n, sequence }
}

/// The matrices signaled for one layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerLists {
    pub lists: Vec<QuantMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingListPayload {
    pub layers: Vec<LayerLists>,
}

impl ScalingListPayload {
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return domain("payload needs at least one layer");
        }
        for (l, layer) in self.layers.iter().enumerate() {
            for (k, qm) in layer.lists.iter().enumerate() {
                if qm.n() != LIST_SIDE {
                    return domain(format!(
                        "layer {l} list {k}: only 8×8 lists are signaled, got {0}×{0}",
                        qm.n()
                    ));
                }
            }
        }
        Ok(())
    }
}

fn encode_list(writer: &mut BitWriter, qm: &QuantMatrix, scan: &ScanOrder) {
    writer.write_bit(qm.kind() == QmKind::Inter);
    let mut predictor = PREDICTOR_START;
    for idx in scan.raster_indices() {
        let value = i32::from(qm.entries()[idx]);
        writer.write_se(value - predictor);
        predictor = value;
    }
}

fn decode_list(reader: &mut BitReader<'_>, scan: &ScanOrder) -> Result<QuantMatrix> {
    let kind = if reader.read_bit()? { QmKind::Inter } else { QmKind::Intra };
    let mut entries = vec![0u8; LIST_SIDE * LIST_SIDE];
    let mut predictor = i64::from(PREDICTOR_START);
    for (k, idx) in scan.raster_indices().enumerate() {
        predictor += i64::from(reader.read_se()?);
        if !(1..=255).contains(&predictor) {
            return Err(Error::Integrity(format!(
                "scan position {k} decodes to {predictor}, outside [1, 255]"
            )));
        }
        entries[idx] = predictor as u8;
    }
    QuantMatrix::new(LIST_SIDE, kind, entries)
}

/// Encodes the payload as a byte-aligned bitstream (no container header).
pub fn encode_scaling_lists(payload: &ScalingListPayload) -> Result<Vec<u8>> {
    payload.validate()?;
    let scan = upright_diagonal_scan(LIST_SIDE);
    let mut writer = BitWriter::new();
    let count = |len: usize| u32::try_from(len).map_err(|_| Error::Domain("too many entries".into()));
    writer.write_ue(count(payload.layers.len())?);
    for layer in &payload.layers {
        writer.write_ue(count(layer.lists.len())?);
        for qm in &layer.lists {
            encode_list(&mut writer, qm, &scan);
        }
    }
    Ok(writer.finish())
}

pub fn decode_scaling_lists(bytes: &[u8]) -> Result<ScalingListPayload> {
    if bytes.is_empty() {
        return Err(Error::Parse("empty scaling-list stream".into()));
    }
    let scan = upright_diagonal_scan(LIST_SIDE);
    let mut reader = BitReader::new(bytes);
    let layer_count = reader.read_ue()?;
    if layer_count == 0 {
        return Err(Error::Integrity("stream declares zero layers".into()));
    }
    // Each list needs at least 65 bits, each layer at least one.
    let cap = |n: u32, min_bits: usize, reader: &BitReader<'_>| {
        if (n as usize).saturating_mul(min_bits) > reader.remaining() {
            Err(Error::Parse(format!("count {n} exceeds the remaining stream")))
        } else {
            Ok(n as usize)
        }
    };
    let layer_count = cap(layer_count, 1, &reader)?;
    let mut layers = Vec::with_capacity(layer_count);
    for _ in 0..layer_count {
        let list_count = reader.read_ue()?;
        let list_count = cap(list_count, 65, &reader)?;
        let lists = (0..list_count)
            .map(|_| decode_list(&mut reader, &scan))
            .collect::<Result<Vec<_>>>()?;
        layers.push(LayerLists { lists });
    }
    let trailing = reader.remaining();
    if trailing >= 8 {
        return Err(Error::Parse(format!("{} unexpected trailing bytes", trailing / 8)));
    }
    if reader.read_bits(trailing as u32)? != 0 {
        return Err(Error::Parse("non-zero padding bits".into()));
    }
    Ok(ScalingListPayload { layers })
}

/// Bitstream wrapped in the `AQMS` container.
pub fn pack_container(payload: &ScalingListPayload) -> Result<Vec<u8>> {
    let body = encode_scaling_lists(payload)?;
    let mut out = Vec::with_capacity(body.len() + 5);
    out.extend_from_slice(&CONTAINER_MAGIC);
    out.push(CONTAINER_VERSION);
    out.extend_from_slice(&body);
    Ok(out)
}

pub fn unpack_container(bytes: &[u8]) -> Result<ScalingListPayload> {
    if bytes.len() < 5 {
        return Err(Error::Parse(format!(
            "container truncated: {} bytes, need at least 5",
            bytes.len()
        )));
    }
    if bytes[..4] != CONTAINER_MAGIC {
        return Err(Error::Parse(format!(
            "bad magic {:?}, expected \"AQMS\"",
            String::from_utf8_lossy(&bytes[..4])
        )));
    }
    if bytes[4] != CONTAINER_VERSION {
        return Err(Error::Parse(format!(
            "unsupported container version {}, expected {CONTAINER_VERSION}",
            bytes[4]
        )));
    }
    decode_scaling_lists(&bytes[5..])
}
