//! Text renderings of matrices and the JSON scaling-list schema.

use std::fs;
use std::path::Path;

use aqm_core::{FrequencyWeightMatrix, LayerLists, QmKind, QuantMatrix, ScalingListPayload};
use serde::{Deserialize, Serialize};

use crate::args::Format;
use crate::error::{CliError, CliResult};

#[derive(Serialize)]
struct QmJson<'a> {
    kind: QmKind,
    n: usize,
    matrix: Vec<&'a [u8]>,
}

#[derive(Serialize)]
struct FwmJson<'a> {
    n: usize,
    matrix: Vec<&'a [f64]>,
}

fn csv_rows<T: ToString>(rows: impl Iterator<Item = impl IntoIterator<Item = T>>) -> String {
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn pretty<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn render_qm(qm: &QuantMatrix, format: Format) -> CliResult<String> {
    match format {
        Format::Csv => Ok(csv_rows(qm.rows().map(|r| r.iter().copied()))),
        Format::Json => pretty(&QmJson {
            kind: qm.kind(),
            n: qm.n(),
            matrix: qm.rows().collect(),
        }),
    }
}

/// Weights use the shortest representation that parses back exactly.
pub fn render_fwm(fwm: &FrequencyWeightMatrix, format: Format) -> CliResult<String> {
    match format {
        Format::Csv => Ok(csv_rows(fwm.rows().map(|r| r.iter().copied()))),
        Format::Json => pretty(&FwmJson {
            n: fwm.n(),
            matrix: fwm.rows().collect(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListJson {
    pub kind: QmKind,
    pub matrix: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerJson {
    pub lists: Vec<ListJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayloadJson {
    pub layers: Vec<LayerJson>,
}

impl PayloadJson {
    pub fn from_payload(payload: &ScalingListPayload) -> Self {
        Self {
            layers: payload
                .layers
                .iter()
                .map(|l| LayerJson {
                    lists: l
                        .lists
                        .iter()
                        .map(|qm| ListJson {
                            kind: qm.kind(),
                            matrix: qm.to_rows(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_payload(&self) -> CliResult<ScalingListPayload> {
        let mut layers = Vec::with_capacity(self.layers.len());
        for (l, layer) in self.layers.iter().enumerate() {
            let mut lists = Vec::with_capacity(layer.lists.len());
            for (k, list) in layer.lists.iter().enumerate() {
                let n = list.matrix.len();
                if list.matrix.iter().any(|row| row.len() != n) {
                    return Err(CliError::usage(format!("layer {l} list {k}: matrix is not square")));
                }
                let entries = list.matrix.concat();
                lists.push(QuantMatrix::new(n, list.kind, entries)?);
            }
            layers.push(LayerLists { lists });
        }
        let payload = ScalingListPayload { layers };
        payload.validate()?;
        Ok(payload)
    }

    pub fn render(&self) -> CliResult<String> {
        pretty(self)
    }
}

pub fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    let io_err = |source| CliError::File {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err)?;
    }
    fs::write(path, contents).map_err(io_err)
}
