use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use aqm_core::display::MAX_DIMENSION;
use aqm_core::sim::corpus::{CorpusImage, DEFAULT_SEED};
use aqm_core::{DisplayGeometry, FwmConfig, LayerLabel, Preset, QmKind, QmSource};
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `WIDTHxHEIGHT` in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub width: u32,
    pub height: u32,
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected WIDTHxHEIGHT, got {s:?}");
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let width = w.trim().parse().map_err(|_| bad())?;
        let height = h.trim().parse().map_err(|_| bad())?;
        if width == 0 || height == 0 {
            return Err(format!("dimensions must be positive, got {s:?}"));
        }
        Ok(Self { width, height })
    }
}

pub const DEFAULT_MAX: Dims = Dims {
    width: MAX_DIMENSION,
    height: MAX_DIMENSION,
};

/// Target display, given as a preset or explicit dimensions.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DisplayArgs {
    /// Display preset: sd, hd, fhd, 4k, 8k or max.
    #[arg(long, conflicts_with = "geometry", value_parser = parse_preset)]
    pub preset: Option<Preset>,
    /// Display resolution as WIDTHxHEIGHT.
    #[arg(long)]
    pub geometry: Option<Dims>,
    /// Maximum resolution the adaptation is normalized by.
    #[arg(long = "max-geometry", default_value_t = DEFAULT_MAX)]
    pub max_geometry: Dims,
}

impl DisplayArgs {
    pub fn dims(&self) -> Option<Dims> {
        self.geometry.or_else(|| {
            self.preset.map(|p| {
                let (width, height) = p.dimensions();
                Dims { width, height }
            })
        })
    }

    pub fn resolve(&self) -> CliResult<Option<DisplayGeometry>> {
        self.dims()
            .map(|d| {
                DisplayGeometry::new(d.width, d.height, self.max_geometry.width, self.max_geometry.height)
                    .map_err(|e| CliError::usage(e.to_string()))
            })
            .transpose()
    }
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: aqm_core::Error| e.to_string())
}

fn parse_size(s: &str) -> Result<usize, String> {
    match s.parse() {
        Ok(n @ (8 | 16 | 32)) => Ok(n),
        _ => Err(format!("size must be 8, 16 or 32, got {s:?}")),
    }
}

fn parse_geometry(s: &str) -> Result<DisplayGeometry, String> {
    s.parse().map_err(|e: aqm_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<QmKind, String> {
    s.parse().map_err(|e: aqm_core::Error| e.to_string())
}

fn parse_label(s: &str) -> Result<LayerLabel, String> {
    s.parse().map_err(|e: aqm_core::Error| e.to_string())
}

fn parse_source(s: &str) -> Result<QmSource, String> {
    s.parse().map_err(|e: aqm_core::Error| e.to_string())
}

fn parse_corpus(s: &str) -> Result<CorpusChoice, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(CorpusChoice::All);
    }
    s.parse().map(CorpusChoice::One).map_err(|e: aqm_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusChoice {
    One(CorpusImage),
    All,
}

impl CorpusChoice {
    pub fn images(self) -> Vec<CorpusImage> {
        match self {
            CorpusChoice::One(c) => vec![c],
            CorpusChoice::All => CorpusImage::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Generate the weighting matrix and quantization matrix for a display.
    Gen(GenArgs),
    /// Compute a weighting matrix with custom model constants.
    Fwm(FwmArgs),
    /// Run the layered codec simulator over a QP sweep.
    Simulate(SimulateArgs),
    /// Pack per-layer scaling lists into a container file.
    Pack(PackArgs),
    /// Unpack a container file to JSON.
    Unpack(UnpackArgs),
    /// BD-rate between two RD curves from simulator CSV reports.
    Bdrate(BdrateArgs),
    /// Re-run a command from its manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Fwm(_) => "fwm",
            Command::Simulate(_) => "simulate",
            Command::Pack(_) => "pack",
            Command::Unpack(_) => "unpack",
            Command::Bdrate(_) => "bdrate",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub display: DisplayArgs,
    #[arg(long, default_value = "intra", value_parser = parse_kind)]
    pub kind: QmKind,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Matrix side; 16 and 32 replicate the 8×8 matrix.
    #[arg(long, default_value_t = 8, value_parser = parse_size)]
    pub size: usize,
    /// Output directory; without it the matrix is printed to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Compare against the embedded reference tables; exit 2 on mismatch.
    #[arg(long)]
    pub golden: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FwmArgs {
    #[arg(long, default_value_t = FwmConfig::default().a)]
    pub a: f64,
    #[arg(long, default_value_t = FwmConfig::default().b)]
    pub b: f64,
    #[arg(long, default_value_t = FwmConfig::default().c)]
    pub c: f64,
    #[arg(long, default_value_t = FwmConfig::default().d)]
    pub d: f64,
    /// Peak sensitivity frequency in cycles/degree.
    #[arg(long, default_value_t = FwmConfig::default().f_max)]
    pub f_max: f64,
    /// Dot pitch in mm.
    #[arg(long, default_value_t = FwmConfig::default().delta)]
    pub delta: f64,
    /// Grid size.
    #[arg(long, default_value_t = FwmConfig::default().n)]
    pub n: usize,
    /// Viewing distance.
    #[arg(long, default_value_t = FwmConfig::default().dis)]
    pub dis: f64,
    /// Angular symmetry parameter.
    #[arg(long, default_value_t = FwmConfig::default().s)]
    pub s: f64,
    /// Also adapt the matrix to this display (8×8 grids only).
    #[command(flatten)]
    pub display: DisplayArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; without it the matrix is printed to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Compare the unadapted 8×8 matrix with the reference weights; exit 2 on mismatch.
    #[arg(long, conflicts_with_all = ["preset", "geometry"])]
    pub golden: bool,
}

impl FwmArgs {
    pub fn config(&self) -> FwmConfig {
        FwmConfig {
            a: self.a,
            b: self.b,
            c: self.c,
            d: self.d,
            f_max: self.f_max,
            delta: self.delta,
            n: self.n,
            dis: self.dis,
            s: self.s,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Layers to code, bottom first.
    #[arg(long, value_delimiter = ',', default_value = "bl,el1,el2", value_parser = parse_label)]
    pub layers: Vec<LayerLabel>,
    #[arg(long, value_delimiter = ',', default_value = "22,27,32,37", value_parser = clap::value_parser!(u8).range(0..=51))]
    pub qps: Vec<u8>,
    /// Display per layer (preset or WIDTHxHEIGHT) driving its adaptive
    /// matrix; defaults to HD, 4K and 8K for BL, EL1 and EL2.
    #[arg(long, value_delimiter = ',', value_parser = parse_geometry)]
    pub geometries: Option<Vec<DisplayGeometry>>,
    /// QM sources: default, adaptive, flat or flat:N.
    #[arg(long, value_delimiter = ',', default_value = "default,adaptive", value_parser = parse_source)]
    pub qm_sources: Vec<QmSource>,
    /// Synthetic source image, or `all` for the whole corpus.
    #[arg(long, default_value = "zone-plate", value_parser = parse_corpus, conflicts_with = "input")]
    pub corpus: CorpusChoice,
    /// Binary PGM source instead of a synthetic image.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Synthetic source width.
    #[arg(long, default_value_t = 768)]
    pub width: usize,
    /// Synthetic source height.
    #[arg(long, default_value_t = 432)]
    pub height: usize,
    /// CSV report path, or a directory with `--corpus all`. Stdout if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PackArgs {
    /// JSON payload: {"layers":[{"lists":[{"kind","matrix"}]}]}.
    #[arg(long, conflicts_with = "presets", required_unless_present = "presets")]
    pub input: Option<PathBuf>,
    /// One layer per preset, each carrying its adaptive matrices.
    #[arg(long, value_delimiter = ',', value_parser = parse_preset)]
    pub presets: Option<Vec<Preset>>,
    /// List kinds per layer when packing presets.
    #[arg(long, value_delimiter = ',', default_value = "intra,inter", value_parser = parse_kind)]
    pub kinds: Vec<QmKind>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct UnpackArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// JSON output; stdout if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BdrateArgs {
    /// Anchor CSV report.
    #[arg(long)]
    pub anchor: PathBuf,
    /// Test CSV report; defaults to the anchor file.
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Keep only anchor rows with this QM source.
    #[arg(long, value_parser = parse_source)]
    pub anchor_source: Option<QmSource>,
    /// Keep only test rows with this QM source.
    #[arg(long, value_parser = parse_source)]
    pub test_source: Option<QmSource>,
    /// Restrict to one layer; all layers present otherwise.
    #[arg(long, value_parser = parse_label)]
    pub label: Option<LayerLabel>,
    /// Directory for gnuplot rate/PSNR data files.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
}
