use std::collections::BTreeMap;
use std::path::Path;

use aqm_core::{bd_rate, LayerLabel, QmSource, RdCurve};
use serde::Deserialize;

use crate::args::{BdrateArgs, Command};
use crate::error::{CliError, CliResult};
use crate::manifest::{absolute, absolute_opt, RunManifest};
use crate::output::{read_file, write_file};

#[derive(Debug, Deserialize)]
struct ReportRow {
    label: String,
    qp: u8,
    qm_source: String,
    psnr_db: f64,
    rate_bits: f64,
}

type Curves = BTreeMap<LayerLabel, Vec<(f64, f64)>>;

/// Groups report rows into per-layer `(rate, psnr)` curves.
fn read_curves(path: &Path, source: Option<QmSource>) -> CliResult<Curves> {
    let bytes = read_file(path)?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let mut curves: Curves = BTreeMap::new();
    let mut seen: BTreeMap<(LayerLabel, u8), QmSource> = BTreeMap::new();
    for row in reader.deserialize::<ReportRow>() {
        let row = row?;
        let label: LayerLabel = row.label.parse()?;
        let row_source: QmSource = row.qm_source.parse()?;
        if source.is_some_and(|s| s != row_source) {
            continue;
        }
        if let Some(prev) = seen.insert((label, row.qp), row_source) {
            return Err(CliError::usage(format!(
                "{}: {label} has two rows at QP {} ({prev} and {row_source}); select one with a --*-source filter",
                path.display(),
                row.qp
            )));
        }
        curves.entry(label).or_default().push((row.rate_bits, row.psnr_db));
    }
    Ok(curves)
}

fn plot_data(points: &[(f64, f64)]) -> String {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = String::from("# rate_bits psnr_db\n");
    for (rate, psnr) in sorted {
        out.push_str(&format!("{rate} {psnr}\n"));
    }
    out
}

pub fn run(mut args: BdrateArgs) -> CliResult<()> {
    args.anchor = absolute(&args.anchor)?;
    args.test = absolute_opt(&args.test)?;
    args.plot_dir = absolute_opt(&args.plot_dir)?;
    let test_path = args.test.clone().unwrap_or_else(|| args.anchor.clone());
    let anchor = read_curves(&args.anchor, args.anchor_source)?;
    let test = read_curves(&test_path, args.test_source)?;

    let labels: Vec<LayerLabel> = anchor
        .keys()
        .filter(|l| test.contains_key(l) && args.label.is_none_or(|want| want == **l))
        .copied()
        .collect();
    if labels.is_empty() {
        return Err(CliError::usage("the two reports share no layer to compare"));
    }

    let mut outputs = Vec::new();
    for label in labels {
        let (a, t) = (&anchor[&label], &test[&label]);
        let bd = bd_rate(&RdCurve::new(a.clone())?, &RdCurve::new(t.clone())?)?;
        println!("{label}: {bd:.2}%");
        if let Some(dir) = &args.plot_dir {
            for (side, points) in [("anchor", a), ("test", t)] {
                let path = dir.join(format!("{}_{side}.dat", label.name().to_ascii_lowercase()));
                write_file(&path, plot_data(points))?;
                outputs.push(path);
            }
        }
    }
    if let Some(dir) = &args.plot_dir {
        RunManifest::new(Command::Bdrate(args.clone()), super::no_resolution(), outputs)
            .write(&RunManifest::path_for(dir, true))?;
    }
    Ok(())
}
