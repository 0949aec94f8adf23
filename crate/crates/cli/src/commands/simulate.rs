use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use aqm_core::sim::pipeline::{run_sweep, sweep_csv, LayerSpec};
use aqm_core::Image;
use serde_json::json;

use crate::args::{Command, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{absolute_opt, RunManifest};
use crate::output::write_file;

fn sources(args: &SimulateArgs) -> CliResult<Vec<(String, Image)>> {
    if let Some(path) = &args.input {
        let file = File::open(path).map_err(|source| CliError::File {
            path: path.display().to_string(),
            source,
        })?;
        let name = path.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned());
        return Ok(vec![(name, Image::read_pgm(BufReader::new(file))?)]);
    }
    args.corpus
        .images()
        .into_iter()
        .map(|c| Ok((c.name().to_string(), c.generate(args.width, args.height, args.seed)?)))
        .collect()
}

fn check_args(args: &SimulateArgs) -> CliResult<()> {
    if args.layers.is_empty() || args.qps.is_empty() || args.qm_sources.is_empty() {
        return Err(CliError::usage("--layers, --qps and --qm-sources need at least one entry each"));
    }
    if let Some(g) = args.geometries.as_ref().filter(|g| g.len() != args.layers.len()) {
        return Err(CliError::usage(format!(
            "{} geometries given for {} layers",
            g.len(),
            args.layers.len()
        )));
    }
    if let Some(pair) = args.layers.windows(2).find(|p| p[1] <= p[0]) {
        return Err(CliError::usage(format!(
            "layers must be listed bottom-up without repeats; {} cannot follow {}",
            pair[1], pair[0]
        )));
    }
    Ok(())
}

pub fn run(mut args: SimulateArgs) -> CliResult<()> {
    args.input = absolute_opt(&args.input)?;
    args.output = absolute_opt(&args.output)?;
    check_args(&args)?;
    let images = sources(&args)?;
    let multiple = images.len() > 1;
    if multiple && args.output.is_none() {
        return Err(CliError::usage("--corpus all writes one CSV per image and needs --output DIR"));
    }

    let mut outputs: Vec<PathBuf> = Vec::new();
    let mut resolved_images = Vec::new();
    let mut stacks = Vec::new();
    for (name, image) in &images {
        let mut stack: Vec<LayerSpec> = args
            .layers
            .iter()
            .map(|&l| LayerSpec::standard(l, image.width(), image.height()))
            .collect();
        if let Some(geometries) = &args.geometries {
            for (layer, g) in stack.iter_mut().zip(geometries) {
                layer.geometry = *g;
            }
        }
        let csv = sweep_csv(&run_sweep(image, &stack, &args.qps, &args.qm_sources)?);
        match &args.output {
            None => print!("{csv}"),
            Some(dir) if multiple => {
                let path = dir.join(format!("{name}.csv"));
                write_file(&path, csv)?;
                outputs.push(path);
            }
            Some(path) => {
                write_file(path, csv)?;
                outputs.push(path.clone());
            }
        }
        resolved_images.push(json!({ "name": name, "width": image.width(), "height": image.height() }));
        stacks.push(stack);
    }

    if let Some(out) = &args.output {
        let resolved = json!({ "images": resolved_images, "layers": stacks });
        RunManifest::new(Command::Simulate(args.clone()), resolved, outputs)
            .write(&RunManifest::path_for(out, multiple))?;
    }
    Ok(())
}
