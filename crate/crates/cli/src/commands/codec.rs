use aqm_core::scaling_list::{pack_container, unpack_container};
use aqm_core::{adaptive_qm, DisplayGeometry, LayerLists, ScalingListPayload};
use serde_json::json;

use super::no_resolution;
use crate::args::{Command, PackArgs, UnpackArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{absolute, absolute_opt, RunManifest};
use crate::output::{read_file, write_file, PayloadJson};

fn preset_payload(args: &PackArgs) -> CliResult<ScalingListPayload> {
    let presets = args.presets.as_deref().unwrap_or_default();
    if presets.is_empty() || args.kinds.is_empty() {
        return Err(CliError::usage("--presets and --kinds need at least one entry each"));
    }
    let layers = presets
        .iter()
        .map(|&p| {
            let geometry = DisplayGeometry::preset(p);
            let lists = args.kinds.iter().map(|&k| adaptive_qm(&geometry, k)).collect::<Result<_, _>>()?;
            Ok(LayerLists { lists })
        })
        .collect::<CliResult<_>>()?;
    Ok(ScalingListPayload { layers })
}

pub fn run_pack(mut args: PackArgs) -> CliResult<()> {
    args.input = absolute_opt(&args.input)?;
    args.output = absolute(&args.output)?;
    let payload = match &args.input {
        Some(path) => serde_json::from_slice::<PayloadJson>(&read_file(path)?)?.to_payload()?,
        None => preset_payload(&args)?,
    };
    let bytes = pack_container(&payload)?;
    write_file(&args.output, &bytes)?;
    eprintln!("packed {} layers into {} bytes", payload.layers.len(), bytes.len());
    let resolved = json!({ "layers": payload.layers.len(), "bytes": bytes.len() });
    RunManifest::new(Command::Pack(args.clone()), resolved, vec![args.output.clone()])
        .write(&RunManifest::path_for(&args.output, false))
}

pub fn run_unpack(mut args: UnpackArgs) -> CliResult<()> {
    args.input = absolute(&args.input)?;
    args.output = absolute_opt(&args.output)?;
    let payload = unpack_container(&read_file(&args.input)?)?;
    let text = PayloadJson::from_payload(&payload).render()?;
    match &args.output {
        None => print!("{text}"),
        Some(path) => {
            write_file(path, text)?;
            RunManifest::new(Command::Unpack(args.clone()), no_resolution(), vec![path.clone()])
                .write(&RunManifest::path_for(path, false))?;
        }
    }
    Ok(())
}
