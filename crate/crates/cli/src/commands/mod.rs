mod bdrate;
mod codec;
mod gen;
mod simulate;

use serde_json::json;

use crate::args::Command;
use crate::error::CliResult;
use crate::manifest::RunManifest;

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Gen(args) => gen::run_gen(args),
        Command::Fwm(args) => gen::run_fwm(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Pack(args) => codec::run_pack(args),
        Command::Unpack(args) => codec::run_unpack(args),
        Command::Bdrate(args) => bdrate::run(args),
        Command::Replay(args) => {
            let manifest = RunManifest::read(&args.manifest)?;
            eprintln!("replaying {} from {}", manifest.command.name(), args.manifest.display());
            dispatch(manifest.command)
        }
    }
}

fn no_resolution() -> serde_json::Value {
    json!({})
}
