use aqm_core::golden::{
    REFERENCE_ADAPTED_FWM_4K, REFERENCE_AQM_INTRA_4K, REFERENCE_FWM, REFERENCE_INTER_QM, REFERENCE_INTRA_QM,
};
use aqm_core::{
    adapt_fwm, adaptive_qm, compute_fwm, default_inter_qm, default_intra_qm, upsample_qm, DisplayGeometry,
    FrequencyWeightMatrix, FwmConfig, QmKind, QuantMatrix,
};
use serde_json::json;

use crate::args::{Command, FwmArgs, GenArgs, DEFAULT_MAX};
use crate::error::{CliError, CliResult};
use crate::manifest::{absolute_opt, RunManifest};
use crate::output::{render_fwm, render_qm, write_file};

/// Reference weights are printed to four decimals.
const FWM_TOLERANCE: f64 = 5e-5;

fn fwm_gap(fwm: &FrequencyWeightMatrix, reference: &[[f64; 8]; 8]) -> CliResult<f64> {
    let reference = FrequencyWeightMatrix::from_rows(reference)?;
    fwm.max_abs_diff(&reference)
        .ok_or_else(|| CliError::usage("reference comparison needs an 8×8 matrix"))
}

fn qm_mismatches(qm: &QuantMatrix, reference: &[[u8; 8]; 8]) -> usize {
    (0..64).filter(|&k| qm.get(k / 8, k % 8) != reference[k / 8][k % 8]).count()
}

fn is_reference_4k(g: &DisplayGeometry) -> bool {
    (g.x, g.y, g.x_max, g.y_max) == (3840, 2160, DEFAULT_MAX.width, DEFAULT_MAX.height)
}

/// Checks the generated matrices against the embedded tables.
fn golden_check(geometry: Option<&DisplayGeometry>, kind: QmKind, fwm: &FrequencyWeightMatrix, qm: &QuantMatrix) -> CliResult<()> {
    let (fwm_gap, qm_reference) = match geometry {
        None => {
            let table = if kind == QmKind::Intra { &REFERENCE_INTRA_QM } else { &REFERENCE_INTER_QM };
            (fwm_gap(fwm, &REFERENCE_FWM)?, table)
        }
        Some(g) if is_reference_4k(g) => {
            // The adapted reference was derived from the printed base table.
            let printed = FrequencyWeightMatrix::from_rows(&REFERENCE_FWM)?;
            (fwm_gap(&adapt_fwm(&printed, g)?, &REFERENCE_ADAPTED_FWM_4K)?, &REFERENCE_AQM_INTRA_4K)
        }
        Some(g) => {
            return Err(CliError::usage(format!(
                "no reference tables for {g} (max {}x{}); use no geometry or 3840x2160",
                g.x_max, g.y_max
            )))
        }
    };
    let bad = qm_mismatches(qm, qm_reference);
    eprintln!("golden: weights max |diff| {fwm_gap:.2e}, QM {}/64 entries equal", 64 - bad);
    if fwm_gap > FWM_TOLERANCE || bad > 0 {
        return Err(CliError::Golden(format!(
            "weights differ by {fwm_gap:.2e} (tolerance {FWM_TOLERANCE:e}), {bad} QM entries differ"
        )));
    }
    Ok(())
}

pub fn run_gen(mut args: GenArgs) -> CliResult<()> {
    args.output = absolute_opt(&args.output)?;
    let geometry = args.display.resolve()?;
    let base = compute_fwm(&FwmConfig::default())?;
    let (fwm, qm8) = match &geometry {
        None => {
            let qm = match args.kind {
                QmKind::Intra => default_intra_qm(),
                QmKind::Inter => default_inter_qm(),
            };
            (base, qm)
        }
        Some(g) => (adapt_fwm(&base, g)?, adaptive_qm(g, args.kind)?),
    };
    let qm = if args.size == qm8.n() { qm8.clone() } else { upsample_qm(&qm8, args.size)? };

    match &args.output {
        None => print!("{}", render_qm(&qm, args.format)?),
        Some(dir) => {
            let ext = args.format.extension();
            let (fwm_path, qm_path) = (dir.join(format!("fwm.{ext}")), dir.join(format!("qm.{ext}")));
            write_file(&fwm_path, render_fwm(&fwm, args.format)?)?;
            write_file(&qm_path, render_qm(&qm, args.format)?)?;
            let resolved = json!({ "geometry": geometry, "fwm_config": FwmConfig::default() });
            RunManifest::new(Command::Gen(args.clone()), resolved, vec![fwm_path, qm_path])
                .write(&RunManifest::path_for(dir, true))?;
        }
    }
    if args.golden {
        golden_check(geometry.as_ref(), args.kind, &fwm, &qm8)?;
    }
    Ok(())
}

pub fn run_fwm(mut args: FwmArgs) -> CliResult<()> {
    args.output = absolute_opt(&args.output)?;
    let config = args.config();
    let geometry = args.display.resolve()?;
    let mut fwm = compute_fwm(&config)?;
    if let Some(g) = &geometry {
        fwm = adapt_fwm(&fwm, g)?;
    }
    let text = render_fwm(&fwm, args.format)?;
    match &args.output {
        None => print!("{text}"),
        Some(path) => {
            write_file(path, text)?;
            let resolved = json!({ "geometry": geometry, "fwm_config": config });
            RunManifest::new(Command::Fwm(args.clone()), resolved, vec![path.clone()])
                .write(&RunManifest::path_for(path, false))?;
        }
    }
    if args.golden {
        if fwm.n() != 8 {
            return Err(CliError::usage("reference weights exist only for the 8×8 grid"));
        }
        let gap = fwm_gap(&fwm, &REFERENCE_FWM)?;
        eprintln!("golden: weights max |diff| {gap:.2e}");
        if gap > FWM_TOLERANCE {
            return Err(CliError::Golden(format!("weights differ by {gap:.2e} (tolerance {FWM_TOLERANCE:e})")));
        }
    }
    Ok(())
}
