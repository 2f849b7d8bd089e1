use std::path::Path;

use szego_core::bracket::{build_family_with, build_tensor_with, BracketError, BuildOptions};
use szego_core::Parity;

use crate::cli::{BuildArgs, CurveArgs};
use crate::config::{check_k, curve_from_args, JobConfig};
use crate::report::{Context, RunReport};
use crate::CliError;

fn options(b: BuildArgs) -> BuildOptions {
    BuildOptions {
        sign_flip: b.sign_flip,
        ..Default::default()
    }
}

/// Membership failures are check failures; anything else is a bad configuration.
fn membership(report: &mut RunReport, e: BracketError) -> Result<(), CliError> {
    match e {
        BracketError::TensorNotInSectionSpace { a, b, excess } => {
            report.check(
                "section space",
                false,
                true,
                format!("pair ({a}, {b}) leaves the space"),
            );
            report.witness(serde_json::json!({ "pair": [a, b], "excess": excess }));
            Ok(())
        }
        other => Err(CliError::Config(other.to_string())),
    }
}

pub fn build(
    ctx: &Context,
    curve: &CurveArgs,
    b: BuildArgs,
    out: &Path,
) -> Result<RunReport, CliError> {
    let model = curve_from_args(curve, None)?;
    let mut cfg = JobConfig::new("bracket build").with_curve(&model);
    cfg.sign_flip = b.sign_flip;
    let mut report = RunReport::new(cfg);
    match build_tensor_with(&model, options(b)) {
        Ok(t) => {
            report.line(format!("{model:?}"));
            report.line(format!(
                "dimension {}, nonzero coefficients {}",
                t.n,
                t.nnz()
            ));
            report.check(
                "section space",
                true,
                true,
                "every pair reduces into the section space",
            );
            ctx.json_artifact(out, &t, &mut report)?;
        }
        Err(e) => membership(&mut report, e)?,
    }
    Ok(report)
}

pub fn family(
    ctx: &Context,
    parity: Parity,
    k: u32,
    b: BuildArgs,
    out: &Path,
) -> Result<RunReport, CliError> {
    check_k(k)?;
    let mut cfg = JobConfig::new("bracket family").with_family(parity, k);
    cfg.sign_flip = b.sign_flip;
    let mut report = RunReport::new(cfg);
    match build_family_with(parity, k, options(b)) {
        Ok(f) => {
            let n = f.tensors[0].n;
            report.line(format!(
                "{parity} family, k = {k}: {} tensors of dimension {n}",
                f.tensors.len()
            ));
            for (label, t) in f.labels.iter().zip(&f.tensors) {
                report.line(format!("  {label}: {} nonzero coefficients", t.nnz()));
            }
            report.check(
                "section space",
                true,
                true,
                "every member reduces into the section space",
            );
            ctx.json_artifact(out, &f, &mut report)?;
        }
        Err(e) => membership(&mut report, e)?,
    }
    Ok(report)
}
