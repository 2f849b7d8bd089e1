use std::path::Path;

use szego_core::curve::{verify_szego_residues, CurveError, Parity};
use szego_core::exact::Rational;

use crate::cli::CurveArgs;
use crate::config::{curve_from_args, JobConfig};
use crate::report::{Context, RunReport};
use crate::CliError;

pub fn check(ctx: &Context, curve: &CurveArgs, out: &Path) -> Result<RunReport, CliError> {
    let model = curve_from_args(curve, Some(1))?;
    let mut report = RunReport::new(JobConfig::new("szego check").with_curve(&model));
    let cert = match verify_szego_residues(&model) {
        Ok(c) => c,
        Err(e @ (CurveError::DegenerateDivisor(_) | CurveError::InvalidModel(_))) => {
            return Err(CliError::Config(e.to_string()))
        }
        Err(e) => {
            report.check("residues", false, true, e.to_string());
            return Ok(report);
        }
    };
    let [r1, r2] = &cert.infinity_residues;
    report.line(format!("{model:?}"));
    report.line(format!("diagonal residue {}", cert.diagonal_residue));
    report.line(format!("infinity residues {r1}, {r2}"));
    report.check(
        "diagonal residue",
        cert.diagonal_residue.is_one(),
        true,
        format!("{}", cert.diagonal_residue),
    );
    report.check(
        "infinity residues agree",
        r1 == r2,
        true,
        format!("{r1} vs {r2}"),
    );
    if model.parity() == Parity::Even {
        let half = Rational::new(1, 2);
        report.check(
            "infinity residue value",
            r1.is_rational() && r1.base == half,
            true,
            format!("{r1}, expected 1/2"),
        );
    }
    ctx.json_artifact(out, &cert, &mut report)?;
    Ok(report)
}
