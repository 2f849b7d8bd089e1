use std::path::Path;

use szego_core::helix::{
    decomposition_witness, helix_class, helix_table, solve_biham_params, HelixError,
};

use crate::cli::{HelixArgs, HelixCmd};
use crate::config::{parse_range, JobConfig};
use crate::report::{Context, RunReport};
use crate::CliError;

pub fn run(ctx: &Context, args: &HelixArgs) -> Result<RunReport, CliError> {
    match &args.command {
        Some(HelixCmd::Solve { d, r }) => solve(*d, *r),
        None => table(ctx, &args.range, args.out.as_deref()),
    }
}

fn table(ctx: &Context, range: &str, out: Option<&Path>) -> Result<RunReport, CliError> {
    let (from, to) = parse_range(range)?;
    let cfg = JobConfig::new("helix").extra("range", format!("{from}..{to}"));
    let mut report = RunReport::new(cfg);
    let rows = helix_table(from, to);
    report.line(format!("{:>5} {:>12} {:>12}", "n", "rank", "chi"));
    for r in &rows {
        report.line(format!("{:>5} {:>12} {:>12}", r.n, r.rank, r.chi));
    }
    let broken =
        (from + 1..to).find(|&n| helix_class(n + 1) != 3 * helix_class(n) - helix_class(n - 1));
    report.check(
        "three-term recurrence",
        broken.is_none(),
        true,
        match broken {
            None => "class(n+1) = 3·class(n) − class(n−1) across the range".to_string(),
            Some(n) => format!("fails at n = {n}"),
        },
    );
    if let Some(out) = out {
        ctx.json_artifact(out, &rows, &mut report)?;
    }
    Ok(report)
}

fn solve(d: u64, r: u64) -> Result<RunReport, CliError> {
    let cfg = JobConfig::new("helix solve").extra("d", d).extra("r", r);
    let mut report = RunReport::new(cfg);
    match solve_biham_params(d, r) {
        Ok(p) => {
            let sign = if p.sign > 0 { '+' } else { '-' };
            let factor = if p.n == 0 { "2k-1" } else { "2k-2" };
            report.line(format!(
                "m = {}, k = {}, n = {}, sign {sign}",
                p.m, p.k, p.n
            ));
            report.line(format!("d = ({factor})r {sign} 1 = {}", p.degree()));
            if let Some((d1, r1)) = decomposition_witness(d as i128, r as i128) {
                report.line(format!("decomposition witness v1 = (d, r) = ({d1}, {r1})"));
            }
            report.check(
                "parameters",
                true,
                true,
                format!("d = {d} is ±1 modulo {r}"),
            );
            report.witness(p);
        }
        Err(HelixError::NoSolution { d, r }) => {
            report.check(
                "parameters",
                false,
                true,
                format!("d = {d} is not ±1 modulo {r}"),
            );
        }
        Err(e @ HelixError::InvalidInput(_)) => return Err(CliError::Config(e.to_string())),
    }
    Ok(report)
}
