use std::path::Path;

use szego_core::bracket::BracketTensor;
use szego_core::verify::rank_scan_with;

use crate::config::{parse_json, read_input, JobConfig};
use crate::report::{Context, RunReport};
use crate::CliError;

pub fn scan(
    ctx: &Context,
    input: &Path,
    seed: u64,
    samples: usize,
    pencils: usize,
    expect_rank: Option<usize>,
    out: &Path,
) -> Result<RunReport, CliError> {
    if samples == 0 {
        return Err(CliError::Config("--samples must be positive".into()));
    }
    let (text, digest) = read_input(input)?;
    let t: BracketTensor = parse_json(input, &text)?;
    let mut cfg = JobConfig::new("rank scan")
        .with_family(t.parity, t.k)
        .with_sampling(seed, samples)
        .extra("pencils", pencils);
    if let Some(r) = expect_rank {
        cfg = cfg.extra("expect_rank", r);
    }
    cfg.inputs.push(digest);
    let mut report = RunReport::new(cfg);

    let scan = rank_scan_with(&t, samples, seed, pencils);
    let hist: Vec<String> = scan
        .histogram
        .iter()
        .map(|(r, c)| format!("{r}:{c}"))
        .collect();
    report.line(format!(
        "{} tensor, k = {}, dimension {}",
        t.parity, t.k, t.n
    ));
    report.line(format!(
        "generic rank {} over {samples} points",
        scan.generic_rank
    ));
    report.line(format!("histogram {}", hist.join(" ")));
    for (i, p) in scan.pencils.iter().enumerate() {
        let w = match &p.witness {
            Some((s, r)) => format!(", rank {r} at s = {s}"),
            None => String::new(),
        };
        report.line(format!("pencil {i}: drop degree {}{w}", p.drop_degree));
    }
    match expect_rank {
        Some(r) => report.check(
            "generic rank",
            scan.generic_rank == r,
            true,
            format!("observed {}, expected {r}", scan.generic_rank),
        ),
        None => report.check(
            "generic rank",
            true,
            false,
            format!("observed {}", scan.generic_rank),
        ),
    }
    report.check(
        "deep drops",
        scan.flagged.is_empty(),
        false,
        format!(
            "{} sample points more than 2 below generic",
            scan.flagged.len()
        ),
    );
    for &i in &scan.flagged {
        report.witness(serde_json::json!({ "point": scan.points[i], "rank": scan.ranks[i] }));
    }
    ctx.artifact(out, scan.histogram_csv().as_bytes(), &mut report)?;
    ctx.json_artifact(&out.with_extension("json"), &scan, &mut report)?;
    Ok(report)
}
