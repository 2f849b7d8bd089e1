use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use szego_core::bracket::{build_tensor, family_point, BracketTensor, FamilyBasis, FAMILY_COORDS};
use szego_core::exact::{q, Rational};
use szego_core::verify::{check_jacobi, compatibility_check, independence_rank, JacobiWitness};
use szego_core::Parity;

use crate::config::{check_k, parse_json, read_input, JobConfig};
use crate::report::RunReport;
use crate::CliError;

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<(T, String), CliError> {
    let (text, digest) = read_input(path)?;
    Ok((parse_json(path, &text)?, digest))
}

fn family_config(command: &str, f: &FamilyBasis, digest: String) -> JobConfig {
    let mut cfg = JobConfig::new(command).with_family(f.parity, f.k);
    cfg.inputs.push(digest);
    cfg
}

pub fn jacobi(input: &Path) -> Result<RunReport, CliError> {
    let (t, digest): (BracketTensor, _) = load(input)?;
    let mut cfg = JobConfig::new("verify jacobi").with_family(t.parity, t.k);
    cfg.inputs.push(digest);
    let mut report = RunReport::new(cfg);
    report.line(format!(
        "{} tensor, k = {}, dimension {}",
        t.parity, t.k, t.n
    ));
    match check_jacobi(&t) {
        None => report.check(
            "jacobi",
            true,
            true,
            format!("Jacobiator vanishes in all {} charts", t.n),
        ),
        Some(w) => {
            report.check(
                "jacobi",
                false,
                true,
                format!("nonzero in chart {} at {:?}", w.chart, w.triple),
            );
            report.witness(w);
        }
    }
    Ok(report)
}

#[derive(Serialize)]
struct PairWitness<'a> {
    pair: [usize; 2],
    labels: [&'a str; 2],
    witness: JacobiWitness,
}

pub fn compat(family: &Path) -> Result<RunReport, CliError> {
    let (f, digest): (FamilyBasis, _) = load(family)?;
    let mut report = RunReport::new(family_config("verify compat", &f, digest));
    let n = f.tensors.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    // collected in pair order, so the report does not depend on scheduling
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&(i, j)| compatibility_check(&f.tensors[i], &f.tensors[j]))
        .collect();
    let passed = results.iter().filter(|r| r.compatible).count();
    report.line(format!("{} family, k = {}: {n} tensors", f.parity, f.k));
    report.check(
        "compatibility",
        passed == pairs.len(),
        true,
        format!("{passed}/{} pairs compatible", pairs.len()),
    );
    for (&(i, j), r) in pairs.iter().zip(results) {
        if let Some(w) = r.witness {
            report.witness(PairWitness {
                pair: [i, j],
                labels: [&f.labels[i], &f.labels[j]],
                witness: w,
            });
        }
    }
    Ok(report)
}

pub fn independence(family: &Path) -> Result<RunReport, CliError> {
    let (f, digest): (FamilyBasis, _) = load(family)?;
    let mut report = RunReport::new(family_config("verify independence", &f, digest));
    let rank = independence_rank(&f);
    let n = f.tensors.len();
    report.line(format!("{} family, k = {}: {n} tensors", f.parity, f.k));
    report.check(
        "independence",
        rank == n,
        true,
        format!("rank {rank} of {n}"),
    );
    Ok(report)
}

fn random_coords(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..FAMILY_COORDS)
        .map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=3)))
        .collect()
}

#[derive(Serialize)]
struct LinearityWitness {
    sample: usize,
    v: Vec<Rational>,
    w: Vec<Rational>,
    nonzero_coefficients: usize,
}

pub fn linearity(parity: Parity, k: u32, seed: u64, samples: usize) -> Result<RunReport, CliError> {
    check_k(k)?;
    let cfg = JobConfig::new("verify linearity")
        .with_family(parity, k)
        .with_sampling(seed, samples);
    let mut report = RunReport::new(cfg);
    let build = |v: &[Rational]| -> Result<BracketTensor, CliError> {
        let m = family_point(parity, k, v).map_err(|e| CliError::Config(e.to_string()))?;
        build_tensor(&m).map_err(|e| CliError::Config(e.to_string()))
    };
    let b0 = build(&vec![Rational::zero(); FAMILY_COORDS])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(Vec<Rational>, Vec<Rational>)> = (0..samples)
        .map(|_| (random_coords(&mut rng), random_coords(&mut rng)))
        .collect();
    let mut failures = 0;
    for (i, (v, w)) in draws.into_iter().enumerate() {
        let s: Vec<Rational> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        let cross = build(&s)?
            .add_scaled(&build(&v)?, &-Rational::one())
            .add_scaled(&build(&w)?, &-Rational::one())
            .add_scaled(&b0, &Rational::one());
        if !cross.is_zero() {
            failures += 1;
            report.witness(LinearityWitness {
                sample: i,
                v,
                w,
                nonzero_coefficients: cross.nnz(),
            });
        }
    }
    report.line(format!("{parity} family, k = {k}: {samples} seeded pairs"));
    report.check(
        "affine linearity",
        failures == 0,
        true,
        format!("{}/{samples} cross differences vanish", samples - failures),
    );
    Ok(report)
}
