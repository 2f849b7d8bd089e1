use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use szego_core::exact::{Rational, UniPoly};
use szego_core::{CurveModel, Parity};

use crate::cli::CurveArgs;
use crate::CliError;

/// Largest `k` accepted on the command line.
pub const MAX_K: u32 = 8;

/// Everything that determines a run's results. Paths and thread counts are
/// left out so that the digest only changes when the output can.
#[derive(Debug, Clone, Default, Serialize)]
pub struct JobConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Rational>>,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub sign_flip: bool,
    /// SHA-256 of each input artifact, in argument order.
    pub inputs: Vec<String>,
    pub extra: BTreeMap<String, String>,
}

impl JobConfig {
    pub fn new(command: &str) -> Self {
        JobConfig {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn with_curve(mut self, m: &CurveModel) -> Self {
        self.parity = Some(m.parity());
        self.k = Some(m.k());
        self.q = Some(m.q().coeffs().to_vec());
        self.p = Some(m.p().coeffs().to_vec());
        self.c = Some(m.c().clone());
        self
    }

    pub fn with_family(mut self, parity: Parity, k: u32) -> Self {
        self.parity = Some(parity);
        self.k = Some(k);
        self
    }

    pub fn with_sampling(mut self, seed: u64, samples: usize) -> Self {
        self.seed = Some(seed);
        self.samples = Some(samples);
        self
    }

    pub fn extra(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.insert(key.into(), value.to_string());
        self
    }

    pub fn digest(&self) -> String {
        hex(&Sha256::digest(
            serde_json::to_vec(self).expect("config serializes"),
        ))
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn check_k(k: u32) -> Result<(), CliError> {
    if k == 0 || k > MAX_K {
        return Err(CliError::Config(format!(
            "k must be in 1..={MAX_K}, got {k}"
        )));
    }
    Ok(())
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("not a rational number: {s:?}")))
}

/// `"1,0,-1/2"` → `[1, 0, −1/2]`; an empty string is the zero list.
pub fn parse_coeffs(s: &str) -> Result<Vec<Rational>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

/// `default_k` is used when `--k` is absent; without one, `--k` is required.
pub fn curve_from_args(args: &CurveArgs, default_k: Option<u32>) -> Result<CurveModel, CliError> {
    let k = args
        .k
        .or(default_k)
        .ok_or_else(|| CliError::Config("missing --k".into()))?;
    check_k(k)?;
    if let Some(a0) = &args.a0 {
        let a0 = parse_rational(a0)?;
        return Ok(match args.parity {
            Parity::Even => CurveModel::even_a0(k, a0),
            Parity::Odd => CurveModel::odd_a0(k, a0),
        });
    }
    let q = parse_coeffs(args.q.as_deref().unwrap_or(""))?;
    let p = parse_coeffs(args.p.as_deref().unwrap_or(""))?;
    let c = match &args.c {
        Some(c) => parse_rational(c)?,
        None => Rational::zero(),
    };
    if q.len() > 3 {
        return Err(CliError::Config(format!(
            "Q takes at most 3 coefficients, got {}",
            q.len()
        )));
    }
    let pb = args.parity.p_degree_bound() + 1;
    if p.len() > pb {
        return Err(CliError::Config(format!(
            "P takes at most {pb} coefficients for the {} family, got {}",
            args.parity,
            p.len()
        )));
    }
    if args.parity == Parity::Even && !c.is_zero() {
        return Err(CliError::Config(
            "--c only applies to the odd family".into(),
        ));
    }
    CurveModel::new(
        args.parity,
        k,
        UniPoly::from_coeffs(q),
        UniPoly::from_coeffs(p),
        c,
    )
    .map_err(|e| CliError::Config(e.to_string()))
}

/// Reads an input artifact and returns it with its SHA-256.
pub fn read_input(path: &Path) -> Result<(String, String), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let digest = hex(&Sha256::digest(text.as_bytes()));
    Ok((text, digest))
}

pub fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Malformed {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// `"-5..5"` → `(-5, 5)`, both ends inclusive.
pub fn parse_range(s: &str) -> Result<(i32, i32), CliError> {
    let bad = || CliError::Config(format!("range must look like FROM..TO, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (i32, i32) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a > b {
        return Err(CliError::Config(format!("empty range {a}..{b}")));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_lists() {
        assert_eq!(parse_coeffs("").unwrap(), vec![]);
        assert_eq!(
            parse_coeffs("1, 0,-1/2").unwrap(),
            vec![Rational::one(), Rational::zero(), Rational::new(-1, 2)]
        );
        assert!(parse_coeffs("1,x").is_err());
        assert!(parse_coeffs("1/0").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-5..5").unwrap(), (-5, 5));
        assert_eq!(parse_range("3..3").unwrap(), (3, 3));
        assert!(parse_range("5..-5").is_err());
        assert!(parse_range("1-2").is_err());
    }

    #[test]
    fn digest_ignores_nothing_that_matters() {
        let a = JobConfig::new("x").with_sampling(42, 5);
        let b = JobConfig::new("x").with_sampling(43, 5);
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest(), a.clone().digest());
        assert_eq!(a.digest().len(), 64);
    }
}
