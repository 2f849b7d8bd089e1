use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::JobConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Whether a failure changes the exit status.
    pub normative: bool,
    pub detail: String,
}

/// Envelope written after every run. Wall time is the only field that is not
/// a function of the configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: JobConfig,
    pub config_digest: String,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    pub witnesses: Vec<serde_json::Value>,
    pub artifacts: Vec<String>,
    pub summary: Vec<String>,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(config: JobConfig) -> Self {
        RunReport {
            command: config.command.clone(),
            config_digest: config.digest(),
            config,
            status: Status::Pass,
            checks: Vec::new(),
            witnesses: Vec::new(),
            artifacts: Vec::new(),
            summary: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn check(&mut self, name: &str, ok: bool, normative: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        if !ok && normative {
            self.status = Status::Fail;
        }
        self.checks.push(CheckResult {
            name: name.into(),
            status,
            normative,
            detail: detail.into(),
        });
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    pub fn witness(&mut self, w: impl Serialize) {
        self.witnesses
            .push(serde_json::to_value(w).expect("witness serializes"));
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for l in &self.summary {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail if c.normative => "FAIL",
                Status::Fail => "warn",
            };
            out.push_str(&format!("[{tag}] {}: {}\n", c.name, c.detail));
        }
        for a in &self.artifacts {
            out.push_str(&format!("wrote {a}\n"));
        }
        out.push_str(match self.status {
            Status::Pass => "status: pass\n",
            Status::Fail => "status: fail\n",
        });
        out
    }

    pub fn file_name(&self) -> String {
        format!("{}.report.json", self.command.replace(' ', "-"))
    }
}

pub struct Context {
    pub out_dir: PathBuf,
}

impl Context {
    fn resolve(&self, rel: &Path) -> PathBuf {
        self.out_dir.join(rel)
    }

    pub fn write(&self, rel: &Path, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.resolve(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))
    }

    /// Writes an artifact and records it in the report under the name it was given.
    pub fn artifact(
        &self,
        rel: &Path,
        bytes: &[u8],
        report: &mut RunReport,
    ) -> Result<(), CliError> {
        self.write(rel, bytes)?;
        report.artifacts.push(rel.display().to_string());
        Ok(())
    }

    pub fn json_artifact(
        &self,
        rel: &Path,
        value: &impl Serialize,
        report: &mut RunReport,
    ) -> Result<(), CliError> {
        self.artifact(rel, pretty(value).as_bytes(), report)
    }
}

pub fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}
