mod cli;
mod commands;
mod config;
mod report;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use cli::Cli;
use report::{pretty, Context, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: malformed artifact: {message}")]
    Malformed { path: String, message: String },
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let ctx = Context {
        out_dir: cli.out_dir.clone(),
    };
    let start = Instant::now();
    let mut report = match commands::run(&cli.command, &ctx) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    if let Err(e) = ctx.write(Path::new(&report.file_name()), pretty(&report).as_bytes()) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if cli.json {
        print!("{}", pretty(&report));
    } else {
        print!("{}", report.text());
    }
    match report.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(EXIT_CHECK_FAILED),
    }
}
