//! Experiment harness for the `kfactor` library: generators, solver,
//! absorber and structure analysis behind one command line, with
//! reproducible certificates and CSV run records.

pub mod cli;
mod commands;
pub mod error;
pub mod record;
pub mod report;

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

pub use cli::Cli;
pub use error::LabError;
use record::RunRecord;

/// What a command produced. Files are written only after the command has
/// finished without error, so a failed run leaves nothing behind.
#[derive(Debug, Default)]
pub struct RunOutput {
    /// Text for stdout.
    pub text: String,
    pub files: Vec<(PathBuf, Vec<u8>)>,
    pub records: Vec<RunRecord>,
}

impl RunOutput {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn file(&mut self, path: PathBuf, contents: impl Into<Vec<u8>>) {
        self.files.push((path, contents.into()));
    }
}

/// Runs one command, writes its files and appends its records to
/// `--record` if given.
pub fn execute(cli: &Cli) -> Result<RunOutput, LabError> {
    let started = Instant::now();
    let mut out = commands::dispatch(&cli.command)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    for r in out.records.iter_mut().filter(|r| r.trial.is_none()) {
        r.wall_ms = wall_ms;
    }
    for (path, contents) in &out.files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        }
        fs::write(path, contents).map_err(|e| LabError::io(path, e))?;
    }
    if let Some(path) = &cli.record {
        if !out.records.is_empty() {
            record::append_records(path, &out.records)?;
        }
    }
    Ok(out)
}
