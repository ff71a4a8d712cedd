//! Run configuration, output plumbing and exit codes.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything needed to rerun a command. Serialized into every output.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub tool_version: &'static str,
    pub command: String,
    /// Arguments after the program name, verbatim.
    pub argv: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub budgets: BTreeMap<&'static str, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<&'static str, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<&'static str, String>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &str, format: Format) -> Self {
        RunConfig {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            argv: std::env::args().skip(1).collect(),
            format,
            ..RunConfig::default()
        }
    }

    pub fn input(&mut self, key: &'static str, path: &Path) {
        self.inputs.insert(key, path.display().to_string());
    }

    pub fn output(&mut self, key: &'static str, path: Option<&PathBuf>) {
        if let Some(p) = path {
            self.outputs.insert(key, p.display().to_string());
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("run config serializes")
    }

    /// `# run={...}` header line for CSV and text outputs.
    pub fn comment(&self, prefix: &str) -> String {
        format!("{prefix} run={}\n", serde_json::to_string(self).expect("run config serializes"))
    }
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    Core(cqrac::Error),
    /// The command ran but its self-check failed.
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cqrac::Error as E;
        match self {
            CliError::Core(E::Io(_)) => EXIT_IO,
            CliError::Core(E::Resource(_)) => EXIT_RESOURCE,
            CliError::Core(E::Unresolved(_)) | CliError::Verify(_) => EXIT_VERIFY,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Verify(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

impl From<cqrac::Error> for CliError {
    fn from(e: cqrac::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(cqrac::Error::Io(e))
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Core(cqrac::Error::Usage(msg.into()))
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Core(cqrac::Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        )))
    })
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&PathBuf>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Pretty JSON with the run configuration under `"run"`.
pub fn json_with_run(run: &RunConfig, body: impl Serialize) -> CliResult<String> {
    let mut value = serde_json::to_value(body).map_err(cqrac::Error::from)?;
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("run".into(), run.to_value());
    }
    let mut text = serde_json::to_string_pretty(&value).map_err(cqrac::Error::from)?;
    text.push('\n');
    Ok(text)
}
