use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::defaults::DEFAULTS_VERSION;
use crate::error::{CliError, CliResult};

/// A file produced by an experiment, written after the run completes.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub path: PathBuf,
    pub contents: String,
}

/// What one parameter point of an experiment produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub outputs: Map<String, Value>,
    pub artifacts: Vec<Artifact>,
    pub pass: Option<bool>,
}

impl Outcome {
    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.outputs.insert(key.to_string(), value.into());
    }

    /// Folds a threshold into the pass flag.
    pub fn require(&mut self, ok: bool) {
        self.pass = Some(self.pass.unwrap_or(true) && ok);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub parameters: Value,
    pub outputs: Map<String, Value>,
    pub artifacts: Vec<String>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepInfo {
    pub key: String,
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: &'static str,
    pub defaults_version: &'static str,
    /// Effective configuration after merging the config file and flags.
    pub parameters: Value,
    pub outputs: Map<String, Value>,
    pub artifacts: Vec<String>,
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepInfo>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, parameters: Value) -> Self {
        Self {
            experiment: experiment.to_string(),
            version: breather_lab::VERSION,
            defaults_version: DEFAULTS_VERSION,
            parameters,
            outputs: Map::new(),
            artifacts: Vec::new(),
            pass: None,
            sweep: None,
            points: Vec::new(),
            wall_time_s: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `#`-prefixed header lines for every CSV artifact.
pub fn csv_metadata(experiment: &str, parameters: &Value) -> Vec<(String, String)> {
    vec![
        ("experiment".into(), experiment.into()),
        ("version".into(), breather_lab::VERSION.into()),
        ("defaults_version".into(), DEFAULTS_VERSION.into()),
        ("config".into(), parameters.to_string()),
    ]
}

pub fn metadata_lines(meta: &[(String, String)]) -> String {
    meta.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
}

/// `dir/name.ext` → `dir/name_{tag}.ext`.
pub fn suffixed(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn emit(report: &ExperimentReport, path: Option<&Path>) -> CliResult<()> {
    let json = report.to_json();
    match path {
        Some(p) => write_file(p, &json),
        None => std::io::stdout()
            .write_all(json.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}
