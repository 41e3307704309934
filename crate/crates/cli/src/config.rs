//! Run configuration shared by the subcommands and `run <config.json>`.

use std::path::{Path, PathBuf};

use achsolve::BackgroundSpec;
use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Environment variable naming the default output directory.
pub const OUT_DIR_VAR: &str = "ACH_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Gjms,
    Verify,
    Indicial,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Gjms => "gjms",
            Command::Verify => "verify",
            Command::Indicial => "indicial",
        }
    }
}

/// `auto` picks exact arithmetic whenever the background data allows it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    #[default]
    Auto,
    Exact,
    Float,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Built-in name, inline JSON, or a path to a JSON spec.
    #[serde(default)]
    pub background: Option<String>,
    #[serde(default)]
    pub order: Option<usize>,
    /// One entry per solve; several entries make a λ sweep.
    #[serde(default)]
    pub lambda: Vec<String>,
    #[serde(default)]
    pub k: Option<usize>,
    /// Test function as a chart component (`1`, `[re, im]`, `{"fourier": …}`, `{"samples": …}`).
    #[serde(default)]
    pub f: Option<Value>,
    /// Solve results consumed by `gjms`, `verify` and the `indicial` probe.
    #[serde(default)]
    pub input: Vec<PathBuf>,
    #[serde(default)]
    pub kmax: Option<i64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub mode: ModeChoice,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub bianchi: bool,
    #[serde(default = "default_true")]
    pub strict: bool,
    /// Residual table written next to a single solve.
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            background: None,
            order: None,
            lambda: Vec::new(),
            k: None,
            f: None,
            input: Vec::new(),
            kmax: None,
            output: None,
            mode: ModeChoice::Auto,
            tol: None,
            bianchi: false,
            strict: true,
            csv: None,
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        serde_json::from_value(value).with_context(|| format!("invalid config {}", path.display()))
    }

    /// SHA-256 of the canonical JSON form (keys sorted, no whitespace).
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_value(self).expect("config serializes").to_string();
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn provenance(&self) -> Value {
        serde_json::json!({
            "tool": "achsolve",
            "version": env!("CARGO_PKG_VERSION"),
            "config_hash": self.hash(),
            "config": self,
        })
    }

    /// `--output`, else `$ACH_OUT_DIR/<command>.json`, else `./<command>.json`.
    pub fn output_path(&self) -> PathBuf {
        if let Some(p) = &self.output {
            return p.clone();
        }
        let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{}.json", self.command.name()))
    }

    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or(1e-8)
    }

    /// Resolves the background argument: an existing file is read as JSON,
    /// anything else is a built-in name or inline JSON.
    pub fn background_spec(&self) -> anyhow::Result<(BackgroundSpec, String)> {
        let Some(text) = &self.background else { bail!("`background` is required for {}", self.command.name()) };
        let path = Path::new(text);
        if !text.trim_start().starts_with('{') && path.is_file() {
            let body = std::fs::read_to_string(path).with_context(|| format!("reading background {text}"))?;
            let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or(text).to_string();
            return Ok((BackgroundSpec::parse(&body)?, label));
        }
        let label = if text.trim_start().starts_with('{') { "inline".to_string() } else { text.clone() };
        Ok((BackgroundSpec::parse(text)?, label))
    }
}

/// Parses a scalar argument: JSON (`-3`, `0.5`, `[1, 2]`) or a `"p/q"` string.
pub fn scalar_json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.trim().to_string()))
}
