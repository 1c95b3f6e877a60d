//! Report envelope, rendering, and the exit-code contract.

use serde::Serialize;
use serde_json::{json, Value};

use cotor_core::ENGINE_VERSION;

pub const SCHEMA: &str = "cotor-report/1";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Everything that shapes a run; echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub max_degree: u32,
    pub scheme: String,
    pub page: String,
    pub group: String,
    pub format: Format,
    pub cache_dir: Option<String>,
    pub convention: String,
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
        }
    }
}

pub struct Report {
    pub command: String,
    pub results: Value,
    pub checks: Vec<Check>,
    pub text: String,
    pub csv: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            Format::Json => {
                let v = json!({
                    "schema": SCHEMA,
                    "engine_version": ENGINE_VERSION,
                    "config": config,
                    "command": self.command,
                    "passed": self.passed(),
                    "checks": self.checks,
                    "results": self.results,
                });
                serde_json::to_string_pretty(&v).expect("serializable report") + "\n"
            }
            Format::Csv => self.csv.clone(),
            Format::Text => {
                let mut s = format!(
                    "cotor {ENGINE_VERSION} {} (max degree {}, convention {})\n",
                    self.command, config.max_degree, config.convention
                );
                s.push_str(&self.text);
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                for c in &self.checks {
                    s.push_str(&format!("{}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name));
                }
                s
            }
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// 2 on configuration error, else 1 if any check failed, else 0.
pub fn exit_code(config_error: bool, checks: &[Check]) -> i32 {
    if config_error {
        EXIT_CONFIG
    } else if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
