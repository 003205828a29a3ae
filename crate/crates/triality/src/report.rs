//! The JSON report envelope emitted by the command-line tool.
//!
//! Every invocation produces exactly one report: `command` names the
//! subcommand, `ok` states whether it succeeded and all checks passed,
//! `inputs` records the resolved input sources, `result` holds the computed
//! objects, and `checks` lists every invariant verified during the run.
//! Rendering is canonical (pretty JSON plus a trailing newline), so equal
//! reports are byte-identical.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;
use crate::verify::Check;

/// Machine-readable error block of a failed run.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub name: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(err: &Error) -> ErrorInfo {
        ErrorInfo {
            name: err.name().to_string(),
            message: err.to_string(),
        }
    }
}

/// The envelope serialized to the output stream or `--out` file.
#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub result: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn success(
        command: &str,
        inputs: BTreeMap<String, String>,
        result: Value,
        checks: Vec<Check>,
    ) -> Report {
        Report {
            command: command.to_string(),
            ok: true,
            seed: None,
            inputs,
            error: None,
            result,
            checks,
        }
    }

    pub fn failure(command: &str, inputs: BTreeMap<String, String>, err: &Error) -> Report {
        Report {
            command: command.to_string(),
            ok: false,
            seed: None,
            inputs,
            error: Some(ErrorInfo::from(err)),
            result: Value::Null,
            checks: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }

    /// Canonical rendering: pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
