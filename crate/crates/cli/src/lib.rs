//! Command-line front end: JSON presentations in, deterministic JSON reports
//! out.
//!
//! Exit codes: 0 when a verdict was computed (negative verdicts included),
//! 1 for malformed input, failed validation or unmet preconditions, 2 when a
//! resource bound, truncation or undecided search stopped the computation.

pub mod commands;
pub mod elements;
pub mod presentation;

use std::ffi::OsString;

use clap::Parser;
use serde_json::{json, Value};

pub use commands::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Presentation(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] twist_core::Error),
}

impl From<twist_core::Violation> for CliError {
    fn from(v: twist_core::Violation) -> Self {
        CliError::Core(twist_core::Error::Invalid(v))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use twist_core::Error as E;
        match self {
            CliError::Core(E::ResourceBound(_) | E::Truncation(_) | E::ClassTooLarge(_)) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        use twist_core::Error as E;
        match self {
            CliError::Io(_) => "io",
            CliError::Presentation(_) => "presentation",
            CliError::Usage(_) => "usage",
            CliError::Core(E::Invalid(_)) => "validation",
            CliError::Core(E::InvalidRing(_) | E::Parse(_) | E::DuplicateBasis(_) | E::UnknownBasis(_)) => {
                "presentation"
            }
            CliError::Core(E::ResourceBound(_) | E::ClassTooLarge(_)) => "resource",
            CliError::Core(E::Truncation(_)) => "truncation",
            CliError::Core(_) => "precondition",
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Core(twist_core::Error::Invalid(violation)) = self {
            v["violation"] = json!({ "identity": violation.identity.to_string(), "basis": violation.basis });
        }
        v
    }
}

/// What one invocation printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A computed result: the report body and whether the verdict was left
/// undecided by a search bound.
pub struct Computed {
    pub result: Value,
    pub undecided: bool,
    /// Printed verbatim instead of a report (canonical presentations).
    pub raw: Option<String>,
}

impl Computed {
    pub fn report(result: Value) -> Self {
        Computed { result, undecided: false, raw: None }
    }
}

/// Pretty JSON with a trailing newline. Arrays of scalars and objects of at
/// most three scalar fields stay on one line; keys keep insertion order.
pub fn to_pretty(v: &Value) -> String {
    fn scalar(v: &Value) -> bool {
        !matches!(v, Value::Array(_) | Value::Object(_))
    }
    fn write(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent + 1);
        match v {
            Value::Array(items) if items.is_empty() => out.push_str("[]"),
            Value::Array(items) if items.iter().all(scalar) => {
                let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
                out.push('[');
                out.push_str(&parts.join(", "));
                out.push(']');
            }
            Value::Array(items) => {
                out.push_str("[\n");
                for (i, x) in items.iter().enumerate() {
                    out.push_str(&pad);
                    write(x, indent + 1, out);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            Value::Object(map) if map.is_empty() => out.push_str("{}"),
            Value::Object(map) if map.len() <= 3 && map.values().all(scalar) => {
                let parts: Vec<String> =
                    map.iter().map(|(k, x)| format!("{}: {x}", Value::String(k.clone()))).collect();
                out.push_str("{ ");
                out.push_str(&parts.join(", "));
                out.push_str(" }");
            }
            Value::Object(map) => {
                out.push_str("{\n");
                for (i, (k, x)) in map.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&Value::String(k.clone()).to_string());
                    out.push_str(": ");
                    write(x, indent + 1, out);
                    out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
            other => out.push_str(&other.to_string()),
        }
    }
    let mut out = String::new();
    write(v, 0, &mut out);
    out.push('\n');
    out
}

fn envelope(echo: &[String], body: (&str, Value)) -> String {
    let mut v = json!({ "command": echo, "version": env!("CARGO_PKG_VERSION") });
    v[body.0] = body.1;
    to_pretty(&v)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let start = std::time::Instant::now();
    let outcome = cli.execute();
    let elapsed = format!("elapsed: {:.3} ms\n", start.elapsed().as_secs_f64() * 1e3);
    match outcome {
        Ok(c) => {
            let stdout = c.raw.clone().unwrap_or_else(|| envelope(&echo, ("result", c.result)));
            Outcome { code: if c.undecided { 2 } else { 0 }, stdout, stderr: elapsed }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: envelope(&echo, ("error", e.to_json())),
            stderr: format!("error: {e}\n{elapsed}"),
        },
    }
}
