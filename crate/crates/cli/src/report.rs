use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::{CliResult, Failure};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Human,
}

/// Prints `value` as pretty JSON or through `human`, to `out` or stdout.
pub fn emit<T: Serialize>(
    value: &T,
    format: Format,
    out: Option<&Path>,
    human: impl Fn(&T) -> String,
) -> CliResult {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value)
            .map_err(|e| Failure::validation(e.to_string()))?,
        Format::Human => human(value),
    };
    match out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
