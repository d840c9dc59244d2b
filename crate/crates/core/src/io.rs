//! State files and sweep CSV.
//!
//! A state file is a JSON object
//! `{"n_qubits": n, "amplitudes": [[re, im], ...]}` with `2^n` pairs in
//! amplitude-index order. Floats are written in shortest round-trip form, so
//! reading a written file gives back identical amplitudes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::PureState;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&PureState> for StateFile {
    fn from(s: &PureState) -> Self {
        Self {
            n_qubits: s.n_qubits(),
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl StateFile {
    /// Validates into a state; a wrong amplitude count is a format error.
    pub fn into_state(self) -> Result<PureState> {
        let amps = self
            .amplitudes
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        PureState::new(self.n_qubits, amps).map_err(|e| match e {
            Error::LengthMismatch { .. } => Error::Format(e.to_string()),
            other => other,
        })
    }
}

pub fn state_to_json(state: &PureState) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from(state))?)
}

pub fn state_from_json(text: &str) -> Result<PureState> {
    serde_json::from_str::<StateFile>(text)?.into_state()
}

pub fn read_state(path: impl AsRef<Path>) -> Result<PureState> {
    let text = fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    state_from_json(&text)
}

pub fn write_state(path: impl AsRef<Path>, state: &PureState) -> Result<()> {
    let text = state_to_json(state)?;
    fs::write(path.as_ref(), text + "\n")
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
}

/// Writes `n_trials,abs_error` rows with a header.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[(usize, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n_trials", "abs_error"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for (n, err) in rows {
        w.write_record([n.to_string(), format!("{err:e}")])
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
