// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! File round-trips and run provenance.
//!
//! Every JSON artifact the tool writes is an envelope with two keys:
//! `provenance` (who ran what, with which seeds and tolerances) and `data`
//! (the payload). Readers accept the envelope or the bare payload, so
//! artifacts produced by one stage feed the next without surgery.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{ChannelFile, Superoperator};
use crate::construct::ChannelPair;
use crate::error::{Error, Result};
use crate::rng::RNG_ALGORITHM;
use crate::state::{validate_state, DensityMatrix, StateFile};
use crate::tol::Tolerances;

/// Execution context embedded in every artifact so a run can be replayed:
/// tool version, the command line that produced the file, the derived seed
/// for each labeled random stream, the tolerance profile, input digests,
/// and an optional wall-clock stamp.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunProvenance {
    pub tool_version: String,
    pub command: String,
    pub rng_algorithm: String,
    pub seeds: BTreeMap<String, u64>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub input_hashes: BTreeMap<String, String>,
}

impl RunProvenance {
    /// Start a provenance record for `command`. When `with_timestamp` is
    /// false the stamp is omitted entirely so repeated runs are
    /// byte-identical.
    pub fn new(command: impl Into<String>, tol: &Tolerances, with_timestamp: bool) -> Self {
        RunProvenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            rng_algorithm: RNG_ALGORITHM.to_string(),
            seeds: BTreeMap::new(),
            tolerances: *tol,
            timestamp: with_timestamp.then(timestamp_now),
            input_hashes: BTreeMap::new(),
        }
    }

    /// Record the seed a labeled stream was derived from.
    pub fn record_seed(&mut self, label: impl Into<String>, seed: u64) {
        self.seeds.insert(label.into(), seed);
    }

    /// Record the content digest of an input file.
    pub fn record_input(&mut self, name: impl Into<String>, digest: impl Into<String>) {
        self.input_hashes.insert(name.into(), digest.into());
    }
}

/// Current UTC time in RFC 3339 / ISO 8601 form with second precision.
pub fn timestamp_now() -> String {
    chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    provenance: &'a RunProvenance,
    data: &'a T,
}

/// Serialize `data` inside a provenance envelope, pretty-printed with a
/// trailing newline.
pub fn envelope_json<T: Serialize>(provenance: &RunProvenance, data: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&Envelope { provenance, data })?;
    text.push('\n');
    Ok(text)
}

/// Write a provenance-wrapped artifact to `path`.
pub fn write_envelope<T: Serialize>(
    path: &Path,
    provenance: &RunProvenance,
    data: &T,
) -> Result<()> {
    fs::write(path, envelope_json(provenance, data)?)?;
    Ok(())
}

/// SHA-256 digest of a file's bytes, hex encoded.
pub fn hash_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Parse a JSON file and unwrap the `data` envelope if present.
fn read_payload(path: &Path) -> Result<serde_json::Value> {
    let text = fs::read_to_string(path)?;
    let mut value: serde_json::Value = serde_json::from_str(&text)?;
    if let Some(inner) = value.get_mut("data") {
        return Ok(inner.take());
    }
    Ok(value)
}

fn decode<T: DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    Ok(serde_json::from_value(value)?)
}

/// Read and revalidate a density matrix from a state file.
pub fn read_state(path: &Path, tol: &Tolerances) -> Result<DensityMatrix> {
    let file: StateFile = decode(read_payload(path)?)?;
    validate_state(&file.matrix, &file.dims, tol)
}

/// Read a superoperator (any Choi file, channel or not) from disk.
pub fn read_superoperator(path: &Path) -> Result<Superoperator> {
    let file: ChannelFile = decode(read_payload(path)?)?;
    Superoperator::try_from(file)
}

/// Read a constructed channel pair. Accepts the pair itself or any
/// artifact that nests one under a `pair` key, so `construct` output files
/// feed `verify` and `simulate` directly.
pub fn read_channel_pair(path: &Path) -> Result<ChannelPair> {
    let mut value = read_payload(path)?;
    if let Some(inner) = value.get_mut("pair") {
        value = inner.take();
    }
    decode(value)
}

/// Format a float for CSV output: locale-free scientific notation with
/// twelve significant digits.
pub fn csv_number(x: f64) -> String {
    format!("{:.11e}", x)
}

/// Join cells into one CSV line.
pub fn csv_line<I, S>(cells: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = String::new();
    for (i, cell) in cells.into_iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push_str(cell.as_ref());
    }
    line.push('\n');
    line
}

/// Resolve an output directory from an explicit flag, the
/// `CHANDISC_OUT_DIR` environment variable, or a default, in that order.
pub fn resolve_out_dir(flag: Option<std::path::PathBuf>, default: &str) -> std::path::PathBuf {
    if let Some(dir) = flag {
        return dir;
    }
    if let Ok(dir) = std::env::var("CHANDISC_OUT_DIR") {
        if !dir.is_empty() {
            return std::path::PathBuf::from(dir);
        }
    }
    std::path::PathBuf::from(default)
}

impl Error {
    /// Render the error as the machine-readable JSON line the CLI prints
    /// on stderr.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({ "error": self.code(), "detail": self.to_string() }).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::bell_state;

    fn sample_provenance() -> RunProvenance {
        let mut prov = RunProvenance::new("test run", &Tolerances::default(), false);
        prov.record_seed("sample-random-pure", 7);
        prov.record_input("state", "abc123");
        prov
    }

    #[test]
    fn envelope_is_deterministic_without_a_timestamp() {
        let prov = sample_provenance();
        let a = envelope_json(&prov, &bell_state(2)).unwrap();
        let b = envelope_json(&prov, &bell_state(2)).unwrap();
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
        assert!(!a.contains("timestamp"));
        assert!(a.contains("\"rngAlgorithm\": \"sha256/chacha8\""));
        assert!(a.contains("\"sample-random-pure\": 7"));
    }

    #[test]
    fn timestamped_envelope_carries_an_iso_8601_stamp() {
        let prov = RunProvenance::new("test run", &Tolerances::default(), true);
        let stamp = prov.timestamp.clone().unwrap();
        let bytes = stamp.as_bytes();
        assert_eq!(stamp.len(), 20);
        assert_eq!(bytes[4], b'-');
        assert_eq!(bytes[10], b'T');
        assert_eq!(bytes[19], b'Z');
        assert!(stamp.starts_with("20"));
    }

    #[test]
    fn state_files_round_trip_with_and_without_the_envelope() {
        let dir = tempfile::tempdir().unwrap();
        let tol = Tolerances::default();
        let state = bell_state(3);

        let bare = dir.path().join("bare.json");
        fs::write(&bare, serde_json::to_string(&state).unwrap()).unwrap();
        let back = read_state(&bare, &tol).unwrap();
        assert_eq!(back.dims(), state.dims());

        let wrapped = dir.path().join("wrapped.json");
        write_envelope(&wrapped, &sample_provenance(), &state).unwrap();
        let back = read_state(&wrapped, &tol).unwrap();
        assert_eq!(back.mat(), state.mat());
    }

    #[test]
    fn invalid_state_files_keep_their_typed_error() {
        let dir = tempfile::tempdir().unwrap();
        let tol = Tolerances::default();
        let path = dir.path().join("bad.json");
        let mut file = StateFile::from(bell_state(2));
        file.matrix = file.matrix.scaled(2.0);
        fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        let err = read_state(&path, &tol).unwrap_err();
        assert_eq!(err.code(), "TraceNotOne");
    }

    #[test]
    fn channel_pairs_read_from_construct_output_shape() {
        let dir = tempfile::tempdir().unwrap();
        let tol = Tolerances::default();
        let pair = crate::construct::transpose_channels_closed_form(2, &tol).unwrap();

        let nested = dir.path().join("nested.json");
        let body = serde_json::json!({ "data": { "pair": &pair, "negativity": 0.5 } });
        fs::write(&nested, serde_json::to_string(&body).unwrap()).unwrap();
        let back = read_channel_pair(&nested).unwrap();
        assert_eq!(back.c, pair.c);
        assert_eq!(back.psi0.choi(), pair.psi0.choi());

        let bare = dir.path().join("bare.json");
        fs::write(&bare, serde_json::to_string(&pair).unwrap()).unwrap();
        let back = read_channel_pair(&bare).unwrap();
        assert_eq!(back.phi_ta.choi(), pair.phi_ta.choi());
    }

    #[test]
    fn missing_files_surface_as_io_errors() {
        let err = read_state(Path::new("/nonexistent/state.json"), &Tolerances::default())
            .unwrap_err();
        assert_eq!(err.code(), "Io");
    }

    #[test]
    fn csv_numbers_use_twelve_significant_digits_and_dot_decimal() {
        assert_eq!(csv_number(2.0 / 3.0), "6.66666666667e-1");
        assert_eq!(csv_number(2.0), "2.00000000000e0");
        assert_eq!(csv_number(0.0), "0.00000000000e0");
        assert_eq!(csv_number(-1.25e-9), "-1.25000000000e-9");
    }

    #[test]
    fn csv_lines_join_cells_with_commas() {
        let line = csv_line(["a", "b", "c"]);
        assert_eq!(line, "a,b,c\n");
    }

    #[test]
    fn out_dir_resolution_prefers_the_flag() {
        let flag = Some(std::path::PathBuf::from("/tmp/explicit"));
        assert_eq!(resolve_out_dir(flag, "fallback"), Path::new("/tmp/explicit"));
        // Env var handling is exercised through the CLI tests to avoid
        // mutating process state here.
        assert_eq!(
            resolve_out_dir(None, "fallback"),
            Path::new("fallback"),
        );
    }

    #[test]
    fn error_json_lines_carry_code_and_detail() {
        let err = Error::NotDetected;
        let line = err.to_json_line();
        let value: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(value["error"], "NotDetected");
        assert!(value["detail"].as_str().unwrap().len() > 4);
    }
}
