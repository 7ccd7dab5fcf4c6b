//! Joint-state CSV input for inverse dynamics.
//!
//! The header is mandatory and must read
//! `theta1,...,thetaN,omega1,...,omegaN,alpha1,...,alphaN` for an N-link
//! finger. Angles are absolute, in radians.

use std::fmt::Write as _;

use grip_core::JointState;

use crate::report::sig6;

#[derive(Debug, thiserror::Error)]
pub enum StateFileError {
    #[error("state file: {0}")]
    Csv(#[from] csv::Error),
    #[error("state file header must be `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("state file line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("state file has no data rows")]
    Empty,
}

/// One parsed row, with the original text kept for echoing.
#[derive(Debug, Clone)]
pub struct StateRow {
    pub fields: Vec<String>,
    pub state: JointState,
}

#[derive(Debug, Clone)]
pub struct StateFile {
    pub header: Vec<String>,
    pub rows: Vec<StateRow>,
}

pub fn expected_header(n_links: usize) -> Vec<String> {
    ["theta", "omega", "alpha"]
        .iter()
        .flat_map(|p| (1..=n_links).map(move |i| format!("{p}{i}")))
        .collect()
}

pub fn parse_state_file(text: &str, n_links: usize) -> Result<StateFile, StateFileError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let expected = expected_header(n_links);
    let header: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    if header != expected {
        return Err(StateFileError::Header {
            expected: expected.join(","),
            found: header.join(","),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let row_err = |message: String| StateFileError::Row { line, message };
        if record.len() != expected.len() {
            return Err(row_err(format!("expected {} fields, found {}", expected.len(), record.len())));
        }
        let values = record
            .iter()
            .zip(&expected)
            .map(|(field, name)| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| row_err(format!("{name}: `{field}` is not a finite number")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let state = JointState::new(
            values[..n_links].to_vec(),
            values[n_links..2 * n_links].to_vec(),
            values[2 * n_links..].to_vec(),
        )
        .map_err(|e| row_err(e.to_string()))?;
        rows.push(StateRow {
            fields: record.iter().map(String::from).collect(),
            state,
        });
    }
    if rows.is_empty() {
        return Err(StateFileError::Empty);
    }
    Ok(StateFile { header, rows })
}

/// Input columns echoed verbatim plus `tau1..tauN`.
pub fn torques_csv(file: &StateFile, torques: &[Vec<f64>]) -> String {
    let n = torques.first().map_or(0, Vec::len);
    let mut out = file.header.join(",");
    for i in 1..=n {
        let _ = write!(out, ",tau{i}");
    }
    out.push('\n');
    for (row, tau) in file.rows.iter().zip(torques) {
        out.push_str(&row.fields.join(","));
        for t in tau {
            out.push(',');
            out.push_str(&sig6(*t));
        }
        out.push('\n');
    }
    out
}
