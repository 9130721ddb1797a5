//! JSON state files.
//!
//! Three shapes are accepted, told apart by their payload key:
//!
//! ```json
//! {"n": 2, "d": 2, "entries": [[0.5, 0.0], ...]}          // dense, row-major
//! {"n": 2, "d": 2, "elements": [{"row": [0, 0], "col": [1, 1], "re": 0.5, "im": 0.0}]}
//! {"n": 2, "d": 2, "amplitudes": [[0.707, 0.0], ...]}     // pure state
//! ```
//!
//! Sparse files list each Hermitian pair once; the conjugate is implied.

use std::fs;
use std::path::Path;

use gmedim_core::tensor::{
    basis_label, BasisLabel, DensityMatrix, ElementProvider, PureState, SparseElements,
    SystemShape, TRACE_TOL,
};
use gmedim_core::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unrecognised state file: {0}")]
    Schema(String),
    #[error(transparent)]
    State(#[from] gmedim_core::Error),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: strip_location(&e.to_string()),
        }
    }
}

fn strip_location(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DenseFile {
    n: usize,
    d: usize,
    entries: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SparseFile {
    n: usize,
    d: usize,
    elements: Vec<ElementRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementRecord {
    row: Vec<usize>,
    col: Vec<usize>,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PureFile {
    n: usize,
    d: usize,
    amplitudes: Vec<[f64; 2]>,
}

/// A state read from disk.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Dense(DensityMatrix),
    Sparse(SparseElements),
    Pure(PureState),
}

impl StateFile {
    pub fn shape(&self) -> SystemShape {
        match self {
            StateFile::Dense(r) => r.shape(),
            StateFile::Sparse(s) => s.shape(),
            StateFile::Pure(p) => p.shape(),
        }
    }
}

fn complex(v: &[f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Parses any of the three state file shapes.
pub fn parse_state(text: &str) -> Result<StateFile, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| IoError::Schema("top level must be an object".into()))?;
    let kinds: Vec<&str> = ["entries", "elements", "amplitudes"]
        .into_iter()
        .filter(|k| obj.contains_key(*k))
        .collect();
    // re-parse from text so errors keep their location
    match kinds.as_slice() {
        ["entries"] => parse_dense(text).map(StateFile::Dense),
        ["elements"] => parse_sparse(text).map(StateFile::Sparse),
        ["amplitudes"] => parse_pure(text).map(StateFile::Pure),
        [] => Err(IoError::Schema(
            "expected one of \"entries\", \"elements\" or \"amplitudes\"".into(),
        )),
        _ => Err(IoError::Schema(format!("conflicting keys {kinds:?}"))),
    }
}

pub fn parse_dense(text: &str) -> Result<DensityMatrix, IoError> {
    let file: DenseFile = serde_json::from_str(text)?;
    let shape = SystemShape::new(file.n, file.d)?;
    Ok(DensityMatrix::new(shape, file.entries.iter().map(complex).collect())?)
}

/// Parses a sparse file and checks that the trace is one.
pub fn parse_sparse(text: &str) -> Result<SparseElements, IoError> {
    let file: SparseFile = serde_json::from_str(text)?;
    let shape = SystemShape::new(file.n, file.d)?;
    let mut out = SparseElements::new(shape);
    for e in &file.elements {
        out.insert(&BasisLabel(e.row.clone()), &BasisLabel(e.col.clone()), Complex64::new(e.re, e.im))?;
    }
    let trace = out.trace();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(gmedim_core::Error::InvalidState(format!("trace {trace} differs from 1")).into());
    }
    Ok(out)
}

pub fn parse_pure(text: &str) -> Result<PureState, IoError> {
    let file: PureFile = serde_json::from_str(text)?;
    let shape = SystemShape::new(file.n, file.d)?;
    Ok(PureState::new(shape, file.amplitudes.iter().map(complex).collect())?)
}

pub fn dense_to_json(rho: &DensityMatrix) -> String {
    let shape = rho.shape();
    let file = DenseFile {
        n: shape.n(),
        d: shape.d(),
        entries: rho.entries().iter().map(pair).collect(),
    };
    serde_json::to_string(&file).expect("plain data serializes")
}

/// Writes the upper triangle; the reader restores the lower half.
pub fn sparse_to_json(rho: &SparseElements) -> String {
    let shape = rho.shape();
    let label = |i| basis_label(i, &shape).expect("stored index in range").0;
    let file = SparseFile {
        n: shape.n(),
        d: shape.d(),
        elements: rho
            .iter()
            .filter(|&(r, c, _)| r <= c)
            .map(|(r, c, v)| ElementRecord {
                row: label(r),
                col: label(c),
                re: v.re,
                im: v.im,
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("plain data serializes")
}

pub fn pure_to_json(psi: &PureState) -> String {
    let shape = psi.shape();
    let file = PureFile {
        n: shape.n(),
        d: shape.d(),
        amplitudes: psi.amplitudes().iter().map(pair).collect(),
    };
    serde_json::to_string(&file).expect("plain data serializes")
}

pub fn state_to_json(state: &StateFile) -> String {
    match state {
        StateFile::Dense(r) => dense_to_json(r),
        StateFile::Sparse(s) => sparse_to_json(s),
        StateFile::Pure(p) => pure_to_json(p),
    }
}

pub fn read_state(path: &Path) -> Result<StateFile, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_state(&text)
}
