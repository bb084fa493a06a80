use std::path::PathBuf;

use crate::partitions::Violation;
use crate::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed PGM: {0}")]
    Pgm(String),
    #[error("malformed IDX: {0}")]
    Idx(String),
    #[error("empty class: {0}")]
    EmptyClass(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("invalid class directory name {0:?}: expected a decimal label")]
    BadLabel(String),
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("blank sample")]
    BlankSample,
    #[error("empty sample sequence")]
    EmptySamples,
    #[error("invalid region: {0}")]
    InvalidRect(String),
    #[error("invalid chromosome: {}", join_violations(.0))]
    InvalidChromosome(Vec<Violation>),
    #[error("cannot parse chromosome {0:?}")]
    ChromosomeSyntax(String),
    #[error("region too small for {min_cuts} cuts per axis")]
    RegionTooSmall { min_cuts: usize },
    #[error("region mismatch between parents")]
    RegionMismatch,
    #[error("coordinate {coord} outside cut span [{first}, {last}]")]
    CoordOutOfSpan { coord: usize, first: usize, last: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("allowed class set is empty")]
    EmptyAllowedSet,
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("no samples of class {0}")]
    NoSamplesForClass(Label),
    #[error("empty confusion matrix")]
    EmptyMatrix,
    #[error("no confusion region")]
    NoConfusionRegion,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed groups file line {line}: {msg}")]
    GroupsFile { line: usize, msg: String },
    #[error("malformed model file: {0}")]
    MalformedModel(String),
    #[error("model version mismatch: expected {expected:?}, found {found:?}")]
    VersionMismatch { expected: String, found: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
