use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate triangle: points are collinear or coincident")]
    DegenerateTriangle,

    #[error("empty point set")]
    EmptyPointSet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance infeasible: budget m={m} is below the largest coverage requirement {kappa_max}")]
    Infeasible { m: usize, kappa_max: u32 },

    #[error("invalid instance field `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("unknown benchmark family `{0}` (expected uni_sm, uni_lg or uni_fix_n)")]
    UnknownFamily(String),

    #[error("brute-force oracle refused: {combinations} disk multisets exceed the guard of {limit}")]
    OracleTooLarge { combinations: u128, limit: u128 },

    #[error("heuristic did not reach a feasible cover within {0} iterations")]
    IterationCap(usize),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("assignment violates row `{row}`: {reason}")]
    RowViolation { row: String, reason: String },

    #[error("gap undefined: reference objective {reference} exceeds algorithm objective {alg}")]
    InvalidGap { alg: f64, reference: f64 },

    #[error("linear program failed: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
