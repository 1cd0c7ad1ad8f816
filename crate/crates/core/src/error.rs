use thiserror::Error;

use crate::geometry::{Interval, Role};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lower}, {upper})")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid region set: {0}")]
    InvalidRegions(String),

    #[error("interval {interval} with region id {id} is not in the tree")]
    NotInTree { interval: Interval, id: u32 },

    #[error("{role} region {id} does not exist")]
    UnknownRegion { role: Role, id: u32 },

    #[error("invalid workload: {0}")]
    InvalidWorkload(String),

    #[error("invalid matcher configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
