//! Episode logs: the line-delimited record schema, ingestion with
//! validation, and aggregation into evaluation summaries.
//!
//! Each line is one flat JSON object with exactly the keys in
//! [`FIELDS`]. Writing a parsed canonical log reproduces it byte for byte.

mod exact;
mod record;
mod summary;

pub use exact::ExactSum;
pub use record::{
    encode_log, parse_log, parse_log_str, read_log, write_log, write_log_to, EpisodeRecord, ReadOptions,
    Termination, ENERGY_TOLERANCE, FIELDS,
};
pub use summary::{
    aggregate, aggregate_with, to_run_metrics, training_stats_from_log, Accumulator, AggregateOptions,
    EvaluationSummary, Moments,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LogError {
    #[error("line {line}: malformed record: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: field `{field}`: {reason}")]
    Field { line: usize, field: String, reason: String },
    #[error("line {line}: episode `{episode_id}` is invalid: {reason}")]
    Invalid {
        line: usize,
        episode_id: String,
        reason: String,
    },
    #[error("{0}")]
    Aggregate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
