//! Indexes and query evaluation over an immutable corpus.

mod evaluate;
mod geo;
mod index;
mod similar;
mod temporal;

pub use evaluate::{Hit, MatchedTerm, ResultPage};
pub use geo::{haversine_km, EARTH_RADIUS_KM};
pub use index::{EngineSettings, IndexSet, Posting, DEFAULT_COORDINATE_RADIUS_KM};
pub use similar::{Neighbor, LINK_NEIGHBORS};
pub use temporal::{SpanPolicy, TemporalMatch, TemporalPage, TemporalQuery};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown record id '{0}'")]
    UnknownId(String),
    #[error("temporal queries need at least 2 stages, got {0}")]
    TooFewStages(usize),
    #[error("more than {0} temporal tuples")]
    TooManyTuples(usize),
    #[error("{0}")]
    InvalidParameter(String),
}
