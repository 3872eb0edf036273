//! In-memory retrieval over personal lifelog image collections.
//!
//! * [`corpus`] ingests JSON-lines metadata into an immutable [`corpus::Corpus`].
//! * [`dsl`] parses the command-line style filter language.
//! * [`engine`] indexes a corpus and evaluates filter, temporal, geo and
//!   similarity queries.
//! * [`explore`] builds day summaries, autocomplete suggestions and the
//!   per-session query history.

pub mod corpus;
pub mod dsl;
pub mod engine;
pub mod explore;
