//! Browsing aids on top of the engine: day summaries, autocompletion and a
//! per-session query history.

mod autocomplete;
mod history;
mod summaries;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use autocomplete::{autocomplete, Completion, Suggestion, MAX_EXAMPLES};
pub use history::{
    HistoryEntry, HistoryError, HistoryQuery, HistoryStore, DEFAULT_HISTORY_CAPACITY,
};
pub use summaries::{
    day_summaries, DaySummary, SummaryError, SummaryPage, SummaryRequest, SummarySort, TermCount,
    DEFAULT_IMAGES_PER_DAY, DEFAULT_TOP_K,
};

use crate::corpus::DetectionKind;
use crate::engine::IndexSet;

/// A browsable dimension of the corpus vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Facet {
    Concept,
    Object,
    Attribute,
    Location,
    Timename,
}

impl Facet {
    pub const ALL: [Facet; 5] = [
        Facet::Concept,
        Facet::Object,
        Facet::Attribute,
        Facet::Location,
        Facet::Timename,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Facet::Concept => "concept",
            Facet::Object => "object",
            Facet::Attribute => "attribute",
            Facet::Location => "location",
            Facet::Timename => "timename",
        }
    }

    pub fn detection_kind(self) -> Option<DetectionKind> {
        match self {
            Facet::Concept => Some(DetectionKind::Concept),
            Facet::Object => Some(DetectionKind::Object),
            Facet::Attribute => Some(DetectionKind::Attribute),
            Facet::Location | Facet::Timename => None,
        }
    }

    /// Sorted ordinals of the records carrying `term` (lowercase) in this facet.
    pub fn ordinals(self, idx: &IndexSet, term: &str) -> Vec<u32> {
        match self.detection_kind() {
            Some(kind) => {
                let mut v: Vec<u32> = idx.postings(kind, term).iter().map(|p| p.ordinal).collect();
                v.sort_unstable();
                v
            }
            None if self == Facet::Location => idx.at_location(term).to_vec(),
            None => idx.in_timename(term).map(<[u32]>::to_vec).unwrap_or_default(),
        }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Facet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let singular = lower.strip_suffix('s').unwrap_or(&lower);
        Facet::ALL
            .into_iter()
            .find(|f| f.as_str() == singular || f.as_str() == lower)
            .ok_or_else(|| {
                format!("unknown kind '{s}' (expected concept, object, attribute, location or timename)")
            })
    }
}
