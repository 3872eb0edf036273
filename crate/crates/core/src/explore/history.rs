use std::collections::{BTreeSet, VecDeque};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::dsl::{canonicalize, FilterQuery};
use crate::engine::TemporalQuery;

pub const DEFAULT_HISTORY_CAPACITY: usize = 200;

/// Query text of a history entry: one canonical filter query, or the
/// canonical stages of a temporal query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HistoryQuery {
    Filter(String),
    Temporal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub id: String,
    pub query: HistoryQuery,
    pub issued_at: DateTime<Utc>,
    pub first_viewed: Option<String>,
    pub last_viewed: Option<String>,
    pub longest_viewed: Option<String>,
    #[serde(default)]
    pub longest_view_ms: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HistoryError {
    #[error("unknown history entry '{0}'")]
    UnknownEntry(String),
    #[error("invalid history document: {0}")]
    InvalidDocument(String),
}

/// Bounded query history, most recent first. Recording a query that is
/// already present moves it to the front instead of adding a duplicate.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryStore {
    capacity: usize,
    entries: VecDeque<HistoryEntry>,
}

impl Default for HistoryStore {
    fn default() -> Self {
        HistoryStore::new(DEFAULT_HISTORY_CAPACITY)
    }
}

impl HistoryStore {
    pub fn new(capacity: usize) -> Self {
        HistoryStore {
            capacity: capacity.max(1),
            entries: VecDeque::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &HistoryEntry> {
        self.entries.iter()
    }

    pub fn get(&self, id: &str) -> Option<&HistoryEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Records a query under `id` (normally its canonical hash).
    pub fn record(&mut self, id: &str, query: HistoryQuery, issued_at: DateTime<Utc>) -> &HistoryEntry {
        let entry = match self.entries.iter().position(|e| e.id == id) {
            Some(pos) => {
                let mut e = self.entries.remove(pos).expect("position is in range");
                e.issued_at = issued_at;
                e
            }
            None => HistoryEntry {
                id: id.to_owned(),
                query,
                issued_at,
                first_viewed: None,
                last_viewed: None,
                longest_viewed: None,
                longest_view_ms: 0,
            },
        };
        self.entries.push_front(entry);
        self.entries.truncate(self.capacity);
        &self.entries[0]
    }

    pub fn record_filter(&mut self, q: &FilterQuery, issued_at: DateTime<Utc>) -> &HistoryEntry {
        let c = canonicalize(q);
        self.record(&c.hash, HistoryQuery::Filter(c.text), issued_at)
    }

    pub fn record_temporal(&mut self, tq: &TemporalQuery, issued_at: DateTime<Utc>) -> &HistoryEntry {
        let (stages, hash) = tq.canonical();
        self.record(&hash, HistoryQuery::Temporal(stages), issued_at)
    }

    /// Notes that `image` was looked at for `view_ms` milliseconds while
    /// browsing the results of entry `id`.
    pub fn view_event(&mut self, id: &str, image: &str, view_ms: u64) -> Result<&HistoryEntry, HistoryError> {
        let e = self
            .entries
            .iter_mut()
            .find(|e| e.id == id)
            .ok_or_else(|| HistoryError::UnknownEntry(id.to_owned()))?;
        if e.first_viewed.is_none() {
            e.first_viewed = Some(image.to_owned());
        }
        e.last_viewed = Some(image.to_owned());
        if view_ms > e.longest_view_ms {
            e.longest_view_ms = view_ms;
            e.longest_viewed = Some(image.to_owned());
        }
        Ok(e)
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn export_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("history entries serialize")
    }

    /// Replaces the contents with an exported document. Entries beyond the
    /// capacity are dropped from the old end.
    pub fn import_json(&mut self, text: &str) -> Result<usize, HistoryError> {
        let entries: Vec<HistoryEntry> =
            serde_json::from_str(text).map_err(|e| HistoryError::InvalidDocument(e.to_string()))?;
        self.import(entries)
    }

    pub fn import(&mut self, entries: Vec<HistoryEntry>) -> Result<usize, HistoryError> {
        let mut ids = BTreeSet::new();
        for e in &entries {
            if e.id.is_empty() {
                return Err(HistoryError::InvalidDocument("entry with empty id".into()));
            }
            if !ids.insert(e.id.as_str()) {
                return Err(HistoryError::InvalidDocument(format!("duplicate id '{}'", e.id)));
            }
        }
        self.entries = entries.into_iter().take(self.capacity).collect();
        Ok(self.entries.len())
    }
}
