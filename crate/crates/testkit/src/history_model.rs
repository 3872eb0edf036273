//! Reference model of the query history: entries carry a touch counter, the
//! listing is derived by sorting on it, and eviction drops the least
//! recently touched entry.

use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub enum HistoryEvent {
    Record { id: String, issued_at: i64 },
    View { id: String, image: String, ms: u64 },
    Clear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelEntry {
    pub id: String,
    pub issued_at: i64,
    pub first_viewed: Option<String>,
    pub last_viewed: Option<String>,
    pub longest_viewed: Option<String>,
    pub longest_view_ms: u64,
    touched: u64,
}

#[derive(Debug, Clone, Default)]
pub struct HistoryModel {
    capacity: usize,
    clock: u64,
    entries: Vec<ModelEntry>,
}

impl HistoryModel {
    pub fn new(capacity: usize) -> Self {
        HistoryModel {
            capacity,
            clock: 0,
            entries: Vec::new(),
        }
    }

    /// Applies one event; `false` when a view names an unknown entry.
    pub fn apply(&mut self, ev: &HistoryEvent) -> bool {
        match ev {
            HistoryEvent::Record { id, issued_at } => {
                self.clock += 1;
                if let Some(e) = self.entries.iter_mut().find(|e| &e.id == id) {
                    e.touched = self.clock;
                    e.issued_at = *issued_at;
                } else {
                    self.entries.push(ModelEntry {
                        id: id.clone(),
                        issued_at: *issued_at,
                        first_viewed: None,
                        last_viewed: None,
                        longest_viewed: None,
                        longest_view_ms: 0,
                        touched: self.clock,
                    });
                    if self.entries.len() > self.capacity {
                        let oldest = self
                            .entries
                            .iter()
                            .enumerate()
                            .min_by_key(|(_, e)| e.touched)
                            .map(|(i, _)| i)
                            .expect("non-empty");
                        self.entries.remove(oldest);
                    }
                }
                true
            }
            HistoryEvent::View { id, image, ms } => {
                let Some(e) = self.entries.iter_mut().find(|e| &e.id == id) else {
                    return false;
                };
                e.first_viewed.get_or_insert_with(|| image.clone());
                e.last_viewed = Some(image.clone());
                if *ms > e.longest_view_ms {
                    e.longest_view_ms = *ms;
                    e.longest_viewed = Some(image.clone());
                }
                true
            }
            HistoryEvent::Clear => {
                self.entries.clear();
                true
            }
        }
    }

    /// Entries, most recently touched first.
    pub fn listing(&self) -> Vec<ModelEntry> {
        let mut v = self.entries.clone();
        v.sort_by_key(|e| std::cmp::Reverse(e.touched));
        v
    }
}

/// A random event sequence over a small id pool so that repeats, unknown
/// views and evictions all occur.
pub fn random_events<R: Rng>(rng: &mut R, len: usize) -> Vec<HistoryEvent> {
    let pool = rng.random_range(2..12);
    (0..len)
        .map(|i| match rng.random_range(0..100) {
            0..=49 => HistoryEvent::Record {
                id: format!("q{}", rng.random_range(0..pool)),
                issued_at: i as i64,
            },
            50..=96 => HistoryEvent::View {
                id: format!("q{}", rng.random_range(0..pool)),
                image: format!("img{}", rng.random_range(0..6)),
                ms: rng.random_range(0..50),
            },
            _ => HistoryEvent::Clear,
        })
        .collect()
}
