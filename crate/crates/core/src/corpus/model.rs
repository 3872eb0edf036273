use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, FixedOffset, NaiveDate, NaiveTime, Weekday};
use serde::{Deserialize, Serialize};

/// The three families of precomputed visual detections attached to an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectionKind {
    Concept,
    Object,
    Attribute,
}

impl DetectionKind {
    pub const ALL: [DetectionKind; 3] = [
        DetectionKind::Concept,
        DetectionKind::Object,
        DetectionKind::Attribute,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DetectionKind::Concept => "concept",
            DetectionKind::Object => "object",
            DetectionKind::Attribute => "attribute",
        }
    }
}

impl fmt::Display for DetectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "concept" | "concepts" => Ok(DetectionKind::Concept),
            "object" | "objects" => Ok(DetectionKind::Object),
            "attribute" | "attributes" => Ok(DetectionKind::Attribute),
            other => Err(format!("unknown detection kind '{other}'")),
        }
    }
}

/// Normalized bounding box; all components lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub kind: DetectionKind,
    pub term: String,
    pub score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bbox: Option<BoundingBox>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Option<Self> {
        let valid = (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon);
        valid.then_some(GeoPoint { lat, lon })
    }
}

/// One lifelog capture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub id: String,
    pub timestamp: DateTime<FixedOffset>,
    pub geo: Option<GeoPoint>,
    pub named_location: Option<String>,
    pub detections: Vec<Detection>,
    pub feature: Option<Vec<f64>>,
    pub cluster_id: u32,
}

impl ImageRecord {
    /// Calendar date in the record's own UTC offset.
    pub fn local_date(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }

    pub fn local_time(&self) -> NaiveTime {
        self.timestamp.time()
    }

    pub fn weekday(&self) -> Weekday {
        use chrono::Datelike;
        self.local_date().weekday()
    }

    /// Highest score among detections of `kind` with the given term.
    pub fn detection_score(&self, kind: DetectionKind, term: &str) -> Option<f64> {
        self.detections
            .iter()
            .filter(|d| d.kind == kind && d.term == term)
            .map(|d| d.score)
            .reduce(f64::max)
    }
}

/// Immutable, timestamp-sorted collection of records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    records: Vec<ImageRecord>,
    feature_dim: Option<usize>,
}

impl Corpus {
    /// Builds a corpus from records that already satisfy all invariants
    /// (sorted by timestamp then id, unique ids, clusters assigned).
    pub(crate) fn from_sorted(records: Vec<ImageRecord>, feature_dim: Option<usize>) -> Self {
        Corpus {
            records,
            feature_dim,
        }
    }

    pub fn records(&self) -> &[ImageRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn feature_dim(&self) -> Option<usize> {
        self.feature_dim
    }

    pub fn get(&self, ordinal: usize) -> Option<&ImageRecord> {
        self.records.get(ordinal)
    }
}

/// Half-open local-time window `[start, end)`. A window whose end is not
/// after its start wraps past midnight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: NaiveTime,
    pub end: NaiveTime,
}

impl TimeWindow {
    pub fn new(start: NaiveTime, end: NaiveTime) -> Self {
        TimeWindow { start, end }
    }

    pub fn contains(&self, t: NaiveTime) -> bool {
        if self.start < self.end {
            self.start <= t && t < self.end
        } else {
            t >= self.start || t < self.end
        }
    }
}

impl fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{}",
            self.start.format("%H:%M"),
            self.end.format("%H:%M")
        )
    }
}

impl FromStr for TimeWindow {
    type Err = String;

    /// Parses `HH:MM-HH:MM`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| format!("time window '{s}' must look like HH:MM-HH:MM"))?;
        let parse = |part: &str| {
            NaiveTime::parse_from_str(part.trim(), "%H:%M")
                .map_err(|e| format!("bad time '{}' in window '{s}': {e}", part.trim()))
        };
        Ok(TimeWindow::new(parse(a)?, parse(b)?))
    }
}

fn hm(h: u32, m: u32) -> NaiveTime {
    NaiveTime::from_hms_opt(h, m, 0).expect("valid clock time")
}

/// Maps lowercase time names ("morning", "afternoon", ...) to windows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedTimeTable {
    windows: std::collections::BTreeMap<String, TimeWindow>,
}

impl Default for NamedTimeTable {
    fn default() -> Self {
        let mut windows = std::collections::BTreeMap::new();
        windows.insert("morning".to_owned(), TimeWindow::new(hm(5, 0), hm(11, 0)));
        windows.insert("noon".to_owned(), TimeWindow::new(hm(11, 0), hm(13, 0)));
        windows.insert("afternoon".to_owned(), TimeWindow::new(hm(13, 0), hm(17, 0)));
        windows.insert("evening".to_owned(), TimeWindow::new(hm(17, 0), hm(22, 0)));
        windows.insert("night".to_owned(), TimeWindow::new(hm(22, 0), hm(5, 0)));
        NamedTimeTable { windows }
    }
}

impl NamedTimeTable {
    pub fn empty() -> Self {
        NamedTimeTable {
            windows: Default::default(),
        }
    }

    /// Adds or replaces a window. Names are stored lowercase.
    pub fn set(&mut self, name: &str, window: TimeWindow) {
        self.windows.insert(name.trim().to_lowercase(), window);
    }

    pub fn get(&self, name: &str) -> Option<&TimeWindow> {
        self.windows.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &TimeWindow)> {
        self.windows.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }
}

pub fn weekday_name(day: Weekday) -> &'static str {
    match day {
        Weekday::Mon => "monday",
        Weekday::Tue => "tuesday",
        Weekday::Wed => "wednesday",
        Weekday::Thu => "thursday",
        Weekday::Fri => "friday",
        Weekday::Sat => "saturday",
        Weekday::Sun => "sunday",
    }
}
