use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use chrono::{NaiveDate, Weekday};

use crate::corpus::{Corpus, DetectionKind, ImageRecord, NamedTimeTable};

/// Default match radius for `lat,lon` terms of `--location`.
pub const DEFAULT_COORDINATE_RADIUS_KM: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct EngineSettings {
    pub time_table: NamedTimeTable,
    pub coordinate_radius_km: f64,
}

impl Default for EngineSettings {
    fn default() -> Self {
        EngineSettings {
            time_table: NamedTimeTable::default(),
            coordinate_radius_km: DEFAULT_COORDINATE_RADIUS_KM,
        }
    }
}

/// One record's entry in a term's postings list: the best score among the
/// record's detections of that term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posting {
    pub ordinal: u32,
    pub score: f64,
}

/// Read-only indexes over one corpus. Record ordinals are positions in the
/// timestamp-sorted corpus, so ordinal order is chronological order.
#[derive(Debug)]
pub struct IndexSet {
    corpus: Arc<Corpus>,
    settings: EngineSettings,
    term_index: BTreeMap<(DetectionKind, String), Vec<Posting>>,
    day_index: BTreeMap<NaiveDate, Vec<u32>>,
    weekday_index: HashMap<Weekday, BTreeSet<NaiveDate>>,
    location_index: BTreeMap<String, Vec<u32>>,
    location_display: BTreeMap<String, String>,
    timename_index: BTreeMap<String, Vec<u32>>,
    geo_list: Vec<u32>,
    cluster_index: BTreeMap<u32, Vec<u32>>,
    id_index: HashMap<String, u32>,
}

impl IndexSet {
    pub fn build(corpus: Arc<Corpus>, settings: EngineSettings) -> IndexSet {
        let mut term_index: BTreeMap<(DetectionKind, String), Vec<Posting>> = BTreeMap::new();
        let mut day_index: BTreeMap<NaiveDate, Vec<u32>> = BTreeMap::new();
        let mut weekday_index: HashMap<Weekday, BTreeSet<NaiveDate>> = HashMap::new();
        let mut location_index: BTreeMap<String, Vec<u32>> = BTreeMap::new();
        let mut location_display = BTreeMap::new();
        let mut timename_index: BTreeMap<String, Vec<u32>> = settings
            .time_table
            .iter()
            .map(|(name, _)| (name.to_owned(), Vec::new()))
            .collect();
        let mut geo_list = Vec::new();
        let mut cluster_index: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        let mut id_index = HashMap::with_capacity(corpus.len());

        for (i, rec) in corpus.records().iter().enumerate() {
            let ord = i as u32;
            id_index.insert(rec.id.clone(), ord);

            for det in &rec.detections {
                let postings = term_index.entry((det.kind, det.term.clone())).or_default();
                match postings.last_mut() {
                    Some(last) if last.ordinal == ord => last.score = last.score.max(det.score),
                    _ => postings.push(Posting {
                        ordinal: ord,
                        score: det.score,
                    }),
                }
            }

            let date = rec.local_date();
            day_index.entry(date).or_default().push(ord);
            weekday_index.entry(rec.weekday()).or_default().insert(date);

            if let Some(loc) = &rec.named_location {
                let key = loc.to_lowercase();
                location_display.entry(key.clone()).or_insert_with(|| loc.clone());
                location_index.entry(key).or_default().push(ord);
            }

            let t = rec.local_time();
            for (name, window) in settings.time_table.iter() {
                if window.contains(t) {
                    timename_index
                        .get_mut(name)
                        .expect("every table name is indexed")
                        .push(ord);
                }
            }

            if rec.geo.is_some() {
                geo_list.push(ord);
            }
            cluster_index.entry(rec.cluster_id).or_default().push(ord);
        }

        IndexSet {
            corpus,
            settings,
            term_index,
            day_index,
            weekday_index,
            location_index,
            location_display,
            timename_index,
            geo_list,
            cluster_index,
            id_index,
        }
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn corpus_arc(&self) -> Arc<Corpus> {
        Arc::clone(&self.corpus)
    }

    pub fn settings(&self) -> &EngineSettings {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.corpus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corpus.is_empty()
    }

    pub fn record(&self, ordinal: u32) -> &ImageRecord {
        &self.corpus.records()[ordinal as usize]
    }

    pub fn ordinal_of(&self, id: &str) -> Option<u32> {
        self.id_index.get(id).copied()
    }

    pub fn record_by_id(&self, id: &str) -> Option<&ImageRecord> {
        self.ordinal_of(id).map(|o| self.record(o))
    }

    pub fn postings(&self, kind: DetectionKind, term: &str) -> &[Posting] {
        self.term_index
            .get(&(kind, term.to_owned()))
            .map_or(&[], Vec::as_slice)
    }

    /// Every indexed `(kind, term)` with its postings, in key order.
    pub fn vocabulary(&self) -> impl Iterator<Item = (DetectionKind, &str, &[Posting])> {
        self.term_index
            .iter()
            .map(|((k, t), p)| (*k, t.as_str(), p.as_slice()))
    }

    pub fn day(&self, date: NaiveDate) -> &[u32] {
        self.day_index.get(&date).map_or(&[], Vec::as_slice)
    }

    pub fn days(&self) -> impl Iterator<Item = (NaiveDate, &[u32])> {
        self.day_index.iter().map(|(d, o)| (*d, o.as_slice()))
    }

    pub fn dates_on(&self, weekday: Weekday) -> impl Iterator<Item = NaiveDate> + '_ {
        self.weekday_index
            .get(&weekday)
            .into_iter()
            .flat_map(|s| s.iter().copied())
    }

    /// Ordinals at a named location (lowercase key).
    pub fn at_location(&self, name: &str) -> &[u32] {
        self.location_index.get(name).map_or(&[], Vec::as_slice)
    }

    /// `(lowercase key, display name, ordinals)` for every named location.
    pub fn locations(&self) -> impl Iterator<Item = (&str, &str, &[u32])> {
        self.location_index.iter().map(|(k, o)| {
            (
                k.as_str(),
                self.location_display[k].as_str(),
                o.as_slice(),
            )
        })
    }

    pub fn in_timename(&self, name: &str) -> Option<&[u32]> {
        self.timename_index.get(name).map(Vec::as_slice)
    }

    pub fn geo_list(&self) -> &[u32] {
        &self.geo_list
    }

    pub fn cluster(&self, cluster_id: u32) -> &[u32] {
        self.cluster_index.get(&cluster_id).map_or(&[], Vec::as_slice)
    }
}
