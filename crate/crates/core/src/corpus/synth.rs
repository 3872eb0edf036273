//! Deterministic synthetic lifelog corpora.
//!
//! A generated day is a sequence of location visits spread over waking
//! hours (07:00 to 23:00 local). Inside a visit images are captured at a
//! ~40 s cadence. Images are grouped into scenes: a scene of length one is
//! an ordinary capture, longer scenes are planted near-duplicate runs that
//! share a detection set and nearly identical feature vectors. The manifest
//! records every planted ground truth so tests can check ingestion,
//! clustering and aggregation against it.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use chrono::{Datelike, Duration, FixedOffset, NaiveDate, NaiveTime, TimeZone, Weekday};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::ingest::{MetadataDetection, MetadataLine};
use super::model::{weekday_name, BoundingBox, DetectionKind};
use super::CorpusError;

/// Mean capture interval in seconds.
pub const CAPTURE_INTERVAL_SECS: i64 = 40;
const WAKE_START_SECS: i64 = 7 * 3600;
const WAKE_SECS: i64 = 16 * 3600;
/// Upper bound on cosine similarity between unrelated consecutive images.
const UNRELATED_MAX_COSINE: f64 = 0.8;
const DUPLICATE_NOISE: f64 = 0.02;

pub const STORY_AIRPORT: &str = "airport_terminal";
pub const STORY_TAXI: &str = "car_interior";
pub const STORY_MEETING: &str = "conference_room";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub concepts: Vec<String>,
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
}

fn owned(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| (*w).to_owned()).collect()
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary {
            concepts: owned(&[
                "kitchen/indoor",
                "office/indoor",
                "bar/indoor",
                "library/indoor",
                "gym/indoor",
                "hotel/outdoor",
                "street",
                "parking_lot",
                "staircase",
                "airplane_cabin",
                "living_room",
                "restaurant",
                "coffee_shop",
                "supermarket",
                "bedroom",
                "bus_interior",
                "park",
                "corridor",
                "shopfront",
                "television_room",
            ]),
            objects: owned(&[
                "person", "car", "bottle", "cup", "laptop", "chair", "dining_table", "tv",
                "cell_phone", "book", "apple", "banana", "keyboard", "bicycle", "handbag",
            ]),
            attributes: owned(&[
                "wet",
                "dry",
                "man-made",
                "natural_light",
                "enclosed_area",
                "no_horizon",
                "open_area",
                "cloth",
                "glossy",
                "reading",
            ]),
        }
    }
}

impl Vocabulary {
    fn terms(&self, kind: DetectionKind) -> &[String] {
        match kind {
            DetectionKind::Concept => &self.concepts,
            DetectionKind::Object => &self.objects,
            DetectionKind::Attribute => &self.attributes,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub seed: u64,
    pub days: u32,
    pub images_per_day: u32,
    pub vocab: Vocabulary,
    pub start_date: NaiveDate,
    pub utc_offset_secs: i32,
    pub feature_dim: usize,
    /// Plant the airport → taxi → meeting story on the first Monday.
    pub story: bool,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            seed: 1,
            days: 1,
            images_per_day: 100,
            vocab: Vocabulary::default(),
            start_date: NaiveDate::from_ymd_opt(2016, 8, 15).expect("valid date"),
            utc_offset_secs: 3600,
            feature_dim: 16,
            story: false,
        }
    }
}

impl SynthParams {
    /// The bundled demo preset: three weeks starting on a Tuesday so that the
    /// story Monday is 2016-09-05.
    pub fn demo() -> Self {
        SynthParams {
            seed: 2021,
            days: 21,
            images_per_day: 120,
            start_date: NaiveDate::from_ymd_opt(2016, 8, 30).expect("valid date"),
            feature_dim: 8,
            story: true,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub days: u32,
    pub images_per_day: u32,
    pub start_date: NaiveDate,
    pub utc_offset_secs: i32,
    pub feature_dim: usize,
    pub total_records: usize,
    pub records_with_geo: usize,
    pub records_with_feature: usize,
    /// Number of dates falling on each weekday.
    pub weekday_counts: BTreeMap<String, u32>,
    pub dates: Vec<DayManifest>,
    pub cluster_runs: Vec<ClusterRun>,
    pub location_visits: Vec<LocationVisit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub story: Option<StoryManifest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayManifest {
    pub date: NaiveDate,
    pub weekday: String,
    pub image_count: usize,
    /// kind → term → number of images carrying a detection of that term.
    pub term_counts: BTreeMap<DetectionKind, BTreeMap<String, usize>>,
    /// named location → number of images.
    pub location_counts: BTreeMap<String, usize>,
}

/// A planted group of consecutive images expected to form one cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRun {
    pub first_id: String,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationVisit {
    pub date: NaiveDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    pub lat: f64,
    pub lon: f64,
    pub first_id: String,
    pub image_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryManifest {
    pub date: NaiveDate,
    pub target_id: String,
    pub airport_ids: Vec<String>,
    pub taxi_ids: Vec<String>,
    pub meeting_ids: Vec<String>,
    /// Airport images outside the story: a morning on another weekday and an
    /// evening on the story day.
    pub distractor_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub lines: Vec<MetadataLine>,
    pub manifest: Manifest,
}

impl SyntheticCorpus {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&serde_json::to_string(line).expect("metadata line serializes"));
            out.push('\n');
        }
        out
    }

    pub fn manifest_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, data: &Path, manifest: &Path) -> std::io::Result<()> {
        fs::write(data, self.to_jsonl())?;
        fs::write(manifest, self.manifest_json())
    }
}

struct Place {
    name: Option<&'static str>,
    lat: f64,
    lon: f64,
}

const fn place(name: &'static str, lat: f64, lon: f64) -> Place {
    Place {
        name: Some(name),
        lat,
        lon,
    }
}

const HOME: Place = place("Home", 53.3869, -6.2585);
const ERRANDS: [Place; 8] = [
    place("Work", 53.3851, -6.2566),
    place("The Helix", 53.3862, -6.2582),
    place("Cafe Nero", 53.3498, -6.2603),
    place("Supermarket", 53.3711, -6.2702),
    place("Gym", 53.3790, -6.2491),
    place("Restaurant", 53.3441, -6.2672),
    Place {
        name: None,
        lat: 53.3640,
        lon: -6.2810,
    },
    Place {
        name: None,
        lat: 53.4010,
        lon: -6.2300,
    },
];
const STORY_PLACES: [Place; 4] = [
    place("Tromso Airport", 69.6833, 18.9189),
    Place {
        name: None,
        lat: 69.6700,
        lon: 18.9300,
    },
    place("University of Tromso", 69.6812, 18.9770),
    place("Hotel Tromso", 69.6490, 18.9560),
];

struct Visit<'a> {
    place: &'a Place,
    story_role: Option<StoryRole>,
}

#[derive(Clone, Copy, PartialEq)]
enum StoryRole {
    Airport,
    Taxi,
    Meeting,
    AirportDistractor,
}

type Scene = Vec<(DetectionKind, String, f64, Option<BoundingBox>)>;

pub fn generate_synthetic(params: &SynthParams) -> Result<SyntheticCorpus, CorpusError> {
    validate(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let offset = FixedOffset::east_opt(params.utc_offset_secs)
        .ok_or_else(|| CorpusError::InvalidParameter("utc offset out of range".into()))?;

    let dates: Vec<NaiveDate> = (0..params.days)
        .map(|d| params.start_date + Duration::days(i64::from(d)))
        .collect();
    let story_date = if params.story {
        let d = dates
            .iter()
            .copied()
            .find(|d| d.weekday() == Weekday::Mon)
            .ok_or_else(|| {
                CorpusError::InvalidParameter("story requires a Monday in the date range".into())
            })?;
        if !dates.contains(&(d + Duration::days(1))) {
            return Err(CorpusError::InvalidParameter(
                "story requires the day after the first Monday in range".into(),
            ));
        }
        Some(d)
    } else {
        None
    };

    let mut lines: Vec<MetadataLine> = Vec::new();
    let mut cluster_runs = Vec::new();
    let mut location_visits = Vec::new();
    let mut story = story_date.map(|date| StoryManifest {
        date,
        target_id: String::new(),
        airport_ids: vec![],
        taxi_ids: vec![],
        meeting_ids: vec![],
        distractor_ids: vec![],
    });

    for &date in &dates {
        let is_story_day = Some(date) == story_date;
        let is_distractor_day = story_date.map(|d| d + Duration::days(1)) == Some(date);
        let visits = plan_itinerary(&mut rng, params.images_per_day, is_story_day, is_distractor_day);
        let n_visits = visits.len() as i64;
        let slot = WAKE_SECS / n_visits;
        let mut prev_feature: Option<Vec<f64>> = None;

        for (vi, visit) in visits.iter().enumerate() {
            let n = (params.images_per_day as usize / visits.len())
                + usize::from(vi < params.images_per_day as usize % visits.len());
            if n == 0 {
                continue;
            }
            let step = (CAPTURE_INTERVAL_SECS).min(slot * 85 / 100 / n as i64).max(1);
            let jitter = step / 8;
            let max_span = n as i64 * (step + jitter);
            let slot_start = WAKE_START_SECS + vi as i64 * slot;
            let mut t = slot_start + rng.random_range(0..=(slot - max_span).max(0));
            let visit_first = lines.len();

            let mut remaining = n;
            while remaining > 0 {
                let run_len = if rng.random_bool(0.25) && remaining >= 2 {
                    rng.random_range(2..=remaining.min(5))
                } else {
                    1
                };
                let base_scene = random_scene(&mut rng, &params.vocab);
                let base = loop {
                    let v = random_unit(&mut rng, params.feature_dim);
                    let unrelated = prev_feature.as_ref().is_none_or(|p| {
                        super::cluster::cosine_similarity(p, &v) < UNRELATED_MAX_COSINE
                    });
                    if unrelated {
                        break v;
                    }
                };
                let drop_feature = run_len == 1 && rng.random_bool(0.03);
                let mut first_id = None;
                for k in 0..run_len {
                    let feature = if drop_feature {
                        None
                    } else if k == 0 {
                        Some(base.clone())
                    } else {
                        Some(perturb(&mut rng, &base))
                    };
                    let scene = if k == 0 {
                        base_scene.clone()
                    } else {
                        jitter_scene(&mut rng, &base_scene)
                    };
                    let local = date.and_time(NaiveTime::MIN) + Duration::seconds(t);
                    let ts = offset
                        .from_local_datetime(&local)
                        .single()
                        .expect("fixed offsets are unambiguous");
                    let id = local.format("%Y%m%d_%H%M%S").to_string();
                    let has_geo = !rng.random_bool(0.05);
                    let (lat, lon) = if has_geo {
                        (
                            Some(round_to(visit.place.lat + rng.random_range(-5e-4..5e-4), 6)),
                            Some(round_to(visit.place.lon + rng.random_range(-5e-4..5e-4), 6)),
                        )
                    } else {
                        (None, None)
                    };
                    lines.push(MetadataLine {
                        id: id.clone(),
                        ts: ts.to_rfc3339_opts(chrono::SecondsFormat::Secs, false),
                        lat,
                        lon,
                        loc: if has_geo {
                            visit.place.name.map(str::to_owned)
                        } else {
                            None
                        },
                        detections: scene
                            .into_iter()
                            .map(|(kind, term, score, bbox)| MetadataDetection {
                                kind,
                                term,
                                score,
                                bbox,
                            })
                            .collect(),
                        feat: feature.clone(),
                    });
                    if feature.is_some() {
                        prev_feature = feature;
                    }
                    first_id.get_or_insert(id);
                    t += step + rng.random_range(-jitter..=jitter);
                }
                cluster_runs.push(ClusterRun {
                    first_id: first_id.expect("run is non-empty"),
                    len: run_len,
                });
                remaining -= run_len;
            }

            let visit_lines = visit_first..lines.len();
            location_visits.push(LocationVisit {
                date,
                location: visit.place.name.map(str::to_owned),
                lat: visit.place.lat,
                lon: visit.place.lon,
                first_id: lines[visit_first].id.clone(),
                image_count: visit_lines.len(),
            });
            if let (Some(role), Some(story)) = (visit.story_role, story.as_mut()) {
                plant_story(&mut rng, role, &mut lines[visit_lines], story);
            }
        }
    }

    if let Some(story) = story.as_mut() {
        story.target_id = story.airport_ids[story.airport_ids.len() / 2].clone();
    }
    let manifest = summarize(params, &dates, &lines, cluster_runs, location_visits, story);
    Ok(SyntheticCorpus { lines, manifest })
}

fn validate(params: &SynthParams) -> Result<(), CorpusError> {
    let bad = |m: &str| Err(CorpusError::InvalidParameter(m.to_owned()));
    if params.days < 1 {
        return bad("days must be at least 1");
    }
    if params.images_per_day < 1 {
        return bad("images_per_day must be at least 1");
    }
    if params.images_per_day > 40_000 {
        return bad("images_per_day must not exceed 40000");
    }
    if params.story && params.images_per_day < 8 {
        return bad("story planting needs at least 8 images per day");
    }
    if params.feature_dim < 2 {
        return bad("feature_dim must be at least 2");
    }
    for kind in DetectionKind::ALL {
        if params.vocab.terms(kind).is_empty() {
            return Err(CorpusError::InvalidParameter(format!(
                "vocabulary has no {kind} terms"
            )));
        }
    }
    Ok(())
}

fn plan_itinerary(
    rng: &mut ChaCha8Rng,
    images_per_day: u32,
    story_day: bool,
    distractor_day: bool,
) -> Vec<Visit<'static>> {
    let count = rng.random_range(4..=6usize).min(images_per_day as usize).max(1);
    let mut visits = Vec::with_capacity(count);
    if story_day && count >= 4 {
        let roles = [StoryRole::Airport, StoryRole::Taxi, StoryRole::Meeting];
        for (p, role) in STORY_PLACES.iter().zip(roles) {
            visits.push(Visit {
                place: p,
                story_role: Some(role),
            });
        }
        while visits.len() < count - 1 {
            visits.push(Visit {
                place: &STORY_PLACES[2],
                story_role: None,
            });
        }
        visits.push(Visit {
            place: &STORY_PLACES[3],
            story_role: Some(StoryRole::AirportDistractor),
        });
        return visits;
    }

    visits.push(Visit {
        place: &HOME,
        story_role: distractor_day.then_some(StoryRole::AirportDistractor),
    });
    let mut errands: Vec<&Place> = ERRANDS.iter().collect();
    errands.shuffle(rng);
    for p in errands.into_iter().take(count.saturating_sub(2)) {
        visits.push(Visit {
            place: p,
            story_role: None,
        });
    }
    if count >= 2 {
        visits.push(Visit {
            place: &HOME,
            story_role: None,
        });
    }
    visits
}

fn random_scene(rng: &mut ChaCha8Rng, vocab: &Vocabulary) -> Scene {
    let mut scene = Vec::new();
    for (kind, lo, hi) in [
        (DetectionKind::Concept, 1usize, 3usize),
        (DetectionKind::Object, 0, 3),
        (DetectionKind::Attribute, 0, 2),
    ] {
        let terms = vocab.terms(kind);
        let n = rng.random_range(lo..=hi).min(terms.len());
        for term in terms.choose_multiple(rng, n) {
            let bbox = (kind == DetectionKind::Object).then(|| random_bbox(rng));
            scene.push((kind, term.clone(), random_score(rng), bbox));
        }
    }
    scene
}

fn jitter_scene(rng: &mut ChaCha8Rng, base: &Scene) -> Scene {
    base.iter()
        .map(|(kind, term, score, bbox)| {
            let s = round_to((score + rng.random_range(-0.02..0.02)).clamp(0.0, 1.0), 3);
            (*kind, term.clone(), s, *bbox)
        })
        .collect()
}

fn random_score(rng: &mut ChaCha8Rng) -> f64 {
    round_to(rng.random_range(0.05..0.99), 3)
}

fn random_bbox(rng: &mut ChaCha8Rng) -> BoundingBox {
    let w = round_to(rng.random_range(0.05..0.5), 3);
    let h = round_to(rng.random_range(0.05..0.5), 3);
    BoundingBox {
        x: round_to(rng.random_range(0.0..(1.0 - w)), 3),
        y: round_to(rng.random_range(0.0..(1.0 - h)), 3),
        w,
        h,
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    normalize(v)
}

fn perturb(rng: &mut ChaCha8Rng, base: &[f64]) -> Vec<f64> {
    let v = base
        .iter()
        .map(|x| x + DUPLICATE_NOISE * rng.sample::<f64, _>(StandardNormal))
        .collect();
    normalize(v)
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

fn round_to(v: f64, digits: i32) -> f64 {
    let p = 10f64.powi(digits);
    (v * p).round() / p
}

fn set_detection(line: &mut MetadataLine, kind: DetectionKind, term: &str, score: f64) {
    if let Some(d) = line
        .detections
        .iter_mut()
        .find(|d| d.kind == kind && d.term == term)
    {
        d.score = score;
        return;
    }
    let bbox = (kind == DetectionKind::Object).then_some(BoundingBox {
        x: 0.25,
        y: 0.25,
        w: 0.5,
        h: 0.5,
    });
    line.detections.push(MetadataDetection {
        kind,
        term: term.to_owned(),
        score,
        bbox,
    });
}

fn plant_story(
    rng: &mut ChaCha8Rng,
    role: StoryRole,
    lines: &mut [MetadataLine],
    story: &mut StoryManifest,
) {
    for line in lines.iter_mut() {
        let score = round_to(rng.random_range(0.6..0.95), 3);
        let ids = match role {
            StoryRole::Airport => {
                set_detection(line, DetectionKind::Concept, STORY_AIRPORT, score);
                set_detection(line, DetectionKind::Object, "person", 0.7);
                &mut story.airport_ids
            }
            StoryRole::AirportDistractor => {
                set_detection(line, DetectionKind::Concept, STORY_AIRPORT, score);
                &mut story.distractor_ids
            }
            StoryRole::Taxi => {
                set_detection(line, DetectionKind::Concept, STORY_TAXI, score);
                set_detection(line, DetectionKind::Object, "car", 0.8);
                &mut story.taxi_ids
            }
            StoryRole::Meeting => {
                set_detection(line, DetectionKind::Concept, STORY_MEETING, score);
                &mut story.meeting_ids
            }
        };
        ids.push(line.id.clone());
    }
}

fn summarize(
    params: &SynthParams,
    dates: &[NaiveDate],
    lines: &[MetadataLine],
    cluster_runs: Vec<ClusterRun>,
    location_visits: Vec<LocationVisit>,
    story: Option<StoryManifest>,
) -> Manifest {
    let mut weekday_counts: BTreeMap<String, u32> = BTreeMap::new();
    let mut per_day: BTreeMap<NaiveDate, DayManifest> = BTreeMap::new();
    for &date in dates {
        let wd = weekday_name(date.weekday()).to_owned();
        *weekday_counts.entry(wd.clone()).or_default() += 1;
        per_day.insert(
            date,
            DayManifest {
                date,
                weekday: wd,
                image_count: 0,
                term_counts: BTreeMap::new(),
                location_counts: BTreeMap::new(),
            },
        );
    }
    for line in lines {
        let date = NaiveDate::parse_from_str(&line.ts[..10], "%Y-%m-%d").expect("generated date");
        let day = per_day.get_mut(&date).expect("date in range");
        day.image_count += 1;
        let distinct: BTreeSet<(DetectionKind, &str)> = line
            .detections
            .iter()
            .map(|d| (d.kind, d.term.as_str()))
            .collect();
        for (kind, term) in distinct {
            *day.term_counts
                .entry(kind)
                .or_default()
                .entry(term.to_owned())
                .or_default() += 1;
        }
        if let Some(loc) = &line.loc {
            *day.location_counts.entry(loc.clone()).or_default() += 1;
        }
    }
    Manifest {
        seed: params.seed,
        days: params.days,
        images_per_day: params.images_per_day,
        start_date: params.start_date,
        utc_offset_secs: params.utc_offset_secs,
        feature_dim: params.feature_dim,
        total_records: lines.len(),
        records_with_geo: lines.iter().filter(|l| l.lat.is_some()).count(),
        records_with_feature: lines.iter().filter(|l| l.feat.is_some()).count(),
        weekday_counts,
        dates: per_day.into_values().collect(),
        cluster_runs,
        location_visits,
        story,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_record_count_single_date() {
        let out = generate_synthetic(&SynthParams {
            seed: 1,
            days: 1,
            images_per_day: 100,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(out.lines.len(), 100);
        let first_date = &out.lines[0].ts[..10];
        assert!(out.lines.iter().all(|l| &l.ts[..10] == first_date));
        let run_total: usize = out.manifest.cluster_runs.iter().map(|r| r.len).sum();
        assert_eq!(run_total, 100);
    }

    #[test]
    fn same_seed_same_bytes() {
        let p = SynthParams {
            seed: 42,
            days: 2,
            images_per_day: 50,
            ..Default::default()
        };
        let a = generate_synthetic(&p).unwrap();
        let b = generate_synthetic(&p).unwrap();
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        assert_eq!(a.manifest_json(), b.manifest_json());
        let c = generate_synthetic(&SynthParams { seed: 43, ..p }).unwrap();
        assert_ne!(a.to_jsonl(), c.to_jsonl());
    }

    #[test]
    fn ids_unique_and_chronological() {
        let out = generate_synthetic(&SynthParams {
            days: 3,
            images_per_day: 1500,
            ..Default::default()
        })
        .unwrap();
        let mut prev: Option<&str> = None;
        for l in &out.lines {
            if let Some(p) = prev {
                assert!(p < l.ts.as_str(), "{p} !< {}", l.ts);
            }
            prev = Some(&l.ts);
        }
        let ids: BTreeSet<_> = out.lines.iter().map(|l| &l.id).collect();
        assert_eq!(ids.len(), out.lines.len());
    }

    #[test]
    fn invalid_parameters() {
        for p in [
            SynthParams {
                days: 0,
                ..Default::default()
            },
            SynthParams {
                images_per_day: 0,
                ..Default::default()
            },
            SynthParams {
                vocab: Vocabulary {
                    objects: vec![],
                    ..Default::default()
                },
                ..Default::default()
            },
        ] {
            assert!(matches!(
                generate_synthetic(&p),
                Err(CorpusError::InvalidParameter(_))
            ));
        }
        // 2016-08-16 is a Tuesday: a single day holds no Monday.
        let p = SynthParams {
            start_date: NaiveDate::from_ymd_opt(2016, 8, 16).unwrap(),
            story: true,
            ..Default::default()
        };
        assert!(generate_synthetic(&p).is_err());
    }

    #[test]
    fn demo_story_lands_on_2016_09_05() {
        let out = generate_synthetic(&SynthParams::demo()).unwrap();
        let story = out.manifest.story.as_ref().unwrap();
        assert_eq!(story.date, NaiveDate::from_ymd_opt(2016, 9, 5).unwrap());
        assert!(story.target_id.starts_with("20160905_"));
        assert!(!story.taxi_ids.is_empty() && !story.meeting_ids.is_empty());
        assert!(story.distractor_ids.iter().any(|id| id.starts_with("20160906_")));
        assert!(story.distractor_ids.iter().any(|id| id.starts_with("20160905_")));
    }
}
