//! Random corpora parameters, queries and query strings.

use std::collections::BTreeSet;

use chrono::{Duration, NaiveDate};
use lifelog_core::corpus::synth::SynthParams;
use lifelog_core::corpus::{DetectionKind, ImageRecord, NamedTimeTable};
use lifelog_core::dsl::{Clause, Combinator, FilterQuery, Keyword, QueryOptions, SortKey, Term};
use lifelog_core::engine::{SpanPolicy, TemporalQuery};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// Synthetic corpus parameters with roughly `target` records, a random
/// start date and UTC offset.
pub fn random_synth_params<R: Rng>(rng: &mut R, target: usize) -> SynthParams {
    let days = rng.random_range(2..=6u32);
    let per_day = (target as u32 / days).max(8);
    let start = NaiveDate::from_ymd_opt(2016, 8, 1).expect("valid date")
        + Duration::days(rng.random_range(0..60));
    SynthParams {
        seed: rng.random(),
        days,
        images_per_day: per_day,
        start_date: start,
        utc_offset_secs: rng.random_range(-5..=9) * 3600,
        feature_dim: rng.random_range(4..=12),
        ..SynthParams::default()
    }
}

/// Terms that actually occur in a corpus, for building queries that hit.
#[derive(Debug, Clone, Default)]
pub struct QueryPool {
    pub concepts: Vec<String>,
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub locations: Vec<String>,
    pub coordinates: Vec<(f64, f64)>,
    pub dates: Vec<NaiveDate>,
    pub time_names: Vec<String>,
}

impl QueryPool {
    pub fn from_records(records: &[ImageRecord], table: &NamedTimeTable) -> Self {
        let mut terms: [BTreeSet<String>; 3] = Default::default();
        let mut locations = BTreeSet::new();
        let mut coords = Vec::new();
        let mut dates = BTreeSet::new();
        for r in records {
            for d in &r.detections {
                let slot = match d.kind {
                    DetectionKind::Concept => 0,
                    DetectionKind::Object => 1,
                    DetectionKind::Attribute => 2,
                };
                terms[slot].insert(d.term.clone());
            }
            if let Some(l) = &r.named_location {
                locations.insert(l.to_lowercase());
            }
            if let Some(g) = r.geo {
                coords.push((g.lat, g.lon));
            }
            dates.insert(r.timestamp.date_naive());
            dates.insert(r.timestamp.naive_local().date());
        }
        let [concepts, objects, attributes] = terms.map(|s| s.into_iter().collect());
        QueryPool {
            concepts,
            objects,
            attributes,
            locations: locations.into_iter().collect(),
            coordinates: coords,
            dates: dates.into_iter().collect(),
            time_names: table.iter().map(|(n, _)| n.to_owned()).collect(),
        }
    }

    fn detection_terms(&self, k: Keyword) -> &[String] {
        match k {
            Keyword::Concepts => &self.concepts,
            Keyword::Objects => &self.objects,
            _ => &self.attributes,
        }
    }
}

/// Puts a query into the form the parser produces.
pub fn normalize(mut q: FilterQuery) -> FilterQuery {
    q.clauses.sort_by_key(|c| c.keyword);
    for c in &mut q.clauses {
        if c.keyword.combinator() == Combinator::Any {
            c.terms.sort_by(|a, b| a.text.cmp(&b.text));
            c.terms.dedup_by(|a, b| a.text == b.text);
        }
    }
    q
}

pub fn random_options<R: Rng>(rng: &mut R) -> QueryOptions {
    let global_score = *[0.0, 0.05, 0.1, 0.1, 0.3, 0.5]
        .choose(rng)
        .expect("non-empty");
    let limit = match rng.random_range(0..5) {
        0 => 1,
        1 => 5,
        2 => rng.random_range(1..60),
        _ => 1000,
    };
    QueryOptions {
        global_score,
        limit,
        reduced: rng.random_bool(0.5),
        sort: *[SortKey::Date, SortKey::Confidence, SortKey::ObjectCount]
            .choose(rng)
            .expect("non-empty"),
    }
}

const WEEKDAYS: [&str; 7] = [
    "monday",
    "tuesday",
    "wednesday",
    "thursday",
    "friday",
    "saturday",
    "sunday",
];

fn pool_term<R: Rng>(rng: &mut R, pool: &[String], miss: &str) -> String {
    if pool.is_empty() || rng.random_bool(0.08) {
        miss.to_owned()
    } else {
        pool.choose(rng).expect("non-empty").clone()
    }
}

/// A normalized query over terms drawn mostly from `pool`, with random
/// options.
pub fn random_filter_query<R: Rng>(rng: &mut R, pool: &QueryPool) -> FilterQuery {
    let n = *[0usize, 1, 1, 2, 2, 2, 3, 4].choose(rng).expect("non-empty");
    let mut keywords = Keyword::ALL.to_vec();
    keywords.shuffle(rng);
    keywords.truncate(n);

    let clauses = keywords
        .into_iter()
        .map(|keyword| {
            let count = rng.random_range(1..=if keyword == Keyword::Date { 3 } else { 2 });
            let terms = (0..count)
                .map(|_| match keyword {
                    Keyword::Concepts | Keyword::Objects | Keyword::Attributes => {
                        let text = pool_term(rng, pool.detection_terms(keyword), "unicorn");
                        if rng.random_bool(0.3) {
                            Term::scored(text, f64::from(rng.random_range(1..=95u32)) / 100.0)
                        } else {
                            Term::new(text)
                        }
                    }
                    Keyword::Weekdays => {
                        let day = *WEEKDAYS.choose(rng).expect("non-empty");
                        Term::new(if rng.random_bool(0.2) { &day[..3] } else { day })
                    }
                    Keyword::Timename => Term::new(pool_term(rng, &pool.time_names, "dawn")),
                    Keyword::Location => {
                        if !pool.coordinates.is_empty() && rng.random_bool(0.4) {
                            let (lat, lon) = *pool.coordinates.choose(rng).expect("non-empty");
                            let lat = (lat + rng.random_range(-0.01..0.01)).clamp(-90.0, 90.0);
                            let lon = (lon + rng.random_range(-0.01..0.01)).clamp(-180.0, 180.0);
                            Term::new(format!("{lat:.4},{lon:.4}"))
                        } else {
                            Term::new(pool_term(rng, &pool.locations, "atlantis"))
                        }
                    }
                    Keyword::Date => {
                        let date = match pool.dates.choose(rng) {
                            Some(d) if rng.random_bool(0.9) => *d,
                            _ => NaiveDate::from_ymd_opt(2015, 1, 1).expect("valid date"),
                        };
                        Term::new(date.format("%Y/%m/%d").to_string())
                    }
                })
                .collect();
            Clause { keyword, terms }
        })
        .collect();
    normalize(FilterQuery {
        clauses,
        options: random_options(rng),
    })
}

/// A 2-3 stage temporal query. Each stage has one detection term, sometimes
/// narrowed by a second random clause, so stage lists stay enumerable.
pub fn random_temporal_query<R: Rng>(rng: &mut R, pool: &QueryPool) -> TemporalQuery {
    let n = rng.random_range(2..=3);
    let stages = (0..n)
        .map(|_| {
            let kw = *[Keyword::Concepts, Keyword::Objects, Keyword::Attributes]
                .choose(rng)
                .expect("non-empty");
            let mut clauses = vec![Clause {
                keyword: kw,
                terms: vec![Term::new(pool_term(rng, pool.detection_terms(kw), "unicorn"))],
            }];
            if rng.random_bool(0.3) {
                let extra = random_filter_query(rng, pool);
                clauses.extend(extra.clauses.into_iter().filter(|c| c.keyword != kw).take(1));
            }
            let mut options = random_options(rng);
            options.global_score = options.global_score.min(0.1);
            normalize(FilterQuery { clauses, options })
        })
        .collect();
    let policy = SpanPolicy {
        max_span_secs: *[None, Some(0), Some(120), Some(1800), Some(4 * 3600)]
            .choose(rng)
            .expect("non-empty"),
        same_day: rng.random_bool(0.8),
    };
    TemporalQuery { stages, policy }
}

const WORD_CHARS: &[char] = &[
    'a', 'b', 'c', 'e', 'k', 'o', 'r', 't', 'z', '0', '3', '9', '_', '/', '.', '\'', '&', 'é', 'ß',
    'ø', '中',
];

fn random_word<R: Rng>(rng: &mut R) -> String {
    if rng.random_bool(0.05) {
        return format!("-{}", rng.random_range(0..100));
    }
    let len = rng.random_range(1..8);
    let mut w: Vec<char> = (0..len)
        .map(|_| *WORD_CHARS.choose(rng).expect("non-empty"))
        .collect();
    if len > 2 && rng.random_bool(0.2) {
        w.insert(1, '-');
    }
    w.into_iter().collect()
}

fn random_text<R: Rng>(rng: &mut R) -> String {
    let words = rng.random_range(1..=3);
    (0..words).map(|_| random_word(rng)).collect::<Vec<_>>().join(" ")
}

/// Any valid normalized query with default options, including odd but legal
/// term texts and unrounded scores.
pub fn random_ast<R: Rng>(rng: &mut R) -> FilterQuery {
    let n = rng.random_range(1..=Keyword::ALL.len());
    let mut keywords = Keyword::ALL.to_vec();
    keywords.shuffle(rng);
    keywords.truncate(n);
    let clauses = keywords
        .into_iter()
        .map(|keyword| {
            let count = rng.random_range(1..=4);
            let terms = (0..count)
                .map(|_| match keyword {
                    Keyword::Concepts | Keyword::Objects | Keyword::Attributes => {
                        let text = random_text(rng);
                        match rng.random_range(0..4) {
                            0 => Term::scored(text, f64::from(rng.random_range(1..=100u32)) / 100.0),
                            1 => Term::scored(text, rng.random_range(1e-9..=1.0)),
                            _ => Term::new(text),
                        }
                    }
                    Keyword::Location if rng.random_bool(0.3) => {
                        let digits = rng.random_range(0..6);
                        Term::new(format!(
                            "{:.*},{:.*}",
                            digits,
                            rng.random_range(-90.0..=90.0),
                            digits,
                            rng.random_range(-180.0..=180.0)
                        ))
                    }
                    Keyword::Date => {
                        let d = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date")
                            + Duration::days(rng.random_range(0..20_000));
                        Term::new(d.format("%Y/%m/%d").to_string())
                    }
                    _ => Term::new(random_text(rng)),
                })
                .collect();
            Clause { keyword, terms }
        })
        .collect();
    normalize(FilterQuery {
        clauses,
        options: QueryOptions::default(),
    })
}

const TOKENS: &[&str] = &[
    "-c", "--concepts", "-o", "--OBJECTS", "-a", "-w", "-t", "-l", "-d", "--date", "--location",
    "-x", "--bogus", "-", "--", " ", "  ", "\t", ",", ";", "(", ")", "(0.5)", "(1.5)", "(-1)",
    "(0)", "()", "car", "person", "bar/indoor", "2016/09/05", "2016-09-05", "2016/13/45",
    "53.38,-6.25", "91,0", "-5", "-.5", "abc", "é", "\n", "(0.30", "monday", "morning",
];

/// A string stitched together from DSL-like tokens; valid or not.
pub fn random_dsl_string<R: Rng>(rng: &mut R) -> String {
    let n = rng.random_range(0..12);
    let mut s = String::new();
    for _ in 0..n {
        s.push_str(TOKENS.choose(rng).expect("non-empty"));
        if rng.random_bool(0.5) {
            s.push(' ');
        }
    }
    s
}

/// Arbitrary bytes decoded lossily, so the parser sees any text at all.
pub fn random_byte_string<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    let bytes: Vec<u8> = (0..len)
        .map(|_| {
            if rng.random_bool(0.3) {
                *b"-,;() .0123456789cdowtla".choose(rng).expect("non-empty")
            } else {
                rng.random()
            }
        })
        .collect();
    String::from_utf8_lossy(&bytes).into_owned()
}
