use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use chrono::Datelike;
use lifelog_core::corpus::synth::{generate_synthetic, SynthParams};
use lifelog_core::corpus::{
    ingest_corpus, ingest_str, to_metadata_line, CorpusError, DetectionKind, IngestConfig,
};
use lifelog_testkit::gen::random_synth_params;
use lifelog_testkit::oracle::{cluster_starts, sakamoto};
use lifelog_testkit::synthetic;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(seed: u64, days: u32, per_day: u32) -> SynthParams {
    SynthParams {
        seed,
        days,
        images_per_day: per_day,
        ..SynthParams::default()
    }
}

#[test]
fn manifest_matches_a_scan_of_the_ingested_corpus() {
    let (corpus, manifest) = synthetic(&params(5, 10, 100));
    assert_eq!(corpus.len(), 1000);
    assert_eq!(manifest.total_records, 1000);
    let records = corpus.records();
    assert_eq!(
        records.iter().filter(|r| r.geo.is_some()).count(),
        manifest.records_with_geo
    );
    assert_eq!(
        records.iter().filter(|r| r.feature.is_some()).count(),
        manifest.records_with_feature
    );

    let mut per_day: BTreeMap<chrono::NaiveDate, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        per_day.entry(r.local_date()).or_default().push(i);
    }
    assert_eq!(per_day.len(), manifest.dates.len());
    for day in &manifest.dates {
        let ords = &per_day[&day.date];
        assert_eq!(ords.len(), day.image_count, "{}", day.date);
        let names = ["sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"];
        let wd = sakamoto(day.date.year(), day.date.month(), day.date.day());
        assert_eq!(day.weekday, names[wd as usize]);

        let mut terms: BTreeMap<DetectionKind, BTreeMap<String, usize>> = BTreeMap::new();
        let mut locs: BTreeMap<String, usize> = BTreeMap::new();
        for &i in ords {
            let distinct: BTreeSet<_> = records[i]
                .detections
                .iter()
                .map(|d| (d.kind, d.term.clone()))
                .collect();
            for (k, t) in distinct {
                *terms.entry(k).or_default().entry(t).or_default() += 1;
            }
            if let Some(l) = &records[i].named_location {
                *locs.entry(l.clone()).or_default() += 1;
            }
        }
        assert_eq!(terms, day.term_counts);
        assert_eq!(locs, day.location_counts);
    }

    let mut weekdays: BTreeMap<String, u32> = BTreeMap::new();
    for day in &manifest.dates {
        *weekdays.entry(day.weekday.clone()).or_default() += 1;
    }
    assert_eq!(weekdays, manifest.weekday_counts);
}

#[test]
fn clusters_equal_planted_runs() {
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (corpus, manifest) = synthetic(&random_synth_params(&mut rng, 1200));
        let records = corpus.records();
        let starts: Vec<&str> = records
            .iter()
            .enumerate()
            .filter(|(i, r)| *i == 0 || records[i - 1].cluster_id != r.cluster_id)
            .map(|(_, r)| r.id.as_str())
            .collect();
        let planted: Vec<&str> = manifest.cluster_runs.iter().map(|r| r.first_id.as_str()).collect();
        assert_eq!(starts, planted, "seed {seed}");

        let recomputed: Vec<bool> = cluster_starts(records, 0.95, 120);
        let engine: Vec<bool> = records
            .iter()
            .enumerate()
            .map(|(i, r)| i == 0 || records[i - 1].cluster_id != r.cluster_id)
            .collect();
        assert_eq!(recomputed, engine);
    }
}

#[test]
fn generator_is_deterministic_and_roundtrips_through_records() {
    let p = params(1, 2, 150);
    let a = generate_synthetic(&p).unwrap();
    let b = generate_synthetic(&p).unwrap();
    assert_eq!(a.to_jsonl(), b.to_jsonl());
    assert_eq!(a.manifest_json(), b.manifest_json());

    let corpus = ingest_str(&a.to_jsonl(), &IngestConfig::default()).unwrap();
    let back: Vec<String> = corpus
        .records()
        .iter()
        .map(|r| serde_json::to_string(&to_metadata_line(r)).unwrap())
        .collect();
    let again = ingest_str(&back.join("\n"), &IngestConfig::default()).unwrap();
    assert_eq!(corpus.records(), again.records());
}

#[test]
fn ingest_from_file_reports_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, r#"{{"id":"a","ts":"2016-09-05T08:00:00Z"}}"#).unwrap();
    writeln!(f).unwrap();
    writeln!(f, r#"{{"id":"b","ts":"2016-09-05T08:00:00Z","detections":[{{"kind":"object","term":"car","score":2}}]}}"#).unwrap();
    drop(f);
    let err = ingest_corpus(&path, &IngestConfig::default()).unwrap_err();
    assert!(matches!(err, CorpusError::OutOfRange { line: 3, .. }), "{err}");
    assert!(err.to_string().starts_with("line 3"));

    let missing = ingest_corpus(&dir.path().join("nope.jsonl"), &IngestConfig::default());
    assert!(matches!(missing, Err(CorpusError::Io { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Renaming ids (keeping timestamps) never changes cluster structure.
    #[test]
    fn clusters_ignore_record_ids(seed in any::<u64>(), salt in "[a-z]{1,6}") {
        let synth = generate_synthetic(&params(seed, 1, 120)).unwrap();
        let original = ingest_str(&synth.to_jsonl(), &IngestConfig::default()).unwrap();
        let renamed: Vec<String> = synth
            .lines
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let mut l = l.clone();
                l.id = format!("{salt}-{}", 1_000_000 - i);
                serde_json::to_string(&l).unwrap()
            })
            .collect();
        let renamed = ingest_str(&renamed.join("\n"), &IngestConfig::default()).unwrap();
        let a: Vec<u32> = original.records().iter().map(|r| r.cluster_id).collect();
        let b: Vec<u32> = renamed.records().iter().map(|r| r.cluster_id).collect();
        prop_assert_eq!(a, b);
    }
}
