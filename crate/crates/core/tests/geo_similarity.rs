use std::sync::Arc;

use lifelog_core::corpus::{ingest_str, GeoPoint, IngestConfig};
use lifelog_core::engine::{haversine_km, EngineSettings, IndexSet};
use lifelog_testkit::gen::random_synth_params;
use lifelog_testkit::{oracle, synthetic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOLERANCE_KM: f64 = 1e-9;

fn point_cloud(rng: &mut ChaCha8Rng, center: (f64, f64), n: usize) -> String {
    (0..n)
        .map(|i| {
            let lat = (center.0 + rng.random_range(-0.5..0.5)).clamp(-90.0, 90.0);
            let lon = center.1 + rng.random_range(-0.5..0.5);
            let lon = if lon > 180.0 { lon - 360.0 } else if lon < -180.0 { lon + 360.0 } else { lon };
            format!(
                r#"{{"id":"p{i:03}","ts":"2016-09-05T{:02}:{:02}:00Z","lat":{lat},"lon":{lon}}}"#,
                i / 60,
                i % 60
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn radius_search_matches_direct_haversine() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for c in 0..10 {
        let center = (rng.random_range(-80.0..80.0), rng.random_range(-179.0..179.0));
        let corpus = ingest_str(&point_cloud(&mut rng, center, 200), &IngestConfig::default()).unwrap();
        let idx = IndexSet::build(Arc::new(corpus), EngineSettings::default());
        let records = idx.corpus().records();
        let radius = [1.0, 5.0, 30.0, 60.0][c % 4];
        let page = idx
            .radius_search(GeoPoint { lat: center.0, lon: center.1 }, radius)
            .unwrap();
        let expected = oracle::radius(records, center.0, center.1, radius);
        assert_eq!(page.hits.len(), expected.len(), "center {center:?} radius {radius}");
        for (hit, (i, d)) in page.hits.iter().zip(&expected) {
            assert_eq!(hit.id, records[*i].id);
            assert!((hit.distance_km.unwrap() - d).abs() <= TOLERANCE_KM);
        }
        for r in records {
            let g = r.geo.unwrap();
            let d = haversine_km(GeoPoint { lat: center.0, lon: center.1 }, g);
            let d_ref = oracle::distance_km(center.0, center.1, g.lat, g.lon);
            assert!((d - d_ref).abs() <= TOLERANCE_KM);
        }
    }
}

#[test]
fn neighbors_match_pairwise_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (corpus, _) = synthetic(&random_synth_params(&mut rng, 600));
    let idx = IndexSet::build(Arc::new(corpus), EngineSettings::default());
    let records = idx.corpus().records();
    for _ in 0..30 {
        let i = rng.random_range(0..records.len());
        let k = rng.random_range(1..12);
        let got = idx.neighbors(&records[i].id, k).unwrap();
        let want = oracle::neighbors(records, i, k);
        assert_eq!(got.len(), want.len());
        for (g, (id, sim)) in got.iter().zip(&want) {
            assert_eq!(&g.id, id);
            assert!((g.similarity - sim).abs() < 1e-12);
        }
    }
}

#[test]
fn named_time_boundaries_are_half_open() {
    let lines = [
        r#"{"id":"at13","ts":"2016-09-05T13:00:00+02:00"}"#,
        r#"{"id":"at17","ts":"2016-09-05T17:00:00+02:00"}"#,
        r#"{"id":"before13","ts":"2016-09-05T12:59:59+02:00"}"#,
        r#"{"id":"at0459","ts":"2016-09-06T04:59:59+02:00"}"#,
        r#"{"id":"at05","ts":"2016-09-06T05:00:00+02:00"}"#,
    ];
    let corpus = ingest_str(&lines.join("\n"), &IngestConfig::default()).unwrap();
    let idx = IndexSet::build(Arc::new(corpus), EngineSettings::default());
    let ids = |q: &str| {
        let q = lifelog_core::dsl::parse(q).unwrap();
        idx.evaluate(&q).hits.into_iter().map(|h| h.id).collect::<Vec<_>>()
    };
    assert_eq!(ids("-t afternoon"), ["at13"]);
    assert_eq!(ids("-t evening"), ["at17"]);
    assert_eq!(ids("-t noon"), ["before13"]);
    assert_eq!(ids("-t night"), ["at0459"]);
    assert_eq!(ids("-t morning"), ["at05"]);
}
