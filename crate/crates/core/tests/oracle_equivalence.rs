use std::collections::BTreeSet;
use std::sync::Arc;

use lifelog_core::engine::{EngineSettings, IndexSet};
use lifelog_testkit::gen::{random_filter_query, random_synth_params, QueryPool};
use lifelog_testkit::{oracle, synthetic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPORA: u64 = 6;
const QUERIES: usize = 120;

#[test]
fn evaluate_matches_linear_scan() {
    let mut nonempty = 0;
    for seed in 0..CORPORA {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = rng.random_range(500..=2000);
        let (corpus, _) = synthetic(&random_synth_params(&mut rng, target));
        let settings = EngineSettings::default();
        let table = settings.time_table.clone();
        let radius = settings.coordinate_radius_km;
        let idx = IndexSet::build(Arc::new(corpus), settings);
        let records = idx.corpus().records();
        let pool = QueryPool::from_records(records, &table);

        for _ in 0..QUERIES {
            let q = random_filter_query(&mut rng, &pool);
            let page = idx.evaluate(&q);
            let (expected, total) = oracle::evaluate(records, &q, &table, radius);
            assert_eq!(page.total_before_limit, total, "total for {q:?}");
            let got: Vec<(&str, f64, usize)> = page
                .hits
                .iter()
                .map(|h| (h.id.as_str(), h.score, h.object_count))
                .collect();
            let want: Vec<(&str, f64, usize)> = expected
                .iter()
                .map(|h| (h.id.as_str(), h.score, h.object_count))
                .collect();
            assert_eq!(got, want, "hits for {q:?}");
            if total > 0 {
                nonempty += 1;
            }
        }
    }
    // the generator should mostly produce queries that hit something
    assert!(nonempty > (CORPORA as usize * QUERIES) / 3, "only {nonempty} non-empty");
}

#[test]
fn reduced_is_a_cluster_unique_subset() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (corpus, _) = synthetic(&random_synth_params(&mut rng, 1500));
    let idx = IndexSet::build(Arc::new(corpus), EngineSettings::default());
    let pool = QueryPool::from_records(idx.corpus().records(), &idx.settings().time_table);
    for _ in 0..200 {
        let mut q = random_filter_query(&mut rng, &pool);
        q.options.limit = usize::MAX;
        q.options.reduced = false;
        let full: BTreeSet<String> = idx.evaluate(&q).hits.into_iter().map(|h| h.id).collect();
        q.options.reduced = true;
        let reduced = idx.evaluate(&q);
        let clusters: BTreeSet<u32> = reduced.hits.iter().map(|h| h.cluster_id).collect();
        assert_eq!(clusters.len(), reduced.hits.len());
        assert!(reduced.hits.iter().all(|h| full.contains(&h.id)));
        // every cluster that had a hit keeps exactly one
        let full_clusters: BTreeSet<u32> = full
            .iter()
            .map(|id| idx.record_by_id(id).unwrap().cluster_id)
            .collect();
        assert_eq!(clusters, full_clusters);
    }
}

#[test]
fn postings_agree_with_a_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (corpus, _) = synthetic(&random_synth_params(&mut rng, 800));
    let idx = IndexSet::build(Arc::new(corpus), EngineSettings::default());
    let records = idx.corpus().records();
    let vocab: Vec<_> = idx.vocabulary().map(|(k, t, _)| (k, t.to_owned())).collect();
    for _ in 0..20 {
        let (kind, term) = &vocab[rng.random_range(0..vocab.len())];
        let from_index: Vec<(u32, f64)> = idx
            .postings(*kind, term)
            .iter()
            .map(|p| (p.ordinal, p.score))
            .collect();
        let from_scan: Vec<(u32, f64)> = records
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                r.detections
                    .iter()
                    .filter(|d| d.kind == *kind && &d.term == term)
                    .map(|d| d.score)
                    .reduce(f64::max)
                    .map(|s| (i as u32, s))
            })
            .collect();
        assert_eq!(from_index, from_scan, "{kind:?} {term}");
    }
}
