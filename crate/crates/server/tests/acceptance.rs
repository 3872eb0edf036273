//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p lifelog-server --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use chrono::{TimeZone, Utc, Weekday};
use lifelog_core::corpus::synth::{DayManifest, SynthParams};
use lifelog_core::corpus::{ingest_str, weekday_name, DetectionKind, GeoPoint, IngestConfig};
use lifelog_core::dsl::{canonical_text, parse};
use lifelog_core::engine::{haversine_km, EngineSettings, IndexSet, TemporalQuery};
use lifelog_core::explore::{
    day_summaries, Facet, HistoryQuery, HistoryStore, SummaryRequest, SummarySort,
};
use lifelog_server::submit::Submitter;
use lifelog_testkit::gen::{
    random_ast, random_byte_string, random_filter_query, random_synth_params,
    random_temporal_query, QueryPool,
};
use lifelog_testkit::history_model::{random_events, HistoryEvent, HistoryModel};
use lifelog_testkit::{oracle, synthetic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const DSL_ASTS: usize = 10_000;
const DSL_FUZZ: usize = 1_000_000;
const DSL_BUDGET: Duration = Duration::from_secs(120);
const ORACLE_CORPORA: u64 = 20;
const ORACLE_QUERIES: usize = 200;
const ORACLE_SIZE: (usize, usize) = (500, 2000);
const TEMPORAL_QUERIES: usize = 50;
const TEMPORAL_MAX_RECORDS: usize = 500;
const TEMPORAL_MAX_TUPLES: usize = 200_000;
const GEO_CENTERS: usize = 10;
const GEO_POINTS: usize = 200;
const GEO_TOLERANCE_KM: f64 = 1e-9;
const HISTORY_SEQUENCES: usize = 1000;
const SCENARIO_BUDGET: Duration = Duration::from_secs(5);

type Check = Result<String, String>;
/// Method, path, body, expected status, keys the response must carry.
type Case = (&'static str, String, Option<Value>, u16, &'static [&'static str]);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    }};
}

fn build(corpus: lifelog_core::corpus::Corpus) -> IndexSet {
    IndexSet::build(Arc::new(corpus), EngineSettings::default())
}

fn dsl_round_trip() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD51);
    for i in 0..DSL_ASTS {
        let q = random_ast(&mut rng);
        let text = canonical_text(&q);
        ensure!(parse(&text).as_ref() == Ok(&q), "ast {i}: '{text}' does not parse back");
    }
    let mut accepted = 0usize;
    for _ in 0..DSL_FUZZ {
        let s = random_byte_string(&mut rng, 48);
        let r = catch_unwind(|| parse(&s));
        match r {
            Err(_) => return Err(format!("parser panicked on {s:?}")),
            Ok(Ok(q)) => {
                accepted += 1;
                ensure!(
                    parse(&canonical_text(&q)).as_ref() == Ok(&q),
                    "fuzz input {s:?} accepted but does not round-trip"
                );
            }
            Ok(Err(e)) => ensure!(e.position <= s.len(), "error position past end for {s:?}"),
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < DSL_BUDGET, "took {elapsed:.1?}, budget {DSL_BUDGET:?}");
    Ok(format!(
        "{DSL_ASTS} ASTs round-trip, {DSL_FUZZ} fuzz strings ({accepted} accepted), no panic, {elapsed:.1?}"
    ))
}

struct ReducedStats {
    queries: usize,
    violations: Vec<String>,
}

fn oracle_equivalence(reduced: &mut ReducedStats) -> Check {
    let mut queries = 0;
    let mut nonempty = 0;
    let mut with_reduced = 0;
    for seed in 0..ORACLE_CORPORA {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC0 + seed);
        let target = rng.random_range(ORACLE_SIZE.0..=ORACLE_SIZE.1);
        let (corpus, _) = synthetic(&random_synth_params(&mut rng, target));
        let idx = build(corpus);
        let records = idx.corpus().records();
        let table = idx.settings().time_table.clone();
        let radius = idx.settings().coordinate_radius_km;
        let pool = QueryPool::from_records(records, &table);
        for _ in 0..ORACLE_QUERIES {
            let q = random_filter_query(&mut rng, &pool);
            let page = idx.evaluate(&q);
            let (want, total) = oracle::evaluate(records, &q, &table, radius);
            ensure!(
                page.total_before_limit == total,
                "corpus {seed}: total {} != oracle {total} for {q:?}",
                page.total_before_limit
            );
            let got: Vec<(&str, f64)> = page.hits.iter().map(|h| (h.id.as_str(), h.score)).collect();
            let exp: Vec<(&str, f64)> = want.iter().map(|h| (h.id.as_str(), h.score)).collect();
            ensure!(got == exp, "corpus {seed}: hits differ for {q:?}");
            queries += 1;
            nonempty += usize::from(total > 0);
            with_reduced += usize::from(q.options.reduced);

            // Reduced invariant on the same query, uncapped.
            let mut full = q.clone();
            full.options.limit = usize::MAX;
            full.options.reduced = false;
            let all: BTreeSet<String> = idx.evaluate(&full).hits.into_iter().map(|h| h.id).collect();
            full.options.reduced = true;
            let red = idx.evaluate(&full);
            let clusters: BTreeSet<u32> = red.hits.iter().map(|h| h.cluster_id).collect();
            reduced.queries += 1;
            if clusters.len() != red.hits.len() {
                reduced.violations.push(format!("corpus {seed}: duplicate cluster for {q:?}"));
            }
            if !red.hits.iter().all(|h| all.contains(&h.id)) {
                reduced.violations.push(format!("corpus {seed}: reduced not a subset for {q:?}"));
            }
        }
    }
    Ok(format!(
        "{ORACLE_CORPORA} corpora x {ORACLE_QUERIES} queries = {queries}, 0 mismatches ({nonempty} non-empty, {with_reduced} reduced)"
    ))
}

fn reduced_invariant(stats: &ReducedStats) -> Check {
    ensure!(stats.queries > 0, "no oracle queries ran");
    ensure!(stats.violations.is_empty(), "{}", stats.violations[0]);
    Ok(format!("{} queries: cluster ids unique, reduced subset of unreduced", stats.queries))
}

fn temporal_oracle() -> Check {
    let mut checked = 0;
    let mut with_tuples = 0;
    let mut seed = 0u64;
    while checked < TEMPORAL_QUERIES {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7E40 + seed);
        seed += 1;
        let (corpus, _) = synthetic(&random_synth_params(&mut rng, 400));
        let idx = build(corpus);
        let records = idx.corpus().records();
        ensure!(records.len() <= TEMPORAL_MAX_RECORDS, "corpus has {} records", records.len());
        let table = &idx.settings().time_table;
        let radius = idx.settings().coordinate_radius_km;
        let pool = QueryPool::from_records(records, table);
        let mut per_corpus = 0;
        let mut attempts = 0;
        while per_corpus < 10 && checked < TEMPORAL_QUERIES && attempts < 400 {
            attempts += 1;
            let tq: TemporalQuery = random_temporal_query(&mut rng, &pool);
            let expected = oracle::temporal_tuples(records, &tq.stages, tq.policy, table, radius);
            // Cap trivially empty chains at half the sample.
            let empty_quota_used = expected.is_empty() && (checked - with_tuples) * 2 >= TEMPORAL_QUERIES;
            if expected.len() > TEMPORAL_MAX_TUPLES || empty_quota_used {
                continue;
            }
            let got = idx
                .enumerate_temporal(&tq, TEMPORAL_MAX_TUPLES)
                .map_err(|e| format!("engine error: {e}"))?;
            let want: Vec<Vec<String>> = expected
                .iter()
                .map(|t| t.iter().map(|&i| records[i].id.clone()).collect())
                .collect();
            ensure!(got == want, "tuple sets differ for {tq:?}");
            let limit = tq.stages.last().unwrap().options.limit;
            let (pres, total) = oracle::temporal_presentation(&expected, limit);
            let page = idx.evaluate_temporal(&tq).map_err(|e| e.to_string())?;
            ensure!(page.total_before_limit == total, "total differs for {tq:?}");
            let got: Vec<Vec<usize>> = page
                .matches
                .iter()
                .map(|m| m.hits.iter().map(|h| h.ordinal as usize).collect())
                .collect();
            ensure!(got == pres, "presentation differs for {tq:?}");
            checked += 1;
            per_corpus += 1;
            with_tuples += usize::from(!expected.is_empty());
        }
    }
    ensure!(with_tuples * 2 >= checked, "only {with_tuples} of {checked} queries produced tuples");
    Ok(format!(
        "{checked} queries over {seed} corpora, 0 mismatches ({with_tuples} with tuples)"
    ))
}

fn geo_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6E0);
    let mut worst: f64 = 0.0;
    let mut members = 0;
    for c in 0..GEO_CENTERS {
        let center = (rng.random_range(-80.0..80.0), rng.random_range(-179.0..179.0));
        let lines: Vec<String> = (0..GEO_POINTS)
            .map(|i| {
                let lat: f64 = center.0 + rng.random_range(-0.5..0.5);
                let lon: f64 = center.1 + rng.random_range(-0.5..0.5);
                format!(
                    r#"{{"id":"p{i:03}","ts":"2016-09-05T{:02}:{:02}:00Z","lat":{lat},"lon":{lon}}}"#,
                    i / 60,
                    i % 60
                )
            })
            .collect();
        let idx = build(ingest_str(&lines.join("\n"), &IngestConfig::default()).map_err(|e| e.to_string())?);
        let records = idx.corpus().records();
        let radius = [1.0, 5.0, 30.0, 60.0][c % 4];
        let cp = GeoPoint { lat: center.0, lon: center.1 };
        let page = idx.radius_search(cp, radius).map_err(|e| e.to_string())?;
        let want = oracle::radius(records, center.0, center.1, radius);
        ensure!(page.hits.len() == want.len(), "center {c}: {} members vs {}", page.hits.len(), want.len());
        for (h, (i, d)) in page.hits.iter().zip(&want) {
            ensure!(h.id == records[*i].id, "center {c}: order differs at {}", h.id);
            let err = (h.distance_km.unwrap() - d).abs();
            worst = worst.max(err);
            ensure!(err <= GEO_TOLERANCE_KM, "center {c}: distance error {err:e}");
        }
        for r in records {
            let g = r.geo.unwrap();
            let err = (haversine_km(cp, g) - oracle::distance_km(cp.lat, cp.lon, g.lat, g.lon)).abs();
            worst = worst.max(err);
            ensure!(err <= GEO_TOLERANCE_KM, "center {c}: haversine error {err:e}");
        }
        members += want.len();
    }
    Ok(format!(
        "{GEO_CENTERS} centers x {GEO_POINTS} points, {members} in radius, max error {worst:.1e} km (tol {GEO_TOLERANCE_KM:e})"
    ))
}

fn named_time_contract() -> Check {
    let lines = [
        r#"{"id":"at13","ts":"2016-09-05T13:00:00+02:00"}"#,
        r#"{"id":"at17","ts":"2016-09-05T17:00:00+02:00"}"#,
        r#"{"id":"at1659","ts":"2016-09-05T16:59:59+02:00"}"#,
    ];
    let idx = build(ingest_str(&lines.join("\n"), &IngestConfig::default()).map_err(|e| e.to_string())?);
    let q = parse("--timename afternoon").map_err(|e| e.to_string())?;
    let ids: Vec<String> = idx.evaluate(&q).hits.into_iter().map(|h| h.id).collect();
    ensure!(ids.contains(&"at13".to_owned()), "13:00:00 not in afternoon: {ids:?}");
    ensure!(!ids.contains(&"at17".to_owned()), "17:00:00 in afternoon: {ids:?}");
    ensure!(ids.contains(&"at1659".to_owned()), "16:59:59 not in afternoon: {ids:?}");
    Ok("afternoon = [13:00, 17:00): 13:00:00 in, 16:59:59 in, 17:00:00 out".into())
}

fn history_model() -> Check {
    let at = |s: i64| Utc.timestamp_opt(1_470_000_000 + s, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x415);
    let mut events = 0;
    for seq in 0..HISTORY_SEQUENCES {
        let capacity = rng.random_range(1..8);
        let len = rng.random_range(1..60);
        let evs = random_events(&mut rng, len);
        let mut store = HistoryStore::new(capacity);
        let mut model = HistoryModel::new(capacity);
        for ev in &evs {
            let known = model.apply(ev);
            match ev {
                HistoryEvent::Record { id, issued_at } => {
                    store.record(id, HistoryQuery::Filter(format!("--objects {id}")), at(*issued_at));
                }
                HistoryEvent::View { id, image, ms } => {
                    ensure!(store.view_event(id, image, *ms).is_ok() == known, "sequence {seq}: view outcome differs");
                }
                HistoryEvent::Clear => store.clear(),
            }
            ensure!(store.len() <= capacity, "sequence {seq}: capacity exceeded");
            let got: Vec<_> = store
                .entries()
                .map(|e| (e.id.clone(), e.issued_at, e.first_viewed.clone(), e.last_viewed.clone(), e.longest_viewed.clone(), e.longest_view_ms))
                .collect();
            let want: Vec<_> = model
                .listing()
                .into_iter()
                .map(|e| (e.id, at(e.issued_at), e.first_viewed, e.last_viewed, e.longest_viewed, e.longest_view_ms))
                .collect();
            ensure!(got == want, "sequence {seq}: listing differs from model");
            events += 1;
        }
    }
    Ok(format!("{HISTORY_SEQUENCES} sequences, {events} events, listings identical, capacity respected"))
}

fn day_summary_check() -> Check {
    let (corpus, manifest) = synthetic(&SynthParams {
        seed: 8,
        days: 112,
        images_per_day: 40,
        ..SynthParams::default()
    });
    let idx = build(corpus);
    let all = |weekdays: Option<Vec<Weekday>>, sort: SummarySort| {
        day_summaries(
            &SummaryRequest { page_size: 1000, weekdays, sort, ..Default::default() },
            &idx,
        )
        .map_err(|e| e.to_string())
    };
    let page = all(None, SummarySort::DateAsc)?;
    ensure!(page.days.len() == manifest.dates.len(), "day count differs");
    for (got, want) in page.days.iter().zip(&manifest.dates) {
        ensure!(
            got.date == want.date && got.image_count == want.image_count,
            "{}: {} images vs manifest {}",
            want.date,
            got.image_count,
            want.image_count
        );
    }
    let weekdays = [
        Weekday::Mon, Weekday::Tue, Weekday::Wed, Weekday::Thu, Weekday::Fri, Weekday::Sat, Weekday::Sun,
    ];
    for wd in weekdays {
        let p = all(Some(vec![wd]), SummarySort::DateAsc)?;
        let name = weekday_name(wd);
        ensure!(p.total_days as u32 == manifest.weekday_counts[name], "{name} count differs");
        ensure!(p.days.iter().all(|d| d.weekday == name), "{name} filter leaked other days");
    }
    let mondays: Vec<usize> = (0..4)
        .map(|page| {
            let req = SummaryRequest { page, page_size: 6, weekdays: Some(vec![Weekday::Mon]), ..Default::default() };
            day_summaries(&req, &idx).map(|p| p.days.len()).unwrap_or(usize::MAX)
        })
        .collect();
    ensure!(mondays == [6, 6, 4, 0], "16 Mondays paged as {mondays:?}");

    let mut orderings = 0;
    for (facet, kind, term) in [
        (Facet::Object, Some(DetectionKind::Object), "car"),
        (Facet::Concept, Some(DetectionKind::Concept), "kitchen/indoor"),
        (Facet::Attribute, Some(DetectionKind::Attribute), "wet"),
        (Facet::Location, None, "home"),
    ] {
        let p = all(None, SummarySort::TermFrequency { facet, term: term.into() })?;
        let count = |d: &DayManifest| match kind {
            Some(k) => d.term_counts.get(&k).and_then(|m| m.get(term)).copied().unwrap_or(0),
            None => d.location_counts.iter().filter(|(l, _)| l.to_lowercase() == term).map(|(_, c)| *c).sum(),
        };
        let mut want: Vec<(usize, chrono::NaiveDate)> = manifest.dates.iter().map(|d| (count(d), d.date)).collect();
        want.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let got: Vec<(usize, chrono::NaiveDate)> = p.days.iter().map(|d| (d.sort_count.unwrap_or(0), d.date)).collect();
        ensure!(got == want, "term-frequency order differs for {facet}:{term}");
        orderings += 1;
    }
    Ok(format!(
        "{} days: per-day counts, 7 weekday filters, Monday paging 6/6/4/0, {orderings} term-frequency orderings match",
        manifest.dates.len()
    ))
}

fn scenario() -> Check {
    let start = Instant::now();
    let data = common::data_dir();
    let manifest: Value = serde_json::from_slice(
        &std::fs::read(data.join("demo.manifest.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let target = manifest["story"]["target_id"].as_str().ok_or("manifest has no story")?.to_owned();
    let corpus = data.join("demo.jsonl");
    let steps = ["-c airport_terminal", "-c airport_terminal -t morning", "-c airport_terminal -t morning -w monday"];
    let mut sizes = Vec::new();
    let mut prev: Option<BTreeSet<String>> = None;
    for q in steps {
        let out = Command::new(env!("CARGO_BIN_EXE_lifelog"))
            .args(["query", "--corpus", corpus.to_str().unwrap(), q, "--limit", "100000", "--json"])
            .env("RUST_LOG", "warn")
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "'{q}' failed: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let ids: BTreeSet<String> = v["hits"]
            .as_array()
            .ok_or("no hits array")?
            .iter()
            .map(|h| h["id"].as_str().unwrap_or_default().to_owned())
            .collect();
        if let Some(p) = &prev {
            ensure!(ids.len() < p.len() && ids.is_subset(p), "'{q}' did not shrink the hit set");
        }
        sizes.push(ids.len());
        prev = Some(ids);
    }
    let last = prev.unwrap();
    ensure!(last.contains(&target), "target {target} missing from final set");
    let elapsed = start.elapsed();
    ensure!(elapsed < SCENARIO_BUDGET, "took {elapsed:.1?}");
    Ok(format!(
        "hits {} -> {} -> {}, target {target} present, {elapsed:.2?} via CLI",
        sizes[0], sizes[1], sizes[2]
    ))
}

fn api_conformance() -> Check {
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(async {
        let base = common::spawn_api(common::demo_index(), Submitter::practice()).await;
        let c = reqwest::Client::new();
        let target = "20160905_075948";
        let story = json!({ "stages": ["-c airport_terminal", "-c car_interior"], "max_span_secs": 14400 });
        let cases: Vec<Case> = vec![
            ("GET", "/api/health".into(), None, 200, &["status", "records", "days"]),
            ("GET", "/api/keywords".into(), None, 200, &["keywords"]),
            ("GET", "/api/search?q=-c%20airport_terminal".into(), None, 200, &["query", "hash", "options", "total", "returned", "hits", "session"]),
            ("GET", "/api/search?q=--bogus".into(), None, 400, &["error"]),
            ("POST", "/api/search/temporal".into(), Some(story), 200, &["stages", "hash", "policy", "options", "total", "returned", "matches", "session"]),
            ("POST", "/api/search/temporal".into(), Some(json!({ "stages": ["-c a", "-x"] })), 400, &["error"]),
            ("GET", "/api/summaries?weekday=monday".into(), None, 200, &["total_days", "page", "page_size", "days"]),
            ("GET", "/api/autocomplete?fragment=indoor".into(), None, 200, &["fragment", "type", "items"]),
            ("GET", format!("/api/image/{target}"), None, 200, &["record", "local_date", "local_time", "weekday", "time_names", "neighbors", "links"]),
            ("GET", "/api/image/no_such_id".into(), None, 404, &["error"]),
            ("GET", "/api/geo?center_lat=69.68&center_lon=18.98&radius_km=5".into(), None, 200, &["center", "radius_km", "total", "returned", "hits"]),
            ("POST", "/api/submit".into(), Some(json!({ "id": target })), 200, &["id", "timestamp", "status", "practice"]),
            ("POST", "/api/submit".into(), Some(json!({ "id": "no_such_id" })), 404, &["error"]),
            ("POST", "/api/history".into(), Some(json!({ "query": "-o car" })), 200, &["id", "query", "issued_at", "longest_view_ms"]),
            ("GET", "/api/history".into(), None, 200, &["session", "capacity", "entries"]),
            ("POST", "/api/history/no_such_entry/view".into(), Some(json!({ "image": target })), 404, &["error"]),
            ("POST", "/api/history/import".into(), Some(json!([])), 200, &["session", "imported"]),
            ("DELETE", "/api/history".into(), None, 200, &["session", "cleared"]),
            ("GET", "/api/nowhere".into(), None, 404, &["error"]),
        ];
        let n = cases.len();
        for (method, path, body, status, keys) in cases {
            let mut req = c.request(method.parse().unwrap(), format!("{base}{path}"));
            if let Some(b) = &body {
                req = req.json(b);
            }
            let resp = req.send().await.map_err(|e| e.to_string())?;
            let got = resp.status().as_u16();
            let v: Value = resp.json().await.map_err(|e| format!("{method} {path}: body not JSON: {e}"))?;
            ensure!(got == status, "{method} {path}: status {got}, expected {status}: {v}");
            for k in keys {
                ensure!(v.get(k).is_some(), "{method} {path}: missing '{k}' in {v}");
            }
            if status >= 400 {
                let kind = v["error"]["kind"].as_str().unwrap_or_default();
                let expected = if status == 404 { "not_found" } else if v["error"]["code"].is_string() { "parse_error" } else { "bad_request" };
                ensure!(kind == expected, "{method} {path}: error kind '{kind}'");
                if kind == "parse_error" {
                    ensure!(v["error"]["position"].is_u64(), "{method} {path}: parse error without position");
                }
            }
        }
        Ok(format!("{n} endpoint cases: statuses, envelopes, parse positions, 404s"))
    })
}

fn run(name: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => {
            println!("PASS  {name:<22} {detail} [{secs:.1}s]");
            true
        }
        Err(why) => {
            println!("FAIL  {name:<22} {why} [{secs:.1}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    // Keep the fuzz loop's expected panics (there should be none) quiet.
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        if std::thread::current().name() != Some("main") {
            default_hook(info);
        }
    }));

    let mut reduced = ReducedStats { queries: 0, violations: Vec::new() };
    let results = [
        run("dsl-round-trip", dsl_round_trip),
        run("oracle-equivalence", || oracle_equivalence(&mut reduced)),
        run("temporal-oracle", temporal_oracle),
        run("geo-oracle", geo_oracle),
        run("named-time-contract", named_time_contract),
        run("reduced-invariant", || reduced_invariant(&reduced)),
        run("history-model", history_model),
        run("day-summaries", day_summary_check),
        run("demo-scenario", scenario),
        run("api-conformance", api_conformance),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
