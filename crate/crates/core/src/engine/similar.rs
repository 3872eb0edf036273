use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::evaluate::{Hit, ResultPage};
use super::geo::haversine_km;
use super::index::IndexSet;
use super::EngineError;
use crate::corpus::{cosine_similarity, DetectionKind, GeoPoint};
use crate::dsl::{canonical_text, parse, Clause, FilterQuery, Keyword, Term, DEFAULT_GLOBAL_SCORE};

/// Number of similar images behind the dates-of-similar link.
pub const LINK_NEIGHBORS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Neighbor {
    pub id: String,
    pub similarity: f64,
}

impl IndexSet {
    /// Records within `radius_km` of `center`, nearest first.
    pub fn radius_search(&self, center: GeoPoint, radius_km: f64) -> Result<ResultPage, EngineError> {
        if !(radius_km.is_finite() && radius_km > 0.0) {
            return Err(EngineError::InvalidParameter(format!(
                "radius_km must be positive, got {radius_km}"
            )));
        }
        let mut hits: Vec<Hit> = Vec::new();
        for &o in self.geo_list() {
            let rec = self.record(o);
            let d = haversine_km(center, rec.geo.expect("geo_list has coordinates"));
            if d <= radius_km {
                let mut hit = self.make_hit(o, &FilterQuery::default());
                hit.distance_km = Some(d);
                hits.push(hit);
            }
        }
        hits.sort_by(|a, b| {
            let (da, db) = (a.distance_km.unwrap_or(0.0), b.distance_km.unwrap_or(0.0));
            da.total_cmp(&db)
                .then_with(|| a.timestamp.cmp(&b.timestamp))
                .then_with(|| a.id.cmp(&b.id))
        });
        Ok(ResultPage {
            total_before_limit: hits.len(),
            hits,
        })
    }

    /// Top-`k` records by cosine similarity of feature vectors, excluding the
    /// record itself; ties by ascending id. Empty when the record has no
    /// feature vector.
    pub fn neighbors(&self, id: &str, k: usize) -> Result<Vec<Neighbor>, EngineError> {
        let rec = self
            .record_by_id(id)
            .ok_or_else(|| EngineError::UnknownId(id.to_owned()))?;
        let Some(query) = &rec.feature else {
            return Ok(Vec::new());
        };
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut scored: Vec<Neighbor> = self
            .corpus()
            .records()
            .iter()
            .filter(|r| r.id != rec.id)
            .filter_map(|r| {
                r.feature.as_ref().map(|f| Neighbor {
                    id: r.id.clone(),
                    similarity: cosine_similarity(query, f),
                })
            })
            .collect();
        scored.sort_by(|a, b| {
            b.similarity
                .total_cmp(&a.similarity)
                .then_with(|| a.id.cmp(&b.id))
        });
        scored.truncate(k);
        Ok(scored)
    }

    /// Follow-up queries offered from the image detail view.
    ///
    /// Always contains `same_day`; `same_objects`, `same_concepts`,
    /// `same_location`, `same_weekday` and `dates_of_similar` appear when the
    /// record has the data behind them. Detection links only use detections
    /// at or above the default global score, so each link finds its source
    /// image under default settings.
    pub fn link_queries(&self, id: &str) -> Result<BTreeMap<String, FilterQuery>, EngineError> {
        let rec = self
            .record_by_id(id)
            .ok_or_else(|| EngineError::UnknownId(id.to_owned()))?;
        let mut links = BTreeMap::new();
        let date_term = |d: chrono::NaiveDate| Term::new(d.format("%Y/%m/%d").to_string());

        links.insert(
            "same_day".to_owned(),
            single(Keyword::Date, vec![date_term(rec.local_date())]),
        );
        links.insert(
            "same_weekday".to_owned(),
            single(
                Keyword::Weekdays,
                vec![Term::new(crate::corpus::weekday_name(rec.weekday()))],
            ),
        );

        for (name, keyword, kind) in [
            ("same_objects", Keyword::Objects, DetectionKind::Object),
            ("same_concepts", Keyword::Concepts, DetectionKind::Concept),
        ] {
            let terms: BTreeSet<&str> = rec
                .detections
                .iter()
                .filter(|d| d.kind == kind && d.score >= DEFAULT_GLOBAL_SCORE)
                .map(|d| d.term.as_str())
                .collect();
            if !terms.is_empty() {
                links.insert(
                    name.to_owned(),
                    single(keyword, terms.into_iter().map(Term::new).collect()),
                );
            }
        }

        if let Some(loc) = &rec.named_location {
            links.insert(
                "same_location".to_owned(),
                single(Keyword::Location, vec![Term::new(loc.to_lowercase())]),
            );
        }

        let similar_dates: BTreeSet<chrono::NaiveDate> = self
            .neighbors(id, LINK_NEIGHBORS)?
            .iter()
            .filter_map(|n| self.record_by_id(&n.id))
            .map(|r| r.local_date())
            .collect();
        if !similar_dates.is_empty() {
            links.insert(
                "dates_of_similar".to_owned(),
                single(
                    Keyword::Date,
                    similar_dates.into_iter().map(date_term).collect(),
                ),
            );
        }

        // a link must survive a trip through the query text
        links.retain(|_, q| parse(&canonical_text(q)).as_ref() == Ok(q));
        Ok(links)
    }
}

fn single(keyword: Keyword, terms: Vec<Term>) -> FilterQuery {
    FilterQuery {
        clauses: vec![Clause { keyword, terms }],
        options: Default::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ingest_str, IngestConfig};
    use crate::engine::EngineSettings;
    use std::sync::Arc;

    fn build(lines: &[&str]) -> IndexSet {
        let corpus = ingest_str(&lines.join("\n"), &IngestConfig::default()).unwrap();
        IndexSet::build(Arc::new(corpus), EngineSettings::default())
    }

    #[test]
    fn radius_includes_self_and_excludes_antipode() {
        let idx = build(&[
            r#"{"id":"a","ts":"2016-09-05T08:00:00Z","lat":53.38,"lon":-6.25}"#,
            r#"{"id":"nogeo","ts":"2016-09-05T08:01:00Z"}"#,
        ]);
        let page = idx.radius_search(GeoPoint { lat: 53.38, lon: -6.25 }, 0.001).unwrap();
        assert_eq!(page.ids(), ["a"]);
        assert_eq!(page.hits[0].distance_km, Some(0.0));
        let page = idx.radius_search(GeoPoint { lat: -53.38, lon: 173.75 }, 1.0).unwrap();
        assert!(page.hits.is_empty());
        assert!(idx.radius_search(GeoPoint { lat: 0.0, lon: 0.0 }, 0.0).is_err());
    }

    #[test]
    fn radius_orders_by_distance() {
        let idx = build(&[
            r#"{"id":"far","ts":"2016-09-05T08:00:00Z","lat":53.50,"lon":-6.25}"#,
            r#"{"id":"near","ts":"2016-09-05T09:00:00Z","lat":53.39,"lon":-6.25}"#,
        ]);
        let page = idx.radius_search(GeoPoint { lat: 53.38, lon: -6.25 }, 30.0).unwrap();
        assert_eq!(page.ids(), ["near", "far"]);
    }

    #[test]
    fn neighbors_basic_cases() {
        let idx = build(&[
            r#"{"id":"q","ts":"2016-09-05T08:00:00Z","feat":[1,0]}"#,
            r#"{"id":"twin","ts":"2016-09-06T08:00:00Z","feat":[1,0]}"#,
            r#"{"id":"other","ts":"2016-09-07T08:00:00Z","feat":[0,1]}"#,
            r#"{"id":"bare","ts":"2016-09-07T09:00:00Z"}"#,
        ]);
        assert!(idx.neighbors("q", 0).unwrap().is_empty());
        let n = idx.neighbors("q", 5).unwrap();
        assert_eq!(n[0].id, "twin");
        assert!((n[0].similarity - 1.0).abs() < 1e-12);
        assert_eq!(n.len(), 2);
        assert!(idx.neighbors("bare", 3).unwrap().is_empty());
        assert!(matches!(idx.neighbors("missing", 3), Err(EngineError::UnknownId(_))));
    }

    #[test]
    fn links_for_a_record() {
        let idx = build(&[
            r#"{"id":"x","ts":"2016-09-05T08:00:00+01:00","loc":"Home","lat":53.0,"lon":-6.0,"feat":[1,0],"detections":[{"kind":"object","term":"person","score":0.8},{"kind":"object","term":"car","score":0.6},{"kind":"object","term":"cup","score":0.05}]}"#,
            r#"{"id":"y","ts":"2016-09-07T08:00:00+01:00","feat":[1,0.1]}"#,
        ]);
        let links = idx.link_queries("x").unwrap();
        assert_eq!(links["same_day"], parse("--date 2016/09/05").unwrap());
        assert_eq!(links["same_objects"], parse("-o car,person").unwrap());
        assert_eq!(links["same_location"], parse("-l home").unwrap());
        assert_eq!(links["same_weekday"], parse("-w monday").unwrap());
        assert_eq!(links["dates_of_similar"], parse("-d 2016/09/07").unwrap());
        assert!(!links.contains_key("same_concepts"));
        for q in links.values() {
            assert!(idx.evaluate(q).total_before_limit > 0 || q.clause(Keyword::Date).is_some());
        }
        assert!(idx.link_queries("nope").is_err());
    }
}
