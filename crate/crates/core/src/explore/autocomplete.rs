use serde::Serialize;

use super::Facet;
use crate::dsl::{list_keywords, KeywordInfo};
use crate::engine::IndexSet;

/// Record ids attached to each suggestion.
pub const MAX_EXAMPLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Suggestion {
    pub kind: Facet,
    pub term: String,
    /// Images carrying the term.
    pub count: usize,
    pub examples: Vec<String>,
    /// Clock window of a time name, as `HH:MM-HH:MM`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "items", rename_all = "lowercase")]
pub enum Completion {
    Keywords(Vec<KeywordInfo>),
    Suggestions(Vec<Suggestion>),
}

impl Completion {
    pub fn len(&self) -> usize {
        match self {
            Completion::Keywords(k) => k.len(),
            Completion::Suggestions(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Completions for a partially typed word.
///
/// A fragment starting with `-` completes keywords by prefix of their long
/// form or alias. Anything else is matched case-insensitively as a substring
/// of vocabulary terms, named locations and time names, optionally limited to
/// one facet. Suggestions are ordered by image count descending, then term.
pub fn autocomplete(fragment: &str, kind: Option<Facet>, max: usize, idx: &IndexSet) -> Completion {
    let fragment = fragment.trim();
    if fragment.starts_with('-') {
        let mut keywords = list_keywords();
        keywords.retain(|k| k.long.starts_with(fragment) || k.alias.starts_with(fragment));
        keywords.truncate(max);
        return Completion::Keywords(keywords);
    }

    let needle = fragment.to_lowercase();
    let wanted = |f: Facet| kind.is_none_or(|k| k == f);
    let mut out: Vec<Suggestion> = Vec::new();

    for (k, term, postings) in idx.vocabulary() {
        let facet = match k {
            crate::corpus::DetectionKind::Concept => Facet::Concept,
            crate::corpus::DetectionKind::Object => Facet::Object,
            crate::corpus::DetectionKind::Attribute => Facet::Attribute,
        };
        if !wanted(facet) || postings.is_empty() || !term.contains(&needle) {
            continue;
        }
        let mut best: Vec<_> = postings.iter().collect();
        best.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.ordinal.cmp(&b.ordinal)));
        out.push(Suggestion {
            kind: facet,
            term: term.to_owned(),
            count: postings.len(),
            examples: best
                .iter()
                .take(MAX_EXAMPLES)
                .map(|p| idx.record(p.ordinal).id.clone())
                .collect(),
            window: None,
        });
    }

    if wanted(Facet::Location) {
        for (key, _display, ords) in idx.locations() {
            if !ords.is_empty() && key.contains(&needle) {
                out.push(plain(idx, Facet::Location, key, ords, None));
            }
        }
    }

    if wanted(Facet::Timename) {
        for (name, window) in idx.settings().time_table.iter() {
            let ords = idx.in_timename(name).unwrap_or_default();
            if !ords.is_empty() && name.contains(&needle) {
                out.push(plain(idx, Facet::Timename, name, ords, Some(window.to_string())));
            }
        }
    }

    out.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.term.cmp(&b.term))
            .then(a.kind.cmp(&b.kind))
    });
    out.truncate(max);
    Completion::Suggestions(out)
}

fn plain(idx: &IndexSet, kind: Facet, term: &str, ords: &[u32], window: Option<String>) -> Suggestion {
    Suggestion {
        kind,
        term: term.to_owned(),
        count: ords.len(),
        examples: ords
            .iter()
            .take(MAX_EXAMPLES)
            .map(|&o| idx.record(o).id.clone())
            .collect(),
        window,
    }
}
