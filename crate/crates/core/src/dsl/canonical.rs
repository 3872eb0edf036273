//! Canonical text form and stable id of a query.
//!
//! The canonical string uses long-form keywords in fixed clause order,
//! terms joined by the keyword's separator without spaces, and scores with
//! two decimals (more only when two would not reproduce the parsed value).
//! Parsing a canonical string yields the query it was rendered from.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ast::{FilterQuery, QueryOptions, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Canonical {
    pub text: String,
    pub hash: String,
}

pub fn canonicalize(q: &FilterQuery) -> Canonical {
    let text = canonical_text(q);
    let hash = stable_hash(&[&text, &options_key(&q.options)]);
    Canonical { text, hash }
}

pub fn canonical_text(q: &FilterQuery) -> String {
    let mut out = String::new();
    for clause in &q.clauses {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(clause.keyword.long_form());
        out.push(' ');
        let sep = clause.keyword.term_separator();
        for (i, term) in clause.terms.iter().enumerate() {
            if i > 0 {
                out.push(sep);
            }
            render_term(&mut out, term);
        }
    }
    out
}

fn render_term(out: &mut String, term: &Term) {
    out.push_str(&term.text);
    if let Some(s) = term.min_score {
        let _ = write!(out, "({})", format_score(s));
    }
}

pub fn format_score(s: f64) -> String {
    let two = format!("{s:.2}");
    if two.parse::<f64>().ok() == Some(s) {
        two
    } else {
        format!("{s}")
    }
}

pub fn options_key(o: &QueryOptions) -> String {
    format!(
        "score={};limit={};reduced={};sort={}",
        format_score(o.global_score),
        o.limit,
        o.reduced,
        o.sort.as_str()
    )
}

/// First 16 hex digits of the SHA-256 of the parts joined by U+001F.
pub fn stable_hash(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            hasher.update([0x1f]);
        }
        hasher.update(p.as_bytes());
    }
    let digest = hasher.finalize();
    digest[..8].iter().fold(String::with_capacity(16), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}
