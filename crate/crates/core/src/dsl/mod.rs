//! The combinable filter language.
//!
//! Input reads like a command line: `--objects apple(0.9),banana -w saturday,sunday`.
//! Each keyword (long form or one-letter alias) is followed by a term list.
//! Detection keywords (`--concepts`, `--objects`, `--attributes`) require
//! every term to be present; the others accept any of their terms.

mod ast;
mod canonical;
mod parser;

use std::fmt;

pub use ast::{
    Clause, Combinator, FilterQuery, Keyword, QueryOptions, SortKey, Term, DEFAULT_GLOBAL_SCORE,
    DEFAULT_LIMIT,
};
pub use canonical::{canonical_text, canonicalize, format_score, options_key, stable_hash, Canonical};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("expected a keyword such as --objects, found '{found}'")]
    ExpectedKeyword { found: String },
    #[error("unknown keyword '{keyword}'")]
    UnknownKeyword { keyword: String },
    #[error("keyword {keyword} has no terms")]
    MissingTerms { keyword: Keyword },
    #[error("keyword {keyword} given more than once")]
    DuplicateKeyword { keyword: Keyword },
    #[error("empty term #{index} for {keyword}")]
    EmptyTerm { keyword: Keyword, index: usize },
    #[error("score without a preceding term")]
    ScoreWithoutTerm,
    #[error("invalid score '{value}' for term #{index} '{term}': must be a decimal in (0, 1]")]
    InvalidScore {
        term: String,
        index: usize,
        value: String,
    },
    #[error("{keyword} does not take confidence scores")]
    ScoreNotAllowed { keyword: Keyword },
    #[error("invalid term #{index} '{term}': {reason}")]
    InvalidTerm {
        term: String,
        index: usize,
        reason: String,
    },
    #[error("invalid date '{term}' (term #{index}): expected yyyy/mm/dd or yyyy-mm-dd")]
    InvalidDate { term: String, index: usize },
    #[error(
        "invalid location term '{term}' (term #{index}): expected 'lat,lon' in range; separate named locations with ';'"
    )]
    InvalidCoordinate { term: String, index: usize },
}

/// A parse failure at a character offset of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl ParseErrorKind {
    /// Stable snake_case name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            ParseErrorKind::ExpectedKeyword { .. } => "expected_keyword",
            ParseErrorKind::UnknownKeyword { .. } => "unknown_keyword",
            ParseErrorKind::MissingTerms { .. } => "missing_terms",
            ParseErrorKind::DuplicateKeyword { .. } => "duplicate_keyword",
            ParseErrorKind::EmptyTerm { .. } => "empty_term",
            ParseErrorKind::ScoreWithoutTerm => "score_without_term",
            ParseErrorKind::InvalidScore { .. } => "invalid_score",
            ParseErrorKind::ScoreNotAllowed { .. } => "score_not_allowed",
            ParseErrorKind::InvalidTerm { .. } => "invalid_term",
            ParseErrorKind::InvalidDate { .. } => "invalid_date",
            ParseErrorKind::InvalidCoordinate { .. } => "invalid_coordinate",
        }
    }
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, position: usize) -> Self {
        ParseError { kind, position }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.kind, self.position)?;
        if matches!(self.kind, ParseErrorKind::UnknownKeyword { .. }) {
            let valid: Vec<String> = Keyword::ALL
                .iter()
                .map(|k| format!("{} ({})", k.long_form(), k.alias()))
                .collect();
            write!(f, "; valid keywords: {}", valid.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct KeywordInfo {
    pub long: &'static str,
    pub alias: &'static str,
    pub values: &'static str,
}

/// Every keyword with its alias and a description of the values it takes.
pub fn list_keywords() -> Vec<KeywordInfo> {
    Keyword::ALL
        .iter()
        .map(|&k| KeywordInfo {
            long: k.long_form(),
            alias: k.alias(),
            values: match k {
                Keyword::Concepts => "scored term list: concept[(min score)],... (all required)",
                Keyword::Objects => "scored term list: object[(min score)],... (all required)",
                Keyword::Attributes => {
                    "scored term list: attribute[(min score)],... (all required)"
                }
                Keyword::Weekdays => "weekday names: monday,...,sunday (any)",
                Keyword::Timename => "named times: morning,noon,afternoon,evening,night (any)",
                Keyword::Location => "named locations or lat,lon pairs separated by ';' (any)",
                Keyword::Date => "dates yyyy/mm/dd or yyyy-mm-dd (any)",
            },
        })
        .collect()
}
