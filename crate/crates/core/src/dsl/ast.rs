use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::DetectionKind;

/// Filter keywords, declared in canonical clause order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keyword {
    Concepts,
    Objects,
    Attributes,
    Weekdays,
    Timename,
    Location,
    Date,
}

/// How the terms of one clause combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combinator {
    All,
    Any,
}

impl Keyword {
    pub const ALL: [Keyword; 7] = [
        Keyword::Concepts,
        Keyword::Objects,
        Keyword::Attributes,
        Keyword::Weekdays,
        Keyword::Timename,
        Keyword::Location,
        Keyword::Date,
    ];

    pub fn long_form(self) -> &'static str {
        match self {
            Keyword::Concepts => "--concepts",
            Keyword::Objects => "--objects",
            Keyword::Attributes => "--attributes",
            Keyword::Weekdays => "--weekdays",
            Keyword::Timename => "--timename",
            Keyword::Location => "--location",
            Keyword::Date => "--date",
        }
    }

    pub fn alias(self) -> &'static str {
        match self {
            Keyword::Concepts => "-c",
            Keyword::Objects => "-o",
            Keyword::Attributes => "-a",
            Keyword::Weekdays => "-w",
            Keyword::Timename => "-t",
            Keyword::Location => "-l",
            Keyword::Date => "-d",
        }
    }

    pub fn from_flag(flag: &str) -> Option<Keyword> {
        Keyword::ALL
            .into_iter()
            .find(|k| k.long_form() == flag || k.alias() == flag)
    }

    pub fn combinator(self) -> Combinator {
        match self {
            Keyword::Concepts | Keyword::Objects | Keyword::Attributes => Combinator::All,
            _ => Combinator::Any,
        }
    }

    /// The detection family a scored keyword filters on.
    pub fn detection_kind(self) -> Option<DetectionKind> {
        match self {
            Keyword::Concepts => Some(DetectionKind::Concept),
            Keyword::Objects => Some(DetectionKind::Object),
            Keyword::Attributes => Some(DetectionKind::Attribute),
            _ => None,
        }
    }

    pub fn accepts_scores(self) -> bool {
        self.detection_kind().is_some()
    }

    pub fn term_separator(self) -> char {
        match self {
            Keyword::Location => ';',
            _ => ',',
        }
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.long_form())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_score: Option<f64>,
}

impl Term {
    pub fn new(text: impl Into<String>) -> Self {
        Term {
            text: text.into(),
            min_score: None,
        }
    }

    pub fn scored(text: impl Into<String>, min_score: f64) -> Self {
        Term {
            text: text.into(),
            min_score: Some(min_score),
        }
    }

    /// Interprets the text as a `lat,lon` pair.
    pub fn coordinate(&self) -> Option<(f64, f64)> {
        parse_coordinate(&self.text)
    }
}

pub(crate) fn is_plain_number(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let mut seen_digit = false;
    let mut seen_dot = false;
    for c in digits.chars() {
        match c {
            '0'..='9' => seen_digit = true,
            '.' if !seen_dot => seen_dot = true,
            _ => return false,
        }
    }
    seen_digit
}

pub(crate) fn parse_coordinate(text: &str) -> Option<(f64, f64)> {
    let (a, b) = text.split_once(',')?;
    let (a, b) = (a.trim(), b.trim());
    if !is_plain_number(a) || !is_plain_number(b) {
        return None;
    }
    let lat: f64 = a.parse().ok()?;
    let lon: f64 = b.parse().ok()?;
    ((-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon)).then_some((lat, lon))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub keyword: Keyword,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SortKey {
    #[default]
    Date,
    Confidence,
    ObjectCount,
}

impl SortKey {
    pub fn as_str(self) -> &'static str {
        match self {
            SortKey::Date => "date",
            SortKey::Confidence => "confidence",
            SortKey::ObjectCount => "object_count",
        }
    }
}

impl FromStr for SortKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "date" => Ok(SortKey::Date),
            "confidence" | "score" => Ok(SortKey::Confidence),
            "object_count" | "objects" => Ok(SortKey::ObjectCount),
            other => Err(format!(
                "unknown sort '{other}' (expected date, confidence or object_count)"
            )),
        }
    }
}

pub const DEFAULT_GLOBAL_SCORE: f64 = 0.10;
pub const DEFAULT_LIMIT: usize = 1000;

/// Result-shaping settings that accompany a query (the UI's sliders).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryOptions {
    pub global_score: f64,
    pub limit: usize,
    pub reduced: bool,
    pub sort: SortKey,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            global_score: DEFAULT_GLOBAL_SCORE,
            limit: DEFAULT_LIMIT,
            reduced: false,
            sort: SortKey::Date,
        }
    }
}

impl QueryOptions {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.global_score) {
            return Err(format!(
                "global score must lie in [0, 1], got {}",
                self.global_score
            ));
        }
        if self.limit == 0 {
            return Err("limit must be positive".into());
        }
        Ok(())
    }
}

/// Parsed filter query.
///
/// Parsing normalizes the clause list: clauses appear in [`Keyword::ALL`]
/// order, and the terms of OR-combined clauses are sorted and deduplicated.
/// An empty clause list is the match-everything query.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FilterQuery {
    pub clauses: Vec<Clause>,
    #[serde(default)]
    pub options: QueryOptions,
}

impl FilterQuery {
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clause(&self, keyword: Keyword) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.keyword == keyword)
    }

    pub fn with_options(mut self, options: QueryOptions) -> Self {
        self.options = options;
        self
    }
}
