//! Hand-written parser for the filter language.
//!
//! ```text
//! query    = ws { group ws } ;
//! group    = flag ws1 termlist ;
//! flag     = "--" name | "-" letter ;
//! termlist = term { sep term } ;          (* sep is ";" for --location, "," otherwise *)
//! term     = text [ "(" score ")" ] ;
//! ```
//!
//! A flag starts at the beginning of a whitespace-separated word. Everything
//! between two flags belongs to the first flag's term list. Positions in
//! errors are character offsets into the input.

use chrono::NaiveDate;

use super::ast::{is_plain_number, parse_coordinate, Clause, Combinator, FilterQuery, Keyword, Term};
use super::{ParseError, ParseErrorKind};

pub fn parse(input: &str) -> Result<FilterQuery, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let flags = find_flags(&chars);

    let first_non_ws = chars.iter().position(|c| !c.is_whitespace());
    match (first_non_ws, flags.first()) {
        (None, _) => return Ok(FilterQuery::default()),
        (Some(p), Some(&(start, _))) if p == start => {}
        (Some(p), _) => {
            let word: String = chars[p..]
                .iter()
                .take_while(|c| !c.is_whitespace())
                .collect();
            return Err(ParseError::new(
                ParseErrorKind::ExpectedKeyword { found: word },
                p,
            ));
        }
    }

    let mut clauses: Vec<Clause> = Vec::new();
    for (i, &(start, end)) in flags.iter().enumerate() {
        let flag: String = chars[start..end].iter().collect::<String>().to_lowercase();
        let keyword = Keyword::from_flag(&flag)
            .ok_or_else(|| ParseError::new(ParseErrorKind::UnknownKeyword { keyword: flag }, start))?;
        if clauses.iter().any(|c| c.keyword == keyword) {
            return Err(ParseError::new(
                ParseErrorKind::DuplicateKeyword { keyword },
                start,
            ));
        }
        let region_end = flags.get(i + 1).map_or(chars.len(), |&(s, _)| s);
        let terms = parse_terms(keyword, &chars, end, region_end)
            .map_err(|e| e.or_missing(keyword, start))?;
        clauses.push(Clause { keyword, terms });
    }

    clauses.sort_by_key(|c| c.keyword);
    for clause in &mut clauses {
        if clause.keyword.combinator() == Combinator::Any {
            clause.terms.sort_by(|a, b| a.text.cmp(&b.text));
            clause.terms.dedup_by(|a, b| a.text == b.text);
        }
    }
    Ok(FilterQuery {
        clauses,
        options: Default::default(),
    })
}

/// Spans `[start, end)` of every flag word.
fn find_flags(chars: &[char]) -> Vec<(usize, usize)> {
    let mut flags = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let at_word_start = i == 0 || chars[i - 1].is_whitespace();
        if at_word_start && !chars[i].is_whitespace() {
            let end = chars[i..]
                .iter()
                .position(|c| c.is_whitespace())
                .map_or(chars.len(), |n| i + n);
            if is_flag_word(&chars[i..end]) {
                flags.push((i, end));
            }
            i = end;
        } else {
            i += 1;
        }
    }
    flags
}

fn is_flag_word(word: &[char]) -> bool {
    match word {
        ['-'] => true,
        ['-', second, ..] => !(second.is_ascii_digit() || *second == '.'),
        _ => false,
    }
}

/// Internal error carrier: `Missing` is upgraded to a positioned
/// `MissingTerms` once the keyword position is known.
enum TermError {
    Missing,
    Other(ParseError),
}

impl TermError {
    fn or_missing(self, keyword: Keyword, flag_pos: usize) -> ParseError {
        match self {
            TermError::Missing => {
                ParseError::new(ParseErrorKind::MissingTerms { keyword }, flag_pos)
            }
            TermError::Other(e) => e,
        }
    }
}

impl From<ParseError> for TermError {
    fn from(e: ParseError) -> Self {
        TermError::Other(e)
    }
}

fn parse_terms(
    keyword: Keyword,
    chars: &[char],
    start: usize,
    end: usize,
) -> Result<Vec<Term>, TermError> {
    let region = &chars[start..end];
    if region.iter().all(|c| c.is_whitespace()) {
        return Err(TermError::Missing);
    }
    let sep = keyword.term_separator();
    let mut terms = Vec::new();
    let mut piece_start = 0;
    for idx in 0..=region.len() {
        if idx < region.len() && region[idx] != sep {
            continue;
        }
        let piece = &region[piece_start..idx];
        let index = terms.len();
        terms.push(parse_term(keyword, piece, start + piece_start, index)?);
        piece_start = idx + 1;
    }
    Ok(terms)
}

fn parse_term(
    keyword: Keyword,
    piece: &[char],
    offset: usize,
    index: usize,
) -> Result<Term, ParseError> {
    let lead = piece.iter().take_while(|c| c.is_whitespace()).count();
    let pos = offset + lead;
    let raw: String = piece.iter().collect();
    let raw = raw.trim();
    if raw.is_empty() {
        return Err(ParseError::new(
            ParseErrorKind::EmptyTerm { keyword, index },
            pos,
        ));
    }

    let (text_part, min_score) = split_score(keyword, raw, pos, index)?;
    let text = collapse_whitespace(text_part).to_lowercase();
    let invalid = |reason: &str| {
        ParseError::new(
            ParseErrorKind::InvalidTerm {
                term: text_part.to_owned(),
                index,
                reason: reason.to_owned(),
            },
            pos,
        )
    };
    if text.contains('(') || text.contains(')') {
        return Err(invalid("unbalanced parenthesis"));
    }
    if let Some(rest) = text.strip_prefix('-') {
        if !rest.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
            return Err(invalid("terms may not start with '-'"));
        }
    }

    let text = match keyword {
        Keyword::Date => normalize_date(&text).ok_or_else(|| {
            ParseError::new(
                ParseErrorKind::InvalidDate {
                    term: text.clone(),
                    index,
                },
                pos,
            )
        })?,
        Keyword::Location if text.contains(',') => {
            let (lat, lon) = text.split_once(',').expect("contains a comma");
            if parse_coordinate(&text).is_none() {
                return Err(ParseError::new(
                    ParseErrorKind::InvalidCoordinate {
                        term: text.clone(),
                        index,
                    },
                    pos,
                ));
            }
            format!("{},{}", lat.trim(), lon.trim())
        }
        _ => text,
    };
    Ok(Term { text, min_score })
}

fn split_score(
    keyword: Keyword,
    raw: &str,
    pos: usize,
    index: usize,
) -> Result<(&str, Option<f64>), ParseError> {
    let Some(body) = raw.strip_suffix(')') else {
        return Ok((raw, None));
    };
    let Some(open) = body.rfind('(') else {
        return Ok((raw, None));
    };
    let text = body[..open].trim_end();
    let score_text = body[open + 1..].trim();
    if text.is_empty() {
        return Err(ParseError::new(ParseErrorKind::ScoreWithoutTerm, pos));
    }
    if !keyword.accepts_scores() {
        return Err(ParseError::new(
            ParseErrorKind::ScoreNotAllowed { keyword },
            pos,
        ));
    }
    let score = if is_plain_number(score_text) && !score_text.starts_with('-') {
        score_text.parse::<f64>().ok()
    } else {
        None
    };
    match score {
        Some(s) if s > 0.0 && s <= 1.0 => Ok((text, Some(s))),
        _ => Err(ParseError::new(
            ParseErrorKind::InvalidScore {
                term: text.to_lowercase(),
                index,
                value: score_text.to_owned(),
            },
            pos,
        )),
    }
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn normalize_date(text: &str) -> Option<String> {
    let date = ["%Y/%m/%d", "%Y-%m-%d"]
        .iter()
        .find_map(|fmt| NaiveDate::parse_from_str(text, fmt).ok())?;
    Some(date.format("%Y/%m/%d").to_string())
}
