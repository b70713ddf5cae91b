//! Location resolution and publish-date normalization.
//!
//! Location finding walks the document's raw tokens (before stop filtering,
//! so place names survive), stems each one, and collects every gazetteer
//! entry whose name matches. The primary thana is the most frequently
//! mentioned thana, ties going to the earliest mention; its parent district
//! comes from the gazetteer. When no thana matches, the most frequent
//! district match stands in. Matching is token-at-a-time; multi-word place
//! names are out of scope.

use chrono::NaiveDate;
use thiserror::Error;

use crate::corpus::Document;
use crate::lexicon::{Gazetteer, Lexicon, Location, LocationKind};
use crate::textpipe;

#[derive(Debug, Error)]
#[error("bad date {0:?}")]
pub struct DateError(pub String);

/// Parse a publish date. Accepts the crawler's 12-digit "YYYYMMDDHHMM"
/// stamp (truncated to the day) and the printed "DD-MM-YYYY" form.
pub fn normalize_date(raw: &str) -> Result<NaiveDate, DateError> {
    let bad = || DateError(raw.to_string());
    if raw.len() == 12 && raw.bytes().all(|b| b.is_ascii_digit()) {
        let year: i32 = raw[..4].parse().map_err(|_| bad())?;
        let month: u32 = raw[4..6].parse().map_err(|_| bad())?;
        let day: u32 = raw[6..8].parse().map_err(|_| bad())?;
        return NaiveDate::from_ymd_opt(year, month, day).ok_or_else(bad);
    }
    let parts: Vec<&str> = raw.split('-').collect();
    if let [day, month, year] = parts[..] {
        if day.len() == 2 && month.len() == 2 && year.len() == 4 {
            let all_digits = [day, month, year]
                .iter()
                .all(|p| p.bytes().all(|b| b.is_ascii_digit()));
            if all_digits {
                return NaiveDate::from_ymd_opt(
                    year.parse().map_err(|_| bad())?,
                    month.parse().map_err(|_| bad())?,
                    day.parse().map_err(|_| bad())?,
                )
                .ok_or_else(bad);
            }
        }
    }
    Err(bad())
}

/// Where a document's story happened, as far as the gazetteer can tell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResolvedLocation {
    /// Primary thana; when present, `district` is its parent.
    pub thana: Option<Location>,
    pub district: Option<Location>,
    /// Every matched gazetteer entry, in first-mention order.
    pub all_matches: Vec<Location>,
}

impl ResolvedLocation {
    pub fn is_empty(&self) -> bool {
        self.thana.is_none() && self.district.is_none() && self.all_matches.is_empty()
    }
}

struct MatchStat<'g> {
    location: &'g Location,
    count: u64,
}

/// Resolve a document's location. The CITY hint from the crawl record is
/// tokenized and merged into the match set before selection. Absence of any
/// match yields an all-absent result, never an error.
pub fn find_location(doc: &Document, gazetteer: &Gazetteer, lexicon: &Lexicon) -> ResolvedLocation {
    let mut tokens = textpipe::raw_tokens(doc);
    tokens.extend(textpipe::tokenize(&doc.city_hint));

    // stats in first-occurrence order; index keyed by (name, kind)
    let mut stats: Vec<MatchStat> = Vec::new();
    let mut index: std::collections::BTreeMap<(&str, LocationKind), usize> =
        std::collections::BTreeMap::new();
    for token in &tokens {
        let root = lexicon.stem(token);
        for location in gazetteer.matches(root) {
            match index.get(&(location.name.as_str(), location.kind)) {
                Some(&i) => stats[i].count += 1,
                None => {
                    index.insert((location.name.as_str(), location.kind), stats.len());
                    stats.push(MatchStat { location, count: 1 });
                }
            }
        }
    }

    let most_frequent = |kind: LocationKind| -> Option<&Location> {
        let mut best: Option<&MatchStat> = None;
        for stat in stats.iter().filter(|s| s.location.kind == kind) {
            // strict > keeps the earliest mention on ties
            if best.is_none_or(|b| stat.count > b.count) {
                best = Some(stat);
            }
        }
        best.map(|s| s.location)
    };

    let thana = most_frequent(LocationKind::Thana).cloned();
    let district = match &thana {
        Some(t) => gazetteer.find(&t.parent, LocationKind::District).cloned(),
        None => most_frequent(LocationKind::District).cloned(),
    };
    ResolvedLocation {
        thana,
        district,
        all_matches: stats.iter().map(|s| s.location.clone()).collect(),
    }
}
