//! Crawled-record ingestion.
//!
//! Crawler output is pseudo-XML: an optional `<Index>` envelope around
//! angle-bracket tag pairs, with unescaped ampersands and bare URLs inside
//! the values. It is not well-formed XML, so records are parsed by literal
//! tag-delimiter scanning. Tags match case-insensitively, unknown tags are
//! ignored, and when a tag (or an alias like `filePath`/`PATH`) appears more
//! than once the last occurrence wins.

use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use rayon::prelude::*;
use thiserror::Error;
use walkdir::WalkDir;

use crate::geodate::{self, ResolvedLocation};

/// Records larger than this are rejected to keep the downstream all-pairs
/// scan bounded.
pub const MAX_RECORD_BYTES: usize = 16 * 1024 * 1024;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("mandatory tag <{0}> is missing or empty")]
    MissingTag(&'static str),
    #[error("record is not valid UTF-8")]
    Encoding,
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One crawled news item, fields exactly as carried by the record file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawRecord {
    pub file_path: String,
    pub title: String,
    pub content: String,
    /// CATEGORY tag, optional; used as the training label when present.
    pub category_hint: String,
    /// CITY tag, optional; merged into location matching.
    pub city_hint: String,
    pub domain: String,
    /// 12-digit crawl timestamp, "YYYYMMDDHHMM".
    pub published_at: String,
    pub url: String,
    pub record_type: String,
    pub byte_info: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Title,
    Content,
    Category,
    City,
    Domain,
    Date,
    Url,
    Type,
    FilePath,
    ByteInfo,
    /// Recognized but not stored (the envelope and crawler bookkeeping).
    Ignored,
}

impl Slot {
    fn mandatory(self) -> bool {
        matches!(self, Slot::Title | Slot::Content | Slot::Date)
    }
}

/// Known tag names, lowercase. `filepath`/`path` and `byteinfo`/`byte_info`
/// are aliases for the same field.
const TAGS: &[(&str, Slot)] = &[
    ("index", Slot::Ignored),
    ("indexed", Slot::Ignored),
    ("filepath", Slot::FilePath),
    ("path", Slot::FilePath),
    ("byteinfo", Slot::ByteInfo),
    ("byte_info", Slot::ByteInfo),
    ("title", Slot::Title),
    ("content", Slot::Content),
    ("category", Slot::Category),
    ("city", Slot::City),
    ("domain", Slot::Domain),
    ("date", Slot::Date),
    ("url", Slot::Url),
    ("type", Slot::Type),
];

/// Parse one record. The `<Index>` envelope is optional; bare tag sequences
/// are accepted.
pub fn parse_record(raw: &[u8]) -> Result<RawRecord, CorpusError> {
    if raw.len() > MAX_RECORD_BYTES {
        return Err(CorpusError::Malformed(format!(
            "record of {} bytes exceeds the {} MiB cap",
            raw.len(),
            MAX_RECORD_BYTES / (1024 * 1024)
        )));
    }
    let text = std::str::from_utf8(raw).map_err(|_| CorpusError::Encoding)?;
    // ASCII lowercasing keeps byte offsets aligned with the original text,
    // so values can be sliced from `text` by the offsets found here.
    let lowered = text.to_ascii_lowercase();

    let mut hits: Vec<(usize, Slot, &str)> = Vec::new();
    for &(name, slot) in TAGS {
        let open = format!("<{name}>");
        let close = format!("</{name}>");
        let mut from = 0;
        while let Some(found) = lowered[from..].find(&open) {
            let value_start = from + found + open.len();
            match lowered[value_start..].find(&close) {
                Some(rel) => {
                    let value_end = value_start + rel;
                    hits.push((from + found, slot, text[value_start..value_end].trim()));
                    from = value_end + close.len();
                }
                None if slot.mandatory() => {
                    return Err(CorpusError::Malformed(format!("unclosed <{name}>")));
                }
                // an unclosed optional tag is treated as stray text
                None => from = value_start,
            }
        }
    }
    hits.sort_by_key(|&(pos, _, _)| pos);

    let mut record = RawRecord::default();
    for (_, slot, value) in hits {
        let field = match slot {
            Slot::Title => &mut record.title,
            Slot::Content => &mut record.content,
            Slot::Category => &mut record.category_hint,
            Slot::City => &mut record.city_hint,
            Slot::Domain => &mut record.domain,
            Slot::Date => &mut record.published_at,
            Slot::Url => &mut record.url,
            Slot::Type => &mut record.record_type,
            Slot::FilePath => &mut record.file_path,
            Slot::ByteInfo => &mut record.byte_info,
            Slot::Ignored => continue,
        };
        *field = value.to_string();
    }

    if record.title.is_empty() {
        return Err(CorpusError::MissingTag("TITLE"));
    }
    if record.content.is_empty() {
        return Err(CorpusError::MissingTag("CONTENT"));
    }
    if record.published_at.is_empty() {
        return Err(CorpusError::MissingTag("DATE"));
    }
    validate_timestamp(&record.published_at)?;
    Ok(record)
}

/// Shape check only: 12 ASCII digits with plausible month and day fields.
/// Calendar validity (leap years, month lengths) is checked when the record
/// becomes a [`Document`].
fn validate_timestamp(stamp: &str) -> Result<(), CorpusError> {
    let ok = stamp.len() == 12
        && stamp.bytes().all(|b| b.is_ascii_digit())
        && matches!(stamp[4..6].parse::<u32>(), Ok(1..=12))
        && matches!(stamp[6..8].parse::<u32>(), Ok(1..=31));
    if ok {
        Ok(())
    } else {
        Err(CorpusError::Malformed(format!(
            "DATE {stamp:?} is not a YYYYMMDDHHMM timestamp"
        )))
    }
}

/// Serialize a record back into the tag format. `parse_record` returns a
/// field-equal record as long as no field value embeds a closing tag.
pub fn write_record(record: &RawRecord) -> String {
    format!(
        "<Index>\n<filePath>{}</filePath>\n<byteInfo>{}</byteInfo>\n<indexed>true</indexed>\n\
         <TITLE>{}</TITLE>\n<CONTENT>{}</CONTENT>\n<CATEGORY>{}</CATEGORY>\n<CITY>{}</CITY>\n\
         <DOMAIN>{}</DOMAIN>\n<DATE>{}</DATE>\n<URL>{}</URL>\n<TYPE>{}</TYPE>\n</Index>\n",
        record.file_path,
        record.byte_info,
        record.title,
        record.content,
        record.category_hint,
        record.city_hint,
        record.domain,
        record.published_at,
        record.url,
        record.record_type,
    )
}

/// A parsed corpus directory: records in deterministic order plus the number
/// of files that failed to parse.
#[derive(Debug, Default)]
pub struct LoadedCorpus {
    pub records: Vec<RawRecord>,
    pub skipped: usize,
}

fn record_key(r: &RawRecord) -> impl Ord + '_ {
    (
        &r.published_at,
        &r.url,
        &r.domain,
        &r.title,
        &r.content,
        &r.record_type,
        &r.category_hint,
        &r.city_hint,
        &r.file_path,
        &r.byte_info,
    )
}

/// Parse every regular file under `dir`, recursively. Files that fail to
/// parse are skipped and counted. The result is sorted by record content
/// (timestamp first, then URL), never by directory enumeration order.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<LoadedCorpus, CorpusError> {
    let mut paths = Vec::new();
    for entry in WalkDir::new(dir.as_ref()) {
        let entry = entry.map_err(|e| CorpusError::Io {
            path: e
                .path()
                .unwrap_or(dir.as_ref())
                .display()
                .to_string(),
            source: e
                .into_io_error()
                .unwrap_or_else(|| std::io::Error::other("walk error")),
        })?;
        if entry.file_type().is_file() {
            paths.push(entry.into_path());
        }
    }
    paths.sort();

    let parsed: Vec<Result<RawRecord, CorpusError>> = paths
        .par_iter()
        .map(|path| {
            let bytes = fs::read(path).map_err(|source| CorpusError::Io {
                path: path.display().to_string(),
                source,
            })?;
            parse_record(&bytes)
        })
        .collect();

    let mut corpus = LoadedCorpus::default();
    for result in parsed {
        match result {
            Ok(record) => corpus.records.push(record),
            Err(_) => corpus.skipped += 1,
        }
    }
    corpus
        .records
        .sort_by(|a, b| record_key(a).cmp(&record_key(b)));
    Ok(corpus)
}

/// Normalized carrier for all downstream stages.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    /// Position in the loaded corpus; unique and contiguous from 0.
    pub id: usize,
    pub title: String,
    pub content: String,
    /// Normalized terms (stemmed, stop-filtered); filled by `textpipe`.
    pub tokens: Vec<String>,
    pub published_day: NaiveDate,
    pub source_domain: String,
    pub url: String,
    /// Label carried by the crawl record, if any; training ground truth.
    pub category_hint: String,
    pub city_hint: String,
    /// Label assigned by the classifier.
    pub category: Option<String>,
    /// Filled by `geodate::find_location`.
    pub location: Option<ResolvedLocation>,
}

impl Document {
    /// Bare document for building corpora outside the crawl format; all
    /// hint fields start empty and `tokens` is unfilled.
    pub fn new(
        id: usize,
        title: impl Into<String>,
        content: impl Into<String>,
        published_day: NaiveDate,
    ) -> Document {
        Document {
            id,
            title: title.into(),
            content: content.into(),
            tokens: Vec::new(),
            published_day,
            source_domain: String::new(),
            url: String::new(),
            category_hint: String::new(),
            city_hint: String::new(),
            category: None,
            location: None,
        }
    }

    pub fn from_record(id: usize, record: &RawRecord) -> Result<Document, geodate::DateError> {
        Ok(Document {
            id,
            title: record.title.clone(),
            content: record.content.clone(),
            tokens: Vec::new(),
            published_day: geodate::normalize_date(&record.published_at)?,
            source_domain: record.domain.clone(),
            url: record.url.clone(),
            category_hint: record.category_hint.clone(),
            city_hint: record.city_hint.clone(),
            category: None,
            location: None,
        })
    }
}

/// Turn records into documents, skipping the rare record whose shape-valid
/// timestamp is not a real calendar day (e.g. Feb 31). Ids are reassigned so
/// they stay contiguous from 0.
pub fn build_documents(records: &[RawRecord]) -> (Vec<Document>, usize) {
    let mut documents = Vec::with_capacity(records.len());
    let mut skipped = 0;
    for record in records {
        match Document::from_record(documents.len(), record) {
            Ok(doc) => documents.push(doc),
            Err(_) => skipped += 1,
        }
    }
    (documents, skipped)
}
