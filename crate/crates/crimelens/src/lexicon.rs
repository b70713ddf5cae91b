//! Stop list, stem dictionary, and gazetteer loading.
//!
//! All three inputs are plain UTF-8 text files so fixtures stay diffable:
//!
//! * stop list — one term per line
//! * stem map — `inflected root`, two whitespace-separated fields per line
//! * gazetteer — CSV with header `name,kind,parent,map_x,map_y`
//!
//! Lines starting with `#` and blank lines are ignored in every format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected {expected}, got: {got}")]
    Format {
        path: String,
        line: usize,
        expected: String,
        got: String,
    },
    #[error("stem map contains a cycle through {term:?}")]
    Cycle { term: String },
    #[error("location {name:?} ({kind}) names unknown parent {parent:?}")]
    UnknownParent {
        name: String,
        kind: LocationKind,
        parent: String,
    },
    #[error("location {name:?} has coordinate outside [0,1]: {value}")]
    BadCoordinate { name: String, value: String },
}

fn read_utf8(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Lines that carry data: trimmed, skipping blanks and `#` comments.
/// Yields 1-based line numbers for error reporting.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Load a stop list: one term per line, trimmed and deduplicated.
pub fn load_stop_words(path: impl AsRef<Path>) -> Result<BTreeSet<String>, LexiconError> {
    let text = read_utf8(path.as_ref())?;
    Ok(parse_stop_words(&text))
}

pub fn parse_stop_words(text: &str) -> BTreeSet<String> {
    data_lines(text).map(|(_, l)| l.to_string()).collect()
}

/// Load a stem dictionary and collapse inflection chains, so every value is a
/// fixed point: if the file holds `a b` and `b c`, the result maps both `a`
/// and `b` to `c`. Cycles are rejected.
pub fn load_stem_map(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>, LexiconError> {
    let path = path.as_ref();
    let text = read_utf8(path)?;
    parse_stem_map(&text, &path.display().to_string())
}

pub fn parse_stem_map(text: &str, path: &str) -> Result<BTreeMap<String, String>, LexiconError> {
    let mut raw = BTreeMap::new();
    for (line, l) in data_lines(text) {
        let mut fields = l.split_whitespace();
        let (inflected, root) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(LexiconError::Format {
                    path: path.to_string(),
                    line,
                    expected: "two whitespace-separated fields".to_string(),
                    got: l.to_string(),
                })
            }
        };
        raw.insert(inflected.to_string(), root.to_string());
    }
    collapse_stems(raw)
}

/// Resolve every mapping to its final root. A self-mapping (`a a`) is already
/// a fixed point; anything that walks back onto itself is a cycle.
pub fn collapse_stems(
    raw: BTreeMap<String, String>,
) -> Result<BTreeMap<String, String>, LexiconError> {
    let mut collapsed = BTreeMap::new();
    for key in raw.keys() {
        let mut seen = BTreeSet::new();
        seen.insert(key.as_str());
        let mut current = raw[key].as_str();
        while let Some(next) = raw.get(current) {
            if next == current {
                break;
            }
            if !seen.insert(current) {
                return Err(LexiconError::Cycle {
                    term: current.to_string(),
                });
            }
            current = next;
        }
        collapsed.insert(key.clone(), current.to_string());
    }
    Ok(collapsed)
}

/// Stop set plus stem dictionary, immutable once built.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    pub stop_words: BTreeSet<String>,
    pub stem_map: BTreeMap<String, String>,
}

impl Lexicon {
    /// Build from in-memory parts; stem chains are collapsed and cycles
    /// rejected, so the root-closure invariant holds however the map was
    /// assembled.
    pub fn new(
        stop_words: impl IntoIterator<Item = impl Into<String>>,
        stem_pairs: impl IntoIterator<Item = (impl Into<String>, impl Into<String>)>,
    ) -> Result<Self, LexiconError> {
        let stop_words = stop_words
            .into_iter()
            .map(|s| s.into().trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        let raw = stem_pairs
            .into_iter()
            .map(|(k, v)| (k.into(), v.into()))
            .collect();
        Ok(Lexicon {
            stop_words,
            stem_map: collapse_stems(raw)?,
        })
    }

    pub fn empty() -> Self {
        Lexicon::default()
    }

    pub fn load(
        stop_path: impl AsRef<Path>,
        stem_path: impl AsRef<Path>,
    ) -> Result<Self, LexiconError> {
        Ok(Lexicon {
            stop_words: load_stop_words(stop_path)?,
            stem_map: load_stem_map(stem_path)?,
        })
    }

    /// Root form of a term; identity for terms the dictionary does not know.
    pub fn stem<'a>(&'a self, term: &'a str) -> &'a str {
        self.stem_map.get(term).map(String::as_str).unwrap_or(term)
    }

    pub fn is_stop_word(&self, term: &str) -> bool {
        self.stop_words.contains(term)
    }
}

/// Administrative levels, finest last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LocationKind {
    Division,
    District,
    Thana,
}

impl LocationKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "division" => Some(LocationKind::Division),
            "district" => Some(LocationKind::District),
            "thana" => Some(LocationKind::Thana),
            _ => None,
        }
    }
}

impl fmt::Display for LocationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocationKind::Division => "division",
            LocationKind::District => "district",
            LocationKind::Thana => "thana",
        })
    }
}

/// One named place. `map_x`/`map_y` are unitless positions in [0,1] relative
/// to the map canvas, not geodetic coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub name: String,
    pub kind: LocationKind,
    /// Parent name: district for a thana, division (or empty) for a district,
    /// always empty for a division.
    pub parent: String,
    pub map_x: f64,
    pub map_y: f64,
}

/// Validated place table: names unique per (name, kind), parents resolved.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: Vec<Location>,
    by_name: BTreeMap<String, Vec<usize>>,
}

impl Gazetteer {
    pub fn new(entries: Vec<Location>) -> Result<Self, LexiconError> {
        let mut by_name: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (i, loc) in entries.iter().enumerate() {
            if !seen.insert((loc.name.clone(), loc.kind)) {
                return Err(LexiconError::Format {
                    path: "<gazetteer>".to_string(),
                    line: i + 2,
                    expected: "unique (name, kind)".to_string(),
                    got: format!("{} ({})", loc.name, loc.kind),
                });
            }
            for (coord, value) in [("x", loc.map_x), ("y", loc.map_y)] {
                if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                    return Err(LexiconError::BadCoordinate {
                        name: loc.name.clone(),
                        value: format!("map_{coord}={value}"),
                    });
                }
            }
            by_name.entry(loc.name.clone()).or_default().push(i);
        }
        let gazetteer = Gazetteer { entries, by_name };
        for loc in &gazetteer.entries {
            match loc.kind {
                LocationKind::Thana => {
                    if gazetteer.find(&loc.parent, LocationKind::District).is_none() {
                        return Err(LexiconError::UnknownParent {
                            name: loc.name.clone(),
                            kind: loc.kind,
                            parent: loc.parent.clone(),
                        });
                    }
                }
                LocationKind::District => {
                    if !loc.parent.is_empty()
                        && gazetteer.find(&loc.parent, LocationKind::Division).is_none()
                    {
                        return Err(LexiconError::UnknownParent {
                            name: loc.name.clone(),
                            kind: loc.kind,
                            parent: loc.parent.clone(),
                        });
                    }
                }
                LocationKind::Division => {}
            }
        }
        Ok(gazetteer)
    }

    pub fn entries(&self) -> &[Location] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry with this exact name and kind, if any.
    pub fn find(&self, name: &str, kind: LocationKind) -> Option<&Location> {
        self.matches(name).iter().find(|l| l.kind == kind).copied()
    }

    /// All entries carrying this name, across kinds (ঢাকা is a division and a
    /// district; both are returned).
    pub fn matches(&self, name: &str) -> Vec<&Location> {
        self.by_name
            .get(name)
            .map(|idxs| idxs.iter().map(|&i| &self.entries[i]).collect())
            .unwrap_or_default()
    }
}

const GAZETTEER_HEADER: &str = "name,kind,parent,map_x,map_y";

pub fn load_gazetteer(path: impl AsRef<Path>) -> Result<Gazetteer, LexiconError> {
    let path = path.as_ref();
    let text = read_utf8(path)?;
    parse_gazetteer(&text, &path.display().to_string())
}

pub fn parse_gazetteer(text: &str, path: &str) -> Result<Gazetteer, LexiconError> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, header)) if header == GAZETTEER_HEADER => {}
        other => {
            return Err(LexiconError::Format {
                path: path.to_string(),
                line: other.map(|(n, _)| n).unwrap_or(1),
                expected: format!("header {GAZETTEER_HEADER:?}"),
                got: other.map(|(_, l)| l).unwrap_or("").to_string(),
            })
        }
    }
    let mut entries = Vec::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(LexiconError::Format {
                path: path.to_string(),
                line,
                expected: "5 comma-separated fields".to_string(),
                got: l.to_string(),
            });
        }
        let kind = LocationKind::parse(fields[1]).ok_or_else(|| LexiconError::Format {
            path: path.to_string(),
            line,
            expected: "kind in {division, district, thana}".to_string(),
            got: fields[1].to_string(),
        })?;
        let name = fields[0].to_string();
        let parse_coord = |s: &str| -> Result<f64, LexiconError> {
            s.parse::<f64>().map_err(|_| LexiconError::BadCoordinate {
                name: name.clone(),
                value: s.to_string(),
            })
        };
        entries.push(Location {
            name: name.clone(),
            kind,
            parent: fields[2].to_string(),
            map_x: parse_coord(fields[3])?,
            map_y: parse_coord(fields[4])?,
        });
    }
    Gazetteer::new(entries)
}
