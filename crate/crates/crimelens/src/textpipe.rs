//! Text normalization: tokenize, stem, stop-filter, count, and pick the
//! threshold-passing top words used as classifier features.
//!
//! Token characters are Bangla letters and signs (U+0980–U+09FF minus the
//! digits ০–৯) plus ASCII letters, which are lowercased. Everything else —
//! punctuation, whitespace, Bangla and ASCII digits — separates tokens, so
//! ages and amounts never become features.
//!
//! Stop filtering runs after stemming: an inflected form of a stop word is
//! removed too, and `normalize` stays idempotent because stem roots are
//! fixed points.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::Document;
use crate::lexicon::Lexicon;

fn is_token_char(ch: char) -> bool {
    let bangla = ('\u{0980}'..='\u{09FF}').contains(&ch);
    let bangla_digit = ('\u{09E6}'..='\u{09EF}').contains(&ch);
    (bangla && !bangla_digit) || ch.is_ascii_alphabetic()
}

/// Split text into raw terms, preserving order. Total on any input.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if is_token_char(ch) {
            current.push(ch.to_ascii_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Stem every token to its root, then drop tokens whose stemmed form is a
/// stop word. Order is preserved.
pub fn normalize(tokens: &[String], lexicon: &Lexicon) -> Vec<String> {
    tokens
        .iter()
        .map(|t| lexicon.stem(t).to_string())
        .filter(|root| !lexicon.is_stop_word(root))
        .collect()
}

/// Raw tokens of a document, title first, then content, then nothing else.
pub fn raw_tokens(doc: &Document) -> Vec<String> {
    let mut tokens = tokenize(&doc.title);
    tokens.extend(tokenize(&doc.content));
    tokens
}

/// Fill `doc.tokens` with the normalized title+content token stream.
pub fn normalize_document(doc: &mut Document, lexicon: &Lexicon) {
    doc.tokens = normalize(&raw_tokens(doc), lexicon);
}

/// Term frequencies of one token stream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermCounts {
    /// Per-term count; terms with count 0 are never stored.
    pub counts: BTreeMap<String, u64>,
    /// Token count; always the sum of all entries in `counts`.
    pub total: u64,
}

impl TermCounts {
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> TermCounts {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for token in tokens {
            *counts.entry(token.as_ref().to_string()).or_insert(0) += 1;
        }
        TermCounts {
            counts,
            total: tokens.len() as u64,
        }
    }

    pub fn get(&self, term: &str) -> u64 {
        self.counts.get(term).copied().unwrap_or(0)
    }
}

/// The classifier feature set: every non-stop term whose corpus-wide count
/// strictly exceeds the threshold, with per-category occurrence counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureVocabulary {
    pub terms: BTreeSet<String>,
    /// Categories in first-appearance order over the labeled input.
    pub categories: Vec<String>,
    /// term → category → occurrences; zero entries are kept so every
    /// vocabulary term lists every category.
    pub per_category_counts: BTreeMap<String, BTreeMap<String, u64>>,
}

impl FeatureVocabulary {
    /// Assemble a vocabulary directly from terms, without threshold
    /// filtering. Intended for tests and small experiments.
    pub fn from_terms<S: Into<String>>(terms: impl IntoIterator<Item = S>) -> FeatureVocabulary {
        FeatureVocabulary {
            terms: terms.into_iter().map(Into::into).collect(),
            categories: Vec::new(),
            per_category_counts: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn count(&self, term: &str, category: &str) -> u64 {
        self.per_category_counts
            .get(term)
            .and_then(|per| per.get(category).copied())
            .unwrap_or(0)
    }
}

/// Extract top words from normalized, labeled documents: a term qualifies iff
/// its count over the whole corpus is strictly greater than `threshold` and
/// it is not a stop word.
pub fn extract_top_words(
    labeled: &[(&Document, &str)],
    lexicon: &Lexicon,
    threshold: u64,
) -> FeatureVocabulary {
    let mut categories: Vec<String> = Vec::new();
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    let mut by_category: BTreeMap<&str, BTreeMap<&str, u64>> = BTreeMap::new();

    for (doc, category) in labeled {
        if !categories.iter().any(|c| c == category) {
            categories.push(category.to_string());
        }
        for token in &doc.tokens {
            *totals.entry(token).or_insert(0) += 1;
            *by_category
                .entry(token)
                .or_default()
                .entry(category)
                .or_insert(0) += 1;
        }
    }

    let mut vocabulary = FeatureVocabulary {
        categories,
        ..FeatureVocabulary::default()
    };
    for (term, &total) in &totals {
        if total <= threshold || lexicon.is_stop_word(term) {
            continue;
        }
        vocabulary.terms.insert(term.to_string());
        let per = by_category.get(term);
        let mut counts = BTreeMap::new();
        for category in &vocabulary.categories {
            let n = per
                .and_then(|m| m.get(category.as_str()).copied())
                .unwrap_or(0);
            counts.insert(category.clone(), n);
        }
        vocabulary.per_category_counts.insert(term.to_string(), counts);
    }
    vocabulary
}
