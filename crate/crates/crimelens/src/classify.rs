//! Multinomial Naive Bayes over the top-word vocabulary.
//!
//! Priors are document fractions: `P(c) = docs in c / total docs`. Term
//! likelihoods use add-one smoothing over the vocabulary,
//!
//! ```text
//! P(t|c) = (T_ct + 1) / (total_c + B)
//! ```
//!
//! where `T_ct` counts occurrences of `t` in category-`c` training tokens,
//! `total_c` is the sum of `T_ct` over the vocabulary, and `B` is the
//! vocabulary size. Scoring adds natural logarithms instead of multiplying
//! probabilities, which cannot underflow and picks the same winner; the
//! argmax is invariant under the choice of log base.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::corpus::Document;
use crate::textpipe::FeatureVocabulary;

/// Default category labels, in tie-break order.
pub const DEFAULT_CATEGORIES: [&str; 5] =
    ["crime", "sports", "entertainment", "technology", "others"];

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("category {0:?} has no training documents")]
    EmptyCategory(String),
    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model line {line}: {message}")]
    ModelFormat { line: usize, message: String },
}

/// A trained categorizer. Immutable; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct NBModel {
    categories: Vec<String>,
    priors: Vec<f64>,
    /// term → per-category occurrence counts, aligned with `categories`.
    /// Every vocabulary term has an entry, zeros included.
    term_counts: BTreeMap<String, Vec<u64>>,
    category_totals: Vec<u64>,
    vocabulary: BTreeSet<String>,
}

/// Scoring outcome for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct Categorization {
    pub category: String,
    /// Natural-log score per category, in declared category order.
    pub log_scores: Vec<(String, f64)>,
    /// Winner score minus runner-up score; infinite for a one-category model.
    pub margin: f64,
}

/// Train on normalized, labeled documents. Every declared category needs at
/// least one document; every document label must be declared.
pub fn train(
    labeled: &[(&Document, &str)],
    vocab: &FeatureVocabulary,
    categories: &[String],
) -> Result<NBModel, ClassifyError> {
    if vocab.is_empty() {
        return Err(ClassifyError::EmptyVocabulary);
    }
    let index_of = |label: &str| categories.iter().position(|c| c == label);

    let mut doc_counts = vec![0u64; categories.len()];
    let mut term_counts: BTreeMap<String, Vec<u64>> = vocab
        .terms
        .iter()
        .map(|t| (t.clone(), vec![0u64; categories.len()]))
        .collect();
    for (doc, label) in labeled {
        let ci = index_of(label).ok_or_else(|| ClassifyError::UnknownCategory(label.to_string()))?;
        doc_counts[ci] += 1;
        for token in &doc.tokens {
            if let Some(counts) = term_counts.get_mut(token.as_str()) {
                counts[ci] += 1;
            }
        }
    }
    if let Some(ci) = doc_counts.iter().position(|&n| n == 0) {
        return Err(ClassifyError::EmptyCategory(categories[ci].clone()));
    }

    let total_docs: u64 = doc_counts.iter().sum();
    let priors = doc_counts
        .iter()
        .map(|&n| n as f64 / total_docs as f64)
        .collect();
    let category_totals = (0..categories.len())
        .map(|ci| term_counts.values().map(|v| v[ci]).sum())
        .collect();
    Ok(NBModel {
        categories: categories.to_vec(),
        priors,
        term_counts,
        category_totals,
        vocabulary: vocab.terms.clone(),
    })
}

impl NBModel {
    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn prior(&self, category: &str) -> Result<f64, ClassifyError> {
        Ok(self.priors[self.category_index(category)?])
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn term_count(&self, term: &str, category: &str) -> Result<u64, ClassifyError> {
        let ci = self.category_index(category)?;
        Ok(self.term_counts.get(term).map(|v| v[ci]).unwrap_or(0))
    }

    pub fn category_total(&self, category: &str) -> Result<u64, ClassifyError> {
        Ok(self.category_totals[self.category_index(category)?])
    }

    fn category_index(&self, category: &str) -> Result<usize, ClassifyError> {
        self.categories
            .iter()
            .position(|c| c == category)
            .ok_or_else(|| ClassifyError::UnknownCategory(category.to_string()))
    }

    /// Add-one smoothed `P(t|c)`. Strictly positive for any term, seen or
    /// not.
    pub fn smoothed_likelihood(&self, term: &str, category: &str) -> Result<f64, ClassifyError> {
        Ok(self.likelihood_at(term, self.category_index(category)?))
    }

    fn likelihood_at(&self, term: &str, ci: usize) -> f64 {
        let t_ct = self.term_counts.get(term).map(|v| v[ci]).unwrap_or(0);
        (t_ct as f64 + 1.0) / (self.category_totals[ci] as f64 + self.vocabulary.len() as f64)
    }

    /// Score a normalized document: log prior plus the sum of log smoothed
    /// likelihoods over its vocabulary tokens. Tokens outside the vocabulary
    /// are skipped; each occurrence of a vocabulary token counts. A document
    /// with no vocabulary tokens is scored by priors alone. Ties break
    /// toward the earlier-declared category.
    pub fn categorize(&self, doc: &Document) -> Categorization {
        let mut log_scores = Vec::with_capacity(self.categories.len());
        for (ci, category) in self.categories.iter().enumerate() {
            let mut score = self.priors[ci].ln();
            for token in &doc.tokens {
                if self.vocabulary.contains(token.as_str()) {
                    score += self.likelihood_at(token, ci).ln();
                }
            }
            log_scores.push((category.clone(), score));
        }

        let mut winner = 0;
        for i in 1..log_scores.len() {
            if log_scores[i].1 > log_scores[winner].1 {
                winner = i;
            }
        }
        let runner_up = log_scores
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != winner)
            .map(|(_, (_, s))| *s)
            .fold(f64::NEG_INFINITY, f64::max);
        Categorization {
            category: log_scores[winner].0.clone(),
            margin: log_scores[winner].1 - runner_up,
            log_scores,
        }
    }

    /// Serialize to the tab-separated text format. Lossless: `parse` returns
    /// an equal model, priors bit for bit.
    pub fn to_text(&self) -> String {
        let mut out = String::from("crimelens-nb 1\n");
        out.push_str("categories");
        for c in &self.categories {
            out.push('\t');
            out.push_str(c);
        }
        out.push('\n');
        for (c, p) in self.categories.iter().zip(&self.priors) {
            out.push_str(&format!("prior\t{c}\t{p}\n"));
        }
        for term in &self.vocabulary {
            out.push_str(&format!("vocab\t{term}\n"));
        }
        for (ci, c) in self.categories.iter().enumerate() {
            for (term, counts) in &self.term_counts {
                if counts[ci] > 0 {
                    out.push_str(&format!("count\t{c}\t{term}\t{}\n", counts[ci]));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<NBModel, ClassifyError> {
        let err = |line: usize, message: &str| ClassifyError::ModelFormat {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "crimelens-nb 1")) => {}
            _ => return Err(err(1, "expected header 'crimelens-nb 1'")),
        }

        let mut categories: Vec<String> = Vec::new();
        let mut priors: BTreeMap<String, f64> = BTreeMap::new();
        let mut vocabulary: BTreeSet<String> = BTreeSet::new();
        let mut counts: Vec<(String, String, u64)> = Vec::new();
        for (i, line) in lines {
            let n = i + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields[0] {
                "categories" => {
                    categories = fields[1..].iter().map(|s| s.to_string()).collect();
                    if categories.is_empty() {
                        return Err(err(n, "no categories listed"));
                    }
                }
                "prior" if fields.len() == 3 => {
                    let p: f64 = fields[2].parse().map_err(|_| err(n, "bad prior value"))?;
                    priors.insert(fields[1].to_string(), p);
                }
                "vocab" if fields.len() == 2 => {
                    vocabulary.insert(fields[1].to_string());
                }
                "count" if fields.len() == 4 => {
                    let c: u64 = fields[3].parse().map_err(|_| err(n, "bad count value"))?;
                    counts.push((fields[1].to_string(), fields[2].to_string(), c));
                }
                _ => return Err(err(n, "unrecognized line")),
            }
        }

        if categories.is_empty() {
            return Err(err(0, "missing categories line"));
        }
        if vocabulary.is_empty() {
            return Err(ClassifyError::EmptyVocabulary);
        }
        let priors: Vec<f64> = categories
            .iter()
            .map(|c| {
                priors
                    .get(c)
                    .copied()
                    .ok_or_else(|| ClassifyError::UnknownCategory(c.clone()))
            })
            .collect::<Result<_, _>>()?;

        let mut term_counts: BTreeMap<String, Vec<u64>> = vocabulary
            .iter()
            .map(|t| (t.clone(), vec![0u64; categories.len()]))
            .collect();
        for (category, term, count) in counts {
            let ci = categories
                .iter()
                .position(|c| *c == category)
                .ok_or(ClassifyError::UnknownCategory(category))?;
            let row = term_counts
                .get_mut(&term)
                .ok_or(err(0, "count line for term outside vocabulary"))?;
            row[ci] = count;
        }
        let category_totals = (0..categories.len())
            .map(|ci| term_counts.values().map(|v| v[ci]).sum())
            .collect();
        Ok(NBModel {
            categories,
            priors,
            term_counts,
            category_totals,
            vocabulary,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ClassifyError> {
        fs::write(path.as_ref(), self.to_text()).map_err(|source| ClassifyError::Io {
            path: path.as_ref().display().to_string(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<NBModel, ClassifyError> {
        let text = fs::read_to_string(path.as_ref()).map_err(|source| ClassifyError::Io {
            path: path.as_ref().display().to_string(),
            source,
        })?;
        NBModel::parse(&text)
    }
}
