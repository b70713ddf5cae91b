//! Duplicate-story detection: TF-IDF vectors, cosine similarity, and the
//! three-condition rule.
//!
//! Two documents are the same story iff their cosine similarity strictly
//! exceeds the threshold (0.60 by default) AND they were published the same
//! day AND they resolve to the same location. Every pair of the collection
//! is compared; with N documents that is N(N−1)/2 cosine evaluations.
//!
//! The default term weight is `tf · (ln((N+1)/(df+1)) + 1)`. The smoothed
//! form keeps terms that appear in every document at weight `tf` instead of
//! zeroing them out, which matters when comparing a pair in isolation; the
//! plain `tf · ln(N/df)` weighting is available as [`IdfMode::Plain`].

use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::corpus::Document;
use crate::geodate::ResolvedLocation;
use crate::textpipe::TermCounts;

pub const DEFAULT_DUP_THRESHOLD: f64 = 0.60;

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("cannot build vectors over an empty collection")]
    EmptyCollection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdfMode {
    /// `ln((N+1)/(df+1)) + 1`
    #[default]
    Smoothed,
    /// `ln(N/df)`
    Plain,
}

impl IdfMode {
    pub fn idf(self, doc_count: usize, doc_frequency: usize) -> f64 {
        let (n, df) = (doc_count as f64, doc_frequency as f64);
        match self {
            IdfMode::Smoothed => ((n + 1.0) / (df + 1.0)).ln() + 1.0,
            IdfMode::Plain => (n / df).ln(),
        }
    }
}

/// Sparse nonnegative term vector with its Euclidean norm.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermVector {
    /// Strictly positive weights; zero entries are omitted.
    pub weights: BTreeMap<String, f64>,
    pub norm: f64,
}

impl TermVector {
    /// Build from raw weights, dropping non-positive entries.
    pub fn from_weights(weights: BTreeMap<String, f64>) -> TermVector {
        let weights: BTreeMap<String, f64> =
            weights.into_iter().filter(|(_, w)| *w > 0.0).collect();
        let norm = weights.values().map(|w| w * w).sum::<f64>().sqrt();
        TermVector { weights, norm }
    }

    /// Dot product, iterating shared terms in sorted order so that
    /// `a.dot(b)` and `b.dot(a)` are bit-identical.
    pub fn dot(&self, other: &TermVector) -> f64 {
        self.weights
            .iter()
            .filter_map(|(term, w)| other.weights.get(term).map(|v| w * v))
            .sum()
    }
}

/// TF-IDF vectors for every document, with document frequencies taken over
/// the full input collection.
pub fn build_vectors(docs: &[Document], mode: IdfMode) -> Result<Vec<TermVector>, SimilarityError> {
    if docs.is_empty() {
        return Err(SimilarityError::EmptyCollection);
    }
    let mut document_frequency: BTreeMap<&str, usize> = BTreeMap::new();
    let per_doc_counts: Vec<TermCounts> = docs
        .iter()
        .map(|d| TermCounts::from_tokens(&d.tokens))
        .collect();
    for counts in &per_doc_counts {
        for term in counts.counts.keys() {
            *document_frequency.entry(term).or_insert(0) += 1;
        }
    }
    Ok(per_doc_counts
        .iter()
        .map(|counts| {
            let weights = counts
                .counts
                .iter()
                .map(|(term, &tf)| {
                    let idf = mode.idf(docs.len(), document_frequency[term.as_str()]);
                    (term.clone(), tf as f64 * idf)
                })
                .collect();
            TermVector::from_weights(weights)
        })
        .collect())
}

/// Cosine of two nonnegative vectors: 0 when either is empty, otherwise in
/// [0, 1] up to rounding.
pub fn cosine(a: &TermVector, b: &TermVector) -> f64 {
    if a.norm == 0.0 || b.norm == 0.0 {
        return 0.0;
    }
    a.dot(b) / (a.norm * b.norm)
}

/// Outcome of comparing one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplicateVerdict {
    pub doc_a: usize,
    pub doc_b: usize,
    pub similarity: f64,
    pub same_date: bool,
    pub same_location: bool,
    /// similarity > threshold ∧ same_date ∧ same_location
    pub duplicate: bool,
}

/// Locations compare at the most specific level both sides resolved: thana
/// when both have one, else district. Two absent locations are equal;
/// absent against present is not.
fn same_location(a: Option<&ResolvedLocation>, b: Option<&ResolvedLocation>) -> bool {
    fn thana(loc: Option<&ResolvedLocation>) -> Option<&str> {
        loc.and_then(|l| l.thana.as_ref()).map(|t| t.name.as_str())
    }
    fn district(loc: Option<&ResolvedLocation>) -> Option<&str> {
        loc.and_then(|l| l.district.as_ref()).map(|d| d.name.as_str())
    }
    match (thana(a), thana(b)) {
        (Some(ta), Some(tb)) => ta == tb,
        _ => district(a) == district(b),
    }
}

/// Apply the duplicate rule to one pair given its precomputed similarity.
pub fn judge_pair(a: &Document, b: &Document, similarity: f64, threshold: f64) -> DuplicateVerdict {
    let same_date = a.published_day == b.published_day;
    let same_location = same_location(a.location.as_ref(), b.location.as_ref());
    DuplicateVerdict {
        doc_a: a.id,
        doc_b: b.id,
        similarity,
        same_date,
        same_location,
        duplicate: similarity > threshold && same_date && same_location,
    }
}

/// One group of mutual duplicates (by transitive closure); the lowest-id
/// member survives.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplicateGroup {
    pub survivor: usize,
    /// Removed ids with their cosine similarity to the survivor.
    pub removed: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct DedupReport {
    /// Documents that remain, in input order.
    pub survivors: Vec<Document>,
    /// Every pair verdict whose similarity exceeded half the threshold,
    /// duplicates or not, kept for audit.
    pub verdicts: Vec<DuplicateVerdict>,
    /// Always N(N−1)/2.
    pub pairs_evaluated: u64,
    pub groups: Vec<DuplicateGroup>,
}

fn find(parents: &mut Vec<usize>, i: usize) -> usize {
    if parents[i] != i {
        let root = find(parents, parents[i]);
        parents[i] = root;
    }
    parents[i]
}

/// Scan all pairs and drop duplicate stories. Duplicates are grouped by the
/// transitive closure of the pairwise relation; within each group every
/// document except the one with the smallest id is removed.
pub fn dedup(docs: &[Document], threshold: f64, mode: IdfMode) -> DedupReport {
    if docs.is_empty() {
        return DedupReport::default();
    }
    let vectors = build_vectors(docs, mode).expect("non-empty collection");

    let pairs: Vec<(usize, usize)> = (0..docs.len())
        .flat_map(|i| (i + 1..docs.len()).map(move |j| (i, j)))
        .collect();
    // deterministic regardless of partitioning: indexed collect keeps order
    let judged: Vec<DuplicateVerdict> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let sim = cosine(&vectors[i], &vectors[j]);
            judge_pair(&docs[i], &docs[j], sim, threshold)
        })
        .collect();

    let mut parents: Vec<usize> = (0..docs.len()).collect();
    let mut verdicts = Vec::new();
    for (&(i, j), verdict) in pairs.iter().zip(&judged) {
        if verdict.duplicate {
            let (ri, rj) = (find(&mut parents, i), find(&mut parents, j));
            if ri != rj {
                parents[ri.max(rj)] = ri.min(rj);
            }
        }
        if verdict.similarity > threshold * 0.5 {
            verdicts.push(verdict.clone());
        }
    }

    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..docs.len() {
        let root = find(&mut parents, i);
        members.entry(root).or_default().push(i);
    }
    let mut removed = vec![false; docs.len()];
    let mut groups = Vec::new();
    for (_, group) in members {
        if group.len() < 2 {
            continue;
        }
        // group members come out in index order; docs are sorted by id
        let survivor = *group.iter().min_by_key(|&&i| docs[i].id).unwrap();
        let mut group_removed = Vec::new();
        for &i in &group {
            if i != survivor {
                removed[i] = true;
                group_removed.push((docs[i].id, cosine(&vectors[survivor], &vectors[i])));
            }
        }
        groups.push(DuplicateGroup {
            survivor: docs[survivor].id,
            removed: group_removed,
        });
    }

    DedupReport {
        survivors: docs
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed[*i])
            .map(|(_, d)| d.clone())
            .collect(),
        verdicts,
        pairs_evaluated: pairs.len() as u64,
        groups,
    }
}
