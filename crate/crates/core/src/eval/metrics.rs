//! Snippet-based relevance and cutoff metrics.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Question;
use crate::retrieval::{Passage, PassageIndex, RankedList};
use crate::text::tokenize;

/// Shared contiguous tokens needed for a passage to match a longer snippet.
pub const DEFAULT_OVERLAP_THRESHOLD: usize = 5;

/// Ranking cutoff for all metrics.
pub const DEFAULT_CUTOFF: usize = 10;

/// True when `needle` occurs as a contiguous run inside `haystack`.
fn contains_run(haystack: &[String], needle: &[String]) -> bool {
    !needle.is_empty()
        && needle.len() <= haystack.len()
        && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Length of the longest token run shared by `a` and `b`.
pub fn longest_common_run(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    let mut best = 0;
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { 0 };
            best = best.max(cur[j + 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    best
}

/// Token-level match between a passage and a snippet of the same document.
pub fn tokens_match(passage: &[String], snippet: &[String], threshold: usize) -> bool {
    if passage.is_empty() || snippet.is_empty() {
        return false;
    }
    contains_run(snippet, passage)
        || contains_run(passage, snippet)
        || longest_common_run(passage, snippet) >= threshold
}

/// Whether `passage` matches any gold `(doc_id, snippet)` pair.
pub fn judge_relevance(passage: &Passage, gold: &[(String, String)], threshold: usize) -> bool {
    let tokens = tokenize(&passage.text);
    gold.iter()
        .filter(|(doc, _)| *doc == passage.doc_id)
        .any(|(_, snippet)| tokens_match(tokens.tokens(), tokenize(snippet).tokens(), threshold))
}

/// Relevant passage ids for one question.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelevanceJudgments {
    pub question_id: String,
    pub relevant: BTreeSet<String>,
}

impl RelevanceJudgments {
    pub fn new(question_id: impl Into<String>, relevant: impl IntoIterator<Item = String>) -> Self {
        Self {
            question_id: question_id.into(),
            relevant: relevant.into_iter().collect(),
        }
    }

    /// Judges every indexed passage of every gold-snippet document.
    pub fn from_index(index: &PassageIndex, question: &Question, threshold: usize) -> Self {
        let gold_docs: BTreeSet<&str> = question.gold_snippets.iter().map(|(d, _)| d.as_str()).collect();
        let snippets: Vec<(&str, Vec<String>)> = question
            .gold_snippets
            .iter()
            .map(|(d, s)| (d.as_str(), tokenize(s).tokens().to_vec()))
            .collect();
        let mut relevant = BTreeSet::new();
        for doc in gold_docs {
            for passage in index.document_passages(doc) {
                let tokens = tokenize(&passage.text);
                let hit = snippets
                    .iter()
                    .filter(|(d, _)| *d == doc)
                    .any(|(_, s)| tokens_match(tokens.tokens(), s, threshold));
                if hit {
                    relevant.insert(passage.passage_id.clone());
                }
            }
        }
        Self {
            question_id: question.id.clone(),
            relevant,
        }
    }

    pub fn n_relevant(&self) -> usize {
        self.relevant.len()
    }

    pub fn is_relevant(&self, passage_id: &str) -> bool {
        self.relevant.contains(passage_id)
    }
}

fn hits<'a>(
    ranked: &'a RankedList,
    judg: &'a RelevanceJudgments,
    k: usize,
) -> impl Iterator<Item = bool> + 'a {
    ranked
        .items
        .iter()
        .take(k)
        .map(|i| judg.is_relevant(&i.passage_id))
}

/// Relevant share of the first `min(k, |ranked|)` items.
pub fn precision_at_k(ranked: &RankedList, judg: &RelevanceJudgments, k: usize) -> f64 {
    let depth = k.min(ranked.len());
    if depth == 0 {
        return 0.0;
    }
    hits(ranked, judg, k).filter(|&h| h).count() as f64 / depth as f64
}

pub fn recall_at_k(ranked: &RankedList, judg: &RelevanceJudgments, k: usize) -> f64 {
    if judg.n_relevant() == 0 {
        return 0.0;
    }
    hits(ranked, judg, k).filter(|&h| h).count() as f64 / judg.n_relevant() as f64
}

/// Sum of precision at each relevant rank within the cutoff, over `min(n_relevant, k)`.
pub fn average_precision_at_k(ranked: &RankedList, judg: &RelevanceJudgments, k: usize) -> f64 {
    let n_rel = judg.n_relevant();
    if n_rel == 0 || k == 0 {
        return 0.0;
    }
    let mut found = 0usize;
    let mut sum = 0.0;
    for (r, hit) in hits(ranked, judg, k).enumerate() {
        if hit {
            found += 1;
            sum += found as f64 / (r + 1) as f64;
        }
    }
    sum / n_rel.min(k) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuestionScores {
    pub ap: f64,
    pub precision: f64,
    pub recall: f64,
}

impl QuestionScores {
    pub fn compute(ranked: &RankedList, judg: &RelevanceJudgments, k: usize) -> Self {
        Self {
            ap: average_precision_at_k(ranked, judg, k),
            precision: precision_at_k(ranked, judg, k),
            recall: recall_at_k(ranked, judg, k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Aggregates {
    pub map: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Means over questions; F1 is taken from the mean precision and mean recall.
pub fn aggregate<'a, I>(scores: I) -> Result<Aggregates>
where
    I: IntoIterator<Item = &'a QuestionScores>,
{
    let (mut n, mut ap, mut p, mut r) = (0usize, 0.0, 0.0, 0.0);
    for s in scores {
        n += 1;
        ap += s.ap;
        p += s.precision;
        r += s.recall;
    }
    if n == 0 {
        return Err(Error::Empty { what: "question set" });
    }
    let n = n as f64;
    let (precision, recall) = (p / n, r / n);
    Ok(Aggregates {
        map: ap / n,
        precision,
        recall,
        f1: f1(precision, recall),
    })
}
