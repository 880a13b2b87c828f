//! Batch evaluation of a retrieval method over a question set, and the JSON
//! run file that records it.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{aggregate, Aggregates, QuestionScores, RelevanceJudgments};
use super::metrics::{DEFAULT_CUTOFF, DEFAULT_OVERLAP_THRESHOLD};
use super::wilcoxon::{paired_by_id, WilcoxonResult};
use crate::error::{Error, Result};
use crate::ingest::Question;
use crate::retrieval::{Method, PassageIndex, RankedItem, RankedList, RetrievalContext};
use crate::text::tokenize;

#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    pub method: Method,
    pub k: usize,
    /// Base seed for `rnd`; each question derives its own stream from it.
    pub seed: u64,
    pub overlap_threshold: usize,
}

impl EvalConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            k: DEFAULT_CUTOFF,
            seed: 0,
            overlap_threshold: DEFAULT_OVERLAP_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionResult {
    pub id: String,
    pub ranking: Vec<RankedItem>,
    pub ap: f64,
    pub precision: f64,
    pub recall: f64,
}

impl QuestionResult {
    pub fn scores(&self) -> QuestionScores {
        QuestionScores {
            ap: self.ap,
            precision: self.precision,
            recall: self.recall,
        }
    }
}

/// One evaluated run: per-question rankings and scores plus their aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub method: String,
    pub questions: Vec<QuestionResult>,
    pub aggregates: Aggregates,
}

impl RunResult {
    /// Questions are stored sorted by id, so the run file and the aggregates
    /// do not depend on the order questions were evaluated in.
    pub fn from_questions(method: impl Into<String>, mut questions: Vec<QuestionResult>) -> Result<Self> {
        questions.sort_by(|a, b| a.id.cmp(&b.id));
        let scores: Vec<QuestionScores> = questions.iter().map(QuestionResult::scores).collect();
        Ok(Self {
            method: method.into(),
            aggregates: aggregate(&scores)?,
            questions,
        })
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut sink, self)?;
        writeln!(sink)?;
        Ok(())
    }

    pub fn load<R: Read>(source: R) -> Result<Self> {
        Ok(serde_json::from_reader(source)?)
    }

    /// Per-question values of one metric, keyed by question id.
    pub fn metric_by_question(&self, metric: ScoreMetric) -> BTreeMap<String, f64> {
        self.questions
            .iter()
            .map(|q| {
                let v = match metric {
                    ScoreMetric::Ap => q.ap,
                    ScoreMetric::Precision => q.precision,
                    ScoreMetric::Recall => q.recall,
                };
                (q.id.clone(), v)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreMetric {
    Ap,
    Precision,
    Recall,
}

impl FromStr for ScoreMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ap" => Ok(ScoreMetric::Ap),
            "precision" => Ok(ScoreMetric::Precision),
            "recall" => Ok(ScoreMetric::Recall),
            _ => Err(Error::InvalidArgument(format!("unknown metric {s:?}"))),
        }
    }
}

/// Wilcoxon signed-rank comparison of two runs on one per-question metric.
pub fn compare_runs(a: &RunResult, b: &RunResult, metric: ScoreMetric, alpha: f64) -> Result<WilcoxonResult> {
    paired_by_id(
        &a.metric_by_question(metric),
        &b.metric_by_question(metric),
        alpha,
    )
}

/// An evaluated run plus the non-fatal problems met along the way.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub run: RunResult,
    pub warnings: Vec<String>,
}

/// Ranks and scores every question. Each question is restricted to the
/// indexed part of its reference documents; questions with none are scored
/// on an empty ranking.
pub fn evaluate(
    index: &PassageIndex,
    questions: &[Question],
    ctx: &RetrievalContext<'_>,
    config: &EvalConfig,
) -> Result<Evaluation> {
    let per_question = questions
        .par_iter()
        .map(|q| evaluate_question(index, q, ctx, config))
        .collect::<Result<Vec<_>>>()?;

    let mut results = Vec::with_capacity(per_question.len());
    let mut warnings = Vec::new();
    for (result, mut w) in per_question {
        results.push(result);
        warnings.append(&mut w);
    }
    Ok(Evaluation {
        run: RunResult::from_questions(config.method.as_str(), results)?,
        warnings,
    })
}

fn evaluate_question(
    index: &PassageIndex,
    question: &Question,
    ctx: &RetrievalContext<'_>,
    config: &EvalConfig,
) -> Result<(QuestionResult, Vec<String>)> {
    let mut warnings = Vec::new();
    if question.unreferenced_snippets().next().is_some() {
        warnings.push(format!(
            "question {}: gold snippets cite documents outside its reference list",
            question.id
        ));
    }

    let (known, unknown): (BTreeSet<String>, BTreeSet<String>) = question
        .reference_docs
        .iter()
        .cloned()
        .partition(|d| index.contains_document(d));
    if !unknown.is_empty() && !known.is_empty() {
        warnings.push(format!(
            "question {}: {} reference documents not indexed",
            question.id,
            unknown.len()
        ));
    }

    let ranked = if known.is_empty() {
        warnings.push(format!(
            "question {}: no reference document is indexed; scored with an empty ranking",
            question.id
        ));
        RankedList {
            question_id: question.id.clone(),
            method: config.method,
            items: Vec::new(),
        }
    } else if config.method == Method::Rnd {
        let seed = config.seed ^ fnv1a(question.id.as_bytes());
        index.random_baseline(&question.id, &known, config.k, seed)?
    } else {
        let tokens = tokenize(&question.body);
        index.rank(&question.id, &tokens, config.method, config.k, ctx, Some(&known))?
    };

    let judgments = RelevanceJudgments::from_index(index, question, config.overlap_threshold);
    let scores = QuestionScores::compute(&ranked, &judgments, config.k);
    Ok((
        QuestionResult {
            id: question.id.clone(),
            ranking: ranked.items,
            ap: scores.ap,
            precision: scores.precision,
            recall: scores.recall,
        },
        warnings,
    ))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
