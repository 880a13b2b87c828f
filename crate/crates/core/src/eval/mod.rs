//! Relevance judgments, cutoff metrics, run files and paired significance tests.

mod metrics;
mod run;
mod wilcoxon;

pub use metrics::{
    aggregate, average_precision_at_k, f1, judge_relevance, longest_common_run, precision_at_k, recall_at_k,
    tokens_match, Aggregates, QuestionScores, RelevanceJudgments, DEFAULT_CUTOFF, DEFAULT_OVERLAP_THRESHOLD,
};
pub use run::{compare_runs, evaluate, EvalConfig, Evaluation, QuestionResult, RunResult, ScoreMetric};
pub use wilcoxon::{
    paired_by_id, wilcoxon_signed_rank, PValueMethod, SignedRanks, WilcoxonResult, EXACT_MAX_N,
};
