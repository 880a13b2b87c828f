//! Two-sided Wilcoxon signed-rank test for paired per-question scores.
//!
//! Zero differences are dropped. The remaining absolute differences get
//! average ranks, and `W = min(W+, W-)`. Up to [`EXACT_MAX_N`] non-zero pairs
//! the p-value is the exact share of the `2^n` sign assignments whose
//! statistic is at most the observed one; beyond that a tie-corrected normal
//! approximation with continuity correction is used.

use std::collections::BTreeMap;

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

pub const EXACT_MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PValueMethod {
    Exact,
    NormalApproximation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WilcoxonResult {
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
    /// Number of non-zero differences.
    pub n: usize,
    pub method: PValueMethod,
}

/// Ranks of the absolute values of non-zero differences.
///
/// Ranks are stored doubled so that average ranks of ties stay integral.
#[derive(Debug, Clone)]
pub struct SignedRanks {
    doubled_ranks: Vec<u64>,
    positive: Vec<bool>,
    tie_sizes: Vec<usize>,
}

impl SignedRanks {
    pub fn new(differences: &[f64]) -> Self {
        let mut nonzero: Vec<f64> = differences.iter().copied().filter(|d| *d != 0.0).collect();
        nonzero.sort_by(|a, b| a.abs().total_cmp(&b.abs()));

        let n = nonzero.len();
        let mut doubled_ranks = vec![0u64; n];
        let mut tie_sizes = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && nonzero[j + 1].abs() == nonzero[i].abs() {
                j += 1;
            }
            // Positions i..=j hold 1-based ranks i+1..=j+1; twice their mean is i+j+2.
            for r in &mut doubled_ranks[i..=j] {
                *r = (i + j + 2) as u64;
            }
            tie_sizes.push(j - i + 1);
            i = j + 1;
        }
        Self {
            doubled_ranks,
            positive: nonzero.iter().map(|d| *d > 0.0).collect(),
            tie_sizes,
        }
    }

    pub fn n(&self) -> usize {
        self.doubled_ranks.len()
    }

    fn doubled_total(&self) -> u64 {
        self.doubled_ranks.iter().sum()
    }

    fn doubled_w_plus(&self) -> u64 {
        self.doubled_ranks
            .iter()
            .zip(&self.positive)
            .filter(|(_, &p)| p)
            .map(|(r, _)| r)
            .sum()
    }

    pub fn w_plus(&self) -> f64 {
        self.doubled_w_plus() as f64 / 2.0
    }

    pub fn w_minus(&self) -> f64 {
        (self.doubled_total() - self.doubled_w_plus()) as f64 / 2.0
    }

    pub fn statistic(&self) -> f64 {
        self.w_plus().min(self.w_minus())
    }

    /// Exact two-sided p-value, counting sign assignments by subset-sum.
    pub fn exact_p_value(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            return 1.0;
        }
        let total = self.doubled_total() as usize;
        let plus = self.doubled_w_plus() as usize;
        let observed = plus.min(total - plus);

        // ways[s]: number of sign assignments whose doubled W+ equals s.
        let mut ways = vec![0u128; total + 1];
        ways[0] = 1;
        let mut reach = 0;
        for &r in &self.doubled_ranks {
            let r = r as usize;
            for s in (0..=reach).rev() {
                if ways[s] != 0 {
                    ways[s + r] += ways[s];
                }
            }
            reach += r;
        }
        let extreme: u128 = ways
            .iter()
            .enumerate()
            .filter(|&(s, _)| s.min(total - s) <= observed)
            .map(|(_, &c)| c)
            .sum();
        (extreme as f64 / 2f64.powi(n as i32)).min(1.0)
    }

    /// Normal approximation with tie correction and a 0.5 continuity correction.
    pub fn normal_p_value(&self) -> f64 {
        let n = self.n() as f64;
        if self.n() == 0 {
            return 1.0;
        }
        let mean = n * (n + 1.0) / 4.0;
        let ties: f64 = self
            .tie_sizes
            .iter()
            .map(|&t| {
                let t = t as f64;
                t * t * t - t
            })
            .sum();
        let variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ties / 48.0;
        if variance <= 0.0 {
            return 1.0;
        }
        let z = ((self.statistic() - mean).abs() - 0.5).max(0.0) / variance.sqrt();
        erfc(z / std::f64::consts::SQRT_2).min(1.0)
    }
}

/// Paired two-sided test of `a` against `b`.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alpha: f64) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::Empty {
            what: "paired sample",
        });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let ranks = SignedRanks::new(&diffs);
    let n = ranks.n();
    let (p_value, method) = if n <= EXACT_MAX_N {
        (ranks.exact_p_value(), PValueMethod::Exact)
    } else {
        (ranks.normal_p_value(), PValueMethod::NormalApproximation)
    };
    Ok(WilcoxonResult {
        statistic: ranks.statistic(),
        p_value,
        significant: n > 0 && p_value < alpha,
        n,
        method,
    })
}

/// Paired test over two score maps keyed by question id.
///
/// Fails when the key sets differ, naming the ids found in only one map.
pub fn paired_by_id(
    a: &BTreeMap<String, f64>,
    b: &BTreeMap<String, f64>,
    alpha: f64,
) -> Result<WilcoxonResult> {
    let mismatch: Vec<&str> = a
        .keys()
        .filter(|k| !b.contains_key(*k))
        .chain(b.keys().filter(|k| !a.contains_key(*k)))
        .map(String::as_str)
        .collect();
    if !mismatch.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "question sets differ; ids in only one run: {}",
            mismatch.join(", ")
        )));
    }
    let xs: Vec<f64> = a.values().copied().collect();
    let ys: Vec<f64> = b.values().copied().collect();
    wilcoxon_signed_rank(&xs, &ys, alpha)
}
