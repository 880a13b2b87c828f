//! Test-only reference implementations, written directly from the formulas
//! and kept separate from the library's code paths.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::PathBuf;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/mini")
        .join(name)
}

/// Lowercase, split on anything that is not a letter or digit.
pub fn oracle_tokens(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

pub struct OracleIdf {
    n: f64,
    df: HashMap<String, f64>,
}

impl OracleIdf {
    pub fn from_units(units: &[Vec<String>]) -> Self {
        let mut df: HashMap<String, f64> = HashMap::new();
        for u in units {
            let distinct: HashSet<&String> = u.iter().collect();
            for t in distinct {
                *df.entry(t.clone()).or_default() += 1.0;
            }
        }
        Self {
            n: units.len() as f64,
            df,
        }
    }

    pub fn idf(&self, t: &str) -> f64 {
        ((self.n + 1.0) / (self.df.get(t).copied().unwrap_or(0.0) + 1.0)).ln()
    }
}

/// `(1/Σw) Σ w_i x_i` over tokens with a vector; zero vector if nothing is covered.
/// Terms are added in sorted token order.
pub fn oracle_centroid(
    tokens: &[String],
    vectors: &HashMap<String, Vec<f64>>,
    dim: usize,
    weight: &dyn Fn(&str) -> f64,
) -> Vec<f64> {
    let mut weighted = vec![0.0; dim];
    let mut norm = 0.0;
    let mut sorted: Vec<&String> = tokens.iter().collect();
    sorted.sort();
    for t in sorted {
        if let Some(x) = vectors.get(t) {
            let w = weight(t);
            if w == 0.0 {
                continue;
            }
            norm += w;
            for (acc, xi) in weighted.iter_mut().zip(x) {
                *acc += w * xi;
            }
        }
    }
    if norm <= 0.0 {
        return vec![0.0; dim];
    }
    weighted.iter().map(|v| v / norm).collect()
}

/// `1 - q·p / (‖q‖‖p‖)`, with 1.0 for a zero vector.
pub fn oracle_distance(q: &[f64], p: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut qq = 0.0;
    let mut pp = 0.0;
    for i in 0..q.len() {
        dot += q[i] * p[i];
        qq += q[i] * q[i];
        pp += p[i] * p[i];
    }
    if qq == 0.0 || pp == 0.0 {
        return 1.0;
    }
    (1.0 - dot / (qq.sqrt() * pp.sqrt())).clamp(0.0, 2.0)
}

/// Scores every candidate and sorts by (distance, id).
pub fn oracle_rank(scored: Vec<(String, f64)>, k: usize) -> Vec<(String, f64)> {
    let mut scored = scored;
    scored.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k);
    scored
}

/// Average ranks of `|d|` over non-zero differences, with their signs.
pub fn oracle_signed_ranks(diffs: &[f64]) -> Vec<(f64, bool)> {
    let nz: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    nz.iter()
        .map(|d| {
            let below = nz.iter().filter(|x| x.abs() < d.abs()).count() as f64;
            let equal = nz.iter().filter(|x| x.abs() == d.abs()).count() as f64;
            (below + (equal + 1.0) / 2.0, *d > 0.0)
        })
        .collect()
}

/// Two-sided exact p-value by visiting all `2^n` sign assignments.
pub fn oracle_exact_p(diffs: &[f64]) -> f64 {
    let ranks = oracle_signed_ranks(diffs);
    let n = ranks.len();
    if n == 0 {
        return 1.0;
    }
    let total: f64 = ranks.iter().map(|r| r.0).sum();
    let w_plus: f64 = ranks.iter().filter(|r| r.1).map(|r| r.0).sum();
    let observed = w_plus.min(total - w_plus);
    let mut extreme = 0u64;
    for mask in 0u64..(1 << n) {
        let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i].0).sum();
        if s.min(total - s) <= observed {
            extreme += 1;
        }
    }
    extreme as f64 / (1u64 << n) as f64
}

pub fn doc_set(ids: &[&str]) -> BTreeSet<String> {
    ids.iter().map(|s| s.to_string()).collect()
}
