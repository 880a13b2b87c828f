//! Weighted centroids of word vectors and the cosine distance between them.
//!
//! A text is represented by `Σ w_i·v_i / Σ w_i` over its tokens that have an
//! embedding. With `w_i = 1` this is the plain average; with idf weights,
//! frequent low-content words contribute less. Tokens without an embedding
//! are left out of both the sum and the normalizer.

use std::collections::HashMap;

use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};
use crate::idf::IdfTable;

/// Per-token weights for centroid aggregation. Weights must be non-negative.
pub trait TermWeighting {
    fn weight(&self, token: &str) -> f64;
}

/// Every token weighs 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Uniform;

impl TermWeighting for Uniform {
    fn weight(&self, _token: &str) -> f64 {
        1.0
    }
}

impl TermWeighting for IdfTable {
    fn weight(&self, token: &str) -> f64 {
        IdfTable::weight(self, token)
    }
}

/// Explicit weights; tokens missing from the map weigh 0.
impl TermWeighting for HashMap<String, f64> {
    fn weight(&self, token: &str) -> f64 {
        self.get(token).copied().unwrap_or(0.0)
    }
}

impl<W: TermWeighting + ?Sized> TermWeighting for &W {
    fn weight(&self, token: &str) -> f64 {
        (**self).weight(token)
    }
}

/// Another weighting multiplied by a constant factor.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<W> {
    pub inner: W,
    pub factor: f64,
}

impl<W: TermWeighting> TermWeighting for Scaled<W> {
    fn weight(&self, token: &str) -> f64 {
        self.factor * self.inner.weight(token)
    }
}

/// A text's aggregated vector together with its embedding coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticVector {
    components: Vec<f64>,
    covered_tokens: usize,
    total_tokens: usize,
}

impl SemanticVector {
    pub fn new(components: Vec<f64>, covered_tokens: usize, total_tokens: usize) -> Self {
        debug_assert!(covered_tokens <= total_tokens);
        Self {
            components,
            covered_tokens,
            total_tokens,
        }
    }

    pub fn zero(dim: usize, covered_tokens: usize, total_tokens: usize) -> Self {
        Self::new(vec![0.0; dim], covered_tokens, total_tokens)
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Number of input tokens that had an embedding.
    pub fn covered_tokens(&self) -> usize {
        self.covered_tokens
    }

    pub fn total_tokens(&self) -> usize {
        self.total_tokens
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&c| c == 0.0)
    }
}

/// Weighted average of the embeddings of `tokens`.
///
/// Returns the zero vector when no token is covered or every covered token
/// has weight 0. Covered tokens are summed in sorted order, so two token
/// sequences holding the same multiset give bit-identical centroids.
pub fn centroid<'a, I, W>(tokens: I, embeddings: &EmbeddingTable, weighting: &W) -> SemanticVector
where
    I: IntoIterator<Item = &'a String>,
    W: TermWeighting + ?Sized,
{
    let dim = embeddings.dim();
    let mut sum = vec![0.0; dim];
    let mut total_weight = 0.0;
    let mut total = 0;

    let mut hits: Vec<(&String, &[f64])> = Vec::new();
    for token in tokens {
        total += 1;
        if let Some(vector) = embeddings.lookup(token) {
            hits.push((token, vector));
        }
    }
    hits.sort_unstable_by(|a, b| a.0.cmp(b.0));
    let covered = hits.len();

    for (token, vector) in hits {
        let w = weighting.weight(token);
        if w == 0.0 {
            continue;
        }
        total_weight += w;
        for (acc, v) in sum.iter_mut().zip(vector) {
            *acc += w * v;
        }
    }

    if covered == 0 || total_weight <= 0.0 {
        return SemanticVector::zero(dim, covered, total);
    }
    for acc in &mut sum {
        *acc /= total_weight;
    }
    SemanticVector::new(sum, covered, total)
}

/// `1 - u·v / (‖u‖‖v‖)`, clamped to `[0, 2]`.
///
/// A zero-norm operand has no direction and yields the neutral distance 1.0.
pub fn cosine_distance(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    let (mut dot, mut uu, mut vv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        uu += a * a;
        vv += b * b;
    }
    if uu == 0.0 || vv == 0.0 {
        return Ok(1.0);
    }
    Ok((1.0 - dot / (uu.sqrt() * vv.sqrt())).clamp(0.0, 2.0))
}
