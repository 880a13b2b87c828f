//! Sentence-level passage index and top-k ranking.
//!
//! Every document is split into sentences; each sentence becomes a passage
//! carrying two precomputed centroids, one uniform and one weighted by the
//! document-corpus idf. A question is ranked against these with one of:
//!
//! | method   | question weights   | passage centroid |
//! |----------|--------------------|------------------|
//! | `cd`     | uniform            | uniform          |
//! | `cd-idf` | document idf       | document idf     |
//! | `cd-q`   | question-corpus idf| document idf     |
//!
//! plus `rnd`, which samples passages uniformly from the candidate documents.
//!
//! Results are ordered by ascending cosine distance, ties by passage id.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};
use crate::idf::IdfTable;
use crate::semantic::{centroid, cosine_distance, SemanticVector, TermWeighting, Uniform};
use crate::text::{split_sentences, tokenize, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "cd")]
    Cd,
    #[serde(rename = "cd-idf")]
    CdIdf,
    #[serde(rename = "cd-q")]
    CdQ,
    #[serde(rename = "rnd")]
    Rnd,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Cd, Method::CdIdf, Method::CdQ, Method::Rnd];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cd => "cd",
            Method::CdIdf => "cd-idf",
            Method::CdQ => "cd-q",
            Method::Rnd => "rnd",
        }
    }

    /// Which precomputed passage centroid the method compares against.
    pub fn passage_side(self) -> PassageSide {
        match self {
            Method::Cd | Method::Rnd => PassageSide::Uniform,
            Method::CdIdf | Method::CdQ => PassageSide::Idf,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassageSide {
    Uniform,
    Idf,
}

/// The tables a ranking call needs. `question_idf` is only required for `cd-q`.
#[derive(Debug, Clone, Copy)]
pub struct RetrievalContext<'a> {
    pub embeddings: &'a EmbeddingTable,
    pub doc_idf: &'a IdfTable,
    pub question_idf: Option<&'a IdfTable>,
}

impl RetrievalContext<'_> {
    /// The question's centroid under `method`.
    pub fn question_centroid(&self, question: &TokenSequence, method: Method) -> Result<SemanticVector> {
        let weighting: &dyn TermWeighting = match method {
            Method::Cd => &Uniform,
            Method::CdIdf => self.doc_idf,
            Method::CdQ => self
                .question_idf
                .ok_or_else(|| Error::InvalidArgument("cd-q requires a question-corpus idf table".into()))?,
            Method::Rnd => {
                return Err(Error::InvalidArgument(
                    "rnd does not score passages; use random_baseline".into(),
                ))
            }
        };
        Ok(centroid(question, self.embeddings, weighting))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Passage {
    /// `<doc_id>#<sentence ordinal>`
    pub passage_id: String,
    pub doc_id: String,
    pub text: String,
    pub uniform_centroid: SemanticVector,
    /// Weighted by document-corpus idf.
    pub idf_centroid: SemanticVector,
}

impl Passage {
    pub fn centroid(&self, side: PassageSide) -> &SemanticVector {
        match side {
            PassageSide::Uniform => &self.uniform_centroid,
            PassageSide::Idf => &self.idf_centroid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedItem {
    pub passage_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub question_id: String,
    pub method: Method,
    pub items: Vec<RankedItem>,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn passage_ids(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.passage_id.as_str())
    }
}

/// Passages sorted by id, with a per-document lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageIndex {
    dim: usize,
    passages: Vec<Passage>,
    /// Positions into `passages`, ascending.
    doc_index: BTreeMap<String, Vec<usize>>,
}

impl PassageIndex {
    /// Splits every document into sentence passages and precomputes both centroids.
    pub fn build<I, D, T>(documents: I, embeddings: &EmbeddingTable, doc_idf: &IdfTable) -> Result<Self>
    where
        I: IntoIterator<Item = (D, T)>,
        D: Into<String>,
        T: AsRef<str>,
    {
        let mut seen = HashSet::new();
        let mut passages = Vec::new();
        for (doc_id, text) in documents {
            let doc_id: String = doc_id.into();
            validate_doc_id(&doc_id)?;
            if !seen.insert(doc_id.clone()) {
                return Err(Error::DuplicateId {
                    what: "document",
                    id: doc_id,
                });
            }
            for (ordinal, sentence) in split_sentences(text.as_ref()).into_iter().enumerate() {
                let tokens = tokenize(sentence.text).with_offset(sentence.offset);
                passages.push(Passage {
                    passage_id: format!("{doc_id}#{ordinal}"),
                    doc_id: doc_id.clone(),
                    text: sentence.text.to_owned(),
                    uniform_centroid: centroid(&tokens, embeddings, &Uniform),
                    idf_centroid: centroid(&tokens, embeddings, doc_idf),
                });
            }
        }
        Self::from_passages(embeddings.dim(), passages)
    }

    fn from_passages(dim: usize, mut passages: Vec<Passage>) -> Result<Self> {
        passages.sort_by(|a, b| a.passage_id.cmp(&b.passage_id));
        if let Some(w) = passages.windows(2).find(|w| w[0].passage_id == w[1].passage_id) {
            return Err(Error::DuplicateId {
                what: "passage",
                id: w[0].passage_id.clone(),
            });
        }
        let mut doc_index: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (pos, p) in passages.iter().enumerate() {
            doc_index.entry(p.doc_id.clone()).or_default().push(pos);
        }
        Ok(Self {
            dim,
            passages,
            doc_index,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.passages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passages.is_empty()
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn passage(&self, passage_id: &str) -> Option<&Passage> {
        self.passages
            .binary_search_by(|p| p.passage_id.as_str().cmp(passage_id))
            .ok()
            .map(|i| &self.passages[i])
    }

    pub fn documents(&self) -> impl Iterator<Item = &str> {
        self.doc_index.keys().map(String::as_str)
    }

    pub fn contains_document(&self, doc_id: &str) -> bool {
        self.doc_index.contains_key(doc_id)
    }

    /// Passages of one document, in id order.
    pub fn document_passages(&self, doc_id: &str) -> impl Iterator<Item = &Passage> {
        self.doc_index
            .get(doc_id)
            .into_iter()
            .flatten()
            .map(|&i| &self.passages[i])
    }

    /// Positions of the passages eligible for a query.
    fn candidate_positions(&self, candidate_docs: Option<&BTreeSet<String>>) -> Result<Vec<usize>> {
        let Some(docs) = candidate_docs else {
            return Ok((0..self.passages.len()).collect());
        };
        let unknown: Vec<String> = docs
            .iter()
            .filter(|d| !self.doc_index.contains_key(*d))
            .cloned()
            .collect();
        if !unknown.is_empty() {
            return Err(Error::UnknownDocuments(unknown));
        }
        let mut positions: Vec<usize> = docs
            .iter()
            .flat_map(|d| self.doc_index[d].iter().copied())
            .collect();
        positions.sort_unstable();
        Ok(positions)
    }

    /// Top-k passages for a question under one of the cosine-distance methods.
    pub fn rank(
        &self,
        question_id: &str,
        question: &TokenSequence,
        method: Method,
        k: usize,
        ctx: &RetrievalContext<'_>,
        candidate_docs: Option<&BTreeSet<String>>,
    ) -> Result<RankedList> {
        if ctx.embeddings.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: ctx.embeddings.dim(),
            });
        }
        let query = ctx.question_centroid(question, method)?;
        let items = self.rank_by_centroid(query.components(), method.passage_side(), k, candidate_docs)?;
        Ok(RankedList {
            question_id: question_id.to_owned(),
            method,
            items,
        })
    }

    /// Top-k passages for an already aggregated query vector.
    pub fn rank_by_centroid(
        &self,
        query: &[f64],
        side: PassageSide,
        k: usize,
        candidate_docs: Option<&BTreeSet<String>>,
    ) -> Result<Vec<RankedItem>> {
        if k < 1 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if query.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: query.len(),
            });
        }
        let positions = self.candidate_positions(candidate_docs)?;
        let mut scored = positions
            .par_iter()
            .map(|&i| {
                let d = cosine_distance(query, self.passages[i].centroid(side).components())?;
                Ok((d, i))
            })
            .collect::<Result<Vec<(f64, usize)>>>()?;
        // Positions follow passage-id order, so position breaks ties by id.
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        scored.truncate(k);
        Ok(scored
            .into_iter()
            .map(|(score, i)| RankedItem {
                passage_id: self.passages[i].passage_id.clone(),
                score,
            })
            .collect())
    }

    /// Up to `k` distinct candidate passages drawn uniformly without replacement.
    pub fn random_baseline(
        &self,
        question_id: &str,
        candidate_docs: &BTreeSet<String>,
        k: usize,
        seed: u64,
    ) -> Result<RankedList> {
        if k < 1 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if candidate_docs.is_empty() {
            return Err(Error::Empty {
                what: "candidate document set",
            });
        }
        let positions = self.candidate_positions(Some(candidate_docs))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picked = rand::seq::index::sample(&mut rng, positions.len(), k.min(positions.len()));
        let items = picked
            .into_iter()
            .map(|j| RankedItem {
                passage_id: self.passages[positions[j]].passage_id.clone(),
                score: 0.0,
            })
            .collect();
        Ok(RankedList {
            question_id: question_id.to_owned(),
            method: Method::Rnd,
            items,
        })
    }

    /// Writes `#dim <d>` then one tab-separated line per passage.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "#dim {}", self.dim)?;
        for p in &self.passages {
            writeln!(
                sink,
                "{}\t{}\t{}\t{}\t{}",
                p.passage_id,
                p.doc_id,
                escape(&p.text),
                join_components(p.uniform_centroid.components()),
                join_components(p.idf_centroid.components()),
            )?;
        }
        Ok(())
    }

    /// Reads a saved index. Token coverage counts are recomputed against
    /// `embeddings`, whose dimension must match the index.
    pub fn load<R: BufRead>(source: R, embeddings: &EmbeddingTable) -> Result<Self> {
        const WHAT: &str = "index";
        let mut lines = source.lines();
        let header = match lines.next() {
            Some(line) => line?,
            None => return Err(Error::Empty { what: WHAT }),
        };
        let dim: usize = header
            .strip_prefix("#dim ")
            .and_then(|d| d.trim().parse().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::parse(WHAT, 1, "expected header \"#dim <d>\""))?;
        if dim != embeddings.dim() {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: embeddings.dim(),
            });
        }

        let mut passages = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let lineno = idx + 2;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [passage_id, doc_id, text, uniform, weighted] = fields[..] else {
                return Err(Error::parse(
                    WHAT,
                    lineno,
                    format!("expected 5 tab-separated fields, found {}", fields.len()),
                ));
            };
            let text = unescape(text).map_err(|m| Error::parse(WHAT, lineno, m))?;
            let tokens = tokenize(&text);
            let covered = tokens.iter().filter(|t| embeddings.contains(t)).count();
            let parse_vec = |raw: &str| -> Result<SemanticVector> {
                let components = raw
                    .split(',')
                    .map(|c| c.parse::<f64>().ok().filter(|v| v.is_finite()))
                    .collect::<Option<Vec<f64>>>()
                    .ok_or_else(|| Error::parse(WHAT, lineno, format!("malformed vector {raw:?}")))?;
                if components.len() != dim {
                    return Err(Error::parse(
                        WHAT,
                        lineno,
                        format!("expected {dim} components, found {}", components.len()),
                    ));
                }
                Ok(SemanticVector::new(components, covered, tokens.len()))
            };
            passages.push(Passage {
                passage_id: passage_id.to_owned(),
                doc_id: doc_id.to_owned(),
                uniform_centroid: parse_vec(uniform)?,
                idf_centroid: parse_vec(weighted)?,
                text,
            });
        }
        Self::from_passages(dim, passages)
    }
}

fn validate_doc_id(doc_id: &str) -> Result<()> {
    if doc_id.is_empty() || doc_id.chars().any(char::is_whitespace) {
        return Err(Error::InvalidArgument(format!(
            "document id {doc_id:?} must be non-empty and contain no whitespace"
        )));
    }
    Ok(())
}

fn join_components(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(text: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(format!(
                    "bad escape sequence \\{}",
                    other.map(String::from).unwrap_or_default()
                ))
            }
        }
    }
    Ok(out)
}
