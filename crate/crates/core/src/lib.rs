//! Passage retrieval by cosine distance between weighted centroids of word
//! embeddings, with an evaluation harness for question answering runs.
//!
//! Three ranking schemes share one index of sentence passages:
//!
//! - **cd**: uniform averages of word vectors on both sides;
//! - **cd-idf**: both sides weighted by document-collection idf;
//! - **cd-q**: the question weighted by idf from a question corpus, so
//!   words like "what" and "which" stop dominating the query vector.
//!
//! A random baseline, cutoff metrics (MAP, precision, recall, F1 at 10) and a
//! Wilcoxon signed-rank test for paired runs complete the pipeline.
//!
//! ```
//! use passage_cd::{EmbeddingTable, IdfTable, Method, PassageIndex, RetrievalContext};
//! use passage_cd::text::tokenize;
//!
//! let embeddings = EmbeddingTable::load("protein 1 0\nwhat 0 1\n".as_bytes()).unwrap();
//! let docs = [("d1", "What is it. Protein."), ("d2", "Protein protein.")];
//! let units: Vec<_> = docs.iter().map(|(_, t)| tokenize(t)).collect();
//! let doc_idf = IdfTable::build(&units, "documents").unwrap();
//! let index = PassageIndex::build(docs, &embeddings, &doc_idf).unwrap();
//!
//! let ctx = RetrievalContext { embeddings: &embeddings, doc_idf: &doc_idf, question_idf: None };
//! let ranked = index.rank("q1", &tokenize("protein"), Method::Cd, 10, &ctx, None).unwrap();
//! assert_eq!(ranked.items[0].passage_id, "d1#1");
//! ```

pub mod cli;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod idf;
pub mod ingest;
pub mod retrieval;
pub mod semantic;
pub mod text;

pub use embedding::EmbeddingTable;
pub use error::{Error, Result};
pub use idf::IdfTable;
pub use ingest::{load_question_set, Question};
pub use retrieval::{Method, Passage, PassageIndex, RankedItem, RankedList, RetrievalContext};
pub use semantic::{centroid, cosine_distance, SemanticVector, TermWeighting, Uniform};
