//! BioASQ-style question sets.
//!
//! Only the subset needed for passage retrieval is read:
//!
//! ```json
//! {"questions": [{"id": "...", "body": "...",
//!                 "documents": ["http://www.ncbi.nlm.nih.gov/pubmed/123", ...],
//!                 "snippets": [{"document": "...", "text": "..."}]}]}
//! ```
//!
//! Document references are reduced to their final URL path segment, so PubMed
//! URLs become bare numeric ids. Other fields are ignored.

use std::collections::{BTreeSet, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub id: String,
    pub body: String,
    pub reference_docs: Vec<String>,
    /// `(doc_id, snippet text)` pairs.
    pub gold_snippets: Vec<(String, String)>,
}

impl Question {
    pub fn reference_set(&self) -> BTreeSet<String> {
        self.reference_docs.iter().cloned().collect()
    }

    /// Gold snippets whose document is missing from `reference_docs`.
    pub fn unreferenced_snippets(&self) -> impl Iterator<Item = &(String, String)> {
        self.gold_snippets
            .iter()
            .filter(|(doc, _)| !self.reference_docs.contains(doc))
    }
}

/// `http://www.ncbi.nlm.nih.gov/pubmed/123` -> `123`; other values unchanged.
pub fn normalize_doc_id(raw: &str) -> String {
    let raw = raw.trim();
    if raw.contains("://") {
        let trimmed = raw.trim_end_matches('/');
        trimmed.rsplit('/').next().unwrap_or(trimmed).to_owned()
    } else {
        raw.to_owned()
    }
}

pub fn load_question_set<R: Read>(source: R) -> Result<Vec<Question>> {
    let root: Value = serde_json::from_reader(source)?;
    let entries = root
        .get("questions")
        .ok_or_else(|| Error::QuestionSet("missing top-level \"questions\"".into()))?
        .as_array()
        .ok_or_else(|| Error::QuestionSet("\"questions\" is not an array".into()))?;

    let mut ids = HashSet::new();
    let mut questions = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        let raw =
            RawQuestion::deserialize(entry).map_err(|e| Error::QuestionSet(format!("question #{i}: {e}")))?;
        let id = raw
            .id
            .ok_or_else(|| Error::QuestionSet(format!("question #{i}: missing \"id\"")))?;
        let body = raw
            .body
            .ok_or_else(|| Error::QuestionSet(format!("question #{i} ({id}): missing \"body\"")))?;
        if !ids.insert(id.clone()) {
            return Err(Error::QuestionSet(format!("question #{i}: duplicate id {id:?}")));
        }
        questions.push(Question {
            id,
            body,
            reference_docs: raw.documents.iter().map(|d| normalize_doc_id(d)).collect(),
            gold_snippets: raw
                .snippets
                .into_iter()
                .map(|s| (normalize_doc_id(&s.document), s.text))
                .collect(),
        });
    }
    Ok(questions)
}

/// Re-emits questions in the input schema.
pub fn to_json(questions: &[Question]) -> Value {
    let entries: Vec<RawQuestion> = questions
        .iter()
        .map(|q| RawQuestion {
            id: Some(q.id.clone()),
            body: Some(q.body.clone()),
            documents: q.reference_docs.clone(),
            snippets: q
                .gold_snippets
                .iter()
                .map(|(document, text)| RawSnippet {
                    document: document.clone(),
                    text: text.clone(),
                })
                .collect(),
        })
        .collect();
    serde_json::json!({ "questions": entries })
}

#[derive(Serialize, Deserialize)]
struct RawQuestion {
    id: Option<String>,
    body: Option<String>,
    #[serde(default)]
    documents: Vec<String>,
    #[serde(default)]
    snippets: Vec<RawSnippet>,
}

#[derive(Serialize, Deserialize)]
struct RawSnippet {
    document: String,
    text: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(s: &str) -> Result<Vec<Question>> {
        load_question_set(s.as_bytes())
    }

    #[test]
    fn parses_and_normalizes() {
        let qs = load(
            r#"{"questions":[{"id":"q1","body":"B?","documents":["http://x/123"],
                "snippets":[{"document":"http://x/123","text":"s","offsetInBeginSection":3}],
                "type":"factoid"}]}"#,
        )
        .unwrap();
        assert_eq!(
            qs,
            [Question {
                id: "q1".into(),
                body: "B?".into(),
                reference_docs: vec!["123".into()],
                gold_snippets: vec![("123".into(), "s".into())],
            }]
        );
        assert_eq!(qs[0].unreferenced_snippets().count(), 0);
    }

    #[test]
    fn empty_and_optional_fields() {
        assert!(load(r#"{"questions":[]}"#).unwrap().is_empty());
        let qs = load(r#"{"questions":[{"id":"q","body":"b","documents":["7"]}]}"#).unwrap();
        assert!(qs[0].gold_snippets.is_empty());
        assert_eq!(qs[0].reference_docs, ["7"]);
    }

    #[test]
    fn reports_offending_entries() {
        let err = load(r#"{"data":[]}"#).unwrap_err();
        assert!(err.to_string().contains("questions"), "{err}");
        let err = load(r#"{"questions":[{"id":"a","body":"x"},{"body":"y"}]}"#).unwrap_err();
        assert!(err.to_string().contains("#1"), "{err}");
        let err = load(r#"{"questions":[{"id":"a"}]}"#).unwrap_err();
        assert!(err.to_string().contains("body"), "{err}");
        let err = load(r#"{"questions":[{"id":"a","body":"x"},{"id":"a","body":"y"}]}"#).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        assert!(load("not json").is_err());
    }

    #[test]
    fn keeps_unreferenced_snippets() {
        let qs = load(
            r#"{"questions":[{"id":"q","body":"b","documents":["1"],
                "snippets":[{"document":"2","text":"t"}]}]}"#,
        )
        .unwrap();
        assert_eq!(qs[0].gold_snippets.len(), 1);
        assert_eq!(qs[0].unreferenced_snippets().count(), 1);
    }

    #[test]
    fn doc_id_normalization() {
        assert_eq!(
            normalize_doc_id("http://www.ncbi.nlm.nih.gov/pubmed/23456"),
            "23456"
        );
        assert_eq!(normalize_doc_id("https://x.org/a/b/"), "b");
        assert_eq!(normalize_doc_id("12345"), "12345");
    }

    proptest! {
        #[test]
        fn reemit_then_reload_is_lossless(
            qs in proptest::collection::btree_map(
                "[a-z0-9]{1,6}",
                ("\\PC{0,20}", proptest::collection::vec("[0-9]{1,5}", 0..4), proptest::collection::vec(("[0-9]{1,5}", "\\PC{0,15}"), 0..3)),
                0..5,
            )
        ) {
            let questions: Vec<Question> = qs
                .into_iter()
                .map(|(id, (body, docs, snippets))| Question { id, body, reference_docs: docs, gold_snippets: snippets })
                .collect();
            let text = serde_json::to_string(&to_json(&questions)).unwrap();
            prop_assert_eq!(load_question_set(text.as_bytes()).unwrap(), questions);
        }
    }
}
