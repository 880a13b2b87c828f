//! Inverse document frequency tables.
//!
//! A table records how many corpus units contain each token. Two tables are
//! typically built: one over the document collection and one over a mixture
//! of question sets, whose statistics reflect how queries are phrased.
//!
//! Weights use natural-log smoothing, `ln((N + 1) / (df + 1))`, which is
//! non-negative and finite for every token, including unseen ones.
//!
//! Serialized form:
//!
//! ```text
//! #n_docs <N> <label>
//! <token>\t<df>
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub const DOCUMENTS_LABEL: &str = "documents";
pub const QUESTIONS_LABEL: &str = "questions";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdfTable {
    n_docs: u64,
    df: HashMap<String, u64>,
    label: String,
}

impl IdfTable {
    /// Counts, for every token, the number of units containing it at least once.
    pub fn build<I, S>(corpus: I, label: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[String]>,
    {
        let mut n_docs = 0u64;
        let mut df: HashMap<String, u64> = HashMap::new();
        for unit in corpus {
            n_docs += 1;
            let mut seen: HashSet<&str> = HashSet::new();
            for token in unit.as_ref() {
                if seen.insert(token.as_str()) {
                    *df.entry(token.clone()).or_default() += 1;
                }
            }
        }
        if n_docs == 0 {
            return Err(Error::Empty { what: "idf corpus" });
        }
        Ok(Self {
            n_docs,
            df,
            label: label.into(),
        })
    }

    /// Builds a table from raw counts, checking `1 <= df <= n_docs`.
    pub fn from_counts(
        n_docs: u64,
        df: impl IntoIterator<Item = (String, u64)>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if n_docs == 0 {
            return Err(Error::InvalidArgument("n_docs must be at least 1".into()));
        }
        let df: HashMap<String, u64> = df.into_iter().collect();
        if let Some((t, c)) = df.iter().find(|(_, &c)| c == 0 || c > n_docs) {
            return Err(Error::InvalidArgument(format!(
                "document frequency {c} for {t:?} outside 1..={n_docs}"
            )));
        }
        Ok(Self {
            n_docs,
            df,
            label: label.into(),
        })
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vocabulary_size(&self) -> usize {
        self.df.len()
    }

    pub fn document_frequency(&self, token: &str) -> u64 {
        self.df.get(token).copied().unwrap_or(0)
    }

    /// `ln((n_docs + 1) / (df + 1))`; unseen tokens use `df = 0`.
    pub fn weight(&self, token: &str) -> f64 {
        let df = self.document_frequency(token);
        ((self.n_docs + 1) as f64 / (df + 1) as f64).ln()
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "#n_docs {} {}", self.n_docs, self.label)?;
        let sorted: BTreeMap<&String, &u64> = self.df.iter().collect();
        for (token, df) in sorted {
            writeln!(sink, "{token}\t{df}")?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        const WHAT: &str = "idf table";
        let mut lines = source.lines();
        let header = match lines.next() {
            Some(line) => line?,
            None => return Err(Error::Empty { what: WHAT }),
        };
        let rest = header
            .strip_prefix("#n_docs ")
            .ok_or_else(|| Error::parse(WHAT, 1, "expected header \"#n_docs <N> <label>\""))?;
        let (n, label) = rest.split_once(' ').unwrap_or((rest, ""));
        let n_docs: u64 = n
            .trim()
            .parse()
            .map_err(|_| Error::parse(WHAT, 1, format!("bad document count {n:?}")))?;
        if n_docs == 0 {
            return Err(Error::parse(WHAT, 1, "document count must be at least 1"));
        }

        let mut df = HashMap::new();
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let lineno = idx + 2;
            if line.trim().is_empty() {
                continue;
            }
            let (token, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(WHAT, lineno, "expected \"<token>\\t<df>\""))?;
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(Error::parse(WHAT, lineno, format!("bad token {token:?}")));
            }
            let count: u64 = count
                .trim()
                .parse()
                .map_err(|_| Error::parse(WHAT, lineno, format!("bad count {count:?}")))?;
            if count == 0 || count > n_docs {
                return Err(Error::parse(
                    WHAT,
                    lineno,
                    format!("document frequency {count} outside 1..={n_docs}"),
                ));
            }
            df.insert(token.to_owned(), count);
        }
        Ok(Self {
            n_docs,
            df,
            label: label.to_owned(),
        })
    }
}
