//! Word vectors in the word2vec text format.
//!
//! ```text
//! <count> <dim>          (optional header)
//! <token> <v1> ... <vdim>
//! ```

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Token to fixed-length vector map. Immutable once loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    entries: HashMap<String, Box<[f64]>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "embedding dimension must be positive".into(),
            ));
        }
        Ok(Self {
            dim,
            entries: HashMap::new(),
        })
    }

    /// Adds or replaces a vector; rejects wrong lengths and non-finite components.
    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: vector.len(),
            });
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite embedding component".into()));
        }
        self.entries.insert(token.into(), vector.into_boxed_slice());
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The stored vector, or `None` for out-of-vocabulary tokens.
    pub fn lookup(&self, token: &str) -> Option<&[f64]> {
        self.entries.get(token).map(|v| &v[..])
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    /// Parses the text format. Later duplicates of a token replace earlier ones.
    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        const WHAT: &str = "embeddings";
        let mut dim: Option<usize> = None;
        let mut entries = HashMap::new();
        let mut saw_line = false;

        for (idx, line) in source.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let mut fields = line.split_ascii_whitespace();
            let Some(token) = fields.next() else { continue };
            let rest: Vec<&str> = fields.collect();

            if !saw_line {
                saw_line = true;
                // "<count> <dim>": exactly two integer fields.
                if rest.len() == 1 {
                    if let (Ok(_), Ok(d)) = (token.parse::<usize>(), rest[0].parse::<usize>()) {
                        if d == 0 {
                            return Err(Error::parse(WHAT, lineno, "header dimension is zero"));
                        }
                        dim = Some(d);
                        continue;
                    }
                }
            }

            let expected = *dim.get_or_insert(rest.len());
            if rest.len() != expected {
                return Err(Error::parse(
                    WHAT,
                    lineno,
                    format!("expected {expected} components, found {}", rest.len()),
                ));
            }
            if expected == 0 {
                return Err(Error::parse(WHAT, lineno, "token without vector"));
            }
            let vector = rest
                .iter()
                .map(|f| match f.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    Ok(_) => Err(Error::parse(WHAT, lineno, format!("non-finite value {f:?}"))),
                    Err(_) => Err(Error::parse(WHAT, lineno, format!("malformed float {f:?}"))),
                })
                .collect::<Result<Vec<f64>>>()?;
            entries.insert(token.to_owned(), vector.into_boxed_slice());
        }

        match dim {
            Some(dim) => Ok(Self { dim, entries }),
            None => Err(Error::Empty { what: WHAT }),
        }
    }

    /// Writes a header line and one entry per token, sorted by token.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "{} {}", self.entries.len(), self.dim)?;
        let mut tokens: Vec<&String> = self.entries.keys().collect();
        tokens.sort();
        for token in tokens {
            write!(sink, "{token}")?;
            for v in self.entries[token].iter() {
                write!(sink, " {v}")?;
            }
            writeln!(sink)?;
        }
        Ok(())
    }
}
