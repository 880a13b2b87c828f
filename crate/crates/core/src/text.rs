//! Text normalization: word tokens and sentence passages.
//!
//! Tokens are lowercase runs of alphanumeric characters; everything else is a
//! separator. There is no stemming and no stop-word list, since frequent
//! function words are handled by term weighting rather than deletion.
//!
//! Sentences end at `.`, `!` or `?` followed by whitespace and then an
//! uppercase letter or a digit, unless the word carrying the terminator is a
//! known abbreviation (`Fig. 2`, `et al. Smith`).

/// Words that do not end a sentence when followed by a period.
pub const ABBREVIATIONS: &[&str] = &[
    "al", "approx", "cf", "dr", "e.g", "eq", "etc", "fig", "figs", "i.e", "mr", "mrs", "ms", "prof", "vs",
];

/// An ordered list of normalized tokens.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSequence {
    tokens: Vec<String>,
    /// Character range `[start, end)` of the tokenized text within its source.
    source_span: (usize, usize),
}

impl TokenSequence {
    pub fn new(tokens: Vec<String>, source_span: (usize, usize)) -> Self {
        Self { tokens, source_span }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn source_span(&self) -> (usize, usize) {
        self.source_span
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    /// Shifts the source span, for sequences cut out of a larger text.
    pub fn with_offset(mut self, offset: usize) -> Self {
        self.source_span = (self.source_span.0 + offset, self.source_span.1 + offset);
        self
    }
}

impl AsRef<[String]> for TokenSequence {
    fn as_ref(&self) -> &[String] {
        &self.tokens
    }
}

impl<'a> IntoIterator for &'a TokenSequence {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.tokens.iter()
    }
}

/// Lowercases `raw` and splits it on every non-alphanumeric character.
pub fn tokenize(raw: &str) -> TokenSequence {
    // Lowercasing first keeps the output stable under re-tokenization even for
    // characters whose lowercase form expands to several code points.
    let lowered = raw.to_lowercase();
    let tokens = lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect();
    TokenSequence::new(tokens, (0, raw.chars().count()))
}

/// A sentence slice of a larger text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sentence<'a> {
    pub text: &'a str,
    /// Offset of the first character of `text`, counted in characters.
    pub offset: usize,
}

/// Splits a document into trimmed, non-empty sentences.
pub fn split_sentences(document: &str) -> Vec<Sentence<'_>> {
    let chars: Vec<(usize, char)> = document.char_indices().collect();
    let mut sentences = Vec::new();
    // Char index where the current sentence candidate starts.
    let mut start = 0;

    for i in 0..chars.len() {
        if !matches!(chars[i].1, '.' | '!' | '?') {
            continue;
        }
        if !chars.get(i + 1).is_some_and(|&(_, c)| c.is_whitespace()) {
            continue;
        }
        let next = chars[i + 1..].iter().find(|&&(_, c)| !c.is_whitespace());
        let Some(&(_, next)) = next else { continue };
        if !(next.is_uppercase() || next.is_ascii_digit()) {
            continue;
        }
        if ends_with_abbreviation(&chars[start..i]) {
            continue;
        }
        push_trimmed(document, &chars, start, i + 1, &mut sentences);
        start = i + 1;
    }
    push_trimmed(document, &chars, start, chars.len(), &mut sentences);
    sentences
}

fn ends_with_abbreviation(prefix: &[(usize, char)]) -> bool {
    let word_start = prefix
        .iter()
        .rposition(|&(_, c)| c.is_whitespace())
        .map_or(0, |p| p + 1);
    let word: String = prefix[word_start..]
        .iter()
        .map(|&(_, c)| c)
        .skip_while(|c| matches!(c, '(' | '[' | '"' | '\''))
        .flat_map(char::to_lowercase)
        .collect();
    ABBREVIATIONS.contains(&word.as_str())
}

fn push_trimmed<'a>(
    document: &'a str,
    chars: &[(usize, char)],
    start: usize,
    end: usize,
    out: &mut Vec<Sentence<'a>>,
) {
    let span = &chars[start..end];
    let Some(first) = span.iter().position(|&(_, c)| !c.is_whitespace()) else {
        return;
    };
    let last = span.iter().rposition(|&(_, c)| !c.is_whitespace()).unwrap();
    let byte_start = span[first].0;
    let byte_end = span[last].0 + span[last].1.len_utf8();
    out.push(Sentence {
        text: &document[byte_start..byte_end],
        offset: start + first,
    });
}
