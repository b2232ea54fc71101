//! Tokenization, corpus loading and stop words.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Splits text into lowercase letter runs.
///
/// Any non-letter is a separator, except an apostrophe that sits between two
/// letters (`don't`). Digits are separators.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_alphabetic() {
            current.extend(c.to_lowercase());
        } else if c == '\''
            && !current.is_empty()
            && chars.peek().is_some_and(|n| n.is_alphabetic())
        {
            current.push('\'');
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Normalizes a single word, failing unless it is exactly one token.
pub fn normalize_word(word: &str) -> Option<String> {
    let mut tokens = tokenize(word);
    if tokens.len() == 1 {
        tokens.pop()
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    /// Token at position `i` is `tokens[i]`.
    pub tokens: Vec<String>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, text: &str) -> Self {
        Document {
            doc_id: doc_id.into(),
            tokens: tokenize(text),
        }
    }
}

/// Documents ordered by id; ids are unique.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
}

#[derive(Deserialize)]
struct Record {
    id: String,
    text: String,
}

impl Corpus {
    /// Sorts documents by id and rejects duplicate ids.
    pub fn from_documents(mut documents: Vec<Document>) -> Result<Self> {
        documents.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        if let Some(pair) = documents.windows(2).find(|w| w[0].doc_id == w[1].doc_id) {
            return Err(Error::Validation(format!(
                "duplicate document id {:?}",
                pair[0].doc_id
            )));
        }
        Ok(Corpus { documents })
    }

    /// Builds a corpus from `(id, raw text)` pairs.
    pub fn from_texts<I, S, T>(texts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: AsRef<str>,
    {
        Self::from_documents(
            texts
                .into_iter()
                .map(|(id, text)| Document::new(id, text.as_ref()))
                .collect(),
        )
    }

    /// Loads a directory (one document per regular file, id = file name) or a
    /// record file (one JSON object `{"id", "text"}` per line).
    pub fn load(source: impl AsRef<Path>) -> Result<Self> {
        let source = source.as_ref();
        let meta = fs::metadata(source).map_err(|e| Error::io(source, e))?;
        if meta.is_dir() {
            Self::load_dir(source)
        } else {
            Self::load_records(source)
        }
    }

    fn load_dir(dir: &Path) -> Result<Self> {
        let mut documents = Vec::new();
        for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
            let entry = entry.map_err(|e| Error::io(dir, e))?;
            let path = entry.path();
            if !path.is_file() {
                continue;
            }
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let doc_id = entry.file_name().to_string_lossy().into_owned();
            documents.push(Document::new(doc_id, &text));
        }
        Self::from_documents(documents)
    }

    fn load_records(file: &Path) -> Result<Self> {
        let content = fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
        let mut documents = Vec::new();
        for (lineno, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: Record = serde_json::from_str(line).map_err(|e| {
                Error::Validation(format!(
                    "{}:{}: bad record: {e}",
                    file.display(),
                    lineno + 1
                ))
            })?;
            documents.push(Document::new(record.id, &record.text));
        }
        Self::from_documents(documents)
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn doc_count(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

const DEFAULT_STOP_WORDS: &[&str] = &[
    "a", "about", "an", "and", "are", "as", "at", "be", "been", "but", "by", "can", "did", "do",
    "for", "from", "had", "has", "have", "he", "her", "him", "his", "i", "if", "in", "into", "is",
    "it", "its", "me", "my", "of", "on", "or", "our", "she", "so", "than", "that", "the", "their",
    "them", "then", "there", "these", "they", "this", "those", "to", "us", "was", "we", "were",
    "what", "when", "which", "who", "will", "with", "would", "you", "your",
];

/// Words ignored when picking context words. Never removed from token streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWordList {
    words: BTreeSet<String>,
}

impl Default for StopWordList {
    fn default() -> Self {
        StopWordList {
            words: DEFAULT_STOP_WORDS.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl StopWordList {
    pub fn new<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> Self {
        StopWordList {
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    /// Reads one word per line; `#` starts a comment.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&content))
    }

    pub fn parse(content: &str) -> Self {
        Self::new(
            content
                .lines()
                .map(|line| line.split('#').next().unwrap_or_default()),
        )
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// `tokenize` output with duplicates removed, keeping first occurrences.
pub(crate) fn unique_in_order(tokens: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    tokens
        .into_iter()
        .filter(|t| seen.insert(t.clone()))
        .collect()
}
