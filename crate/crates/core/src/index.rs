//! Positional inverted index.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Ordinal of a document in corpus order.
pub type DocOrdinal = u32;
/// 0-based token position within a document.
pub type Position = u32;

const INDEX_MAGIC: &str = "PMIIDX1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc: DocOrdinal,
    /// Strictly increasing, never empty.
    pub positions: Vec<Position>,
}

/// Postings of one term, ordered by document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostingList {
    pub entries: Vec<Posting>,
}

impl PostingList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn docs(&self) -> impl Iterator<Item = DocOrdinal> + '_ {
        self.entries.iter().map(|p| p.doc)
    }

    pub fn positions_in(&self, doc: DocOrdinal) -> Option<&[Position]> {
        self.entries
            .binary_search_by_key(&doc, |p| p.doc)
            .ok()
            .map(|i| self.entries[i].positions.as_slice())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionalIndex {
    terms: BTreeMap<String, PostingList>,
    doc_ids: Vec<String>,
    doc_lengths: Vec<u32>,
}

static EMPTY: PostingList = PostingList {
    entries: Vec::new(),
};

impl PositionalIndex {
    /// Indexes every token of every document.
    pub fn build(corpus: &Corpus) -> Self {
        let mut terms: BTreeMap<String, PostingList> = BTreeMap::new();
        let mut doc_ids = Vec::with_capacity(corpus.doc_count());
        let mut doc_lengths = Vec::with_capacity(corpus.doc_count());
        for (ordinal, doc) in corpus.documents().iter().enumerate() {
            let ordinal = ordinal as DocOrdinal;
            doc_ids.push(doc.doc_id.clone());
            doc_lengths.push(doc.tokens.len() as u32);
            for (pos, token) in doc.tokens.iter().enumerate() {
                let list = terms.entry(token.clone()).or_default();
                match list.entries.last_mut() {
                    Some(last) if last.doc == ordinal => last.positions.push(pos as Position),
                    _ => list.entries.push(Posting {
                        doc: ordinal,
                        positions: vec![pos as Position],
                    }),
                }
            }
        }
        PositionalIndex {
            terms,
            doc_ids,
            doc_lengths,
        }
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn doc_id(&self, doc: DocOrdinal) -> Option<&str> {
        self.doc_ids.get(doc as usize).map(String::as_str)
    }

    pub fn doc_length(&self, doc: DocOrdinal) -> Option<u32> {
        self.doc_lengths.get(doc as usize).copied()
    }

    /// Number of documents containing `term`.
    pub fn doc_frequency(&self, term: &str) -> usize {
        self.postings(term).len()
    }

    /// The term's posting list; empty for unknown terms.
    pub fn postings(&self, term: &str) -> &PostingList {
        self.terms.get(term).unwrap_or(&EMPTY)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &PostingList)> {
        self.terms.iter().map(|(t, p)| (t.as_str(), p))
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{INDEX_MAGIC}")?;
        serde_json::to_writer(&mut out, self)?;
        writeln!(out)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        self.write_to(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn from_bytes(content: &str) -> Result<Self> {
        let body = content
            .strip_prefix(INDEX_MAGIC)
            .and_then(|rest| rest.strip_prefix('\n'))
            .ok_or_else(|| Error::Format(format!("missing {INDEX_MAGIC} header")))?;
        let index: PositionalIndex =
            serde_json::from_str(body).map_err(|e| Error::Format(e.to_string()))?;
        index.validate()?;
        Ok(index)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&content)
    }

    /// Checks the structural invariants; used on deserialized input.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Format(msg));
        if self.doc_ids.len() != self.doc_lengths.len() {
            return bad("document table length mismatch".into());
        }
        let mut seen: Vec<Vec<bool>> = self
            .doc_lengths
            .iter()
            .map(|&len| vec![false; len as usize])
            .collect();
        for (term, list) in &self.terms {
            if list.entries.is_empty() {
                return bad(format!("term {term:?} has no postings"));
            }
            if list.entries.windows(2).any(|w| w[0].doc >= w[1].doc) {
                return bad(format!("term {term:?}: documents not increasing"));
            }
            for posting in &list.entries {
                let Some(len) = self.doc_lengths.get(posting.doc as usize) else {
                    return bad(format!(
                        "term {term:?}: document {} out of range",
                        posting.doc
                    ));
                };
                let positions = &posting.positions;
                if positions.is_empty()
                    || positions.windows(2).any(|w| w[0] >= w[1])
                    || positions.last().is_some_and(|&p| p >= *len)
                {
                    return bad(format!(
                        "term {term:?}: bad positions in document {}",
                        posting.doc
                    ));
                }
                for &p in positions {
                    let slot = &mut seen[posting.doc as usize][p as usize];
                    if std::mem::replace(slot, true) {
                        return bad(format!(
                            "position {p} of document {} indexed twice",
                            posting.doc
                        ));
                    }
                }
            }
        }
        if seen.iter().flatten().any(|&s| !s) {
            return bad("positions do not cover every token".into());
        }
        Ok(())
    }
}
