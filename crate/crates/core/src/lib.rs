//! Synonym recognition by pointwise mutual information over a local
//! positional index (PMI-IR), with a latent semantic analysis baseline.
//!
//! The crate is organised bottom-up:
//!
//! - [`corpus`]: tokenization, corpus loading, stop words
//! - [`index`]: positional inverted index and its on-disk form
//! - [`query`]: parser and evaluator for the `AND` / `OR` / `AND NOT` / `NEAR` query language
//! - [`pmi`]: the four co-occurrence scores, context-word selection, question answering
//! - [`lsa`]: TF.IDF term-document matrix, truncated SVD, cosine similarity
//! - [`eval`]: question files, evaluation runs, accuracy reports

pub mod corpus;
pub mod error;
pub mod eval;
pub mod index;
pub mod lsa;
pub mod pmi;
pub mod query;
pub mod score;

pub use corpus::{tokenize, Corpus, Document, StopWordList};
pub use error::{Error, Result};
pub use eval::{corrected_score, EvalReport, Method, ReportFormat};
pub use index::{PositionalIndex, PostingList};
pub use lsa::{SvdFactors, TermDocMatrix};
pub use pmi::{
    AnswerResult, HitSource, InjectedHits, ScoreBreakdown, ScoreMethod, SynonymQuestion,
};
pub use query::{DocSet, QueryEngine, QueryExpr, DEFAULT_NEAR_WINDOW};
pub use score::Score;
