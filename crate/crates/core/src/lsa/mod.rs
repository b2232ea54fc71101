//! Latent semantic analysis baseline.
//!
//! Words are rows of a TF.IDF-weighted term × document matrix `X`. A rank-k
//! truncated SVD `X ≈ U_k L_k A_kᵀ` compresses it, and two words are compared
//! by the cosine between their rows of `U_k L_k`. Because `A_k` has
//! orthonormal columns, those cosines equal the cosines between rows of the
//! full rank-k reconstruction.

mod matrix;
mod svd;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::pmi::{AnswerResult, SynonymQuestion};
use crate::score::Score;

pub use matrix::DenseMatrix;
pub use svd::{thin_svd, ThinSvd};

const FACTORS_MAGIC: &str = "LSAFAC1";

/// Singular values at or below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Rank used when none is requested and the matrix supports it.
pub const PREFERRED_RANK: usize = 300;
/// Default rank cap for small corpora.
pub const DESK_RANK: usize = 50;

/// TF.IDF term × document matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDocMatrix {
    pub row_terms: Vec<String>,
    pub col_chunks: Vec<String>,
    pub weights: DenseMatrix,
}

impl TermDocMatrix {
    /// One row per distinct term (sorted), one column per document.
    /// `weight = (1 + log2 tf) * log2(n / df)` where the term occurs, else 0.
    pub fn build(corpus: &Corpus) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::Usage(
                "cannot build a term matrix from an empty corpus".into(),
            ));
        }
        let mut counts: BTreeMap<&str, Vec<(usize, u32)>> = BTreeMap::new();
        for (col, doc) in corpus.documents().iter().enumerate() {
            let mut tf: HashMap<&str, u32> = HashMap::new();
            for t in &doc.tokens {
                *tf.entry(t.as_str()).or_default() += 1;
            }
            for (term, count) in tf {
                counts.entry(term).or_default().push((col, count));
            }
        }
        let n = corpus.doc_count();
        let mut weights = DenseMatrix::zeros(counts.len(), n);
        for (row, cells) in counts.values().enumerate() {
            let idf = (n as f64 / cells.len() as f64).log2();
            for &(col, tf) in cells {
                weights[(row, col)] = (1.0 + (tf as f64).log2()) * idf;
            }
        }
        Ok(TermDocMatrix {
            row_terms: counts.keys().map(|t| t.to_string()).collect(),
            col_chunks: corpus
                .documents()
                .iter()
                .map(|d| d.doc_id.clone())
                .collect(),
            weights,
        })
    }

    pub fn from_dense(weights: DenseMatrix) -> Self {
        TermDocMatrix {
            row_terms: (0..weights.rows()).map(|i| letter_label("t", i)).collect(),
            col_chunks: (0..weights.cols()).map(|j| letter_label("c", j)).collect(),
            weights,
        }
    }

    /// Numerical rank under [`RANK_TOLERANCE`].
    pub fn rank(&self) -> usize {
        numerical_rank(&thin_svd(&self.weights).sigma)
    }

    /// `min(50, rank)`, or 300 when the rank reaches it.
    pub fn default_k(&self) -> usize {
        let rank = self.rank();
        if rank >= PREFERRED_RANK {
            PREFERRED_RANK
        } else {
            rank.min(DESK_RANK)
        }
    }
}

/// `prefix` followed by `i` written in base 26 with letters `a..z`, so that
/// labels survive tokenization.
pub fn letter_label(prefix: &str, mut i: usize) -> String {
    let mut digits = Vec::new();
    loop {
        digits.push((b'a' + (i % 26) as u8) as char);
        i /= 26;
        if i == 0 {
            break;
        }
    }
    let mut label = prefix.to_string();
    label.extend(digits.iter().rev());
    label
}

fn numerical_rank(sigma: &[f64]) -> usize {
    match sigma.first() {
        Some(&top) if top > 0.0 => sigma.iter().filter(|&&s| s > RANK_TOLERANCE * top).count(),
        _ => 0,
    }
}

/// Rank-k factors `U_k` (m × k), singular values `L_k`, `A_k` (n × k).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdFactors {
    pub u: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub a: DenseMatrix,
    pub row_terms: Vec<String>,
    pub col_chunks: Vec<String>,
    #[serde(skip)]
    term_rows: HashMap<String, usize>,
}

impl SvdFactors {
    /// Truncated SVD keeping the `k` largest singular values.
    ///
    /// Each `U_k` column is signed so that its largest-magnitude entry is
    /// positive. `k` must lie in `1..=rank`.
    pub fn truncated(matrix: &TermDocMatrix, k: usize) -> Result<Self> {
        let x = &matrix.weights;
        let max_k = x.rows().min(x.cols());
        if k == 0 || k > max_k {
            return Err(Error::Usage(format!("rank k={k} outside 1..={max_k}")));
        }
        if x.is_zero() {
            return Err(Error::Usage("cannot decompose an all-zero matrix".into()));
        }
        let ThinSvd { u, sigma, v } = thin_svd(x);
        let rank = numerical_rank(&sigma);
        if k > rank {
            return Err(Error::Usage(format!(
                "rank k={k} exceeds the matrix rank {rank}"
            )));
        }
        let mut u_k = DenseMatrix::zeros(x.rows(), k);
        let mut a_k = DenseMatrix::zeros(x.cols(), k);
        for j in 0..k {
            let pivot = (0..x.rows())
                .max_by(|&p, &q| u[(p, j)].abs().total_cmp(&u[(q, j)].abs()).then(q.cmp(&p)))
                .expect("matrix has rows");
            let sign = if u[(pivot, j)] < 0.0 { -1.0 } else { 1.0 };
            for i in 0..x.rows() {
                u_k[(i, j)] = sign * u[(i, j)];
            }
            for i in 0..x.cols() {
                a_k[(i, j)] = sign * v[(i, j)];
            }
        }
        Ok(Self::assemble(
            u_k,
            sigma[..k].to_vec(),
            a_k,
            matrix.row_terms.clone(),
            matrix.col_chunks.clone(),
        ))
    }

    fn assemble(
        u: DenseMatrix,
        singular_values: Vec<f64>,
        a: DenseMatrix,
        row_terms: Vec<String>,
        col_chunks: Vec<String>,
    ) -> Self {
        let term_rows = row_terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        SvdFactors {
            u,
            singular_values,
            a,
            row_terms,
            col_chunks,
            term_rows,
        }
    }

    pub fn k(&self) -> usize {
        self.singular_values.len()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.term_rows.contains_key(term)
    }

    /// The term's row of `U_k L_k`.
    pub fn word_vector(&self, term: &str) -> Result<Vec<f64>> {
        let row = *self.term_rows.get(term).ok_or_else(|| Error::Lookup {
            kind: "term",
            name: term.to_string(),
        })?;
        Ok(self
            .u
            .row(row)
            .iter()
            .zip(&self.singular_values)
            .map(|(u, s)| u * s)
            .collect())
    }

    /// `U_k L_k`, one row per term.
    pub fn scaled_rows(&self) -> DenseMatrix {
        let mut out = self.u.clone();
        for i in 0..out.rows() {
            for (j, s) in self.singular_values.iter().enumerate() {
                out[(i, j)] *= s;
            }
        }
        out
    }

    /// `U_k L_k A_kᵀ`, the rank-k approximation of the weight matrix.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.scaled_rows().matmul(&self.a.transpose())
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{FACTORS_MAGIC}")?;
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
            .strip_prefix(FACTORS_MAGIC)
            .and_then(|rest| rest.strip_prefix('\n'))
            .ok_or_else(|| Error::Format(format!("missing {FACTORS_MAGIC} header")))?;
        let raw: SvdFactors =
            serde_json::from_str(body).map_err(|e| Error::Format(e.to_string()))?;
        let k = raw.singular_values.len();
        if k == 0
            || raw.u.rows() != raw.row_terms.len()
            || raw.a.rows() != raw.col_chunks.len()
            || raw.u.cols() != k
            || raw.a.cols() != k
        {
            return Err(Error::Format("factor shapes are inconsistent".into()));
        }
        Ok(Self::assemble(
            raw.u,
            raw.singular_values,
            raw.a,
            raw.row_terms,
            raw.col_chunks,
        ))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&content)
    }
}

/// Cosine of the angle between two vectors; an error if either is zero.
pub fn cosine_similarity(v1: &[f64], v2: &[f64]) -> Result<f64> {
    let dot: f64 = v1.iter().zip(v2).map(|(a, b)| a * b).sum();
    let n1 = v1.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n2 = v2.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::Usage(
            "cosine similarity is undefined for a zero vector".into(),
        ));
    }
    Ok((dot / (n1 * n2)).clamp(-1.0, 1.0))
}

/// Answers by the highest cosine between the problem and each choice.
/// Unknown words and zero vectors score minus infinity.
pub fn lsa_answer(question: &SynonymQuestion, factors: &SvdFactors) -> Result<AnswerResult> {
    let problem = factors.word_vector(&question.problem).ok();
    let scores = question
        .choices
        .iter()
        .map(|choice| {
            let (Some(p), Ok(c)) = (problem.as_ref(), factors.word_vector(choice)) else {
                return Score::MINUS_INFINITY;
            };
            cosine_similarity(p, &c).map_or(Score::MINUS_INFINITY, Score::new)
        })
        .collect();
    AnswerResult::from_scores(scores)
}
