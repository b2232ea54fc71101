//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here goes through the index or the Jacobi SVD.
#![allow(dead_code)]

use nalgebra::DMatrix;
use pmiir::lsa::DenseMatrix;
use pmiir::{Corpus, QueryExpr};
use rand::seq::SliceRandom;
use rand::Rng;

pub const VOCAB: &[&str] = &[
    "cat", "dog", "bird", "fish", "tree", "rock", "sun", "moon", "not", "big", "small", "red",
];

/// Up to `max_docs` documents of up to `max_len` tokens over a small vocabulary,
/// so that terms collide and `NEAR` matters.
pub fn random_texts<R: Rng>(rng: &mut R, max_docs: usize, max_len: usize) -> Vec<Vec<String>> {
    let docs = rng.gen_range(1..=max_docs);
    let vocab = rng.gen_range(3..=VOCAB.len());
    (0..docs)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            (0..len)
                .map(|_| VOCAB[rng.gen_range(0..vocab)].to_string())
                .collect()
        })
        .collect()
}

pub fn corpus_of(texts: &[Vec<String>]) -> Corpus {
    Corpus::from_texts(
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| (format!("doc{i:04}"), t.join(" "))),
    )
    .unwrap()
}

fn random_term<R: Rng>(rng: &mut R) -> QueryExpr {
    QueryExpr::term(*VOCAB.choose(rng).unwrap())
}

/// Term or OR-of-terms: the only shapes `NEAR` accepts.
pub fn random_positional<R: Rng>(rng: &mut R, depth: usize) -> QueryExpr {
    if depth <= 1 || rng.gen_bool(0.5) {
        random_term(rng)
    } else {
        QueryExpr::or(
            random_positional(rng, depth - 1),
            random_positional(rng, depth - 1),
        )
    }
}

/// Random expression of depth at most `depth` over all four operators.
pub fn random_query<R: Rng>(rng: &mut R, depth: usize) -> QueryExpr {
    if depth <= 1 || rng.gen_bool(0.2) {
        return random_term(rng);
    }
    match rng.gen_range(0..4) {
        0 => QueryExpr::and(random_query(rng, depth - 1), random_query(rng, depth - 1)),
        1 => QueryExpr::or(random_query(rng, depth - 1), random_query(rng, depth - 1)),
        2 => QueryExpr::and_not(random_query(rng, depth - 1), random_query(rng, depth - 1)),
        _ => QueryExpr::near(
            random_positional(rng, depth - 1),
            random_positional(rng, depth - 1),
        ),
    }
}

pub fn depth(q: &QueryExpr) -> usize {
    match q {
        QueryExpr::Term(_) => 1,
        QueryExpr::And(l, r)
        | QueryExpr::Or(l, r)
        | QueryExpr::AndNot(l, r)
        | QueryExpr::Near(l, r) => 1 + depth(l).max(depth(r)),
    }
}

fn words_of(q: &QueryExpr, out: &mut Vec<String>) {
    match q {
        QueryExpr::Term(t) => out.push(t.clone()),
        QueryExpr::Or(l, r) => {
            words_of(l, out);
            words_of(r, out);
        }
        _ => panic!("NEAR operand must be a term or OR of terms"),
    }
}

/// Direct interpretation of a query on one token sequence.
pub fn naive_matches(q: &QueryExpr, tokens: &[String], window: usize) -> bool {
    match q {
        QueryExpr::Term(t) => tokens.contains(t),
        QueryExpr::And(l, r) => {
            naive_matches(l, tokens, window) && naive_matches(r, tokens, window)
        }
        QueryExpr::Or(l, r) => naive_matches(l, tokens, window) || naive_matches(r, tokens, window),
        QueryExpr::AndNot(l, r) => {
            naive_matches(l, tokens, window) && !naive_matches(r, tokens, window)
        }
        QueryExpr::Near(l, r) => {
            let (mut lw, mut rw) = (Vec::new(), Vec::new());
            words_of(l, &mut lw);
            words_of(r, &mut rw);
            (0..tokens.len()).any(|i| {
                let hi = (i + window).min(tokens.len().saturating_sub(1));
                lw.contains(&tokens[i])
                    && (i.saturating_sub(window)..=hi).any(|j| j != i && rw.contains(&tokens[j]))
            })
        }
    }
}

/// Matching document ordinals; ids from [`corpus_of`] keep input order.
pub fn naive_hits(q: &QueryExpr, docs: &[Vec<String>], window: usize) -> Vec<u32> {
    docs.iter()
        .enumerate()
        .filter(|(_, d)| naive_matches(q, d, window))
        .map(|(i, _)| i as u32)
        .collect()
}

pub fn to_nalgebra(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// Singular values from nalgebra's bidiagonalization SVD, descending.
pub fn reference_singular_values(m: &DenseMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Random `rows × cols` matrix of exact rank `rank` (product of Gaussian-ish factors).
pub fn random_low_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> DenseMatrix {
    let left = DMatrix::<f64>::from_fn(rows, rank, |_, _| rng.gen_range(-1.0..1.0));
    let right = DMatrix::<f64>::from_fn(rank, cols, |_, _| rng.gen_range(-1.0..1.0));
    let prod = left * right;
    let data: Vec<f64> = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .map(|(i, j)| prod[(i, j)])
        .collect();
    DenseMatrix::from_row_major(rows, cols, data)
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}
