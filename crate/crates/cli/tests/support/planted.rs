//! Synthetic corpora with a known synonym.
//!
//! The problem word appears in about a fifth of the documents. In a quarter
//! of those, the synonym is planted a few tokens away. The synonym and three
//! distractors also occur independently at the same base rate everywhere.

use pmiir::lsa::letter_label;
use pmiir::{Corpus, SynonymQuestion};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct PlantedTrial {
    pub corpus: Corpus,
    pub question: SynonymQuestion,
    /// Fraction of problem-word documents with the synonym inside the window.
    pub planted_fraction: f64,
}

pub const DOCS: usize = 500;
const FILLER: usize = 300;
const PROBLEM_RATE: f64 = 0.2;
const PLANT_FRACTION: f64 = 0.25;
const CHOICE_RATE: f64 = 0.1;
const NOT_RATE: f64 = 0.02;
const MAX_OFFSET: usize = 5;

pub fn planted_trial(seed: u64) -> PlantedTrial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filler: Vec<String> = (0..FILLER).map(|i| letter_label("f", i)).collect();
    let problem = letter_label("p", rng.gen_range(0..1000));
    let mut choices: Vec<String> = (0..4)
        .map(|i| letter_label("c", i * 1000 + rng.gen_range(0..1000)))
        .collect();
    choices.shuffle(&mut rng);
    let answer = rng.gen_range(0..4);
    let synonym = choices[answer].clone();

    let mut docs: Vec<Vec<String>> = (0..DOCS)
        .map(|_| {
            let len = rng.gen_range(20..=40);
            (0..len)
                .map(|_| {
                    if rng.gen_bool(NOT_RATE) {
                        "not".to_string()
                    } else {
                        filler.choose(&mut rng).unwrap().clone()
                    }
                })
                .collect()
        })
        .collect();

    let mut problem_docs = Vec::new();
    for (d, doc) in docs.iter_mut().enumerate() {
        if rng.gen_bool(PROBLEM_RATE) {
            let pos = rng.gen_range(0..doc.len());
            doc[pos] = problem.clone();
            problem_docs.push(d);
        }
    }
    let planted = ((problem_docs.len() as f64) * PLANT_FRACTION).ceil() as usize;
    let mut with_synonym = problem_docs.clone();
    with_synonym.shuffle(&mut rng);
    for &d in &with_synonym[..planted] {
        let doc = &mut docs[d];
        let p = doc.iter().position(|t| *t == problem).unwrap();
        let offset = rng.gen_range(1..=MAX_OFFSET);
        let q = if p + offset < doc.len() {
            p + offset
        } else {
            p - offset
        };
        doc[q] = synonym.clone();
    }
    // independent occurrences never overwrite the problem word or a planted choice
    for doc in docs.iter_mut() {
        for choice in &choices {
            if rng.gen_bool(CHOICE_RATE) {
                let pos = rng.gen_range(0..doc.len());
                if doc[pos] != problem && !choices.contains(&doc[pos]) {
                    doc[pos] = choice.clone();
                }
            }
        }
    }

    let near = |doc: &Vec<String>| {
        let ps: Vec<usize> = (0..doc.len()).filter(|&i| doc[i] == problem).collect();
        ps.iter()
            .any(|&p| (0..doc.len()).any(|j| j != p && p.abs_diff(j) <= 10 && doc[j] == synonym))
    };
    let with_problem: Vec<&Vec<String>> = docs.iter().filter(|d| d.contains(&problem)).collect();
    let planted_fraction =
        with_problem.iter().filter(|d| near(d)).count() as f64 / with_problem.len().max(1) as f64;

    let corpus = Corpus::from_texts(
        docs.iter()
            .enumerate()
            .map(|(i, d)| (format!("doc{i:04}"), d.join(" "))),
    )
    .unwrap();
    let refs: Vec<&str> = choices.iter().map(String::as_str).collect();
    PlantedTrial {
        corpus,
        question: SynonymQuestion::new(&problem, &refs, None, Some(answer)).unwrap(),
        planted_fraction,
    }
}
