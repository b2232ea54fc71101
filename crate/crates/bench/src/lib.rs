//! Synthetic corpora for benchmarks.

use pmiir::Corpus;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Letters-only filler word for index `i`.
pub fn filler_word(mut i: usize) -> String {
    let mut w = String::from("f");
    loop {
        w.push((b'a' + (i % 26) as u8) as char);
        i /= 26;
        if i == 0 {
            return w;
        }
    }
}

/// `docs` documents of `len` tokens drawn from a vocabulary of `vocab` words,
/// with "not" sprinkled in.
pub fn random_corpus(seed: u64, docs: usize, len: usize, vocab: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<String> = (0..vocab).map(filler_word).collect();
    let texts = (0..docs).map(|d| {
        let text: Vec<&str> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.02) {
                    "not"
                } else {
                    words.choose(&mut rng).unwrap().as_str()
                }
            })
            .collect();
        (format!("doc{d:06}"), text.join(" "))
    });
    Corpus::from_texts(texts).expect("ids are unique")
}
