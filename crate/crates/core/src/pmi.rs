//! PMI-IR: scoring each choice by `p(problem | choice)` estimated from
//! document hit counts.
//!
//! | method | numerator                                                       | denominator                                   |
//! |--------|-----------------------------------------------------------------|-----------------------------------------------|
//! | S1     | `problem AND choice`                                            | `choice`                                      |
//! | S2     | `problem NEAR choice`                                           | `choice`                                      |
//! | S3     | `(problem NEAR choice) AND NOT ((problem OR choice) NEAR "not")` | `choice AND NOT (choice NEAR "not")`          |
//! | S4     | S3 numerator with `AND context` after the `NEAR` group          | `choice AND context AND NOT (choice NEAR "not")` |

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{tokenize, unique_in_order, StopWordList};
use crate::error::{Error, Result};
use crate::query::{query_word, QueryEngine, QueryExpr};
use crate::score::{argmax, Score};

/// Anything that can count the documents matching a query.
pub trait HitSource {
    fn hits(&self, query: &QueryExpr) -> Result<u64>;
}

impl HitSource for QueryEngine<'_> {
    fn hits(&self, query: &QueryExpr) -> Result<u64> {
        QueryEngine::hits(self, query)
    }
}

/// A fixed table of query → hit count, for replaying published counts.
///
/// Queries are matched by their canonical form, so spacing and redundant
/// parentheses in the table do not matter.
#[derive(Debug, Clone, Default)]
pub struct InjectedHits {
    counts: HashMap<String, u64>,
}

impl InjectedHits {
    pub fn insert(&mut self, query: &str, count: u64) -> Result<()> {
        let canonical = QueryExpr::parse(query)?.to_string();
        self.counts.insert(canonical, count);
        Ok(())
    }

    /// Parses `query<TAB>count` lines. Counts may use `,` as a thousands
    /// separator; blank lines and lines starting with `#` are skipped.
    pub fn parse(content: &str) -> Result<Self> {
        let mut table = InjectedHits::default();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Validation(format!("line {}: {what}", lineno + 1));
            let (query, count) = line
                .rsplit_once('\t')
                .ok_or_else(|| bad("expected query<TAB>count"))?;
            let count: u64 = count
                .trim()
                .replace(',', "")
                .parse()
                .map_err(|_| bad("count is not a non-negative integer"))?;
            table
                .insert(query.trim(), count)
                .map_err(|e| bad(&e.to_string()))?;
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&content)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl HitSource for InjectedHits {
    fn hits(&self, query: &QueryExpr) -> Result<u64> {
        let key = query.to_string();
        self.counts.get(&key).copied().ok_or(Error::Lookup {
            kind: "query in injected hit table",
            name: key,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreMethod {
    /// Same-document co-occurrence.
    S1,
    /// Co-occurrence within the `NEAR` window.
    S2,
    /// `NEAR`, excluding occurrences near "not".
    S3,
    /// S3 restricted to documents containing a context word.
    S4,
}

impl fmt::Display for ScoreMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreMethod::S1 => "s1",
            ScoreMethod::S2 => "s2",
            ScoreMethod::S3 => "s3",
            ScoreMethod::S4 => "s4",
        })
    }
}

impl FromStr for ScoreMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(ScoreMethod::S1),
            "s2" => Ok(ScoreMethod::S2),
            "s3" => Ok(ScoreMethod::S3),
            "s4" => Ok(ScoreMethod::S4),
            _ => Err(Error::Usage(format!("unknown scoring method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Numerator,
    Denominator,
}

/// Query text for S1–S3. S4 needs a context word; see [`build_score4_query`].
pub fn build_score_query(
    problem: &str,
    choice: &str,
    method: ScoreMethod,
    part: Part,
) -> Result<String> {
    let (problem, choice) = (query_word(problem), query_word(choice));
    Ok(match (method, part) {
        (ScoreMethod::S1, Part::Numerator) => format!("{problem} AND {choice}"),
        (ScoreMethod::S2, Part::Numerator) => format!("{problem} NEAR {choice}"),
        (ScoreMethod::S1 | ScoreMethod::S2, Part::Denominator) => choice.to_string(),
        (ScoreMethod::S3, Part::Numerator) => {
            format!("({problem} NEAR {choice}) AND NOT (({problem} OR {choice}) NEAR \"not\")")
        }
        (ScoreMethod::S3, Part::Denominator) => {
            format!("{choice} AND NOT ({choice} NEAR \"not\")")
        }
        (ScoreMethod::S4, _) => return Err(Error::Usage("method s4 needs a context word".into())),
    })
}

pub fn build_score4_query(problem: &str, choice: &str, context: &str, part: Part) -> String {
    let (problem, choice, context) = (query_word(problem), query_word(choice), query_word(context));
    match part {
        Part::Numerator => format!(
            "({problem} NEAR {choice}) AND {context} AND NOT (({problem} OR {choice}) NEAR \"not\")"
        ),
        Part::Denominator => {
            format!("{choice} AND {context} AND NOT ({choice} NEAR \"not\")")
        }
    }
}

/// `numerator / denominator`, or minus infinity when the choice was never seen.
pub fn score_from_hits(numerator_hits: u64, denominator_hits: u64) -> Score {
    Score::ratio(numerator_hits, denominator_hits)
}

/// How one choice was scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub choice: String,
    pub numerator_query: String,
    pub numerator_hits: u64,
    pub denominator_query: String,
    pub denominator_hits: u64,
    pub score: Score,
}

/// Scores one choice. `context` must be given for S4 and only for S4.
pub fn score_choice(
    source: &dyn HitSource,
    problem: &str,
    choice: &str,
    method: ScoreMethod,
    context: Option<&str>,
) -> Result<ScoreBreakdown> {
    let (numerator_query, denominator_query) = match (method, context) {
        (ScoreMethod::S4, Some(ctx)) => (
            build_score4_query(problem, choice, ctx, Part::Numerator),
            build_score4_query(problem, choice, ctx, Part::Denominator),
        ),
        (ScoreMethod::S4, None) => {
            return Err(Error::Usage("method s4 needs a context word".into()))
        }
        (_, Some(_)) => {
            return Err(Error::Usage(format!(
                "method {method} takes no context word"
            )))
        }
        (_, None) => (
            build_score_query(problem, choice, method, Part::Numerator)?,
            build_score_query(problem, choice, method, Part::Denominator)?,
        ),
    };
    let numerator_hits = source.hits(&QueryExpr::parse(&numerator_query)?)?;
    let denominator_hits = source.hits(&QueryExpr::parse(&denominator_query)?)?;
    Ok(ScoreBreakdown {
        choice: choice.to_string(),
        numerator_query,
        numerator_hits,
        denominator_query,
        denominator_hits,
        score: score_from_hits(numerator_hits, denominator_hits),
    })
}

/// A multiple-choice synonym question with normalized words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynonymQuestion {
    pub problem: String,
    pub choices: Vec<String>,
    /// Raw sentence containing the problem word, e.g. `farmers [tap] maple syrup`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence: Option<String>,
    /// 0-based index of the correct choice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer: Option<usize>,
}

impl SynonymQuestion {
    /// Normalizes and validates. Every word must be exactly one token.
    pub fn new(
        problem: &str,
        choices: &[&str],
        sentence: Option<&str>,
        answer: Option<usize>,
    ) -> Result<Self> {
        let word = |w: &str| {
            crate::corpus::normalize_word(w)
                .ok_or_else(|| Error::Validation(format!("{w:?} is not a single word")))
        };
        let question = SynonymQuestion {
            problem: word(problem)?,
            choices: choices.iter().map(|c| word(c)).collect::<Result<_>>()?,
            sentence: sentence.map(str::to_string),
            answer,
        };
        question.validate()?;
        Ok(question)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.choices.len();
        if n < 2 {
            return Err(Error::Validation(format!(
                "need at least 2 choices, got {n}"
            )));
        }
        for (i, c) in self.choices.iter().enumerate() {
            if self.choices[..i].contains(c) {
                return Err(Error::Validation(format!("choice {c:?} is repeated")));
            }
        }
        if self.choices.contains(&self.problem) {
            return Err(Error::Validation(format!(
                "problem word {:?} is also a choice",
                self.problem
            )));
        }
        if let Some(a) = self.answer.filter(|&a| a >= n) {
            return Err(Error::Validation(format!(
                "answer {a} out of range for {n} choices"
            )));
        }
        if let Some(sentence) = &self.sentence {
            let bracketed = bracketed_word(sentence)?;
            if bracketed != self.problem {
                return Err(Error::Validation(format!(
                    "sentence brackets {bracketed:?}, expected the problem word {:?}",
                    self.problem
                )));
            }
        }
        Ok(())
    }
}

/// The normalized word inside the first `[...]` of a sentence.
fn bracketed_word(sentence: &str) -> Result<String> {
    let missing = || Error::Validation("sentence has no [bracketed] problem word".into());
    let start = sentence.find('[').ok_or_else(missing)?;
    let len = sentence[start..].find(']').ok_or_else(missing)?;
    let inner = &sentence[start + 1..start + len];
    crate::corpus::normalize_word(inner)
        .ok_or_else(|| Error::Validation(format!("bracketed text {inner:?} is not a single word")))
}

/// Sentence words that may serve as context: everything except the problem
/// word, the choices and stop words, first occurrences only, in sentence order.
pub fn context_candidates(
    question: &SynonymQuestion,
    stoplist: &StopWordList,
) -> Result<Vec<String>> {
    let sentence = question
        .sentence
        .as_deref()
        .ok_or_else(|| Error::Usage("question has no context sentence".into()))?;
    Ok(unique_in_order(tokenize(sentence))
        .into_iter()
        .filter(|w| {
            *w != question.problem && !question.choices.contains(w) && !stoplist.contains(w)
        })
        .collect())
}

/// Picks the candidate context word with the highest S3 score against the
/// problem word (earliest wins ties). `None` when no candidate has evidence.
pub fn select_context(
    question: &SynonymQuestion,
    stoplist: &StopWordList,
    source: &dyn HitSource,
) -> Result<Option<String>> {
    let candidates = context_candidates(question, stoplist)?;
    let scores = candidates
        .iter()
        .map(|c| Ok(score_choice(source, &question.problem, c, ScoreMethod::S3, None)?.score))
        .collect::<Result<Vec<_>>>()?;
    Ok(match argmax(&scores) {
        Some((best, _)) if !scores[best].is_minus_infinity() => Some(candidates[best].clone()),
        _ => None,
    })
}

/// Outcome of answering one question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerResult {
    pub chosen_index: usize,
    /// One score per choice.
    pub scores: Vec<Score>,
    /// Hit-count details per choice; empty for LSA answers.
    #[serde(default)]
    pub breakdowns: Vec<ScoreBreakdown>,
    /// More than one choice attains the maximum score.
    pub tie: bool,
    /// Every choice index attaining the maximum score.
    pub tied: Vec<usize>,
    #[serde(default)]
    pub context_used: Option<String>,
    /// S4 was requested but no context word was available, so S3 was used.
    #[serde(default)]
    pub fell_back: bool,
}

impl AnswerResult {
    /// Picks the highest score; the lowest index wins ties.
    pub fn from_scores(scores: Vec<Score>) -> Result<Self> {
        let (chosen_index, tied) =
            argmax(&scores).ok_or_else(|| Error::Usage("question has no choices".into()))?;
        Ok(AnswerResult {
            chosen_index,
            scores,
            breakdowns: Vec::new(),
            tie: tied.len() > 1,
            tied,
            context_used: None,
            fell_back: false,
        })
    }

    /// Credit for a keyed question: `1/j` when the key is among `j` tied maxima.
    pub fn credit(&self, answer: usize) -> f64 {
        if self.tied.contains(&answer) {
            1.0 / self.tied.len() as f64
        } else {
            0.0
        }
    }
}

/// Answers a question with PMI-IR. S4 selects its context word first and
/// falls back to S3 when there is no sentence or no usable context word.
pub fn answer_question(
    question: &SynonymQuestion,
    method: ScoreMethod,
    stoplist: &StopWordList,
    source: &dyn HitSource,
) -> Result<AnswerResult> {
    let (method, context, fell_back) = match method {
        ScoreMethod::S4 => {
            let context = match question.sentence {
                Some(_) => select_context(question, stoplist, source)?,
                None => None,
            };
            match context {
                Some(c) => (ScoreMethod::S4, Some(c), false),
                None => (ScoreMethod::S3, None, true),
            }
        }
        m => (m, None, false),
    };
    let breakdowns = question
        .choices
        .iter()
        .map(|c| score_choice(source, &question.problem, c, method, context.as_deref()))
        .collect::<Result<Vec<_>>>()?;
    let mut result = AnswerResult::from_scores(breakdowns.iter().map(|b| b.score).collect())?;
    result.breakdowns = breakdowns;
    result.context_used = context;
    result.fell_back = fell_back;
    Ok(result)
}
