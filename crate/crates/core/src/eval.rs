//! Question files, evaluation runs and reports.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::StopWordList;
use crate::error::{Error, Result};
use crate::lsa::{lsa_answer, SvdFactors};
use crate::pmi::{answer_question, AnswerResult, HitSource, ScoreMethod, SynonymQuestion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    S1,
    S2,
    S3,
    S4,
    Lsa,
}

impl Method {
    pub fn score_method(self) -> Option<ScoreMethod> {
        match self {
            Method::S1 => Some(ScoreMethod::S1),
            Method::S2 => Some(ScoreMethod::S2),
            Method::S3 => Some(ScoreMethod::S3),
            Method::S4 => Some(ScoreMethod::S4),
            Method::Lsa => None,
        }
    }
}

impl From<ScoreMethod> for Method {
    fn from(m: ScoreMethod) -> Self {
        match m {
            ScoreMethod::S1 => Method::S1,
            ScoreMethod::S2 => Method::S2,
            ScoreMethod::S3 => Method::S3,
            ScoreMethod::S4 => Method::S4,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.score_method() {
            Some(m) => m.fmt(f),
            None => f.write_str("lsa"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("lsa") {
            Ok(Method::Lsa)
        } else {
            s.parse::<ScoreMethod>().map(Method::from)
        }
    }
}

/// What a method answers questions from.
#[derive(Clone, Copy)]
pub enum Backend<'a> {
    Hits(&'a dyn HitSource),
    Lsa(&'a SvdFactors),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuestionRecord {
    problem: String,
    choices: Vec<String>,
    #[serde(default)]
    answer: Option<usize>,
    #[serde(default)]
    sentence: Option<String>,
}

/// Parses one JSON question record.
pub fn parse_question(record: &str) -> Result<SynonymQuestion> {
    let rec: QuestionRecord =
        serde_json::from_str(record).map_err(|e| Error::Validation(format!("bad record: {e}")))?;
    let choices: Vec<&str> = rec.choices.iter().map(String::as_str).collect();
    SynonymQuestion::new(&rec.problem, &choices, rec.sentence.as_deref(), rec.answer)
}

/// One question per non-blank line.
pub fn parse_questions(content: &str) -> Result<Vec<SynonymQuestion>> {
    content
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            parse_question(line).map_err(|e| Error::Validation(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn load_questions(path: impl AsRef<Path>) -> Result<Vec<SynonymQuestion>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_questions(&content).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

/// Accuracy with a penalty of `1/(n_choices - 1)` per incorrect answer, so that
/// random guessing scores zero in expectation.
pub fn corrected_score(
    num_correct: f64,
    num_incorrect: f64,
    total: usize,
    n_choices: usize,
) -> f64 {
    debug_assert!(n_choices >= 2 && total > 0);
    (num_correct - num_incorrect / (n_choices as f64 - 1.0)) / total as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionRecordResult {
    pub question: SynonymQuestion,
    pub result: AnswerResult,
    /// 1 for a clean correct answer, `1/j` for a `j`-way tie including the key.
    pub credit: f64,
}

impl QuestionRecordResult {
    pub fn correct(&self) -> bool {
        self.credit > 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: Method,
    pub records: Vec<QuestionRecordResult>,
    pub num_correct: f64,
    pub total: usize,
    /// `None` when there are no questions.
    pub accuracy: Option<f64>,
    pub corrected_accuracy: Option<f64>,
}

impl EvalReport {
    /// Aggregates per-question results. The guessing correction is applied per
    /// question so that question sets with mixed choice counts stay well defined.
    pub fn from_records(method: Method, records: Vec<QuestionRecordResult>) -> Self {
        let total = records.len();
        let num_correct: f64 = records.iter().map(|r| r.credit).sum();
        let (accuracy, corrected_accuracy) = if total == 0 {
            (None, None)
        } else {
            let penalized: f64 = records
                .iter()
                .map(|r| r.credit - (1.0 - r.credit) / (r.question.choices.len() as f64 - 1.0))
                .sum();
            (
                Some(num_correct / total as f64),
                Some(penalized / total as f64),
            )
        };
        EvalReport {
            method,
            records,
            num_correct,
            total,
            accuracy,
            corrected_accuracy,
        }
    }

    pub fn emit<W: Write>(&self, format: ReportFormat, mut out: W) -> std::io::Result<()> {
        match format {
            ReportFormat::Summary => writeln!(out, "{}", self.summary()),
            ReportFormat::Table => self.write_table(&mut out),
            ReportFormat::Machine => {
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)
            }
        }
    }

    /// `method  correct/total  accuracy  corrected`.
    pub fn summary(&self) -> String {
        let pct = |v: Option<f64>| {
            v.map_or("n/a".to_string(), |v| {
                format!("{}%", trim_number(v * 100.0))
            })
        };
        format!(
            "{}\t{}/{}\t{}\t{} corrected for guessing",
            self.method,
            trim_number(self.num_correct),
            self.total,
            pct(self.accuracy),
            pct(self.corrected_accuracy)
        )
    }

    fn write_table<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        for (i, rec) in self.records.iter().enumerate() {
            let q = &rec.question;
            let mark = match rec.credit {
                c if c >= 1.0 => "correct".to_string(),
                c if c > 0.0 => format!("tie, credit {}", trim_number(c)),
                _ => "wrong".to_string(),
            };
            writeln!(
                out,
                "#{} {} -> {} ({mark})",
                i + 1,
                q.problem,
                q.choices[rec.result.chosen_index]
            )?;
            if let Some(ctx) = &rec.result.context_used {
                writeln!(out, "  context: {ctx}")?;
            }
            if rec.result.fell_back {
                writeln!(out, "  no context word available; scored with s3")?;
            }
            write_choice_rows(out, q, &rec.result)?;
        }
        writeln!(out, "{}", self.summary())
    }

    pub fn from_machine(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Per-choice rows: hit counts and queries for PMI, bare scores for LSA.
pub fn write_choice_rows<W: Write>(
    out: &mut W,
    question: &SynonymQuestion,
    result: &AnswerResult,
) -> std::io::Result<()> {
    if result.breakdowns.is_empty() {
        for (choice, score) in question.choices.iter().zip(&result.scores) {
            writeln!(out, "  {choice}\t{score:.7}")?;
        }
        return Ok(());
    }
    for b in &result.breakdowns {
        writeln!(out, "  {}\t{}", b.denominator_query, b.denominator_hits)?;
    }
    for b in &result.breakdowns {
        writeln!(out, "  {}\t{}", b.numerator_query, b.numerator_hits)?;
    }
    for b in &result.breakdowns {
        writeln!(
            out,
            "  p({} | {})\t{} / {}\t{:.7}",
            question.problem, b.choice, b.numerator_hits, b.denominator_hits, b.score
        )?;
    }
    Ok(())
}

/// Formats with at most two decimals and no trailing zeros: `73.75`, `74`, `51.5`.
fn trim_number(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Summary,
    Table,
    Machine,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "summary" => Ok(ReportFormat::Summary),
            "table" | "per-question-table" => Ok(ReportFormat::Table),
            "machine" | "machine-readable" => Ok(ReportFormat::Machine),
            _ => Err(Error::Usage(format!("unknown report format {s:?}"))),
        }
    }
}

/// Answers one question with the given method and backend.
pub fn answer_with(
    question: &SynonymQuestion,
    method: Method,
    backend: Backend<'_>,
    stoplist: &StopWordList,
) -> Result<AnswerResult> {
    match (method.score_method(), backend) {
        (Some(m), Backend::Hits(source)) => answer_question(question, m, stoplist, source),
        (None, Backend::Lsa(factors)) => lsa_answer(question, factors),
        _ => Err(Error::Usage(format!(
            "method {method} cannot run on this backend"
        ))),
    }
}

/// Answers every question and scores it against its key.
pub fn run_evaluation(
    questions: &[SynonymQuestion],
    method: Method,
    backend: Backend<'_>,
    stoplist: &StopWordList,
) -> Result<EvalReport> {
    let records = questions
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let key = q.answer.ok_or_else(|| {
                Error::Validation(format!("question {} has no answer key", i + 1))
            })?;
            let result = answer_with(q, method, backend, stoplist)?;
            Ok(QuestionRecordResult {
                credit: result.credit(key),
                question: q.clone(),
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_records(method, records))
}
