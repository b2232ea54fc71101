//! The query language: single-word terms combined with `AND`, `OR`,
//! `AND NOT` and `NEAR`, with parentheses and quoted words.
//!
//! ```text
//! expr  := or
//! or    := and ("OR" and)*
//! and   := unary (("AND" unary) | ("AND NOT" unary) | ("NEAR" unary))*
//! unary := TERM | QUOTED | "(" expr ")"
//! ```
//!
//! Keywords are case-insensitive. A word that collides with a keyword must be
//! quoted (`"not"`).

use std::collections::BTreeMap;
use std::fmt;

use crate::corpus::normalize_word;
use crate::error::{Error, Result};
use crate::index::{DocOrdinal, Position, PositionalIndex};

/// Maximum distance, in tokens, between the two sides of a `NEAR`.
pub const DEFAULT_NEAR_WINDOW: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QueryExpr {
    Term(String),
    And(Box<QueryExpr>, Box<QueryExpr>),
    Or(Box<QueryExpr>, Box<QueryExpr>),
    AndNot(Box<QueryExpr>, Box<QueryExpr>),
    Near(Box<QueryExpr>, Box<QueryExpr>),
}

impl QueryExpr {
    pub fn term(word: impl Into<String>) -> Self {
        QueryExpr::Term(word.into())
    }

    pub fn and(l: QueryExpr, r: QueryExpr) -> Self {
        QueryExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: QueryExpr, r: QueryExpr) -> Self {
        QueryExpr::Or(Box::new(l), Box::new(r))
    }

    pub fn and_not(l: QueryExpr, r: QueryExpr) -> Self {
        QueryExpr::AndNot(Box::new(l), Box::new(r))
    }

    pub fn near(l: QueryExpr, r: QueryExpr) -> Self {
        QueryExpr::Near(Box::new(l), Box::new(r))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text)?.parse()
    }

    /// Words whose positions this expression denotes, or `None` when it is not
    /// a term or an `OR` of terms.
    fn positional_terms(&self) -> Option<Vec<&str>> {
        match self {
            QueryExpr::Term(t) => Some(vec![t.as_str()]),
            QueryExpr::Or(l, r) => {
                let mut terms = l.positional_terms()?;
                terms.extend(r.positional_terms()?);
                Some(terms)
            }
            _ => None,
        }
    }
}

fn is_keyword(word: &str) -> bool {
    ["and", "or", "not", "near"]
        .iter()
        .any(|k| word.eq_ignore_ascii_case(k))
}

/// A word as it must appear in query text: quoted when it collides with a keyword.
pub fn query_word(word: &str) -> String {
    if is_keyword(word) {
        format!("\"{word}\"")
    } else {
        word.to_string()
    }
}

/// Canonical form: every binary node parenthesized, keyword-like terms quoted.
impl fmt::Display for QueryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, l, r) = match self {
            QueryExpr::Term(t) => return f.write_str(&query_word(t)),
            QueryExpr::And(l, r) => ("AND", l, r),
            QueryExpr::Or(l, r) => ("OR", l, r),
            QueryExpr::AndNot(l, r) => ("AND NOT", l, r),
            QueryExpr::Near(l, r) => ("NEAR", l, r),
        };
        write!(f, "({l} {op} {r})")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Lexeme {
    Open,
    Close,
    Word(String),
    Quoted(String),
    And,
    Or,
    Not,
    Near,
}

struct Token {
    lexeme: Lexeme,
    /// 1-based character column of the token's first character.
    column: usize,
}

fn parse_error<T>(column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        position: column,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => {
                tokens.push(Token {
                    lexeme: Lexeme::Open,
                    column,
                });
                i += 1;
            }
            ')' => {
                tokens.push(Token {
                    lexeme: Lexeme::Close,
                    column,
                });
                i += 1;
            }
            '"' => {
                let Some(len) = chars[i + 1..].iter().position(|&c| c == '"') else {
                    return parse_error(column, "unterminated quote");
                };
                let inner: String = chars[i + 1..i + 1 + len].iter().collect();
                let Some(word) = normalize_word(&inner) else {
                    return parse_error(
                        column,
                        format!("quoted text {inner:?} must be a single word"),
                    );
                };
                tokens.push(Token {
                    lexeme: Lexeme::Quoted(word),
                    column,
                });
                i += len + 2;
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"()\"".contains(chars[i]) {
                    i += 1;
                }
                let raw: String = chars[start..i].iter().collect();
                let lexeme = match raw.to_ascii_uppercase().as_str() {
                    "AND" => Lexeme::And,
                    "OR" => Lexeme::Or,
                    "NOT" => Lexeme::Not,
                    "NEAR" => Lexeme::Near,
                    _ => match normalize_word(&raw) {
                        Some(word) => Lexeme::Word(word),
                        None => {
                            return parse_error(column, format!("{raw:?} is not a single word"))
                        }
                    },
                };
                tokens.push(Token { lexeme, column });
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end_column: usize,
}

#[derive(Clone, Copy)]
enum AndOp {
    And,
    AndNot,
    Near,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            tokens: lex(text)?,
            pos: 0,
            end_column: text.chars().count() + 1,
        })
    }

    fn parse(mut self) -> Result<QueryExpr> {
        if self.tokens.is_empty() {
            return parse_error(1, "empty query");
        }
        let expr = self.parse_or()?;
        match self.peek() {
            None => Ok(expr),
            Some(Token {
                lexeme: Lexeme::Close,
                column,
            }) => parse_error(*column, "unbalanced ')'"),
            Some(tok) => parse_error(tok.column, "expected an operator"),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_lexeme(&self) -> Option<&Lexeme> {
        self.peek().map(|t| &t.lexeme)
    }

    fn parse_or(&mut self) -> Result<QueryExpr> {
        let mut left = self.parse_and()?;
        while let Some(Lexeme::Or) = self.peek_lexeme() {
            let column = self.tokens[self.pos].column;
            self.pos += 1;
            self.expect_operand("OR", column)?;
            let right = self.parse_and()?;
            left = QueryExpr::or(left, right);
        }
        Ok(left)
    }

    fn parse_and(&mut self) -> Result<QueryExpr> {
        let mut left = self.parse_unary()?;
        while let Some(tok) = self.peek() {
            let column = tok.column;
            let op = match self.peek_lexeme() {
                Some(Lexeme::And) => {
                    self.pos += 1;
                    if let Some(Lexeme::Not) = self.peek_lexeme() {
                        self.pos += 1;
                        AndOp::AndNot
                    } else {
                        AndOp::And
                    }
                }
                Some(Lexeme::Near) => {
                    self.pos += 1;
                    AndOp::Near
                }
                Some(Lexeme::Not) => return parse_error(column, "NOT must follow AND"),
                _ => break,
            };
            let (name, build): (&str, fn(QueryExpr, QueryExpr) -> QueryExpr) = match op {
                AndOp::And => ("AND", QueryExpr::and),
                AndOp::AndNot => ("AND NOT", QueryExpr::and_not),
                AndOp::Near => ("NEAR", QueryExpr::near),
            };
            self.expect_operand(name, column)?;
            let right = self.parse_unary()?;
            left = build(left, right);
        }
        Ok(left)
    }

    /// Reports a dangling operator at the operator's column.
    fn expect_operand(&self, op: &str, column: usize) -> Result<()> {
        match self.peek_lexeme() {
            Some(Lexeme::Word(_) | Lexeme::Quoted(_) | Lexeme::Open) => Ok(()),
            _ => parse_error(column, format!("{op} is missing its right operand")),
        }
    }

    fn parse_unary(&mut self) -> Result<QueryExpr> {
        let Some(tok) = self.tokens.get(self.pos) else {
            return parse_error(self.end_column, "expected a term");
        };
        let column = tok.column;
        match &tok.lexeme {
            Lexeme::Word(w) | Lexeme::Quoted(w) => {
                let term = QueryExpr::Term(w.clone());
                self.pos += 1;
                Ok(term)
            }
            Lexeme::Open => {
                self.pos += 1;
                match self.peek_lexeme() {
                    Some(Lexeme::Close) => return parse_error(column, "empty parentheses"),
                    None => return parse_error(column, "unbalanced '('"),
                    _ => {}
                }
                let inner = self.parse_or()?;
                match self.peek_lexeme() {
                    Some(Lexeme::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    None => parse_error(column, "unbalanced '('"),
                    Some(_) => {
                        parse_error(self.tokens[self.pos].column, "expected an operator or ')'")
                    }
                }
            }
            Lexeme::Close => parse_error(column, "unexpected ')'"),
            Lexeme::And | Lexeme::Or | Lexeme::Near | Lexeme::Not => {
                parse_error(column, "operator is missing its left operand")
            }
        }
    }
}

/// Sorted set of matching document ordinals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocSet(Vec<DocOrdinal>);

impl DocSet {
    pub fn from_sorted(docs: Vec<DocOrdinal>) -> Self {
        debug_assert!(docs.windows(2).all(|w| w[0] < w[1]));
        DocSet(docs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, doc: DocOrdinal) -> bool {
        self.0.binary_search(&doc).is_ok()
    }

    pub fn as_slice(&self) -> &[DocOrdinal] {
        &self.0
    }

    pub fn is_subset(&self, other: &DocSet) -> bool {
        self.0.iter().all(|&d| other.contains(d))
    }

    fn intersection(&self, other: &DocSet) -> DocSet {
        DocSet(merge(&self.0, &other.0, |a, b| a && b))
    }

    fn union(&self, other: &DocSet) -> DocSet {
        DocSet(merge(&self.0, &other.0, |a, b| a || b))
    }

    fn difference(&self, other: &DocSet) -> DocSet {
        DocSet(merge(&self.0, &other.0, |a, b| a && !b))
    }
}

/// Merges two sorted lists keeping elements for which `keep(in_left, in_right)`.
fn merge(left: &[u32], right: &[u32], keep: impl Fn(bool, bool) -> bool) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < left.len() || j < right.len() {
        let (value, in_left, in_right) = match (left.get(i), right.get(j)) {
            (Some(&a), Some(&b)) if a == b => (a, true, true),
            (Some(&a), Some(&b)) if a < b => (a, true, false),
            (Some(&a), None) => (a, true, false),
            (_, Some(&b)) => (b, false, true),
            (None, None) => unreachable!(),
        };
        if in_left {
            i += 1;
        }
        if in_right {
            j += 1;
        }
        if keep(in_left, in_right) {
            out.push(value);
        }
    }
    out
}

/// Evaluates queries against a positional index.
#[derive(Debug, Clone, Copy)]
pub struct QueryEngine<'a> {
    index: &'a PositionalIndex,
    near_window: u32,
}

impl<'a> QueryEngine<'a> {
    pub fn new(index: &'a PositionalIndex) -> Self {
        Self::with_near_window(index, DEFAULT_NEAR_WINDOW)
    }

    pub fn with_near_window(index: &'a PositionalIndex, near_window: u32) -> Self {
        QueryEngine { index, near_window }
    }

    pub fn index(&self) -> &'a PositionalIndex {
        self.index
    }

    pub fn near_window(&self) -> u32 {
        self.near_window
    }

    pub fn eval(&self, expr: &QueryExpr) -> Result<DocSet> {
        Ok(match expr {
            QueryExpr::Term(t) => DocSet(self.index.postings(t).docs().collect()),
            QueryExpr::And(l, r) => self.eval(l)?.intersection(&self.eval(r)?),
            QueryExpr::Or(l, r) => self.eval(l)?.union(&self.eval(r)?),
            QueryExpr::AndNot(l, r) => self.eval(l)?.difference(&self.eval(r)?),
            QueryExpr::Near(l, r) => self.eval_near(l, r)?,
        })
    }

    /// Number of matching documents.
    pub fn hits(&self, expr: &QueryExpr) -> Result<u64> {
        Ok(self.eval(expr)?.len() as u64)
    }

    fn positions(&self, expr: &QueryExpr) -> Result<BTreeMap<DocOrdinal, Vec<Position>>> {
        let terms = expr.positional_terms().ok_or_else(|| {
            Error::Eval(format!(
                "NEAR operand {expr} is not a word or an OR of words"
            ))
        })?;
        let mut by_doc: BTreeMap<DocOrdinal, Vec<Position>> = BTreeMap::new();
        for term in terms {
            for posting in &self.index.postings(term).entries {
                by_doc
                    .entry(posting.doc)
                    .or_default()
                    .extend_from_slice(&posting.positions);
            }
        }
        for positions in by_doc.values_mut() {
            positions.sort_unstable();
            positions.dedup();
        }
        Ok(by_doc)
    }

    fn eval_near(&self, left: &QueryExpr, right: &QueryExpr) -> Result<DocSet> {
        let left = self.positions(left)?;
        let right = self.positions(right)?;
        let docs = left
            .iter()
            .filter(|(doc, lp)| {
                right
                    .get(doc)
                    .is_some_and(|rp| within_window(lp, rp, self.near_window))
            })
            .map(|(&doc, _)| doc)
            .collect();
        Ok(DocSet(docs))
    }
}

/// True when some `a` in `left` and `b` in `right` are distinct positions at
/// most `window` apart. Both slices are sorted.
fn within_window(left: &[Position], right: &[Position], window: u32) -> bool {
    left.iter().any(|&a| {
        let start = right.partition_point(|&b| b < a.saturating_sub(window));
        right[start..]
            .iter()
            .take_while(|&&b| b <= a.saturating_add(window))
            .any(|&b| b != a)
    })
}
