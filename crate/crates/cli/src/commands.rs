use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use pmiir::eval::{self, write_choice_rows, Backend};
use pmiir::lsa::{lsa_answer, SvdFactors};
use pmiir::pmi::answer_question;
use pmiir::{
    Corpus, HitSource, InjectedHits, Method, PositionalIndex, QueryEngine, QueryExpr, StopWordList,
    TermDocMatrix,
};

use crate::{Command, Config};

pub enum CliError {
    /// Bad input: exit status 2.
    User(pmiir::Error),
    /// Anything else: exit status 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::User(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::User(e) => e.fmt(f),
            CliError::Internal(msg) => f.write_str(msg),
        }
    }
}

impl From<pmiir::Error> for CliError {
    fn from(e: pmiir::Error) -> Self {
        CliError::User(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Internal(format!("write failed: {e}"))
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::User(pmiir::Error::Usage(msg.into()))
}

pub fn run(config: &Config, command: &Command) -> CliResult {
    match command {
        Command::Index => cmd_index(config),
        Command::Hits { query } => cmd_hits(config, query),
        Command::Answer { record } => cmd_answer(config, record),
        Command::Eval { questions } => cmd_eval(config, questions, config.method.into()),
        Command::LsaBuild => cmd_lsa_build(config),
        Command::LsaEval { questions } => cmd_eval(config, questions, Method::Lsa),
    }
}

fn load_corpus(config: &Config) -> CliResult<Corpus> {
    let path = config
        .corpus
        .as_ref()
        .ok_or_else(|| usage("--corpus is required"))?;
    Ok(Corpus::load(path)?)
}

fn load_stopwords(config: &Config) -> CliResult<StopWordList> {
    Ok(match &config.stopwords {
        Some(path) => StopWordList::load(path)?,
        None => StopWordList::default(),
    })
}

/// Where hit counts come from: an injected table, a saved index, or an index
/// built on the fly from `--corpus`, in that order of preference.
enum HitBackend {
    Injected(InjectedHits),
    Index(PositionalIndex),
}

impl HitBackend {
    fn open(config: &Config) -> CliResult<Self> {
        if let Some(path) = &config.inject_hits {
            return Ok(HitBackend::Injected(InjectedHits::load(path)?));
        }
        if let Some(path) = &config.index {
            return Ok(HitBackend::Index(PositionalIndex::load(path)?));
        }
        if config.corpus.is_some() {
            return Ok(HitBackend::Index(PositionalIndex::build(&load_corpus(
                config,
            )?)));
        }
        Err(usage("need --index, --corpus or --inject-hits"))
    }

    fn with_source<T>(&self, config: &Config, f: impl FnOnce(&dyn HitSource) -> T) -> T {
        match self {
            HitBackend::Injected(table) => f(table),
            HitBackend::Index(index) => {
                f(&QueryEngine::with_near_window(index, config.near_window))
            }
        }
    }
}

fn open_factors(config: &Config) -> CliResult<SvdFactors> {
    match &config.factors {
        Some(path) => Ok(SvdFactors::load(path)?),
        None => build_factors(config),
    }
}

fn build_factors(config: &Config) -> CliResult<SvdFactors> {
    let matrix = TermDocMatrix::build(&load_corpus(config)?)?;
    let k = match config.k {
        Some(k) => k as usize,
        None => matrix.default_k(),
    };
    if k == 0 {
        return Err(usage(
            "term matrix is all zeros; LSA needs terms that are not in every document",
        ));
    }
    Ok(SvdFactors::truncated(&matrix, k)?)
}

fn cmd_index(config: &Config) -> CliResult {
    let corpus = load_corpus(config)?;
    let index = PositionalIndex::build(&corpus);
    if let Some(path) = config.index.as_ref().or(config.out.as_ref()) {
        index.save(path)?;
    }
    println!(
        "{} documents, {} terms",
        index.doc_count(),
        index.term_count()
    );
    Ok(())
}

fn cmd_hits(config: &Config, query: &str) -> CliResult {
    let expr = QueryExpr::parse(query)?;
    let backend = HitBackend::open(config)?;
    let count = backend.with_source(config, |source| source.hits(&expr))?;
    println!("{count}");
    Ok(())
}

fn cmd_answer(config: &Config, record: &str) -> CliResult {
    let question = eval::parse_question(record)?;
    let method: Method = config.method.into();
    let result = match method.score_method() {
        Some(m) => {
            let stoplist = load_stopwords(config)?;
            let backend = HitBackend::open(config)?;
            backend.with_source(config, |source| {
                answer_question(&question, m, &stoplist, source)
            })?
        }
        None => lsa_answer(&question, &open_factors(config)?)?,
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{}", question.choices[result.chosen_index])?;
    if result.tie {
        let tied: Vec<&str> = result
            .tied
            .iter()
            .map(|&i| question.choices[i].as_str())
            .collect();
        writeln!(
            out,
            "warning: tie between {}; picked the first",
            tied.join(", ")
        )?;
    }
    if result.fell_back {
        writeln!(out, "note: no context word available, fell back to s3")?;
    }
    if let Some(ctx) = &result.context_used {
        writeln!(out, "context: {ctx}")?;
    }
    write_choice_rows(&mut out, &question, &result)?;
    Ok(())
}

fn cmd_eval(config: &Config, questions: &Path, method: Method) -> CliResult {
    let questions = eval::load_questions(questions)?;
    let stoplist = load_stopwords(config)?;
    let report = match method {
        Method::Lsa => {
            let factors = open_factors(config)?;
            eval::run_evaluation(&questions, method, Backend::Lsa(&factors), &stoplist)?
        }
        _ => {
            let backend = HitBackend::open(config)?;
            backend.with_source(config, |source| {
                eval::run_evaluation(&questions, method, Backend::Hits(source), &stoplist)
            })?
        }
    };
    let format = config.format.into();
    match &config.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                CliError::Internal(format!("cannot create {}: {e}", path.display()))
            })?;
            let mut w = BufWriter::new(file);
            report.emit(format, &mut w)?;
            w.flush()?;
            println!("{}", report.summary());
        }
        None => report.emit(format, io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_lsa_build(config: &Config) -> CliResult {
    let factors = build_factors(config)?;
    let path = config
        .out
        .as_ref()
        .or(config.factors.as_ref())
        .ok_or_else(|| usage("--out is required"))?;
    factors.save(path)?;
    println!(
        "{} terms x {} documents, k = {}",
        factors.row_terms.len(),
        factors.col_chunks.len(),
        factors.k()
    );
    Ok(())
}
