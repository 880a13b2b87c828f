//! Batch commands behind the `passage-cd` binary.
//!
//! Each command writes its report to `out`, diagnostics to `err`, and returns
//! the process exit code: 0 on success, 1 when a computation or output step
//! fails, 2 for bad usage or unreadable/invalid inputs.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};
use crate::eval::{self, EvalConfig, RunResult, ScoreMetric, DEFAULT_CUTOFF, DEFAULT_OVERLAP_THRESHOLD};
use crate::idf::{IdfTable, DOCUMENTS_LABEL, QUESTIONS_LABEL};
use crate::ingest::load_question_set;
use crate::retrieval::{escape, Method, PassageIndex, RetrievalContext};
use crate::text::tokenize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "passage-cd",
    version,
    about = "Weighted-centroid passage retrieval and evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an idf table from one or more plain-text corpora (one unit per line).
    IdfBuild(IdfBuildArgs),
    /// Split documents into sentence passages and write the index file.
    IndexBuild(IndexBuildArgs),
    /// Rank indexed passages for a single question.
    Query(QueryArgs),
    /// Run a method over a question set and write a run file.
    Eval(EvalArgs),
    /// Wilcoxon signed-rank comparison of two run files.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusUnit {
    Doc,
    Question,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Cd,
    CdIdf,
    CdQ,
    Rnd,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Cd => Method::Cd,
            MethodArg::CdIdf => Method::CdIdf,
            MethodArg::CdQ => Method::CdQ,
            MethodArg::Rnd => Method::Rnd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Ap,
    Precision,
    Recall,
}

impl From<MetricArg> for ScoreMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Ap => ScoreMetric::Ap,
            MetricArg::Precision => ScoreMetric::Precision,
            MetricArg::Recall => ScoreMetric::Recall,
        }
    }
}

#[derive(Debug, Args)]
pub struct IdfBuildArgs {
    /// Corpus file; repeat to build over the union of several corpora.
    #[arg(long = "corpus", required = true)]
    pub corpus: Vec<PathBuf>,
    /// `doc` lines may carry a leading `<doc_id>\t`, which is stripped.
    #[arg(long, value_enum)]
    pub unit: CorpusUnit,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IndexBuildArgs {
    /// One document per line: `<doc_id>\t<text>`.
    #[arg(long)]
    pub docs: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub doc_idf: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Artifacts shared by `query` and `eval`.
#[derive(Debug, Args)]
pub struct RetrievalArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub doc_idf: PathBuf,
    /// Required for `cd-q`.
    #[arg(long)]
    pub question_idf: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_CUTOFF, value_parser = parse_k)]
    pub k: usize,
    /// Seed for the `rnd` baseline.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub retrieval: RetrievalArgs,
    #[arg(long)]
    pub question: String,
    /// Comma-separated document ids to restrict ranking to.
    #[arg(long, value_delimiter = ',')]
    pub docs: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub questions: PathBuf,
    #[command(flatten)]
    pub retrieval: RetrievalArgs,
    #[arg(long, default_value_t = DEFAULT_OVERLAP_THRESHOLD)]
    pub overlap_threshold: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub run_a: PathBuf,
    #[arg(long)]
    pub run_b: PathBuf,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

fn parse_k(raw: &str) -> std::result::Result<usize, String> {
    match raw.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(format!("expected a positive integer, got {raw:?}")),
    }
}

/// A command failure carrying its exit code.
struct Failure {
    code: u8,
    error: Error,
}

trait FailWith<T> {
    /// Bad or unreadable input.
    fn input(self) -> std::result::Result<T, Failure>;
    /// Failure while computing or writing results.
    fn compute(self) -> std::result::Result<T, Failure>;
}

impl<T> FailWith<T> for Result<T> {
    fn input(self) -> std::result::Result<T, Failure> {
        self.map_err(|error| Failure {
            code: EXIT_USAGE,
            error,
        })
    }

    fn compute(self) -> std::result::Result<T, Failure> {
        self.map_err(|error| Failure {
            code: EXIT_FAILURE,
            error,
        })
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Dispatches a parsed command line.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::IdfBuild(a) => idf_build(&a, out),
        Command::IndexBuild(a) => index_build(&a, out, err),
        Command::Query(a) => query(&a, out),
        Command::Eval(a) => evaluate(&a, out, err),
        Command::Compare(a) => compare(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.error);
            f.code
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn idf_build(args: &IdfBuildArgs, out: &mut dyn Write) -> CmdResult {
    let mut units = Vec::new();
    for path in &args.corpus {
        for line in open(path).input()?.lines() {
            let line = line.map_err(Error::from).input()?;
            let text = match args.unit {
                CorpusUnit::Doc => line.split_once('\t').map_or(line.as_str(), |(_, t)| t),
                CorpusUnit::Question => line.as_str(),
            };
            if !text.trim().is_empty() {
                units.push(tokenize(text));
            }
        }
    }
    let label = match args.unit {
        CorpusUnit::Doc => DOCUMENTS_LABEL,
        CorpusUnit::Question => QUESTIONS_LABEL,
    };
    let table = IdfTable::build(&units, label).input()?;
    write_file(&args.out, |w| table.save(w)).compute()?;
    writeln!(
        out,
        "n_docs {} vocabulary {}",
        table.n_docs(),
        table.vocabulary_size()
    )
    .map_err(Error::from)
    .compute()
}

/// Reads `<doc_id>\t<text>` lines, skipping blank ones.
pub fn read_documents<R: BufRead>(source: R) -> Result<Vec<(String, String)>> {
    let mut docs = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (id, text) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse("documents", idx + 1, "expected \"<doc_id>\\t<text>\""))?;
        docs.push((id.trim().to_owned(), text.to_owned()));
    }
    Ok(docs)
}

fn index_build(args: &IndexBuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let docs = read_documents(open(&args.docs).input()?).input()?;
    let embeddings = EmbeddingTable::load(open(&args.embeddings).input()?).input()?;
    let doc_idf = IdfTable::load(open(&args.doc_idf).input()?).input()?;
    if docs.is_empty() {
        let _ = writeln!(err, "warning: {} contains no documents", args.docs.display());
    }
    let index = PassageIndex::build(docs, &embeddings, &doc_idf).input()?;
    write_file(&args.out, |w| index.save(w)).compute()?;
    writeln!(out, "{} passages", index.len())
        .map_err(Error::from)
        .compute()
}

struct Loaded {
    index: PassageIndex,
    embeddings: EmbeddingTable,
    doc_idf: IdfTable,
    question_idf: Option<IdfTable>,
}

impl Loaded {
    fn read(args: &RetrievalArgs) -> std::result::Result<Self, Failure> {
        let method: Method = args.method.into();
        if method == Method::CdQ && args.question_idf.is_none() {
            return Err(Failure {
                code: EXIT_USAGE,
                error: Error::InvalidArgument("--method cd-q requires --question-idf".into()),
            });
        }
        let embeddings = EmbeddingTable::load(open(&args.embeddings).input()?).input()?;
        let doc_idf = IdfTable::load(open(&args.doc_idf).input()?).input()?;
        let question_idf = match &args.question_idf {
            Some(p) => Some(IdfTable::load(open(p).input()?).input()?),
            None => None,
        };
        let index = PassageIndex::load(open(&args.index).input()?, &embeddings).input()?;
        Ok(Self {
            index,
            embeddings,
            doc_idf,
            question_idf,
        })
    }

    fn context(&self) -> RetrievalContext<'_> {
        RetrievalContext {
            embeddings: &self.embeddings,
            doc_idf: &self.doc_idf,
            question_idf: self.question_idf.as_ref(),
        }
    }
}

fn query(args: &QueryArgs, out: &mut dyn Write) -> CmdResult {
    let loaded = Loaded::read(&args.retrieval)?;
    let r = &args.retrieval;
    let method: Method = r.method.into();
    let candidates: Option<BTreeSet<String>> = args
        .docs
        .as_ref()
        .map(|d| d.iter().map(|s| s.trim().to_owned()).collect());

    let ranked = if method == Method::Rnd {
        let all: BTreeSet<String>;
        let cands = match &candidates {
            Some(c) => c,
            None => {
                all = loaded.index.documents().map(str::to_owned).collect();
                &all
            }
        };
        loaded
            .index
            .random_baseline("query", cands, r.k, r.seed)
            .input()?
    } else {
        let tokens = tokenize(&args.question);
        loaded
            .index
            .rank(
                "query",
                &tokens,
                method,
                r.k,
                &loaded.context(),
                candidates.as_ref(),
            )
            .input()?
    };

    for (rank, item) in ranked.items.iter().enumerate() {
        let text = loaded
            .index
            .passage(&item.passage_id)
            .map(|p| escape(&p.text))
            .unwrap_or_default();
        writeln!(
            out,
            "{}\t{}\t{:.6}\t{}",
            rank + 1,
            item.passage_id,
            item.score,
            text
        )
        .map_err(Error::from)
        .compute()?;
    }
    Ok(())
}

fn evaluate(args: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let questions = load_question_set(open(&args.questions).input()?).input()?;
    let loaded = Loaded::read(&args.retrieval)?;
    let r = &args.retrieval;
    let config = EvalConfig {
        method: r.method.into(),
        k: r.k,
        seed: r.seed,
        overlap_threshold: args.overlap_threshold,
    };
    let evaluation = eval::evaluate(&loaded.index, &questions, &loaded.context(), &config).compute()?;
    for w in &evaluation.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    write_file(&args.out, |w| evaluation.run.save(w)).compute()?;
    let a = evaluation.run.aggregates;
    writeln!(
        out,
        "MAP {:.3} P {:.3} R {:.3} F1 {:.3}",
        a.map, a.precision, a.recall, a.f1
    )
    .map_err(Error::from)
    .compute()
}

fn compare(args: &CompareArgs, out: &mut dyn Write) -> CmdResult {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Failure {
            code: EXIT_USAGE,
            error: Error::InvalidArgument(format!("alpha {} outside (0, 1)", args.alpha)),
        });
    }
    let a = RunResult::load(open(&args.run_a).input()?).input()?;
    let b = RunResult::load(open(&args.run_b).input()?).input()?;
    let result = eval::compare_runs(&a, &b, args.metric.into(), args.alpha).input()?;
    writeln!(
        out,
        "W {} p-value {:.4} n {} {}",
        result.statistic,
        result.p_value,
        result.n,
        if result.significant {
            "significant"
        } else {
            "not significant"
        }
    )
    .map_err(Error::from)
    .compute()
}
