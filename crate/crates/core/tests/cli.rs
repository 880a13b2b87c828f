mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::fixture;
use passage_cd::eval::{QuestionResult, RunResult};
use passage_cd::IdfTable;
use tempfile::TempDir;

struct Scratch {
    dir: TempDir,
}

impl Scratch {
    fn new() -> Self {
        Self {
            dir: TempDir::new().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, contents).unwrap();
        p
    }
}

fn passage_cd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_passage-cd"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn load_idf(p: &Path) -> IdfTable {
    IdfTable::load(fs::read(p).unwrap().as_slice()).unwrap()
}

/// Builds doc idf and index for `docs` with the fixture embeddings.
fn indexed(sc: &Scratch, docs: &Path) -> (PathBuf, PathBuf) {
    let idf = sc.path("doc.idf");
    let index = sc.path("index.tsv");
    let o = passage_cd(&[
        "idf-build",
        "--corpus",
        s(docs),
        "--unit",
        "doc",
        "--out",
        s(&idf),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = passage_cd(&[
        "index-build",
        "--docs",
        s(docs),
        "--embeddings",
        s(&fixture("embeddings.txt")),
        "--doc-idf",
        s(&idf),
        "--out",
        s(&index),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    (idf, index)
}

#[test]
fn idf_build_counts_lines() {
    let sc = Scratch::new();
    let corpus = sc.write("c.txt", "What is a gene?\nWhat is a cell?\n");
    let out = sc.path("q.idf");
    let o = passage_cd(&[
        "idf-build",
        "--corpus",
        s(&corpus),
        "--unit",
        "question",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "n_docs 2 vocabulary 5\n");
    let t = load_idf(&out);
    assert_eq!(t.n_docs(), 2);
    assert_eq!(t.label(), "questions");
    assert_eq!(t.document_frequency("what"), 2);
    assert_eq!(t.document_frequency("gene"), 1);
}

#[test]
fn idf_build_over_several_corpora_sums_counts() {
    let sc = Scratch::new();
    let a = sc.write("a.txt", "which gene\ngene cell\n");
    let b = sc.write("b.txt", "which cell\n");
    let (ta, tb, tab) = (sc.path("a.idf"), sc.path("b.idf"), sc.path("ab.idf"));
    for (inputs, out) in [(vec![&a], &ta), (vec![&b], &tb), (vec![&a, &b], &tab)] {
        let mut args = vec!["idf-build", "--unit", "question", "--out", s(out)];
        for i in inputs {
            args.extend(["--corpus", s(i)]);
        }
        assert!(passage_cd(&args).status.success());
    }
    let (ta, tb, tab) = (load_idf(&ta), load_idf(&tb), load_idf(&tab));
    assert_eq!(tab.n_docs(), 3);
    for tok in ["which", "gene", "cell"] {
        assert_eq!(
            tab.document_frequency(tok),
            ta.document_frequency(tok) + tb.document_frequency(tok),
            "{tok}"
        );
    }
}

#[test]
fn idf_build_missing_file_is_usage_error() {
    let sc = Scratch::new();
    let o = passage_cd(&[
        "idf-build",
        "--corpus",
        s(&sc.path("nope.txt")),
        "--unit",
        "doc",
        "--out",
        s(&sc.path("x.idf")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.txt"), "{}", stderr(&o));
}

#[test]
fn idf_build_empty_corpus_fails() {
    let sc = Scratch::new();
    let empty = sc.write("empty.txt", "\n\n");
    let o = passage_cd(&[
        "idf-build",
        "--corpus",
        s(&empty),
        "--unit",
        "doc",
        "--out",
        s(&sc.path("x.idf")),
    ]);
    assert_ne!(o.status.code(), Some(0));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn index_build_reports_passages() {
    let sc = Scratch::new();
    let docs = sc.write(
        "docs.tsv",
        "x1\tThe protein is in the cell. The gene causes disease.\n",
    );
    let idf = sc.path("doc.idf");
    passage_cd(&[
        "idf-build",
        "--corpus",
        s(&docs),
        "--unit",
        "doc",
        "--out",
        s(&idf),
    ]);
    let o = passage_cd(&[
        "index-build",
        "--docs",
        s(&docs),
        "--embeddings",
        s(&fixture("embeddings.txt")),
        "--doc-idf",
        s(&idf),
        "--out",
        s(&sc.path("index.tsv")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "2 passages\n");
}

#[test]
fn index_build_empty_docs_warns() {
    let sc = Scratch::new();
    let docs = sc.write("docs.tsv", "");
    let idf = sc.write("doc.idf", "#n_docs 1 documents\n");
    let o = passage_cd(&[
        "index-build",
        "--docs",
        s(&docs),
        "--embeddings",
        s(&fixture("embeddings.txt")),
        "--doc-idf",
        s(&idf),
        "--out",
        s(&sc.path("index.tsv")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "0 passages\n");
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn index_build_rejects_bad_lines() {
    let sc = Scratch::new();
    let idf = sc.write("doc.idf", "#n_docs 1 documents\n");
    let build = |docs: &Path| {
        passage_cd(&[
            "index-build",
            "--docs",
            s(docs),
            "--embeddings",
            s(&fixture("embeddings.txt")),
            "--doc-idf",
            s(&idf),
            "--out",
            s(&sc.path("index.tsv")),
        ])
    };
    let malformed = sc.write("bad.tsv", "a\tThe gene.\nno tab here\n");
    let o = build(&malformed);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let duplicate = sc.write("dup.tsv", "a\tThe gene.\na\tThe cell.\n");
    let o = build(&duplicate);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("duplicate"), "{}", stderr(&o));
}

fn query_args<'a>(idf: &'a Path, index: &'a Path, emb: &'a Path, method: &'a str) -> Vec<&'a str> {
    vec![
        "query",
        "--index",
        s(index),
        "--embeddings",
        s(emb),
        "--doc-idf",
        s(idf),
        "--method",
        method,
    ]
}

#[test]
fn query_identical_text_scores_zero() {
    let sc = Scratch::new();
    let (idf, index) = indexed(&sc, &fixture("docs.tsv"));
    let emb = fixture("embeddings.txt");
    for method in ["cd", "cd-idf"] {
        let mut args = query_args(&idf, &index, &emb, method);
        args.extend(["--question", "The enzyme is a protein of the cell."]);
        let o = passage_cd(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let out = stdout(&o);
        assert_eq!(out.lines().count(), 10);
        let first = out.lines().next().unwrap();
        assert_eq!(first, "1\td1#0\t0.000000\tThe enzyme is a protein of the cell.");
    }
}

#[test]
fn query_k_larger_than_index() {
    let sc = Scratch::new();
    let docs = sc.write(
        "docs.tsv",
        "x1\tThe protein is in the cell. The gene causes disease.\n",
    );
    let (idf, index) = indexed(&sc, &docs);
    let emb = fixture("embeddings.txt");
    let mut args = query_args(&idf, &index, &emb, "cd");
    args.extend(["--question", "gene", "--k", "3"]);
    let o = passage_cd(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let mut ids: Vec<&str> = lines.iter().map(|l| l.split('\t').nth(1).unwrap()).collect();
    ids.sort();
    assert_eq!(ids, ["x1#0", "x1#1"]);
    assert!(lines[0].starts_with("1\t") && lines[1].starts_with("2\t"));
}

#[test]
fn query_is_byte_identical_across_invocations() {
    let sc = Scratch::new();
    let (idf, index) = indexed(&sc, &fixture("docs.tsv"));
    let emb = fixture("embeddings.txt");
    let qidf = sc.path("q.idf");
    passage_cd(&[
        "idf-build",
        "--corpus",
        s(&fixture("question_corpus.txt")),
        "--unit",
        "question",
        "--out",
        s(&qidf),
    ]);
    for method in ["cd", "cd-idf", "cd-q", "rnd"] {
        let mut args = query_args(&idf, &index, &emb, method);
        args.extend([
            "--question-idf",
            s(&qidf),
            "--question",
            "Which gene causes cancer?",
            "--seed",
            "3",
        ]);
        let a = passage_cd(&args);
        let b = passage_cd(&args);
        assert_eq!(a.status.code(), Some(0), "{method}: {}", stderr(&a));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{method}");
    }
}

#[test]
fn query_restricted_to_documents() {
    let sc = Scratch::new();
    let (idf, index) = indexed(&sc, &fixture("docs.tsv"));
    let emb = fixture("embeddings.txt");
    let mut args = query_args(&idf, &index, &emb, "cd-idf");
    args.extend(["--question", "What is heart disease?", "--docs", "d3,d5"]);
    let o = passage_cd(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    for line in out.lines() {
        let pid = line.split('\t').nth(1).unwrap();
        assert!(pid.starts_with("d3#") || pid.starts_with("d5#"), "{line}");
    }
}

#[test]
fn query_cd_q_requires_question_idf() {
    let sc = Scratch::new();
    let (idf, index) = indexed(&sc, &fixture("docs.tsv"));
    let emb = fixture("embeddings.txt");
    let mut args = query_args(&idf, &index, &emb, "cd-q");
    args.extend(["--question", "What is a gene?"]);
    let o = passage_cd(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--question-idf"), "{}", stderr(&o));
}

#[test]
fn query_rejects_zero_k() {
    let sc = Scratch::new();
    let (idf, index) = indexed(&sc, &fixture("docs.tsv"));
    let emb = fixture("embeddings.txt");
    let mut args = query_args(&idf, &index, &emb, "cd");
    args.extend(["--question", "gene", "--k", "0"]);
    assert_eq!(passage_cd(&args).status.code(), Some(2));
}

#[test]
fn query_rejects_embeddings_of_another_dimension() {
    let sc = Scratch::new();
    let (idf, index) = indexed(&sc, &fixture("docs.tsv"));
    let other = sc.write("emb2.txt", "gene 1.0 0.0\n");
    let mut args = query_args(&idf, &index, &other, "cd");
    args.extend(["--question", "gene"]);
    let o = passage_cd(&args);
    assert_eq!(o.status.code(), Some(2));
}

const PERFECT_QUESTIONS: &str = r#"{"questions": [
  {"id": "q1", "body": "Protein enzyme gene",
   "documents": ["http://www.ncbi.nlm.nih.gov/pubmed/x1"],
   "snippets": [{"document": "http://www.ncbi.nlm.nih.gov/pubmed/x1", "text": "Protein enzyme gene."}]},
  {"id": "q2", "body": "Brain cell treatment",
   "documents": ["http://www.ncbi.nlm.nih.gov/pubmed/x2"],
   "snippets": [{"document": "http://www.ncbi.nlm.nih.gov/pubmed/x2", "text": "Brain cell treatment."}]}
]}"#;

fn eval_args<'a>(
    questions: &'a Path,
    idf: &'a Path,
    index: &'a Path,
    method: &'a str,
    out: &'a Path,
) -> Vec<&'a str> {
    vec![
        "eval",
        "--questions",
        s(questions),
        "--index",
        s(index),
        "--embeddings",
        s(&EMBEDDINGS),
        "--doc-idf",
        s(idf),
        "--method",
        method,
        "--out",
        s(out),
    ]
}

static EMBEDDINGS: std::sync::LazyLock<PathBuf> = std::sync::LazyLock::new(|| fixture("embeddings.txt"));

#[test]
fn eval_gold_ranked_first_gives_perfect_map() {
    let sc = Scratch::new();
    let docs = sc.write(
        "docs.tsv",
        "x1\tProtein enzyme gene. Heart artery blood.\nx2\tCancer disease drug. Brain cell treatment.\n",
    );
    let (idf, index) = indexed(&sc, &docs);
    let questions = sc.write("questions.json", PERFECT_QUESTIONS);
    let run = sc.path("run.json");
    let o = passage_cd(&eval_args(&questions, &idf, &index, "cd", &run));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "MAP 1.000 P 0.500 R 1.000 F1 0.667\n");

    let r = RunResult::load(fs::read(&run).unwrap().as_slice()).unwrap();
    assert_eq!(r.method, "cd");
    assert_eq!(r.questions.len(), 2);
    assert_eq!(r.questions[0].ranking[0].passage_id, "x1#0");
    assert_eq!(r.questions[1].ranking[0].passage_id, "x2#1");
}

#[test]
fn eval_rnd_is_reproducible() {
    let sc = Scratch::new();
    let (idf, index) = indexed(&sc, &fixture("docs.tsv"));
    let questions = fixture("questions.json");
    let (a, b) = (sc.path("a.json"), sc.path("b.json"));
    for out in [&a, &b] {
        let mut args = eval_args(&questions, &idf, &index, "rnd", out);
        args.extend(["--seed", "11"]);
        let o = passage_cd(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn eval_warns_about_unindexed_questions() {
    let sc = Scratch::new();
    let docs = sc.write("docs.tsv", "x1\tProtein enzyme gene. Heart artery blood.\n");
    let (idf, index) = indexed(&sc, &docs);
    let questions = sc.write("questions.json", PERFECT_QUESTIONS);
    let run = sc.path("run.json");
    let o = passage_cd(&eval_args(&questions, &idf, &index, "cd", &run));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("q2"), "{}", stderr(&o));
    let r = RunResult::load(fs::read(&run).unwrap().as_slice()).unwrap();
    let q2 = r.questions.iter().find(|q| q.id == "q2").unwrap();
    assert!(q2.ranking.is_empty());
    assert_eq!(q2.ap, 0.0);
    assert_eq!(stdout(&o), "MAP 0.500 P 0.250 R 0.500 F1 0.333\n");
}

#[test]
fn eval_rejects_malformed_question_set() {
    let sc = Scratch::new();
    let (idf, index) = indexed(&sc, &fixture("docs.tsv"));
    let questions = sc.write("questions.json", r#"{"questions": [{"id": "q1"}]}"#);
    let o = passage_cd(&eval_args(&questions, &idf, &index, "cd", &sc.path("run.json")));
    assert_eq!(o.status.code(), Some(2));
}

fn write_run(sc: &Scratch, name: &str, aps: &[(&str, f64)]) -> PathBuf {
    let questions = aps
        .iter()
        .map(|&(id, ap)| QuestionResult {
            id: id.to_string(),
            ranking: Vec::new(),
            ap,
            precision: ap,
            recall: ap,
        })
        .collect();
    let run = RunResult::from_questions("cd", questions).unwrap();
    let path = sc.path(name);
    run.save(fs::File::create(&path).unwrap()).unwrap();
    path
}

fn compare(a: &Path, b: &Path, metric: &str) -> Output {
    passage_cd(&["compare", "--run-a", s(a), "--run-b", s(b), "--metric", metric])
}

#[test]
fn compare_run_with_itself() {
    let sc = Scratch::new();
    let a = write_run(&sc, "a.json", &[("q1", 0.5), ("q2", 0.25), ("q3", 1.0)]);
    let o = compare(&a, &a, "ap");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "W 0 p-value 1.0000 n 0 not significant\n");
}

#[test]
fn compare_five_wins_is_not_significant() {
    let sc = Scratch::new();
    let a = write_run(
        &sc,
        "a.json",
        &[("q1", 0.9), ("q2", 0.8), ("q3", 0.7), ("q4", 0.6), ("q5", 0.5)],
    );
    let b = write_run(
        &sc,
        "b.json",
        &[("q1", 0.8), ("q2", 0.6), ("q3", 0.4), ("q4", 0.2), ("q5", 0.0)],
    );
    for metric in ["ap", "precision", "recall"] {
        let o = compare(&a, &b, metric);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o), "W 0 p-value 0.0625 n 5 not significant\n");
    }
}

#[test]
fn compare_disjoint_runs_is_usage_error() {
    let sc = Scratch::new();
    let a = write_run(&sc, "a.json", &[("q1", 0.9), ("q2", 0.8)]);
    let b = write_run(&sc, "b.json", &[("q3", 0.8), ("q4", 0.6)]);
    let o = compare(&a, &b, "ap");
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for id in ["q1", "q2", "q3", "q4"] {
        assert!(err.contains(id), "{err}");
    }
}

#[test]
fn compare_rejects_bad_alpha() {
    let sc = Scratch::new();
    let a = write_run(&sc, "a.json", &[("q1", 0.9)]);
    let o = passage_cd(&[
        "compare",
        "--run-a",
        s(&a),
        "--run-b",
        s(&a),
        "--metric",
        "ap",
        "--alpha",
        "1.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(passage_cd(&["frobnicate"]).status.code(), Some(2));
}
