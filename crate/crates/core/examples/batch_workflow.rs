// The command-line workflow driven in-process: build both idf tables, index
// the documents, evaluate two methods and compare them.

use std::path::Path;

use clap::Parser;
use passage_cd::cli::{run, Cli, EXIT_OK};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/mini/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn passage_cd(args: &[&str]) -> Result<String, Box<dyn std::error::Error>> {
    let cli = Cli::try_parse_from(std::iter::once("passage-cd").chain(args.iter().copied()))?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut out, &mut err);
    if code != EXIT_OK {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)).into());
    }
    Ok(String::from_utf8(out)?)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let work = std::env::temp_dir().join(format!("passage-cd-example-{}", std::process::id()));
    std::fs::create_dir_all(&work)?;
    let p = |name: &str| work.join(name).display().to_string();
    let (docs, emb, questions, corpus) = (
        fixture("docs.tsv"),
        fixture("embeddings.txt"),
        fixture("questions.json"),
        fixture("question_corpus.txt"),
    );
    let (doc_idf, q_idf, index) = (p("doc.idf"), p("q.idf"), p("index.tsv"));

    print!(
        "{}",
        passage_cd(&["idf-build", "--corpus", &docs, "--unit", "doc", "--out", &doc_idf])?
    );
    print!(
        "{}",
        passage_cd(&[
            "idf-build",
            "--corpus",
            &corpus,
            "--unit",
            "question",
            "--out",
            &q_idf
        ])?
    );
    print!(
        "{}",
        passage_cd(&[
            "index-build",
            "--docs",
            &docs,
            "--embeddings",
            &emb,
            "--doc-idf",
            &doc_idf,
            "--out",
            &index
        ])?
    );

    let shared = [
        "--index",
        &index,
        "--embeddings",
        &emb,
        "--doc-idf",
        &doc_idf,
        "--question-idf",
        &q_idf,
    ];
    print!(
        "{}",
        passage_cd(
            &[
                &[
                    "query",
                    "--method",
                    "cd-q",
                    "--k",
                    "3",
                    "--question",
                    "Which gene causes cancer?"
                ],
                &shared[..]
            ]
            .concat()
        )?
    );

    for method in ["cd", "cd-q"] {
        let out = p(&format!("{method}.json"));
        let line = passage_cd(
            &[
                &[
                    "eval",
                    "--questions",
                    &questions,
                    "--method",
                    method,
                    "--out",
                    &out,
                ],
                &shared[..],
            ]
            .concat(),
        )?;
        print!("{method:<5} {line}");
    }
    print!(
        "{}",
        passage_cd(&[
            "compare",
            "--run-a",
            &p("cd-q.json"),
            "--run-b",
            &p("cd.json"),
            "--metric",
            "ap"
        ])?
    );

    std::fs::remove_dir_all(Path::new(&work))?;
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
