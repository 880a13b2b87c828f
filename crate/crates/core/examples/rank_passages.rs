// Building a sentence index and ranking it with every method.

use std::collections::BTreeSet;

use passage_cd::cli::read_documents;
use passage_cd::text::tokenize;
use passage_cd::{EmbeddingTable, IdfTable, Method, PassageIndex, RetrievalContext};

const EMBEDDINGS: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/fixtures/mini/embeddings.txt"
));
const DOCS: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mini/docs.tsv"));
const QUESTION_CORPUS: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/fixtures/mini/question_corpus.txt"
));

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let embeddings = EmbeddingTable::load(EMBEDDINGS.as_bytes())?;
    let docs = read_documents(DOCS.as_bytes())?;
    let doc_idf = IdfTable::build(docs.iter().map(|(_, t)| tokenize(t)), "documents")?;
    let question_idf = IdfTable::build(QUESTION_CORPUS.lines().map(tokenize), "questions")?;
    let index = PassageIndex::build(docs, &embeddings, &doc_idf)?;
    println!(
        "{} passages from {} documents",
        index.len(),
        index.documents().count()
    );

    let ctx = RetrievalContext {
        embeddings: &embeddings,
        doc_idf: &doc_idf,
        question_idf: Some(&question_idf),
    };
    let question = tokenize("What is in the blood of the artery?");
    let candidates: BTreeSet<String> = ["d1", "d3"].into_iter().map(String::from).collect();

    for method in [Method::Cd, Method::CdIdf, Method::CdQ] {
        let ranked = index.rank("q04", &question, method, 3, &ctx, Some(&candidates))?;
        println!("{method}:");
        for (i, item) in ranked.items.iter().enumerate() {
            let text = &index
                .passage(&item.passage_id)
                .expect("ranked ids are indexed")
                .text;
            println!("  {} {:<5} {:.4}  {text}", i + 1, item.passage_id, item.score);
        }
    }

    let random = index.random_baseline("q04", &candidates, 3, 42)?;
    println!("rnd: {:?}", random.passage_ids().collect::<Vec<_>>());

    // The index file is plain TSV and reloads to the same rankings.
    let mut saved = Vec::new();
    index.save(&mut saved)?;
    let reloaded = PassageIndex::load(saved.as_slice(), &embeddings)?;
    let a = index.rank("q04", &question, Method::CdQ, 10, &ctx, None)?;
    let b = reloaded.rank("q04", &question, Method::CdQ, 10, &ctx, None)?;
    assert_eq!(a.items, b.items);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
