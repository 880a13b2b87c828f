// Scoring a question set: relevance judgments, cutoff metrics and run files.

use passage_cd::cli::read_documents;
use passage_cd::eval::{evaluate, EvalConfig, RelevanceJudgments, RunResult, DEFAULT_OVERLAP_THRESHOLD};
use passage_cd::text::tokenize;
use passage_cd::{load_question_set, EmbeddingTable, IdfTable, Method, PassageIndex, RetrievalContext};

const EMBEDDINGS: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/fixtures/mini/embeddings.txt"
));
const DOCS: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mini/docs.tsv"));
const QUESTIONS: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/fixtures/mini/questions.json"
));
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
    let questions = load_question_set(QUESTIONS.as_bytes())?;
    let ctx = RetrievalContext {
        embeddings: &embeddings,
        doc_idf: &doc_idf,
        question_idf: Some(&question_idf),
    };

    let first = &questions[0];
    let judgments = RelevanceJudgments::from_index(&index, first, DEFAULT_OVERLAP_THRESHOLD);
    println!(
        "{} \"{}\": relevant {:?}",
        first.id, first.body, judgments.relevant
    );

    println!("{:<7} {:>6} {:>6} {:>6} {:>6}", "method", "MAP", "P", "R", "F1");
    let mut runs = Vec::new();
    for method in Method::ALL {
        let evaluation = evaluate(&index, &questions, &ctx, &EvalConfig::new(method))?;
        for w in &evaluation.warnings {
            println!("warning: {w}");
        }
        let a = evaluation.run.aggregates;
        println!(
            "{method:<7} {:>6.3} {:>6.3} {:>6.3} {:>6.3}",
            a.map, a.precision, a.recall, a.f1
        );
        runs.push(evaluation.run);
    }

    let mut json = Vec::new();
    runs[2].save(&mut json)?;
    let reloaded = RunResult::load(json.as_slice())?;
    assert_eq!(reloaded, runs[2]);
    println!(
        "run file: {} bytes, {} questions",
        json.len(),
        reloaded.questions.len()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
