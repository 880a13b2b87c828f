// Document-collection idf versus question-corpus idf.
//
// Question words are rare in abstracts but near-universal in questions, so a
// table built from questions gives them much lower weight.

use passage_cd::idf::{DOCUMENTS_LABEL, QUESTIONS_LABEL};
use passage_cd::text::tokenize;
use passage_cd::IdfTable;

const ABSTRACTS: [&str; 4] = [
    "The artery wall thickens in heart disease.",
    "Protein folding errors cause disease.",
    "Which gene controls the enzyme remains open.",
    "Blood flow in the artery was measured.",
];

const QUESTIONS: [&str; 5] = [
    "What is the role of the artery in stroke?",
    "Which protein binds the receptor?",
    "What gene is linked to cancer?",
    "What is the capital of France?",
    "Which river is the longest?",
];

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let docs = IdfTable::build(ABSTRACTS.iter().map(|t| tokenize(t)), DOCUMENTS_LABEL)?;
    let questions = IdfTable::build(QUESTIONS.iter().map(|t| tokenize(t)), QUESTIONS_LABEL)?;

    println!("{:<10} {:>10} {:>10}", "token", "documents", "questions");
    for token in ["what", "which", "the", "artery", "protein", "kinase"] {
        println!(
            "{token:<10} {:>10.4} {:>10.4}",
            docs.weight(token),
            questions.weight(token)
        );
    }
    assert!(questions.weight("what") < docs.weight("what"));

    let mut saved = Vec::new();
    questions.save(&mut saved)?;
    print!(
        "{}",
        String::from_utf8(saved)?
            .lines()
            .take(3)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!();
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
