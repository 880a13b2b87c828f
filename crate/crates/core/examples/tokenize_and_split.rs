// Tokenization and sentence splitting, the two steps that turn a document
// into indexable passages.

use passage_cd::text::{split_sentences, tokenize};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let abstract_text = "Mutations in BRCA1 raise cancer risk, e.g. in breast tissue. \
                         The effect was measured by Dr. Smith et al. in 2004! \
                         What remains unclear? 12 cohorts were analysed.";

    let sentences = split_sentences(abstract_text);
    println!("{} sentences", sentences.len());
    for (i, s) in sentences.iter().enumerate() {
        println!("  #{i} @{:>3}: {}", s.offset, s.text);
    }
    assert_eq!(sentences.len(), 4);

    let tokens = tokenize(sentences[0].text);
    println!("tokens of #0: {:?}", tokens.tokens());
    assert_eq!(tokens.tokens()[..3], ["mutations", "in", "brca1"]);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
