// Reading and writing word vectors in the word2vec text format.

use passage_cd::EmbeddingTable;

const VECTORS: &str = "\
4 3
protein 0.9 0.1 0.0
gene 0.8 0.0 0.3
artery 0.0 0.6 0.8
what 0.1 0.1 0.1
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let table = EmbeddingTable::load(VECTORS.as_bytes())?;
    println!("{} words, dim {}", table.len(), table.dim());
    println!("gene -> {:?}", table.lookup("gene"));
    println!("kinase covered: {}", table.contains("kinase"));

    // The header line is optional on input and always written on output.
    let mut out = Vec::new();
    table.save(&mut out)?;
    let reloaded = EmbeddingTable::load(out.as_slice())?;
    assert_eq!(reloaded.lookup("artery"), table.lookup("artery"));

    match EmbeddingTable::load("gene 0.1 0.2\nprotein 0.3\n".as_bytes()) {
        Err(e) => println!("ragged file rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
