// Weighted centroids and cosine distance between a question and a passage.

use std::collections::HashMap;

use passage_cd::semantic::Scaled;
use passage_cd::text::tokenize;
use passage_cd::{centroid, cosine_distance, EmbeddingTable, Uniform};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut emb = EmbeddingTable::new(3)?;
    emb.insert("what", vec![0.0, 0.0, 2.0])?;
    emb.insert("is", vec![0.1, 0.1, 0.5])?;
    emb.insert("protein", vec![1.0, 0.1, 0.0])?;
    emb.insert("enzyme", vec![0.9, 0.3, 0.1])?;
    emb.insert("artery", vec![0.0, 1.0, 0.2])?;

    let question = tokenize("What is an enzyme?");
    let passage = tokenize("An enzyme is a protein.");
    let other = tokenize("The artery.");

    // "an", "a", "the" have no vector and are skipped.
    let weights: HashMap<String, f64> = [
        ("what", 0.1),
        ("is", 0.2),
        ("enzyme", 3.0),
        ("protein", 2.5),
        ("artery", 2.0),
    ]
    .into_iter()
    .map(|(t, w)| (t.to_string(), w))
    .collect();

    for (label, q, p, o) in [
        (
            "uniform",
            centroid(&question, &emb, &Uniform),
            centroid(&passage, &emb, &Uniform),
            centroid(&other, &emb, &Uniform),
        ),
        (
            "weighted",
            centroid(&question, &emb, &weights),
            centroid(&passage, &emb, &weights),
            centroid(&other, &emb, &weights),
        ),
    ] {
        println!(
            "{label:<9} d(q, enzyme passage) = {:.4}   d(q, artery passage) = {:.4}   coverage {}/{}",
            cosine_distance(q.components(), p.components())?,
            cosine_distance(q.components(), o.components())?,
            q.covered_tokens(),
            q.total_tokens(),
        );
    }

    // Multiplying every weight by the same constant leaves the centroid unchanged.
    let scaled = Scaled {
        inner: &weights,
        factor: 40.0,
    };
    let a = centroid(&question, &emb, &weights);
    let b = centroid(&question, &emb, &scaled);
    let drift = cosine_distance(a.components(), b.components())?;
    println!("distance between weighted and 40x-weighted centroid: {drift:.2e}");
    assert!(drift < 1e-12);

    let nothing = centroid(&tokenize("unknown words only"), &emb, &Uniform);
    println!("uncovered text -> zero vector: {}", nothing.is_zero());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
