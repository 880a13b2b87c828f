// Paired significance testing with the Wilcoxon signed-rank test.

use std::collections::BTreeMap;

use passage_cd::eval::{paired_by_id, wilcoxon_signed_rank, PValueMethod, SignedRanks};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // Per-question average precision of two systems.
    let a = [0.9, 0.8, 0.7, 0.6, 0.5];
    let b = [0.8, 0.6, 0.4, 0.2, 0.0];
    let r = wilcoxon_signed_rank(&a, &b, 0.05)?;
    println!(
        "5 wins for A: W = {}, p = {:.4} ({:?}), significant: {}",
        r.statistic, r.p_value, r.method, r.significant
    );
    assert_eq!(r.method, PValueMethod::Exact);

    let ranks = SignedRanks::new(&[1.0, -2.0, 3.0, -4.0, 5.0]);
    println!(
        "mixed signs: W+ = {}, W- = {}, exact p = {:.4}",
        ranks.w_plus(),
        ranks.w_minus(),
        ranks.exact_p_value()
    );

    // Larger samples switch to the normal approximation.
    let diffs: Vec<f64> = (1..=30)
        .map(|i| if i % 4 == 0 { -(i as f64) } else { i as f64 })
        .collect();
    let zeros = vec![0.0; diffs.len()];
    let r = wilcoxon_signed_rank(&diffs, &zeros, 0.05)?;
    let exact = SignedRanks::new(&diffs).exact_p_value();
    println!("n = 30: approximate p = {:.4}, exact p = {:.4}", r.p_value, exact);

    // Runs are paired by question id, not by position.
    let run_a: BTreeMap<String, f64> = [("q2", 0.5), ("q1", 1.0), ("q3", 0.25)]
        .map(|(k, v)| (k.to_string(), v))
        .into();
    let run_b: BTreeMap<String, f64> = [("q1", 0.5), ("q3", 0.25), ("q2", 0.0)]
        .map(|(k, v)| (k.to_string(), v))
        .into();
    let r = paired_by_id(&run_a, &run_b, 0.05)?;
    println!(
        "paired by id: n = {} (one tie dropped), p = {:.4}",
        r.n, r.p_value
    );

    let run_c: BTreeMap<String, f64> = [("q9", 0.1)].map(|(k, v)| (k.to_string(), v)).into();
    if let Err(e) = paired_by_id(&run_a, &run_c, 0.05) {
        println!("mismatched runs: {e}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
