//! Synthetic inputs shared by the benchmarks.

use glex_core::{seed, ContainmentSet, Lexicon};

/// `n` copies of `vin` under lemmas `mot00000`, `mot00001`, ...
pub fn synthetic(n: usize) -> Lexicon {
    let base = seed::lexicon();
    let vin = base.get_lemma("vin").expect("seed has vin");
    let entries = (0..n).map(|i| {
        let mut e = vin.clone();
        e.lemma = format!("mot{i:05}");
        e
    });
    Lexicon::from_entries(
        base.hierarchy().clone(),
        entries,
        &ContainmentSet::default(),
    )
    .expect("synthetic entries are valid")
}
