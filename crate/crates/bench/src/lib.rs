//! Shared corpus builders for the benchmark targets.

use bibrank::corpus::Corpus;
use bibrank::synth::{generate, AuthorsPerPaper, SynthConfig};

/// Preferential-attachment corpus sized for benchmarking.
pub fn bench_corpus(n_papers: usize, seed: u64) -> Corpus {
    let cfg = SynthConfig {
        n_papers,
        n_authors: (n_papers / 3).max(1),
        citations_per_paper: 5.0,
        attachment_offset: 1.0,
        authors_per_paper: AuthorsPerPaper::Geometric { mean: 2.0 },
        author_productivity_skew: 0.5,
        seed,
        planted_pathologies: Vec::new(),
    };
    generate(&cfg).expect("bench config is valid")
}
