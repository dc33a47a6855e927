//! Small reference corpora shared by tests, docs, and benches.

use crate::corpus::Corpus;

fn edges(raw: &[(&str, &str)]) -> Vec<(String, String)> {
    raw.iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

/// Three solo authors, six papers: a1 writes p1-p3 (never cited), a2 writes
/// p4 and p5, a3 writes p6. Citations: p4 -> p5, p4 -> p6, p5 -> p6.
///
/// The classic pathology probe: a1 is maximally prolific yet completely
/// uncited, so citation-blind components of a score will inflate a1 while
/// citation-driven ones must zero a1 out.
pub fn prolific_solo_corpus() -> Corpus {
    Corpus::from_edge_lists(
        &edges(&[
            ("a1", "p1"),
            ("a1", "p2"),
            ("a1", "p3"),
            ("a2", "p4"),
            ("a2", "p5"),
            ("a3", "p6"),
        ]),
        &edges(&[("p4", "p5"), ("p4", "p6"), ("p5", "p6")]),
    )
}

/// Same layout as [`prolific_solo_corpus`] plus one extra citation
/// p6 -> p1, feeding score back into the prolific author's cluster.
///
/// Under the coupled self-citation recursion this makes the author block
/// defective (the lead eigenvalue gains a Jordan chain), so successive
/// normalized iterates keep drifting toward the prolific author instead of
/// settling; useful for exercising iteration-count sensitivity.
pub fn cited_back_corpus() -> Corpus {
    Corpus::from_edge_lists(
        &edges(&[
            ("a1", "p1"),
            ("a1", "p2"),
            ("a1", "p3"),
            ("a2", "p4"),
            ("a2", "p5"),
            ("a3", "p6"),
        ]),
        &edges(&[("p4", "p5"), ("p4", "p6"), ("p5", "p6"), ("p6", "p1")]),
    )
}
