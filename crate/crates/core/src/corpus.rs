//! Corpus model: authors, papers, authorship and citation edges, optional
//! per-paper metadata, plus the validation report that records what had to
//! be cleaned up during construction.

use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("duplicate author key {0:?}")]
    DuplicateAuthorKey(String),
    #[error("duplicate paper id {0:?}")]
    DuplicatePaperId(String),
    #[error("authorship edge ({author}, {paper}) is out of range ({n_authors} authors, {n_papers} papers)")]
    AuthorshipOutOfRange {
        author: usize,
        paper: usize,
        n_authors: usize,
        n_papers: usize,
    },
    #[error("metadata has {actual} entries but the corpus has {expected} papers")]
    MetadataLengthMismatch { expected: usize, actual: usize },
}

/// Optional per-paper record carried through from ingestion.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperMeta {
    pub year: i32,
    pub venue: String,
    pub reported_times_cited: u64,
}

/// What construction had to drop or merge. Carried on the corpus so that
/// [`Corpus::validate`] can report it later.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestStats {
    pub self_citations_stripped: usize,
    pub duplicate_authorship_collapsed: usize,
    pub duplicate_citations_collapsed: usize,
    pub dangling_citations_dropped: usize,
}

/// Anomaly summary for a corpus. Construction-time cleanups are copied from
/// [`IngestStats`]; the zero-degree counts are recomputed on demand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub self_citations_stripped: usize,
    pub duplicate_authorship_collapsed: usize,
    pub duplicate_citations_collapsed: usize,
    pub dangling_citations_dropped: usize,
    pub zero_author_papers: usize,
    pub zero_paper_authors: usize,
}

impl ValidationReport {
    /// True when nothing was cleaned up and no entity is disconnected.
    pub fn is_clean(&self) -> bool {
        *self == ValidationReport::default()
    }
}

/// Immutable corpus of authors, papers, and the edges between them.
///
/// Indices into `authors` and `papers` are assigned by the constructor's
/// caller (first-appearance order in the CSV loader and the generator).
/// Authorship and citation edge lists are kept sorted and deduplicated;
/// self-citations and citations with out-of-range endpoints are stripped at
/// construction and counted in [`IngestStats`].
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    authors: Vec<String>,
    papers: Vec<String>,
    authorship: Vec<(usize, usize)>,
    citations: Vec<(usize, usize)>,
    metadata: Vec<Option<PaperMeta>>,
    ingest: IngestStats,
}

impl Corpus {
    /// Builds a corpus from entity lists and index-based edge lists.
    ///
    /// Citation edges that point outside the paper list are dropped and
    /// counted as dangling; self-citations are stripped; duplicate edges of
    /// either kind are collapsed. Authorship edges must be in range.
    pub fn new(
        authors: Vec<String>,
        papers: Vec<String>,
        authorship: Vec<(usize, usize)>,
        citations: Vec<(usize, usize)>,
    ) -> Result<Self, CorpusError> {
        let mut seen = HashSet::new();
        for key in &authors {
            if !seen.insert(key.as_str()) {
                return Err(CorpusError::DuplicateAuthorKey(key.clone()));
            }
        }
        seen.clear();
        for id in &papers {
            if !seen.insert(id.as_str()) {
                return Err(CorpusError::DuplicatePaperId(id.clone()));
            }
        }

        for &(author, paper) in &authorship {
            if author >= authors.len() || paper >= papers.len() {
                return Err(CorpusError::AuthorshipOutOfRange {
                    author,
                    paper,
                    n_authors: authors.len(),
                    n_papers: papers.len(),
                });
            }
        }

        let mut ingest = IngestStats::default();

        let mut authorship = authorship;
        authorship.sort_unstable();
        let before = authorship.len();
        authorship.dedup();
        ingest.duplicate_authorship_collapsed = before - authorship.len();

        let n_papers = papers.len();
        let mut kept: Vec<(usize, usize)> = Vec::with_capacity(citations.len());
        for (citing, cited) in citations {
            if citing >= n_papers || cited >= n_papers {
                ingest.dangling_citations_dropped += 1;
            } else if citing == cited {
                ingest.self_citations_stripped += 1;
            } else {
                kept.push((citing, cited));
            }
        }
        kept.sort_unstable();
        let before = kept.len();
        kept.dedup();
        ingest.duplicate_citations_collapsed = before - kept.len();

        Ok(Self {
            authors,
            papers,
            authorship,
            citations: kept,
            metadata: Vec::new(),
            ingest,
        })
    }

    /// Builds a corpus from string edge lists, assigning indices in
    /// first-appearance order. Papers seen only as citation endpoints are
    /// registered as zero-author papers.
    pub fn from_edge_lists(
        authorship: &[(String, String)],
        citations: &[(String, String)],
    ) -> Self {
        let mut authors = Interner::default();
        let mut papers = Interner::default();

        let mut authorship_idx = Vec::with_capacity(authorship.len());
        for (author, paper) in authorship {
            authorship_idx.push((authors.intern(author), papers.intern(paper)));
        }
        let mut citations_idx = Vec::with_capacity(citations.len());
        for (citing, cited) in citations {
            citations_idx.push((papers.intern(citing), papers.intern(cited)));
        }

        Self::new(authors.keys, papers.keys, authorship_idx, citations_idx)
            .expect("interned edge lists are always in range")
    }

    /// Attaches per-paper metadata; the vector must have one (possibly
    /// empty) slot per paper.
    pub fn with_metadata(mut self, metadata: Vec<Option<PaperMeta>>) -> Result<Self, CorpusError> {
        if metadata.len() != self.papers.len() {
            return Err(CorpusError::MetadataLengthMismatch {
                expected: self.papers.len(),
                actual: metadata.len(),
            });
        }
        self.metadata = metadata;
        Ok(self)
    }

    /// Report-only anomaly scan; never mutates the corpus.
    pub fn validate(&self) -> ValidationReport {
        let mut has_paper = vec![false; self.authors.len()];
        let mut has_author = vec![false; self.papers.len()];
        for &(author, paper) in &self.authorship {
            has_paper[author] = true;
            has_author[paper] = true;
        }
        ValidationReport {
            self_citations_stripped: self.ingest.self_citations_stripped,
            duplicate_authorship_collapsed: self.ingest.duplicate_authorship_collapsed,
            duplicate_citations_collapsed: self.ingest.duplicate_citations_collapsed,
            dangling_citations_dropped: self.ingest.dangling_citations_dropped,
            zero_author_papers: has_author.iter().filter(|&&b| !b).count(),
            zero_paper_authors: has_paper.iter().filter(|&&b| !b).count(),
        }
    }

    pub fn authors(&self) -> &[String] {
        &self.authors
    }

    pub fn papers(&self) -> &[String] {
        &self.papers
    }

    pub fn n_authors(&self) -> usize {
        self.authors.len()
    }

    pub fn n_papers(&self) -> usize {
        self.papers.len()
    }

    /// Sorted, deduplicated (author_index, paper_index) pairs.
    pub fn authorship(&self) -> &[(usize, usize)] {
        &self.authorship
    }

    /// Sorted, deduplicated (citing, cited) pairs with no self-loops.
    pub fn citations(&self) -> &[(usize, usize)] {
        &self.citations
    }

    /// Per-paper metadata; empty when none was attached.
    pub fn metadata(&self) -> &[Option<PaperMeta>] {
        &self.metadata
    }

    pub fn has_metadata(&self) -> bool {
        !self.metadata.is_empty()
    }

    pub fn ingest_stats(&self) -> &IngestStats {
        &self.ingest
    }

    pub fn author_index(&self, key: &str) -> Option<usize> {
        self.authors.iter().position(|a| a == key)
    }

    pub fn paper_index(&self, id: &str) -> Option<usize> {
        self.papers.iter().position(|p| p == id)
    }
}

#[derive(Default)]
struct Interner {
    keys: Vec<String>,
    lookup: std::collections::HashMap<String, usize>,
}

impl Interner {
    fn intern(&mut self, key: &str) -> usize {
        if let Some(&idx) = self.lookup.get(key) {
            return idx;
        }
        let idx = self.keys.len();
        self.keys.push(key.to_string());
        self.lookup.insert(key.to_string(), idx);
        idx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy;

    fn pairs(raw: &[(&str, &str)]) -> Vec<(String, String)> {
        raw.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn toy_corpus_is_clean() {
        let report = toy::prolific_solo_corpus().validate();
        assert!(report.is_clean(), "unexpected anomalies: {report:?}");
    }

    #[test]
    fn self_citations_are_stripped_and_counted() {
        let corpus = Corpus::from_edge_lists(
            &pairs(&[("a", "p1")]),
            &pairs(&[("p1", "p1"), ("p1", "p2")]),
        );
        assert_eq!(corpus.validate().self_citations_stripped, 1);
        assert_eq!(corpus.citations().len(), 1);
    }

    #[test]
    fn duplicate_edges_are_collapsed_and_counted() {
        let corpus = Corpus::from_edge_lists(
            &pairs(&[("a", "p1"), ("a", "p1"), ("b", "p1")]),
            &pairs(&[("p1", "p2"), ("p1", "p2")]),
        );
        let report = corpus.validate();
        assert_eq!(report.duplicate_authorship_collapsed, 1);
        assert_eq!(report.duplicate_citations_collapsed, 1);
        assert_eq!(corpus.authorship().len(), 2);
        assert_eq!(corpus.citations().len(), 1);
    }

    #[test]
    fn citation_only_papers_have_zero_authors() {
        let corpus = Corpus::from_edge_lists(&pairs(&[("a", "p1")]), &pairs(&[("p2", "p1")]));
        assert_eq!(corpus.n_papers(), 2);
        let report = corpus.validate();
        assert_eq!(report.zero_author_papers, 1);
        assert_eq!(report.zero_paper_authors, 0);
    }

    #[test]
    fn dangling_citations_are_dropped_and_counted() {
        let corpus = Corpus::new(
            vec!["a".into()],
            vec!["p1".into(), "p2".into()],
            vec![(0, 0), (0, 1)],
            vec![(0, 1), (0, 7), (9, 1)],
        )
        .unwrap();
        assert_eq!(corpus.validate().dangling_citations_dropped, 2);
        assert_eq!(corpus.citations(), &[(0, 1)]);
    }

    #[test]
    fn out_of_range_authorship_is_rejected() {
        let err =
            Corpus::new(vec!["a".into()], vec!["p".into()], vec![(1, 0)], vec![]).unwrap_err();
        assert!(matches!(err, CorpusError::AuthorshipOutOfRange { .. }));
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        assert!(matches!(
            Corpus::new(vec!["a".into(), "a".into()], vec![], vec![], vec![]),
            Err(CorpusError::DuplicateAuthorKey(_))
        ));
        assert!(matches!(
            Corpus::new(vec![], vec!["p".into(), "p".into()], vec![], vec![]),
            Err(CorpusError::DuplicatePaperId(_))
        ));
    }

    #[test]
    fn first_appearance_order_is_preserved() {
        let corpus = Corpus::from_edge_lists(
            &pairs(&[("z", "p9"), ("a", "p1"), ("z", "p1")]),
            &pairs(&[("p1", "p0")]),
        );
        assert_eq!(corpus.authors(), &["z".to_string(), "a".to_string()]);
        assert_eq!(
            corpus.papers(),
            &["p9".to_string(), "p1".to_string(), "p0".to_string()]
        );
    }

    #[test]
    fn metadata_length_is_checked() {
        let corpus = Corpus::from_edge_lists(&pairs(&[("a", "p1")]), &[]);
        assert!(corpus.clone().with_metadata(vec![None]).is_ok());
        assert!(matches!(
            corpus.with_metadata(vec![]),
            Err(CorpusError::MetadataLengthMismatch { .. })
        ));
    }
}
