//! Classical indicators used as comparison baselines: publication counts
//! (integer and fractional), citation counts (integer and fractional), and
//! the h-index. All are computed relative to the corpus at hand; nothing is
//! looked up externally.

use crate::matrices::BibMatrices;
use crate::sparse::{SparseError, SparseMatrix};

/// The full indicator set for one author.
#[derive(Debug, Clone, PartialEq)]
pub struct AuthorIndicators {
    pub publication_count: u64,
    pub fractional_publication_count: f64,
    pub citation_count: u64,
    pub fractional_citation_count: f64,
    pub h_index: usize,
}

/// How citation credit is split among coauthors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CitationCredit {
    /// Every coauthor gets full credit for each citation.
    Integer,
    /// Credit is split by authorship share.
    Fractional,
}

/// Papers per author: row sums of the binary incidence matrix.
pub fn publication_counts(incidence: &SparseMatrix) -> Vec<u64> {
    incidence
        .row_sums()
        .into_iter()
        .map(|s| s.round() as u64)
        .collect()
}

/// Share-weighted papers per author: row sums of the shares matrix.
pub fn fractional_publication_counts(shares: &SparseMatrix) -> Vec<f64> {
    shares.row_sums()
}

/// Citations received per paper: column sums (in-degree) of the citation
/// matrix.
pub fn paper_citation_counts(citations: &SparseMatrix) -> Vec<u64> {
    citations
        .col_sums()
        .into_iter()
        .map(|s| s.round() as u64)
        .collect()
}

/// Citations received per author.
///
/// Integer credit sums the citation counts of every paper the author
/// appears on. Fractional credit is the row sum of the author citation
/// matrix, computed without materializing it: citations from authorless
/// papers carry no share and are excluded, exactly as the matrix product
/// would exclude them.
pub fn author_citation_counts(
    incidence: &SparseMatrix,
    citations: &SparseMatrix,
    credit: CitationCredit,
) -> Result<Vec<f64>, SparseError> {
    match credit {
        CitationCredit::Integer => {
            let counts: Vec<f64> = citations.col_sums();
            incidence.matvec(&counts)
        }
        CitationCredit::Fractional => {
            let shares = incidence.column_normalize();
            let has_authors: Vec<f64> = incidence
                .col_sums()
                .into_iter()
                .map(|s| if s > 0.0 { 1.0 } else { 0.0 })
                .collect();
            let authored_in_degree = citations.matvec_transpose(&has_authors)?;
            shares.matvec(&authored_in_degree)
        }
    }
}

/// Largest h such that at least h of the given papers have h or more
/// citations each.
pub fn h_index(per_paper_citations: &[u64]) -> usize {
    let mut sorted = per_paper_citations.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c as usize > i)
        .count()
}

/// Assembles every indicator for every author in one pass.
pub fn author_indicators(mats: &BibMatrices) -> Result<Vec<AuthorIndicators>, SparseError> {
    let pubs = publication_counts(&mats.incidence);
    let frac_pubs = fractional_publication_counts(&mats.shares);
    let cites = author_citation_counts(&mats.incidence, &mats.citations, CitationCredit::Integer)?;
    let frac_cites =
        author_citation_counts(&mats.incidence, &mats.citations, CitationCredit::Fractional)?;
    let per_paper = paper_citation_counts(&mats.citations);

    let mut out = Vec::with_capacity(mats.n_authors());
    for author in 0..mats.n_authors() {
        let own_papers: Vec<u64> = mats
            .incidence
            .row(author)
            .map(|(paper, _)| per_paper[paper])
            .collect();
        out.push(AuthorIndicators {
            publication_count: pubs[author],
            fractional_publication_count: frac_pubs[author],
            citation_count: cites[author].round() as u64,
            fractional_citation_count: frac_cites[author],
            h_index: h_index(&own_papers),
        });
    }
    Ok(out)
}
