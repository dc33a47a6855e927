//! The matrix triple behind the scoring recursions, built from a corpus:
//! the binary author-paper incidence matrix, its column-normalized
//! authorship-share form, and the binary paper-citation matrix. Also the two
//! derived citation products used by the citation-conserving engine and the
//! fractional baselines.

use crate::corpus::Corpus;
use crate::sparse::{SparseError, SparseMatrix};

/// The (incidence, shares, citations) triple for one corpus.
///
/// `incidence` is m-by-n binary with a 1 wherever an author wrote a paper;
/// `shares` is its column-normalized form, splitting each paper's unit of
/// credit equally among its authors; `citations` is n-by-n binary with an
/// empty diagonal, one entry per citing-to-cited pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BibMatrices {
    pub incidence: SparseMatrix,
    pub shares: SparseMatrix,
    pub citations: SparseMatrix,
}

impl BibMatrices {
    pub fn n_authors(&self) -> usize {
        self.incidence.n_rows()
    }

    pub fn n_papers(&self) -> usize {
        self.incidence.n_cols()
    }
}

/// Assembles the matrix triple from a corpus. The corpus invariants (deduped
/// edges, no self-citations, indices in range) make this infallible.
pub fn build_matrices(corpus: &Corpus) -> BibMatrices {
    let m = corpus.n_authors();
    let n = corpus.n_papers();

    let authorship: Vec<(usize, usize, f64)> = corpus
        .authorship()
        .iter()
        .map(|&(a, p)| (a, p, 1.0))
        .collect();
    let incidence = SparseMatrix::from_triplets(&authorship, m, n)
        .expect("corpus authorship edges are validated");
    let shares = incidence.column_normalize();

    let citation_entries: Vec<(usize, usize, f64)> = corpus
        .citations()
        .iter()
        .map(|&(citing, cited)| (citing, cited, 1.0))
        .collect();
    let citations = SparseMatrix::from_triplets(&citation_entries, n, n)
        .expect("corpus citation edges are validated");

    BibMatrices {
        incidence,
        shares,
        citations,
    }
}

/// Fractional citations made by each author to each paper: the m-by-n
/// product of the authorship shares with the citation matrix. Entry (i, j)
/// accumulates author i's share of every citation their papers make to
/// paper j.
pub fn author_paper_citation_matrix(
    shares: &SparseMatrix,
    citations: &SparseMatrix,
) -> Result<SparseMatrix, SparseError> {
    sparse_product(shares, citations)
}

/// Fractional citations received by each author from each author: the
/// m-by-m product of the shares with the transposed author-paper citation
/// matrix. Entry (i, a) is the credit flowing from citing author a to cited
/// author i; summed over all entries it equals the citation edge count
/// whenever every paper has at least one author.
pub fn author_citation_matrix(
    shares: &SparseMatrix,
    author_paper_citations: &SparseMatrix,
) -> Result<SparseMatrix, SparseError> {
    sparse_product(shares, &author_paper_citations.transpose())
}

/// Row-wise sparse product with a dense accumulator per output row.
fn sparse_product(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix, SparseError> {
    if a.n_cols() != b.n_rows() {
        return Err(SparseError::DimensionMismatch {
            op: "sparse_product",
            expected: a.n_cols(),
            actual: b.n_rows(),
        });
    }
    let mut acc = vec![0.0f64; b.n_cols()];
    let mut touched: Vec<usize> = Vec::new();
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..a.n_rows() {
        for (k, av) in a.row(i) {
            for (j, bv) in b.row(k) {
                if acc[j] == 0.0 {
                    touched.push(j);
                }
                acc[j] += av * bv;
            }
        }
        touched.sort_unstable();
        for &j in &touched {
            if acc[j] != 0.0 {
                triplets.push((i, j, acc[j]));
            }
            acc[j] = 0.0;
        }
        touched.clear();
    }
    SparseMatrix::from_triplets(&triplets, a.n_rows(), b.n_cols())
}
