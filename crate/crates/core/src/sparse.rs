//! Compressed sparse row matrices and the small set of kernels the scoring
//! recursions are built from: direct and transposed matrix-vector products,
//! transposition, column normalization, and axis sums.
//!
//! Matrices are immutable after construction and every operation here is
//! pure, so shared matrices can be used from multiple threads freely. The
//! direct product parallelizes over rows for large matrices; each row is
//! summed in a fixed order, so results are deterministic either way.

use rayon::prelude::*;
use thiserror::Error;

/// Row count above which `matvec` fans out over a thread pool.
const PAR_ROW_THRESHOLD: usize = 8192;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("entry ({row}, {col}) lies outside a {n_rows}x{n_cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },
    #[error("entry ({row}, {col}) has value {value}; values must be finite and nonnegative")]
    InvalidValue { row: usize, col: usize, value: f64 },
    #[error("{op}: expected a vector of length {expected}, got {actual}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        actual: usize,
    },
}

/// Sparse nonnegative matrix in compressed sparse row form.
///
/// Invariants kept by every constructor:
/// - `row_offsets` is nondecreasing, starts at 0, ends at `values.len()`;
/// - within each row the column indices are strictly increasing;
/// - all stored values are finite and nonnegative (explicit zeros are never
///   stored).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Matrix with the given shape and no stored entries.
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_offsets: vec![0; n_rows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// n-by-n identity.
    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Builds a matrix from (row, col, value) triplets.
    ///
    /// Duplicate coordinates are summed; entries whose (summed) value is zero
    /// are dropped. Out-of-range indices and negative or non-finite values
    /// are rejected.
    pub fn from_triplets(
        entries: &[(usize, usize, f64)],
        n_rows: usize,
        n_cols: usize,
    ) -> Result<Self, SparseError> {
        for &(row, col, value) in entries {
            if row >= n_rows || col >= n_cols {
                return Err(SparseError::IndexOutOfRange {
                    row,
                    col,
                    n_rows,
                    n_cols,
                });
            }
            if !value.is_finite() || value < 0.0 {
                return Err(SparseError::InvalidValue { row, col, value });
            }
        }

        let mut sorted: Vec<(usize, usize, f64)> = entries.to_vec();
        sorted.sort_by_key(|&(row, col, _)| (row, col));

        let mut row_offsets = vec![0usize; n_rows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());

        let mut it = sorted.into_iter().peekable();
        while let Some((row, col, mut value)) = it.next() {
            while let Some(&(r, c, v)) = it.peek() {
                if r == row && c == col {
                    value += v;
                    it.next();
                } else {
                    break;
                }
            }
            if value == 0.0 {
                continue;
            }
            row_offsets[row + 1] += 1;
            col_indices.push(col);
            values.push(value);
        }
        for i in 0..n_rows {
            row_offsets[i + 1] += row_offsets[i];
        }

        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Stored entries in row-major order.
    pub fn to_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for row in 0..self.n_rows {
            for (col, value) in self.row(row) {
                out.push((row, col, value));
            }
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterator over the stored (column, value) pairs of one row.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_offsets[i];
        let hi = self.row_offsets[i + 1];
        self.col_indices[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    /// Value at (row, col); zero for entries that are not stored.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let lo = self.row_offsets[row];
        let hi = self.row_offsets[row + 1];
        match self.col_indices[lo..hi].binary_search(&col) {
            Ok(k) => self.values[lo + k],
            Err(_) => 0.0,
        }
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, SparseError> {
        if x.len() != self.n_cols {
            return Err(SparseError::DimensionMismatch {
                op: "matvec",
                expected: self.n_cols,
                actual: x.len(),
            });
        }
        let row_dot = |i: usize| {
            let lo = self.row_offsets[i];
            let hi = self.row_offsets[i + 1];
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            acc
        };
        let out = if self.n_rows >= PAR_ROW_THRESHOLD {
            (0..self.n_rows).into_par_iter().map(row_dot).collect()
        } else {
            (0..self.n_rows).map(row_dot).collect()
        };
        Ok(out)
    }

    /// y = A^T x, computed by scattering over the rows of A.
    ///
    /// Keeps the transpose implicit; for a large citation matrix this avoids
    /// holding both orientations in memory.
    pub fn matvec_transpose(&self, x: &[f64]) -> Result<Vec<f64>, SparseError> {
        if x.len() != self.n_rows {
            return Err(SparseError::DimensionMismatch {
                op: "matvec_transpose",
                expected: self.n_rows,
                actual: x.len(),
            });
        }
        let mut out = vec![0.0; self.n_cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let lo = self.row_offsets[i];
            let hi = self.row_offsets[i + 1];
            for k in lo..hi {
                out[self.col_indices[k]] += self.values[k] * xi;
            }
        }
        Ok(out)
    }

    /// Materialized transpose.
    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &col in &self.col_indices {
            counts[col + 1] += 1;
        }
        for j in 0..self.n_cols {
            counts[j + 1] += counts[j];
        }
        let row_offsets = counts.clone();
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut cursor = counts;
        for row in 0..self.n_rows {
            for (col, value) in self.row(row) {
                let k = cursor[col];
                col_indices[k] = row;
                values[k] = value;
                cursor[col] += 1;
            }
        }
        SparseMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Rescales every column with a nonzero sum to sum to one. Zero columns
    /// are left as they are.
    pub fn column_normalize(&self) -> SparseMatrix {
        let sums = self.col_sums();
        let mut out = self.clone();
        for k in 0..out.values.len() {
            let s = sums[out.col_indices[k]];
            if s > 0.0 {
                out.values[k] /= s;
            }
        }
        out
    }

    /// Per-row sums of stored values.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows)
            .map(|i| self.row(i).map(|(_, v)| v).sum())
            .collect()
    }

    /// Per-column sums of stored values.
    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_cols];
        for k in 0..self.values.len() {
            out[self.col_indices[k]] += self.values[k];
        }
        out
    }

    /// Dense copy, one `Vec` per row. Intended for small matrices only.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_cols]; self.n_rows];
        for (row, dense_row) in out.iter_mut().enumerate() {
            for (col, value) in self.row(row) {
                dense_row[col] = value;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (k, (a, e)) in actual.iter().zip(expected).enumerate() {
            assert!((a - e).abs() <= tol, "entry {k}: {a} vs {e} (tol {tol})");
        }
    }

    #[test]
    fn from_triplets_empty() {
        let m = SparseMatrix::from_triplets(&[], 2, 2).unwrap();
        assert_eq!(m.nnz(), 0);
        assert_eq!(m.n_rows(), 2);
        assert_eq!(m.n_cols(), 2);
    }

    #[test]
    fn from_triplets_sums_duplicates() {
        let m = SparseMatrix::from_triplets(&[(0, 1, 1.0), (0, 1, 1.0)], 1, 2).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), 2.0);
    }

    #[test]
    fn from_triplets_layout_matches_dense_reference() {
        let m = SparseMatrix::from_triplets(&[(1, 0, 0.5), (0, 1, 1.0)], 2, 2).unwrap();
        assert_eq!(m.row_offsets, vec![0, 1, 2]);
        assert_eq!(m.col_indices, vec![1, 0]);
        assert_eq!(m.values, vec![1.0, 0.5]);
        assert_eq!(m.to_dense(), vec![vec![0.0, 1.0], vec![0.5, 0.0]]);
    }

    #[test]
    fn from_triplets_drops_explicit_zeros() {
        let m = SparseMatrix::from_triplets(&[(0, 0, 0.0), (0, 1, 2.0)], 1, 2).unwrap();
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn from_triplets_rejects_out_of_range() {
        let err = SparseMatrix::from_triplets(&[(2, 0, 1.0)], 2, 2).unwrap_err();
        assert!(matches!(err, SparseError::IndexOutOfRange { row: 2, .. }));
    }

    #[test]
    fn from_triplets_rejects_bad_values() {
        for bad in [-1.0, f64::NAN, f64::INFINITY] {
            let err = SparseMatrix::from_triplets(&[(0, 0, bad)], 1, 1).unwrap_err();
            assert!(matches!(err, SparseError::InvalidValue { .. }));
        }
    }

    #[test]
    fn matvec_identity() {
        let m = SparseMatrix::identity(3);
        let y = m.matvec(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn matvec_zero_matrix() {
        let m = SparseMatrix::zeros(2, 2);
        assert_eq!(m.matvec(&[5.0, 7.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let m = SparseMatrix::zeros(2, 3);
        assert!(m.matvec(&[1.0]).is_err());
        assert!(m.matvec_transpose(&[1.0]).is_err());
    }

    /// Authorship pattern of the three-author toy graph: each paper inherits
    /// its sole author's score under the transposed product.
    #[test]
    fn matvec_transpose_solo_authorship() {
        let m = SparseMatrix::from_triplets(
            &[
                (0, 0, 1.0),
                (0, 1, 1.0),
                (0, 2, 1.0),
                (1, 3, 1.0),
                (1, 4, 1.0),
                (2, 5, 1.0),
            ],
            3,
            6,
        )
        .unwrap();
        let y = m.matvec_transpose(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(y, vec![1.0; 6]);
        assert_eq!(m.row_sums(), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn matvec_transpose_zero_matrix() {
        let m = SparseMatrix::zeros(3, 4);
        assert_eq!(m.matvec_transpose(&[1.0, 1.0, 1.0]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn transpose_identity() {
        assert_eq!(
            SparseMatrix::identity(4).transpose(),
            SparseMatrix::identity(4)
        );
    }

    #[test]
    fn transpose_of_citation_triangle() {
        // p4 cites p5 and p6, p5 cites p6 (0-indexed rows 3 and 4).
        let c =
            SparseMatrix::from_triplets(&[(3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0)], 6, 6).unwrap();
        let t = c.transpose();
        assert_eq!(t.to_triplets(), vec![(4, 3, 1.0), (5, 3, 1.0), (5, 4, 1.0)]);
        assert_eq!(c.col_sums(), vec![0.0, 0.0, 0.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn column_normalize_splits_evenly() {
        let m = SparseMatrix::from_triplets(&[(0, 0, 1.0), (1, 0, 1.0)], 2, 1).unwrap();
        let w = m.column_normalize();
        assert_eq!(w.get(0, 0), 0.5);
        assert_eq!(w.get(1, 0), 0.5);

        let three =
            SparseMatrix::from_triplets(&[(0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0)], 3, 1).unwrap();
        let w3 = three.column_normalize();
        assert_close(&w3.col_sums(), &[1.0], 1e-12);
        for i in 0..3 {
            assert!((w3.get(i, 0) - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn column_normalize_keeps_solo_matrix_unchanged() {
        let m = SparseMatrix::from_triplets(
            &[
                (0, 0, 1.0),
                (0, 1, 1.0),
                (0, 2, 1.0),
                (1, 3, 1.0),
                (1, 4, 1.0),
                (2, 5, 1.0),
            ],
            3,
            6,
        )
        .unwrap();
        assert_eq!(m.column_normalize(), m);
    }

    #[test]
    fn column_normalize_preserves_zero_columns() {
        let m = SparseMatrix::from_triplets(&[(0, 0, 2.0), (1, 0, 2.0)], 2, 3).unwrap();
        let w = m.column_normalize();
        assert_eq!(w.col_sums(), vec![1.0, 0.0, 0.0]);
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = SparseMatrix> {
        (1..=max_rows, 1..=max_cols)
            .prop_flat_map(|(r, c)| {
                let entry = (0..r, 0..c, 0.0..10.0f64);
                (
                    Just(r),
                    Just(c),
                    proptest::collection::vec(entry, 0..(r * c).min(64)),
                )
            })
            .prop_map(|(r, c, entries)| SparseMatrix::from_triplets(&entries, r, c).unwrap())
    }

    proptest! {
        #[test]
        fn transpose_matvec_agree(m in arb_matrix(20, 30), xs in proptest::collection::vec(0.0..5.0f64, 20)) {
            let x = &xs[..m.n_rows()];
            let via_kernel = m.matvec_transpose(x).unwrap();
            let via_transpose = m.transpose().matvec(x).unwrap();
            for (a, b) in via_kernel.iter().zip(&via_transpose) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn transpose_is_involutive(m in arb_matrix(12, 12)) {
            prop_assert_eq!(m.transpose().transpose(), m);
        }

        #[test]
        fn triplet_round_trip(m in arb_matrix(12, 12)) {
            let rebuilt = SparseMatrix::from_triplets(&m.to_triplets(), m.n_rows(), m.n_cols()).unwrap();
            prop_assert_eq!(rebuilt, m);
        }

        #[test]
        fn column_normalize_is_idempotent(m in arb_matrix(12, 12)) {
            let once = m.column_normalize();
            let twice = once.column_normalize();
            for ((_, _, a), (_, _, b)) in once.to_triplets().iter().zip(twice.to_triplets().iter()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            for s in once.col_sums() {
                prop_assert!(s == 0.0 || (s - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn matvec_preserves_nonnegativity(m in arb_matrix(12, 12), xs in proptest::collection::vec(0.0..5.0f64, 12)) {
            let y = m.matvec(&xs[..m.n_cols()]).unwrap();
            prop_assert!(y.iter().all(|&v| v >= 0.0));
        }
    }
}
