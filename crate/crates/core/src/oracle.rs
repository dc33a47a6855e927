//! Dense brute-force reference for the scoring engines.
//!
//! Materializes the full operator matrices with naive dense products and
//! runs its own power-method loop, sharing no kernel code with the sparse
//! path. Used to validate the engines and to freeze expected values for
//! regression tests; capped to small corpora.

use crate::engines::{
    Algorithm, ConvergenceReport, EngineError, EngineOutput, EntityClass, IterationConfig,
    ScoreVector,
};
use crate::matrices::BibMatrices;

/// Largest corpus side the oracle accepts.
pub const ORACLE_DIM_LIMIT: usize = 500;

type Dense = Vec<Vec<f64>>;

/// Same contract as the sparse engines, computed densely and naively.
pub fn dense_oracle_scores(
    mats: &BibMatrices,
    algorithm: Algorithm,
    cfg: &IterationConfig,
) -> Result<EngineOutput, EngineError> {
    let m = mats.n_authors();
    let n = mats.n_papers();
    if m > ORACLE_DIM_LIMIT || n > ORACLE_DIM_LIMIT {
        return Err(EngineError::OracleSizeLimit {
            m,
            n,
            limit: ORACLE_DIM_LIMIT,
        });
    }
    if cfg.epsilon <= 0.0 || !cfg.epsilon.is_finite() {
        return Err(EngineError::InvalidConfig(format!(
            "epsilon must be a positive real, got {}",
            cfg.epsilon
        )));
    }
    if cfg.max_iterations == 0 {
        return Err(EngineError::InvalidConfig(
            "max_iterations must be at least 1".into(),
        ));
    }

    let incidence = mats.incidence.to_dense();
    let shares = mats.shares.to_dense();
    let citations = mats.citations.to_dense();
    let shares_t = dense_transpose(&shares, m, n);
    let incidence_t = dense_transpose(&incidence, m, n);
    let citations_t = dense_transpose(&citations, n, n);

    match algorithm {
        Algorithm::Citex => {
            // shares . (I + citations^T) . incidence^T, materialized.
            let shifted = dense_add_identity(&citations_t);
            let p = dense_product(&shares, &dense_product(&shifted, &incidence_t));
            let q = dense_product(&shifted, &dense_product(&incidence_t, &shares));
            let (x, rx) = dense_power_iterate(&p, m, EntityClass::Author, cfg);
            let (y, ry) = dense_power_iterate(&q, n, EntityClass::Paper, cfg);
            Ok(EngineOutput {
                author_scores: x,
                paper_scores: y,
                author_report: rx,
                paper_report: Some(ry),
            })
        }
        Algorithm::Caps => {
            let a = dense_product(&shares, &dense_product(&citations_t, &shares_t));
            let (x, rx) = dense_power_iterate(&a, m, EntityClass::Author, cfg);
            let post = dense_product(&citations_t, &shares_t);
            let mut y = dense_matvec(&post, &x.values);
            let sum: f64 = y.iter().sum();
            if sum > 0.0 {
                for v in y.iter_mut() {
                    *v /= sum;
                }
            }
            Ok(EngineOutput {
                author_scores: x,
                paper_scores: ScoreVector {
                    entity_class: EntityClass::Paper,
                    values: y,
                    normalized: true,
                },
                author_report: rx,
                paper_report: None,
            })
        }
    }
}

fn dense_transpose(a: &Dense, rows: usize, cols: usize) -> Dense {
    let mut out = vec![vec![0.0; rows]; cols];
    for (i, row) in a.iter().enumerate().take(rows) {
        for (j, &v) in row.iter().enumerate().take(cols) {
            out[j][i] = v;
        }
    }
    out
}

fn dense_add_identity(a: &Dense) -> Dense {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += 1.0;
    }
    out
}

fn dense_product(a: &Dense, b: &Dense) -> Dense {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0.0; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn dense_matvec(a: &Dense, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(v, xi)| v * xi).sum())
        .collect()
}

fn dense_power_iterate(
    a: &Dense,
    dim: usize,
    entity_class: EntityClass,
    cfg: &IterationConfig,
) -> (ScoreVector, ConvergenceReport) {
    if dim == 0 {
        return (
            ScoreVector {
                entity_class,
                values: Vec::new(),
                normalized: true,
            },
            ConvergenceReport {
                iterations: 0,
                final_residual: 0.0,
                converged: true,
                all_zero: true,
            },
        );
    }
    let mut current = vec![1.0 / dim as f64; dim];
    let mut residual = f64::INFINITY;
    for iteration in 1..=cfg.max_iterations {
        let mut next = dense_matvec(a, &current);
        let sum: f64 = next.iter().sum();
        if sum == 0.0 {
            return (
                ScoreVector {
                    entity_class,
                    values: next,
                    normalized: true,
                },
                ConvergenceReport {
                    iterations: iteration,
                    final_residual: 0.0,
                    converged: true,
                    all_zero: true,
                },
            );
        }
        for v in next.iter_mut() {
            *v /= sum;
        }
        residual = next.iter().zip(&current).map(|(x, y)| (x - y).abs()).sum();
        current = next;
        if residual < cfg.epsilon {
            return (
                ScoreVector {
                    entity_class,
                    values: current,
                    normalized: true,
                },
                ConvergenceReport {
                    iterations: iteration,
                    final_residual: residual,
                    converged: true,
                    all_zero: false,
                },
            );
        }
    }
    (
        ScoreVector {
            entity_class,
            values: current,
            normalized: true,
        },
        ConvergenceReport {
            iterations: cfg.max_iterations,
            final_residual: residual,
            converged: false,
            all_zero: false,
        },
    )
}
