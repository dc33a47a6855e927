//! Power-iteration engines for the two coupled author-paper scoring
//! schemes, plus the shared convergence framework.
//!
//! Both schemes iterate a nonnegative linear operator from a uniform start,
//! renormalizing to unit L1 mass after every application. Renormalization is
//! deliberate: the operators' lead eigenvalues are generally not 1, so raw
//! iterates would overflow or vanish; with it, the loop is the standard
//! power method and converged vectors are directly comparable as score
//! distributions. Convergence is declared when the L1 distance between
//! successive normalized iterates drops below the configured tolerance.
//!
//! The `citex` scheme couples authorship with citations through an implicit
//! paper self-citation term (the identity added to the transposed citation
//! matrix); its author and paper scores follow two separate recursions. The
//! `caps` scheme drops that term and iterates only the author scores through
//! actual citations; paper scores are a single post-pass from the converged
//! author vector. On a citation-free corpus the caps operator annihilates
//! everything: the all-zero outcome is reported, not an error.

use thiserror::Error;

use crate::matrices::BibMatrices;
use crate::sparse::SparseError;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Sparse(#[from] SparseError),
    #[error("invalid iteration config: {0}")]
    InvalidConfig(String),
    #[error("operator is {actual}-dimensional, expected {expected}")]
    OperatorDimension { expected: usize, actual: usize },
    #[error("iterate contains a non-finite value at position {0}")]
    NonFiniteIterate(usize),
    #[error("zero vector where a normalized nonzero vector is required")]
    ZeroVector,
    #[error("dense oracle limited to {limit}x{limit}, got {m} authors and {n} papers")]
    OracleSizeLimit { m: usize, n: usize, limit: usize },
}

/// Which entities a score vector ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityClass {
    Author,
    Paper,
}

/// Scoring scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Citex,
    Caps,
}

/// Tolerance and iteration budget for the power method. Normalization is
/// fixed to L1 (score vectors sum to one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    /// Convergence threshold on the L1 distance between successive
    /// normalized iterates.
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-9,
            max_iterations: 1000,
        }
    }
}

impl IterationConfig {
    fn check(&self) -> Result<(), EngineError> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(EngineError::InvalidConfig(format!(
                "epsilon must be a positive real, got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(EngineError::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Nonnegative per-entity scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub entity_class: EntityClass,
    pub values: Vec<f64>,
    /// True when the vector was L1-normalized (an all-zero vector keeps the
    /// flag with zero mass).
    pub normalized: bool,
}

impl ScoreVector {
    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// How one power-method run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    /// Operator applications performed.
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    /// The iteration hit the exactly-zero fixed point.
    pub all_zero: bool,
}

/// A linear map applied through its action on vectors; the scoring operators
/// chain sparse products rather than materializing anything.
pub trait LinearOperator {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, EngineError>;
}

/// Author-score operator of the self-citation-coupled scheme:
/// shares . (I + citations^T) . incidence^T.
pub struct CitexAuthorOperator<'a> {
    mats: &'a BibMatrices,
}

impl<'a> CitexAuthorOperator<'a> {
    pub fn new(mats: &'a BibMatrices) -> Self {
        Self { mats }
    }
}

impl LinearOperator for CitexAuthorOperator<'_> {
    fn input_dim(&self) -> usize {
        self.mats.n_authors()
    }

    fn output_dim(&self) -> usize {
        self.mats.n_authors()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, EngineError> {
        let u = self.mats.incidence.matvec_transpose(x)?;
        let v = add_transposed_citations(&self.mats.citations, &u)?;
        Ok(self.mats.shares.matvec(&v)?)
    }
}

/// Paper-score operator of the self-citation-coupled scheme:
/// (I + citations^T) . incidence^T . shares.
pub struct CitexPaperOperator<'a> {
    mats: &'a BibMatrices,
}

impl<'a> CitexPaperOperator<'a> {
    pub fn new(mats: &'a BibMatrices) -> Self {
        Self { mats }
    }
}

impl LinearOperator for CitexPaperOperator<'_> {
    fn input_dim(&self) -> usize {
        self.mats.n_papers()
    }

    fn output_dim(&self) -> usize {
        self.mats.n_papers()
    }

    fn apply(&self, y: &[f64]) -> Result<Vec<f64>, EngineError> {
        let a = self.mats.shares.matvec(y)?;
        let u = self.mats.incidence.matvec_transpose(&a)?;
        add_transposed_citations(&self.mats.citations, &u)
    }
}

/// Author-score operator of the citation-conserving scheme:
/// shares . citations^T . shares^T.
pub struct CapsAuthorOperator<'a> {
    mats: &'a BibMatrices,
}

impl<'a> CapsAuthorOperator<'a> {
    pub fn new(mats: &'a BibMatrices) -> Self {
        Self { mats }
    }
}

impl LinearOperator for CapsAuthorOperator<'_> {
    fn input_dim(&self) -> usize {
        self.mats.n_authors()
    }

    fn output_dim(&self) -> usize {
        self.mats.n_authors()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, EngineError> {
        let u = self.mats.shares.matvec_transpose(x)?;
        let v = self.mats.citations.matvec_transpose(&u)?;
        Ok(self.mats.shares.matvec(&v)?)
    }
}

/// v + citations^T v without materializing the shifted matrix.
fn add_transposed_citations(
    citations: &crate::sparse::SparseMatrix,
    v: &[f64],
) -> Result<Vec<f64>, EngineError> {
    let mut out = citations.matvec_transpose(v)?;
    for (o, x) in out.iter_mut().zip(v) {
        *o += x;
    }
    Ok(out)
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Runs the L1-normalized power method on `op` from the uniform start.
///
/// Each step applies the operator and renormalizes; the loop stops when the
/// L1 distance between successive normalized iterates falls below
/// `cfg.epsilon` or the iteration budget runs out. An exactly-zero iterate
/// is an absorbing fixed point and is returned as such with `all_zero` set.
pub fn power_iterate(
    op: &dyn LinearOperator,
    dim: usize,
    entity_class: EntityClass,
    cfg: &IterationConfig,
) -> Result<(ScoreVector, ConvergenceReport), EngineError> {
    cfg.check()?;
    if op.input_dim() != dim || op.output_dim() != dim {
        return Err(EngineError::OperatorDimension {
            expected: dim,
            actual: op.input_dim(),
        });
    }
    if dim == 0 {
        return Ok((
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
        ));
    }

    let mut current = vec![1.0 / dim as f64; dim];
    let mut residual = f64::INFINITY;
    for iteration in 1..=cfg.max_iterations {
        let mut next = op.apply(&current)?;
        let mut sum = 0.0;
        for (k, v) in next.iter().enumerate() {
            if !v.is_finite() {
                return Err(EngineError::NonFiniteIterate(k));
            }
            sum += v;
        }
        if sum == 0.0 {
            return Ok((
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
            ));
        }
        for v in next.iter_mut() {
            *v /= sum;
        }
        residual = l1_distance(&next, &current);
        current = next;
        if residual < cfg.epsilon {
            return Ok((
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
            ));
        }
    }

    Ok((
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
    ))
}

/// One engine run: author scores, paper scores, and how each was reached.
/// `paper_report` is present only when the paper scores come from their own
/// iteration (the coupled scheme); the conserving scheme derives them in a
/// single pass from the converged author scores.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineOutput {
    pub author_scores: ScoreVector,
    pub paper_scores: ScoreVector,
    pub author_report: ConvergenceReport,
    pub paper_report: Option<ConvergenceReport>,
}

impl EngineOutput {
    /// True when some iterative run stopped on the budget rather than the
    /// tolerance.
    pub fn any_unconverged(&self) -> bool {
        !self.author_report.converged || self.paper_report.is_some_and(|r| !r.converged)
    }
}

/// Runs the coupled self-citation scheme: two independent recursions, one
/// per entity class.
pub fn citex_scores(
    mats: &BibMatrices,
    cfg: &IterationConfig,
) -> Result<EngineOutput, EngineError> {
    let author_op = CitexAuthorOperator::new(mats);
    let (author_scores, author_report) =
        power_iterate(&author_op, mats.n_authors(), EntityClass::Author, cfg)?;
    let paper_op = CitexPaperOperator::new(mats);
    let (paper_scores, paper_report) =
        power_iterate(&paper_op, mats.n_papers(), EntityClass::Paper, cfg)?;
    Ok(EngineOutput {
        author_scores,
        paper_scores,
        author_report,
        paper_report: Some(paper_report),
    })
}

/// Runs the citation-conserving scheme: author scores by power iteration,
/// paper scores as one transposed pass over the converged author scores.
pub fn caps_scores(mats: &BibMatrices, cfg: &IterationConfig) -> Result<EngineOutput, EngineError> {
    let author_op = CapsAuthorOperator::new(mats);
    let (author_scores, author_report) =
        power_iterate(&author_op, mats.n_authors(), EntityClass::Author, cfg)?;

    let u = mats.shares.matvec_transpose(&author_scores.values)?;
    let mut paper_values = mats.citations.matvec_transpose(&u)?;
    let sum: f64 = paper_values.iter().sum();
    if sum > 0.0 {
        for v in paper_values.iter_mut() {
            *v /= sum;
        }
    }
    let paper_scores = ScoreVector {
        entity_class: EntityClass::Paper,
        values: paper_values,
        normalized: true,
    };
    Ok(EngineOutput {
        author_scores,
        paper_scores,
        author_report,
        paper_report: None,
    })
}

/// L1 distance between the renormalized image of `v` and `v` itself; a
/// converged score vector sits within the iteration tolerance of zero.
pub fn fixed_point_residual(op: &dyn LinearOperator, v: &ScoreVector) -> Result<f64, EngineError> {
    if v.is_all_zero() {
        return Err(EngineError::ZeroVector);
    }
    let mut image = op.apply(&v.values)?;
    let sum: f64 = image.iter().sum();
    if sum > 0.0 {
        for x in image.iter_mut() {
            *x /= sum;
        }
    }
    Ok(l1_distance(&image, &v.values))
}
