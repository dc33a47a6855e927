//! Coupled author-paper importance scoring over sparse citation graphs.
//!
//! The library models a corpus of authors and papers as a bipartite
//! authorship graph plus a directed paper-citation graph, and scores both
//! entity classes simultaneously with two power-iteration schemes:
//!
//! - `citex`: couples authorship shares with citations through an implicit
//!   paper self-citation term, rewarding prolific authorship as well as
//!   citations received;
//! - `caps`: drops the self-citation term and routes all credit through
//!   actual citations, so an author scores only when their papers are cited.
//!
//! Alongside the engines there are classical indicators (publication and
//! citation counts, h-index), inequality and rank-agreement statistics
//! (Gini, Spearman), a seeded preferential-attachment corpus generator for
//! stress tests, and CSV ingestion/reporting.

pub mod baselines;
pub mod corpus;
pub mod engines;
pub mod io;
pub mod matrices;
pub mod metrics;
pub mod oracle;
pub mod sparse;
pub mod synth;
pub mod toy;

pub use corpus::{Corpus, CorpusError, IngestStats, PaperMeta, ValidationReport};
pub use engines::{
    ConvergenceReport, EngineError, EngineOutput, EntityClass, IterationConfig, LinearOperator,
    ScoreVector,
};
pub use matrices::BibMatrices;
pub use sparse::{SparseError, SparseMatrix};
