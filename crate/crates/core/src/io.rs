//! Corpus ingestion from CSV edge lists, score-file emission, and the
//! side-by-side comparison report.
//!
//! File formats (header strings are part of the contract, byte for byte):
//! - authorship: `author_key,paper_id`
//! - citations: `citing_paper_id,cited_paper_id`
//! - metadata: `paper_id,year,venue,reported_times_cited`
//! - scores: `rank,entity,score`
//!
//! Entity indices are assigned in first-appearance order while reading, so
//! identical file bytes always produce the identical corpus. Scores are
//! printed with 12 significant digits; writing is deterministic and
//! parse-back reproduces the printed values exactly.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::baselines;
use crate::corpus::{Corpus, CorpusError, PaperMeta, ValidationReport};
use crate::engines::{
    caps_scores, citex_scores, ConvergenceReport, EngineError, EngineOutput, EntityClass,
    IterationConfig,
};
use crate::matrices::build_matrices;
use crate::metrics::{gini, make_rank_table, spearman, top_share, RankEntry, TiePolicy};
use crate::sparse::SparseError;

pub const AUTHORSHIP_HEADER: &str = "author_key,paper_id";
pub const CITATIONS_HEADER: &str = "citing_paper_id,cited_paper_id";
pub const METADATA_HEADER: &str = "paper_id,year,venue,reported_times_cited";
pub const SCORES_HEADER: &str = "rank,entity,score";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot open {path}: {source}")]
    Open {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    WriteFailure {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: csv error: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: missing header row (expected {expected:?})")]
    MissingHeader {
        path: PathBuf,
        expected: &'static str,
    },
    #[error("{path}: expected header {expected:?}, found {found:?}")]
    BadHeader {
        path: PathBuf,
        expected: &'static str,
        found: String,
    },
    #[error("{path}: line {line}: duplicate header row")]
    DuplicateHeader { path: PathBuf, line: u64 },
    #[error("{path}: line {line}: malformed row: {reason}")]
    MalformedRow {
        path: PathBuf,
        line: u64,
        reason: String,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// The CSV files one corpus is read from.
#[derive(Debug, Clone)]
pub struct CorpusFiles {
    pub authorship_path: PathBuf,
    pub citations_path: PathBuf,
    pub metadata_path: Option<PathBuf>,
}

fn read_rows(
    path: &Path,
    expected_header: &'static str,
    n_fields: usize,
) -> Result<Vec<(Vec<String>, u64)>, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => IoError::Open {
                path: path.to_path_buf(),
                source: std::io::Error::other(e.to_string()),
            },
            _ => IoError::Csv {
                path: path.to_path_buf(),
                source: e,
            },
        })?;

    let header_fields: Vec<&str> = expected_header.split(',').collect();
    let mut rows = Vec::new();
    let mut saw_header = false;
    for record in reader.records() {
        let record = record.map_err(|e| IoError::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: Vec<String> = record.iter().map(str::to_string).collect();
        if !saw_header {
            if fields != header_fields {
                return Err(IoError::BadHeader {
                    path: path.to_path_buf(),
                    expected: expected_header,
                    found: fields.join(","),
                });
            }
            saw_header = true;
            continue;
        }
        if fields == header_fields {
            return Err(IoError::DuplicateHeader {
                path: path.to_path_buf(),
                line,
            });
        }
        if fields.len() != n_fields {
            return Err(IoError::MalformedRow {
                path: path.to_path_buf(),
                line,
                reason: format!("expected {n_fields} fields, got {}", fields.len()),
            });
        }
        for field in &fields {
            if field.contains('\n') || field.contains('\r') {
                return Err(IoError::MalformedRow {
                    path: path.to_path_buf(),
                    line,
                    reason: "field contains an embedded newline".into(),
                });
            }
        }
        rows.push((fields, line));
    }
    if !saw_header {
        return Err(IoError::MissingHeader {
            path: path.to_path_buf(),
            expected: expected_header,
        });
    }
    Ok(rows)
}

fn require_key(path: &Path, line: u64, field: &str, what: &str) -> Result<(), IoError> {
    if field.is_empty() {
        return Err(IoError::MalformedRow {
            path: path.to_path_buf(),
            line,
            reason: format!("{what} is empty"),
        });
    }
    Ok(())
}

#[derive(Default)]
struct Interner {
    keys: Vec<String>,
    lookup: HashMap<String, usize>,
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

/// Loads a corpus from its CSV files.
///
/// Anomalies (self-citations, duplicates, disconnected entities) are
/// reported, not fatal; malformed rows are errors carrying their line
/// number. Papers first seen in the citation or metadata files are
/// registered as zero-author papers.
pub fn load_corpus(files: &CorpusFiles) -> Result<(Corpus, ValidationReport), IoError> {
    let mut authors = Interner::default();
    let mut papers = Interner::default();

    let mut authorship = Vec::new();
    for (fields, line) in read_rows(&files.authorship_path, AUTHORSHIP_HEADER, 2)? {
        require_key(&files.authorship_path, line, &fields[0], "author_key")?;
        require_key(&files.authorship_path, line, &fields[1], "paper_id")?;
        authorship.push((authors.intern(&fields[0]), papers.intern(&fields[1])));
    }

    let mut citations = Vec::new();
    for (fields, line) in read_rows(&files.citations_path, CITATIONS_HEADER, 2)? {
        require_key(&files.citations_path, line, &fields[0], "citing_paper_id")?;
        require_key(&files.citations_path, line, &fields[1], "cited_paper_id")?;
        citations.push((papers.intern(&fields[0]), papers.intern(&fields[1])));
    }

    let mut metadata_by_paper: Vec<(usize, PaperMeta)> = Vec::new();
    if let Some(metadata_path) = &files.metadata_path {
        let mut seen: HashMap<usize, u64> = HashMap::new();
        for (fields, line) in read_rows(metadata_path, METADATA_HEADER, 4)? {
            require_key(metadata_path, line, &fields[0], "paper_id")?;
            let paper = papers.intern(&fields[0]);
            if seen.insert(paper, line).is_some() {
                return Err(IoError::MalformedRow {
                    path: metadata_path.clone(),
                    line,
                    reason: format!("duplicate metadata for paper {:?}", fields[0]),
                });
            }
            let year: i32 = fields[1].parse().map_err(|_| IoError::MalformedRow {
                path: metadata_path.clone(),
                line,
                reason: format!("year {:?} is not an integer", fields[1]),
            })?;
            let reported_times_cited: u64 =
                fields[3].parse().map_err(|_| IoError::MalformedRow {
                    path: metadata_path.clone(),
                    line,
                    reason: format!(
                        "reported_times_cited {:?} is not a nonnegative integer",
                        fields[3]
                    ),
                })?;
            metadata_by_paper.push((
                paper,
                PaperMeta {
                    year,
                    venue: fields[2].clone(),
                    reported_times_cited,
                },
            ));
        }
    }

    let n_papers = papers.keys.len();
    let mut corpus = Corpus::new(authors.keys, papers.keys, authorship, citations)?;
    if files.metadata_path.is_some() {
        let mut metadata: Vec<Option<PaperMeta>> = vec![None; n_papers];
        for (paper, meta) in metadata_by_paper {
            metadata[paper] = Some(meta);
        }
        corpus = corpus.with_metadata(metadata)?;
    }
    let report = corpus.validate();
    Ok((corpus, report))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, IoError> {
    csv::Writer::from_path(path).map_err(|e| IoError::WriteFailure {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    })
}

fn finish_writer(path: &Path, mut writer: csv::Writer<std::fs::File>) -> Result<(), IoError> {
    writer.flush().map_err(|source| IoError::WriteFailure {
        path: path.to_path_buf(),
        source,
    })
}

fn write_record(
    path: &Path,
    writer: &mut csv::Writer<std::fs::File>,
    fields: &[&str],
) -> Result<(), IoError> {
    writer
        .write_record(fields)
        .map_err(|e| IoError::WriteFailure {
            path: path.to_path_buf(),
            source: std::io::Error::other(e.to_string()),
        })
}

/// Writes a corpus back out as the same CSV files [`load_corpus`] consumes.
pub fn write_corpus(
    corpus: &Corpus,
    authorship_path: &Path,
    citations_path: &Path,
    metadata_path: Option<&Path>,
) -> Result<(), IoError> {
    let mut w = csv_writer(authorship_path)?;
    write_record(authorship_path, &mut w, &["author_key", "paper_id"])?;
    for &(author, paper) in corpus.authorship() {
        write_record(
            authorship_path,
            &mut w,
            &[&corpus.authors()[author], &corpus.papers()[paper]],
        )?;
    }
    finish_writer(authorship_path, w)?;

    let mut w = csv_writer(citations_path)?;
    write_record(
        citations_path,
        &mut w,
        &["citing_paper_id", "cited_paper_id"],
    )?;
    for &(citing, cited) in corpus.citations() {
        write_record(
            citations_path,
            &mut w,
            &[&corpus.papers()[citing], &corpus.papers()[cited]],
        )?;
    }
    finish_writer(citations_path, w)?;

    if let Some(path) = metadata_path {
        let mut w = csv_writer(path)?;
        write_record(
            path,
            &mut w,
            &["paper_id", "year", "venue", "reported_times_cited"],
        )?;
        for (paper, meta) in corpus.metadata().iter().enumerate() {
            if let Some(meta) = meta {
                write_record(
                    path,
                    &mut w,
                    &[
                        &corpus.papers()[paper],
                        &meta.year.to_string(),
                        &meta.venue,
                        &meta.reported_times_cited.to_string(),
                    ],
                )?;
            }
        }
        finish_writer(path, w)?;
    }
    Ok(())
}

/// Formats a score with 12 significant digits.
pub fn format_score(score: f64) -> String {
    format!("{score:.11e}")
}

/// Renders a rank table as `rank,entity,score` CSV with 12-significant-digit
/// scores. Identical tables produce identical bytes.
pub fn scores_csv(table: &crate::metrics::RankTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "entity", "score"])
        .expect("writing to memory cannot fail");
    for entry in &table.entries {
        w.write_record([
            entry.rank.to_string().as_str(),
            &entry.entity,
            &format_score(entry.score),
        ])
        .expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("writing to memory cannot fail"))
        .expect("csv output is utf-8")
}

/// Writes a rank table to a file; see [`scores_csv`] for the format.
pub fn write_scores(path: &Path, table: &crate::metrics::RankTable) -> Result<(), IoError> {
    std::fs::write(path, scores_csv(table)).map_err(|source| IoError::WriteFailure {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a scores file back into rank entries.
pub fn read_scores(path: &Path) -> Result<Vec<RankEntry>, IoError> {
    let mut entries = Vec::new();
    for (fields, line) in read_rows(path, SCORES_HEADER, 3)? {
        let rank: f64 = fields[0].parse().map_err(|_| IoError::MalformedRow {
            path: path.to_path_buf(),
            line,
            reason: format!("rank {:?} is not a number", fields[0]),
        })?;
        let score: f64 = fields[2].parse().map_err(|_| IoError::MalformedRow {
            path: path.to_path_buf(),
            line,
            reason: format!("score {:?} is not a number", fields[2]),
        })?;
        entries.push(RankEntry {
            entity: fields[1].clone(),
            score,
            rank,
        });
    }
    Ok(entries)
}

/// Scoring methods exposed to reports and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Citex,
    Caps,
    PubCount,
    CiteCount,
    HIndex,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Citex,
        Method::Caps,
        Method::PubCount,
        Method::CiteCount,
        Method::HIndex,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Citex => "citex",
            Method::Caps => "caps",
            Method::PubCount => "pubcount",
            Method::CiteCount => "citecount",
            Method::HIndex => "hindex",
        }
    }

    /// Paper-level rankings exist only for methods that score papers.
    pub fn applies_to_papers(&self) -> bool {
        matches!(self, Method::Citex | Method::Caps | Method::CiteCount)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("unknown method name {0:?} (expected citex, caps, pubcount, citecount, or hindex)")]
pub struct UnknownMethod(pub String);

impl std::str::FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "citex" => Ok(Method::Citex),
            "caps" => Ok(Method::Caps),
            "pubcount" => Ok(Method::PubCount),
            "citecount" => Ok(Method::CiteCount),
            "hindex" => Ok(Method::HIndex),
            other => Err(UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no methods requested")]
    EmptyMethods,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Sparse(#[from] SparseError),
}

/// Convergence outcome of one engine run inside a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceNote {
    pub method: Method,
    pub entity_class: EntityClass,
    pub report: ConvergenceReport,
}

/// Text report plus the engine convergence outcomes behind it.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub text: String,
    pub convergence: Vec<ConvergenceNote>,
}

struct MethodScores {
    method: Method,
    author_scores: Vec<f64>,
    paper_scores: Option<Vec<f64>>,
}

/// Builds the side-by-side comparison: top-N tables per method for authors
/// and papers, per-method Gini and top-20% share, pairwise Spearman
/// matrices, and (when metadata is present) the venue composition of each
/// method's top 100 papers.
pub fn comparison_report(
    corpus: &Corpus,
    methods: &[Method],
    top_n: usize,
    cfg: &IterationConfig,
) -> Result<ComparisonReport, ReportError> {
    if methods.is_empty() {
        return Err(ReportError::EmptyMethods);
    }
    let mut requested: Vec<Method> = Vec::new();
    for &m in methods {
        if !requested.contains(&m) {
            requested.push(m);
        }
    }

    let mats = build_matrices(corpus);
    let mut convergence = Vec::new();
    let mut citex: Option<EngineOutput> = None;
    let mut caps: Option<EngineOutput> = None;

    let mut scored: Vec<MethodScores> = Vec::with_capacity(requested.len());
    for &method in &requested {
        let scores = match method {
            Method::Citex => {
                let out = citex.get_or_insert(citex_scores(&mats, cfg)?);
                convergence.push(ConvergenceNote {
                    method,
                    entity_class: EntityClass::Author,
                    report: out.author_report,
                });
                if let Some(paper_report) = out.paper_report {
                    convergence.push(ConvergenceNote {
                        method,
                        entity_class: EntityClass::Paper,
                        report: paper_report,
                    });
                }
                MethodScores {
                    method,
                    author_scores: out.author_scores.values.clone(),
                    paper_scores: Some(out.paper_scores.values.clone()),
                }
            }
            Method::Caps => {
                let out = caps.get_or_insert(caps_scores(&mats, cfg)?);
                convergence.push(ConvergenceNote {
                    method,
                    entity_class: EntityClass::Author,
                    report: out.author_report,
                });
                MethodScores {
                    method,
                    author_scores: out.author_scores.values.clone(),
                    paper_scores: Some(out.paper_scores.values.clone()),
                }
            }
            Method::PubCount => MethodScores {
                method,
                author_scores: baselines::publication_counts(&mats.incidence)
                    .into_iter()
                    .map(|c| c as f64)
                    .collect(),
                paper_scores: None,
            },
            Method::CiteCount => MethodScores {
                method,
                author_scores: baselines::author_citation_counts(
                    &mats.incidence,
                    &mats.citations,
                    baselines::CitationCredit::Integer,
                )?,
                paper_scores: Some(
                    baselines::paper_citation_counts(&mats.citations)
                        .into_iter()
                        .map(|c| c as f64)
                        .collect(),
                ),
            },
            Method::HIndex => MethodScores {
                method,
                author_scores: baselines::author_indicators(&mats)?
                    .into_iter()
                    .map(|ind| ind.h_index as f64)
                    .collect(),
                paper_scores: None,
            },
        };
        scored.push(scores);
    }

    let mut text = String::new();
    let method_names: Vec<&str> = requested.iter().map(|m| m.name()).collect();
    let _ = writeln!(text, "comparison report");
    let _ = writeln!(
        text,
        "corpus: {} authors, {} papers, {} citations",
        corpus.n_authors(),
        corpus.n_papers(),
        corpus.citations().len()
    );
    let _ = writeln!(text, "methods: {}", method_names.join(", "));
    let _ = writeln!(text, "top-n: {top_n}");

    render_entity_sections(
        &mut text,
        "authors",
        corpus.authors(),
        &scored
            .iter()
            .map(|s| (s.method, s.author_scores.as_slice()))
            .collect::<Vec<_>>(),
        top_n,
    );

    let paper_methods: Vec<(Method, &[f64])> = scored
        .iter()
        .filter_map(|s| s.paper_scores.as_deref().map(|v| (s.method, v)))
        .collect();
    if !paper_methods.is_empty() {
        render_entity_sections(&mut text, "papers", corpus.papers(), &paper_methods, top_n);
        if corpus.has_metadata() {
            render_venue_section(&mut text, corpus, &paper_methods);
        }
    }

    if !convergence.is_empty() {
        let _ = writeln!(text, "\n== engine convergence ==");
        let _ = writeln!(text, "method  entity  iterations  residual   converged");
        for note in &convergence {
            let entity = match note.entity_class {
                EntityClass::Author => "author",
                EntityClass::Paper => "paper",
            };
            let _ = writeln!(
                text,
                "{:<6}  {:<6}  {:<10}  {:<9.2e}  {}",
                note.method.name(),
                entity,
                note.report.iterations,
                note.report.final_residual,
                if note.report.converged { "yes" } else { "no" }
            );
        }
    }

    Ok(ComparisonReport { text, convergence })
}

fn render_entity_sections(
    text: &mut String,
    label: &str,
    keys: &[String],
    methods: &[(Method, &[f64])],
    top_n: usize,
) {
    let tables: Vec<(Method, Vec<RankEntry>)> = methods
        .iter()
        .map(|&(method, scores)| {
            let pairs: Vec<(String, f64)> =
                keys.iter().cloned().zip(scores.iter().copied()).collect();
            (method, make_rank_table(&pairs, TiePolicy::Ordinal).entries)
        })
        .collect();

    let rows = top_n.min(keys.len());
    let _ = writeln!(text, "\n== top {label} ==");
    let mut widths: Vec<usize> = tables
        .iter()
        .map(|(method, entries)| {
            entries
                .iter()
                .take(rows)
                .map(|e| e.entity.len())
                .chain(std::iter::once(method.name().len()))
                .max()
                .unwrap_or(4)
        })
        .collect();
    for w in widths.iter_mut() {
        *w = (*w).max(4);
    }
    let mut header = format!("{:<5}", "rank");
    for ((method, _), width) in tables.iter().zip(&widths) {
        let _ = write!(header, "  {:<width$}", method.name(), width = width);
    }
    let _ = writeln!(text, "{}", header.trim_end());
    for row in 0..rows {
        let mut line = format!("{:<5}", row + 1);
        for ((_, entries), width) in tables.iter().zip(&widths) {
            let _ = write!(line, "  {:<width$}", entries[row].entity, width = width);
        }
        let _ = writeln!(text, "{}", line.trim_end());
    }

    let _ = writeln!(text, "\n== {label} score statistics ==");
    let name_width = methods
        .iter()
        .map(|(m, _)| m.name().len())
        .max()
        .unwrap_or(6)
        .max(6);
    let _ = writeln!(
        text,
        "{:<name_width$}  {:<9}  top-20% share",
        "method",
        "gini",
        name_width = name_width
    );
    for &(method, scores) in methods {
        let gini_text = match gini(scores) {
            Ok(g) => format!("{g:.6}"),
            Err(_) => "n/a".to_string(),
        };
        let share_text = match top_share(scores, 0.2) {
            Ok(s) => format!("{s:.6}"),
            Err(_) => "n/a".to_string(),
        };
        let _ = writeln!(
            text,
            "{:<name_width$}  {:<9}  {}",
            method.name(),
            gini_text,
            share_text,
            name_width = name_width
        );
    }

    if methods.len() > 1 {
        let _ = writeln!(text, "\n== {label} rank agreement (spearman rho) ==");
        let mut header = format!("{:<name_width$}", "", name_width = name_width);
        for (method, _) in methods {
            let _ = write!(header, "  {:>8}", method.name());
        }
        let _ = writeln!(text, "{}", header.trim_end());
        for &(row_method, row_scores) in methods {
            let mut line = format!(
                "{:<name_width$}",
                row_method.name(),
                name_width = name_width
            );
            for &(_, col_scores) in methods {
                match spearman(row_scores, col_scores) {
                    Ok(rho) => {
                        let _ = write!(line, "  {rho:>8.4}");
                    }
                    Err(_) => {
                        let _ = write!(line, "  {:>8}", "n/a");
                    }
                }
            }
            let _ = writeln!(text, "{}", line.trim_end());
        }
    }
}

fn render_venue_section(text: &mut String, corpus: &Corpus, methods: &[(Method, &[f64])]) {
    let _ = writeln!(text, "\n== venue composition of top 100 papers ==");
    for &(method, scores) in methods {
        let pairs: Vec<(String, f64)> = corpus
            .papers()
            .iter()
            .cloned()
            .zip(scores.iter().copied())
            .collect();
        let table = make_rank_table(&pairs, TiePolicy::Ordinal);
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for entry in table.entries.iter().take(100) {
            let paper = corpus
                .paper_index(&entry.entity)
                .expect("rank table keys come from the corpus");
            let venue = corpus.metadata()[paper]
                .as_ref()
                .map_or("(unknown)", |meta| meta.venue.as_str());
            *counts.entry(venue).or_insert(0) += 1;
        }
        let mut ordered: Vec<(&str, usize)> = counts.into_iter().collect();
        ordered.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let _ = writeln!(text, "[{}]", method.name());
        let _ = writeln!(text, "venue,count");
        for (venue, count) in ordered {
            let _ = writeln!(text, "{venue},{count}");
        }
    }
}
