//! Command-line front end: validate corpora, score and compare entities,
//! summarize score inequality, and generate synthetic corpora.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 scores written but
//! some engine run stopped on its iteration budget instead of converging.
//! Progress and warnings go to stderr; machine output goes to `--out` (or
//! stdout when `--out` is omitted).

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bibrank::baselines::{self, CitationCredit};
use bibrank::corpus::{Corpus, ValidationReport};
use bibrank::engines::{
    caps_scores, citex_scores, ConvergenceReport, EngineError, EntityClass, IterationConfig,
};
use bibrank::io::{
    comparison_report, load_corpus, scores_csv, write_corpus, CorpusFiles, IoError, Method,
    ReportError,
};
use bibrank::matrices::{build_matrices, BibMatrices};
use bibrank::metrics::{gini, make_rank_table, top_share, MetricsError, TiePolicy};
use bibrank::synth::{self, AuthorsPerPaper, PlantedPathology, SynthConfig, SynthError};

#[derive(Parser)]
#[command(
    name = "bibrank",
    version,
    about = "Coupled author-paper importance scoring over citation graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CorpusArgs {
    /// Authorship edge list CSV (author_key,paper_id)
    #[arg(long, value_name = "PATH")]
    authorship: PathBuf,
    /// Citation edge list CSV (citing_paper_id,cited_paper_id)
    #[arg(long, value_name = "PATH")]
    citations: PathBuf,
    /// Optional per-paper metadata CSV (paper_id,year,venue,reported_times_cited)
    #[arg(long, value_name = "PATH")]
    metadata: Option<PathBuf>,
}

impl CorpusArgs {
    fn files(&self) -> CorpusFiles {
        CorpusFiles {
            authorship_path: self.authorship.clone(),
            citations_path: self.citations.clone(),
            metadata_path: self.metadata.clone(),
        }
    }
}

#[derive(Args)]
struct IterArgs {
    /// Convergence tolerance on the L1 distance between successive iterates
    #[arg(long, default_value_t = 1e-9)]
    epsilon: f64,
    /// Iteration budget per power-method run
    #[arg(long = "max-iter", default_value_t = 1000, value_name = "N")]
    max_iter: usize,
}

impl IterArgs {
    fn config(&self) -> IterationConfig {
        IterationConfig {
            epsilon: self.epsilon,
            max_iterations: self.max_iter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Citex,
    Caps,
    Pubcount,
    Citecount,
    Hindex,
}

impl From<MethodArg> for Method {
    fn from(arg: MethodArg) -> Method {
        match arg {
            MethodArg::Citex => Method::Citex,
            MethodArg::Caps => Method::Caps,
            MethodArg::Pubcount => Method::PubCount,
            MethodArg::Citecount => Method::CiteCount,
            MethodArg::Hindex => Method::HIndex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EntityArg {
    Author,
    Paper,
}

#[derive(Subcommand)]
enum Command {
    /// Load corpus files and report ingestion anomalies
    Validate {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Write the report here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Rank authors or papers by one method; writes rank,entity,score CSV
    Score {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum)]
        entity: EntityArg,
        /// Write the ranking here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        iter: IterArgs,
    },
    /// Side-by-side comparison of several methods
    Compare {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Comma-separated subset of citex,caps,pubcount,citecount,hindex
        #[arg(long, value_name = "LIST")]
        methods: String,
        /// Rows per ranking table
        #[arg(long = "top-n", default_value_t = 25, value_name = "N")]
        top_n: usize,
        /// Write the report here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        iter: IterArgs,
    },
    /// Gini coefficient and top-20% share of one method's scores
    Gini {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum)]
        entity: EntityArg,
        /// Write the summary here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        iter: IterArgs,
    },
    /// Generate a synthetic preferential-attachment corpus
    Synth {
        /// Output path for the authorship CSV
        #[arg(long, value_name = "PATH")]
        authorship: PathBuf,
        /// Output path for the citations CSV
        #[arg(long, value_name = "PATH")]
        citations: PathBuf,
        #[arg(long = "n-papers", default_value_t = 1000, value_name = "N")]
        n_papers: usize,
        #[arg(long = "n-authors", default_value_t = 300, value_name = "N")]
        n_authors: usize,
        /// Mean citations made per paper
        #[arg(
            long = "citations-per-paper",
            default_value_t = 5.0,
            value_name = "MEAN"
        )]
        citations_per_paper: f64,
        /// Additive attachment smoothing; lower is richer-get-richer
        #[arg(long = "attachment-offset", default_value_t = 1.0, value_name = "REAL")]
        attachment_offset: f64,
        /// Team size distribution: fixed:<k> or geometric:<mean>
        #[arg(
            long = "authors-per-paper",
            default_value = "geometric:2.0",
            value_name = "SPEC"
        )]
        authors_per_paper: String,
        /// Power-law exponent for author selection
        #[arg(
            long = "author-productivity-skew",
            default_value_t = 2.0,
            value_name = "REAL"
        )]
        author_productivity_skew: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Plant one uncited solo author with this many papers
        #[arg(long = "plant-prolific-uncited", value_name = "QUOTA")]
        plant_prolific_uncited: Option<usize>,
        /// Plant a block of this many papers sharing one author list
        #[arg(long = "plant-repeated-authors", value_name = "BLOCK")]
        plant_repeated_authors: Option<usize>,
    },
}

enum AppError {
    Usage(String),
    Data(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(msg) | AppError::Data(msg) => f.write_str(msg),
        }
    }
}

impl From<IoError> for AppError {
    fn from(e: IoError) -> Self {
        AppError::Data(e.to_string())
    }
}

impl From<EngineError> for AppError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::InvalidConfig(_) => AppError::Usage(e.to_string()),
            other => AppError::Data(other.to_string()),
        }
    }
}

impl From<SynthError> for AppError {
    fn from(e: SynthError) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<ReportError> for AppError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::EmptyMethods => AppError::Usage(e.to_string()),
            ReportError::Engine(engine) => engine.into(),
            ReportError::Sparse(sparse) => AppError::Data(sparse.to_string()),
        }
    }
}

impl From<MetricsError> for AppError {
    fn from(e: MetricsError) -> Self {
        AppError::Data(e.to_string())
    }
}

/// Whether everything the invocation computed actually converged.
enum Outcome {
    Clean,
    Unconverged,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let failed = e.use_stderr();
            let _ = e.print();
            return if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Unconverged) => ExitCode::from(3),
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), AppError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| AppError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<Outcome, AppError> {
    match command {
        Command::Validate { corpus, out } => {
            let (loaded, report) = load_corpus(&corpus.files())?;
            emit(&out, &validation_text(&loaded, &report))?;
            eprintln!(
                "validated {} authors, {} papers, {} citations",
                loaded.n_authors(),
                loaded.n_papers(),
                loaded.citations().len()
            );
            Ok(Outcome::Clean)
        }
        Command::Score {
            corpus,
            method,
            entity,
            out,
            iter,
        } => {
            let (loaded, _) = load_corpus(&corpus.files())?;
            let mats = build_matrices(&loaded);
            let scored = method_scores(&loaded, &mats, method, entity, &iter.config())?;
            let table = make_rank_table(&scored.entries, TiePolicy::Ordinal);
            emit(&out, &scores_csv(&table))?;
            Ok(report_convergence(&scored))
        }
        Command::Compare {
            corpus,
            methods,
            top_n,
            out,
            iter,
        } => {
            if top_n == 0 {
                return Err(AppError::Usage("--top-n must be at least 1".into()));
            }
            let parsed = parse_methods(&methods)?;
            let (loaded, _) = load_corpus(&corpus.files())?;
            let report = comparison_report(&loaded, &parsed, top_n, &iter.config())?;
            emit(&out, &report.text)?;
            let mut unconverged = false;
            for note in &report.convergence {
                if note.report.all_zero {
                    eprintln!(
                        "warning: all-zero fixed point ({} {} scores are identically zero)",
                        note.method,
                        entity_name(note.entity_class)
                    );
                } else if !note.report.converged {
                    unconverged = true;
                    eprintln!(
                        "warning: {} {} scores did not converge within {} iterations (final residual {:.3e})",
                        note.method,
                        entity_name(note.entity_class),
                        note.report.iterations,
                        note.report.final_residual
                    );
                }
            }
            Ok(if unconverged {
                Outcome::Unconverged
            } else {
                Outcome::Clean
            })
        }
        Command::Gini {
            corpus,
            method,
            entity,
            out,
            iter,
        } => {
            let (loaded, _) = load_corpus(&corpus.files())?;
            let mats = build_matrices(&loaded);
            let scored = method_scores(&loaded, &mats, method, entity, &iter.config())?;
            let values: Vec<f64> = scored.entries.iter().map(|(_, s)| *s).collect();
            let g = gini(&values).map_err(|e| match e {
                MetricsError::AllZero => AppError::Data(
                    "gini is undefined: all scores are zero (all-zero fixed point)".into(),
                ),
                other => other.into(),
            })?;
            let share = top_share(&values, 0.2)?;
            let content = format!(
                "method,entity,gini,top20_share\n{},{},{:.6},{:.6}\n",
                Method::from(method),
                entity_arg_name(entity),
                g,
                share
            );
            emit(&out, &content)?;
            Ok(report_convergence(&scored))
        }
        Command::Synth {
            authorship,
            citations,
            n_papers,
            n_authors,
            citations_per_paper,
            attachment_offset,
            authors_per_paper,
            author_productivity_skew,
            seed,
            plant_prolific_uncited,
            plant_repeated_authors,
        } => {
            let mut planted = Vec::new();
            if let Some(quota) = plant_prolific_uncited {
                planted.push(PlantedPathology::ProlificUncitedSoloAuthor { quota });
            }
            if let Some(block_size) = plant_repeated_authors {
                planted.push(PlantedPathology::RepeatedAuthorList { block_size });
            }
            let cfg = SynthConfig {
                n_papers,
                n_authors,
                citations_per_paper,
                attachment_offset,
                authors_per_paper: parse_team_spec(&authors_per_paper)?,
                author_productivity_skew,
                seed,
                planted_pathologies: planted,
            };
            let corpus = synth::generate(&cfg)?;
            write_corpus(&corpus, &authorship, &citations, None)?;
            eprintln!(
                "generated {} papers, {} authors, {} citations (seed {seed})",
                corpus.n_papers(),
                corpus.n_authors(),
                corpus.citations().len()
            );
            Ok(Outcome::Clean)
        }
    }
}

struct Scored {
    entries: Vec<(String, f64)>,
    /// Convergence of the engine runs this output depends on.
    reports: Vec<(Method, EntityClass, ConvergenceReport)>,
}

fn method_scores(
    corpus: &Corpus,
    mats: &BibMatrices,
    method: MethodArg,
    entity: EntityArg,
    cfg: &IterationConfig,
) -> Result<Scored, AppError> {
    let keys: &[String] = match entity {
        EntityArg::Author => corpus.authors(),
        EntityArg::Paper => corpus.papers(),
    };
    let pair =
        |values: Vec<f64>| -> Vec<(String, f64)> { keys.iter().cloned().zip(values).collect() };

    let scored = match (method, entity) {
        (MethodArg::Citex, _) => {
            let out = citex_scores(mats, cfg)?;
            let (values, reports) = match entity {
                EntityArg::Author => (
                    out.author_scores.values,
                    vec![(Method::Citex, EntityClass::Author, out.author_report)],
                ),
                EntityArg::Paper => (
                    out.paper_scores.values,
                    vec![(
                        Method::Citex,
                        EntityClass::Paper,
                        out.paper_report.expect("citex iterates paper scores"),
                    )],
                ),
            };
            Scored {
                entries: pair(values),
                reports,
            }
        }
        (MethodArg::Caps, _) => {
            let out = caps_scores(mats, cfg)?;
            let values = match entity {
                EntityArg::Author => out.author_scores.values,
                EntityArg::Paper => out.paper_scores.values,
            };
            Scored {
                entries: pair(values),
                reports: vec![(Method::Caps, EntityClass::Author, out.author_report)],
            }
        }
        (MethodArg::Pubcount, EntityArg::Author) => Scored {
            entries: pair(
                baselines::publication_counts(&mats.incidence)
                    .into_iter()
                    .map(|c| c as f64)
                    .collect(),
            ),
            reports: Vec::new(),
        },
        (MethodArg::Pubcount, EntityArg::Paper) => {
            return Err(AppError::Usage(
                "method pubcount ranks authors only; use --entity author".into(),
            ))
        }
        (MethodArg::Citecount, EntityArg::Author) => Scored {
            entries: pair(author_citation_counts_integer(mats)?),
            reports: Vec::new(),
        },
        (MethodArg::Citecount, EntityArg::Paper) => Scored {
            entries: pair(
                baselines::paper_citation_counts(&mats.citations)
                    .into_iter()
                    .map(|c| c as f64)
                    .collect(),
            ),
            reports: Vec::new(),
        },
        (MethodArg::Hindex, EntityArg::Author) => Scored {
            entries: pair(
                baselines::author_indicators(mats)
                    .map_err(|e| AppError::Data(e.to_string()))?
                    .into_iter()
                    .map(|ind| ind.h_index as f64)
                    .collect(),
            ),
            reports: Vec::new(),
        },
        (MethodArg::Hindex, EntityArg::Paper) => {
            return Err(AppError::Usage(
                "method hindex ranks authors only; use --entity author".into(),
            ))
        }
    };
    Ok(scored)
}

fn author_citation_counts_integer(mats: &BibMatrices) -> Result<Vec<f64>, AppError> {
    baselines::author_citation_counts(&mats.incidence, &mats.citations, CitationCredit::Integer)
        .map_err(|e| AppError::Data(e.to_string()))
}

/// Emits warnings for the runs behind one scored output and maps them to the
/// process outcome: all-zero fixed points are legitimate results, stopping
/// on the iteration budget is exit code 3.
fn report_convergence(scored: &Scored) -> Outcome {
    let mut unconverged = false;
    for (method, entity_class, report) in &scored.reports {
        if report.all_zero {
            eprintln!(
                "warning: all-zero fixed point ({method} {} scores are identically zero)",
                entity_name(*entity_class)
            );
        } else if !report.converged {
            unconverged = true;
            eprintln!(
                "warning: {method} {} scores did not converge within {} iterations (final residual {:.3e})",
                entity_name(*entity_class),
                report.iterations,
                report.final_residual
            );
        }
    }
    if unconverged {
        Outcome::Unconverged
    } else {
        Outcome::Clean
    }
}

fn entity_name(entity: EntityClass) -> &'static str {
    match entity {
        EntityClass::Author => "author",
        EntityClass::Paper => "paper",
    }
}

fn entity_arg_name(entity: EntityArg) -> &'static str {
    match entity {
        EntityArg::Author => "author",
        EntityArg::Paper => "paper",
    }
}

fn parse_methods(spec: &str) -> Result<Vec<Method>, AppError> {
    let mut methods = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let method: Method = token
            .parse()
            .map_err(|e: bibrank::io::UnknownMethod| AppError::Usage(e.to_string()))?;
        methods.push(method);
    }
    if methods.is_empty() {
        return Err(AppError::Usage(
            "--methods must name at least one method".into(),
        ));
    }
    Ok(methods)
}

fn parse_team_spec(spec: &str) -> Result<AuthorsPerPaper, AppError> {
    let err = || {
        AppError::Usage(format!(
            "--authors-per-paper expects fixed:<k> or geometric:<mean>, got {spec:?}"
        ))
    };
    let (kind, value) = spec.split_once(':').ok_or_else(err)?;
    match kind {
        "fixed" => Ok(AuthorsPerPaper::Fixed(value.parse().map_err(|_| err())?)),
        "geometric" => Ok(AuthorsPerPaper::Geometric {
            mean: value.parse().map_err(|_| err())?,
        }),
        _ => Err(err()),
    }
}

fn validation_text(corpus: &Corpus, report: &ValidationReport) -> String {
    format!(
        "validation report\n\
         authors: {}\n\
         papers: {}\n\
         citations: {}\n\
         self_citations_stripped: {}\n\
         duplicate_authorship_collapsed: {}\n\
         duplicate_citations_collapsed: {}\n\
         dangling_citations_dropped: {}\n\
         zero_author_papers: {}\n\
         zero_paper_authors: {}\n\
         status: {}\n",
        corpus.n_authors(),
        corpus.n_papers(),
        corpus.citations().len(),
        report.self_citations_stripped,
        report.duplicate_authorship_collapsed,
        report.duplicate_citations_collapsed,
        report.dangling_citations_dropped,
        report.zero_author_papers,
        report.zero_paper_authors,
        if report.is_clean() {
            "clean"
        } else {
            "anomalies found"
        }
    )
}
