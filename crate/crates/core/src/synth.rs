//! Seeded synthetic corpus generator.
//!
//! Papers are created in sequence and cite earlier papers with probability
//! proportional to (current in-degree + attachment offset), the classic
//! cumulative-advantage process: the offset keeps never-cited papers
//! reachable while past success compounds. Authors come from a fixed pool
//! sampled with power-law weights, giving the skewed productivity profile
//! real corpora show. Everything is driven by one explicitly seeded
//! generator, so a config determines its corpus exactly.
//!
//! The planted pathologies graft known-bad structures onto a corpus for
//! diagnostic tests: a massively prolific author nobody cites, or a block of
//! papers sharing one author list.

use std::collections::HashMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Geometric, Poisson};
use thiserror::Error;

use crate::corpus::Corpus;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("{field} must be at least 1")]
    ZeroCount { field: &'static str },
    #[error("{field} must be positive and finite, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("citations_per_paper ({requested}) must be smaller than n_papers ({n_papers})")]
    InfeasibleCitations { requested: f64, n_papers: usize },
}

/// Team-size distribution for new papers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuthorsPerPaper {
    Fixed(usize),
    /// Shifted geometric on {1, 2, ...} with the given mean.
    Geometric {
        mean: f64,
    },
}

/// Structures grafted onto the generated corpus after the attachment
/// process finishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlantedPathology {
    /// One new author with `quota` solo papers that neither cite nor are
    /// cited.
    ProlificUncitedSoloAuthor { quota: usize },
    /// `block_size` new papers sharing one fresh two-author list, citing
    /// nothing.
    RepeatedAuthorList { block_size: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_papers: usize,
    pub n_authors: usize,
    /// Mean of the per-paper citation count (Poisson, clamped to the number
    /// of earlier papers).
    pub citations_per_paper: f64,
    /// Additive smoothing on in-degree; lower values strengthen cumulative
    /// advantage.
    pub attachment_offset: f64,
    pub authors_per_paper: AuthorsPerPaper,
    /// Exponent of the power-law weights used to pick authors from the
    /// pool; higher values concentrate output on fewer authors.
    pub author_productivity_skew: f64,
    pub seed: u64,
    pub planted_pathologies: Vec<PlantedPathology>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_papers: 1000,
            n_authors: 300,
            citations_per_paper: 5.0,
            attachment_offset: 1.0,
            authors_per_paper: AuthorsPerPaper::Geometric { mean: 2.0 },
            author_productivity_skew: 2.0,
            seed: 0,
            planted_pathologies: Vec::new(),
        }
    }
}

impl SynthConfig {
    fn check(&self) -> Result<(), SynthError> {
        if self.n_papers == 0 {
            return Err(SynthError::ZeroCount { field: "n_papers" });
        }
        if self.n_authors == 0 {
            return Err(SynthError::ZeroCount { field: "n_authors" });
        }
        if !self.attachment_offset.is_finite() || self.attachment_offset <= 0.0 {
            return Err(SynthError::NonPositive {
                field: "attachment_offset",
                value: self.attachment_offset,
            });
        }
        if !self.author_productivity_skew.is_finite() || self.author_productivity_skew <= 0.0 {
            return Err(SynthError::NonPositive {
                field: "author_productivity_skew",
                value: self.author_productivity_skew,
            });
        }
        if !self.citations_per_paper.is_finite() || self.citations_per_paper < 0.0 {
            return Err(SynthError::NonPositive {
                field: "citations_per_paper",
                value: self.citations_per_paper,
            });
        }
        if self.citations_per_paper >= self.n_papers as f64 {
            return Err(SynthError::InfeasibleCitations {
                requested: self.citations_per_paper,
                n_papers: self.n_papers,
            });
        }
        match self.authors_per_paper {
            AuthorsPerPaper::Fixed(0) => Err(SynthError::ZeroCount {
                field: "authors_per_paper",
            }),
            AuthorsPerPaper::Geometric { mean } if !mean.is_finite() || mean < 1.0 => {
                Err(SynthError::NonPositive {
                    field: "authors_per_paper mean",
                    value: mean,
                })
            }
            _ => Ok(()),
        }
    }
}

/// Generates a corpus from the config; a fixed seed fixes the output. The
/// result always passes validation with zero anomalies.
pub fn generate(cfg: &SynthConfig) -> Result<Corpus, SynthError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let weights: Vec<f64> = (1..=cfg.n_authors)
        .map(|rank| (rank as f64).powf(-cfg.author_productivity_skew))
        .collect();
    let author_dist = WeightedIndex::new(&weights).expect("weights are positive");
    let citation_count_dist = if cfg.citations_per_paper > 0.0 {
        Some(Poisson::new(cfg.citations_per_paper).expect("validated mean"))
    } else {
        None
    };
    let team_size_dist = match cfg.authors_per_paper {
        AuthorsPerPaper::Geometric { mean } if mean > 1.0 => {
            Some(Geometric::new(1.0 / mean).expect("validated mean"))
        }
        _ => None,
    };

    let mut pool_authorship: Vec<(usize, usize)> = Vec::new();
    let mut citations: Vec<(usize, usize)> = Vec::new();
    // Cited endpoints, one entry per citation received: sampling this bag
    // uniformly is sampling papers proportionally to in-degree.
    let mut endpoint_bag: Vec<usize> = Vec::new();

    for paper in 0..cfg.n_papers {
        let team_size = match cfg.authors_per_paper {
            AuthorsPerPaper::Fixed(k) => k,
            AuthorsPerPaper::Geometric { .. } => match &team_size_dist {
                Some(d) => 1 + d.sample(&mut rng) as usize,
                None => 1,
            },
        }
        .min(cfg.n_authors);

        let mut team: Vec<usize> = Vec::with_capacity(team_size);
        let mut rejections = 0usize;
        while team.len() < team_size {
            let candidate = author_dist.sample(&mut rng);
            if !team.contains(&candidate) {
                team.push(candidate);
            } else {
                rejections += 1;
                if rejections > 200 * team_size + 200 {
                    for idx in 0..cfg.n_authors {
                        if team.len() == team_size {
                            break;
                        }
                        if !team.contains(&idx) {
                            team.push(idx);
                        }
                    }
                }
            }
        }
        for &author in &team {
            pool_authorship.push((author, paper));
        }

        let requested = match &citation_count_dist {
            Some(d) => d.sample(&mut rng) as usize,
            None => 0,
        };
        let n_targets = requested.min(paper);
        let mut targets: Vec<usize> = Vec::with_capacity(n_targets);
        let mut rejections = 0usize;
        while targets.len() < n_targets {
            let bag_mass = endpoint_bag.len() as f64;
            let uniform_mass = cfg.attachment_offset * paper as f64;
            let candidate = if rng.random::<f64>() * (bag_mass + uniform_mass) < bag_mass {
                endpoint_bag[rng.random_range(0..endpoint_bag.len())]
            } else {
                rng.random_range(0..paper)
            };
            if !targets.contains(&candidate) {
                targets.push(candidate);
            } else {
                rejections += 1;
                if rejections > 200 * n_targets + 200 {
                    for old in 0..paper {
                        if targets.len() == n_targets {
                            break;
                        }
                        if !targets.contains(&old) {
                            targets.push(old);
                        }
                    }
                }
            }
        }
        for &cited in &targets {
            citations.push((paper, cited));
            endpoint_bag.push(cited);
        }
    }

    // Compact the author pool to the authors actually used, in
    // first-appearance order.
    let mut pool_to_index: HashMap<usize, usize> = HashMap::new();
    let mut author_keys: Vec<String> = Vec::new();
    let mut authorship: Vec<(usize, usize)> = Vec::with_capacity(pool_authorship.len());
    for (pool, paper) in pool_authorship {
        let index = *pool_to_index.entry(pool).or_insert_with(|| {
            author_keys.push(format!("a{pool}"));
            author_keys.len() - 1
        });
        authorship.push((index, paper));
    }
    let paper_keys: Vec<String> = (0..cfg.n_papers).map(|t| format!("p{t}")).collect();

    let mut corpus = Corpus::new(author_keys, paper_keys, authorship, citations)
        .expect("generated edges are in range");

    for pathology in &cfg.planted_pathologies {
        corpus = match *pathology {
            PlantedPathology::ProlificUncitedSoloAuthor { quota } => {
                plant_prolific_uncited_author(&corpus, quota).0
            }
            PlantedPathology::RepeatedAuthorList { block_size } => {
                plant_repeated_author_list(&corpus, block_size).0
            }
        };
    }
    Ok(corpus)
}

fn fresh_suffix(corpus: &Corpus, base: &str) -> String {
    let taken = |key: &str| corpus.author_index(key).is_some() || corpus.paper_index(key).is_some();
    if !taken(base) {
        return base.to_string();
    }
    let mut k = 2usize;
    loop {
        let candidate = format!("{base}.{k}");
        if !taken(&candidate) {
            return candidate;
        }
        k += 1;
    }
}

/// Appends one new author with `quota` solo papers that neither cite nor
/// are cited. Returns the planted author's key.
pub fn plant_prolific_uncited_author(corpus: &Corpus, quota: usize) -> (Corpus, String) {
    let key = fresh_suffix(corpus, "planted.solo");
    let mut authors = corpus.authors().to_vec();
    let mut papers = corpus.papers().to_vec();
    let mut authorship = corpus.authorship().to_vec();
    let author_index = authors.len();
    authors.push(key.clone());
    for i in 0..quota {
        let paper_index = papers.len();
        papers.push(format!("{key}.p{i}"));
        authorship.push((author_index, paper_index));
    }
    let planted = Corpus::new(authors, papers, authorship, corpus.citations().to_vec())
        .expect("planted edges are in range");
    (planted, key)
}

/// Appends `block_size` new papers sharing one fresh two-author list,
/// citing nothing. Returns the team's keys.
pub fn plant_repeated_author_list(corpus: &Corpus, block_size: usize) -> (Corpus, Vec<String>) {
    let base = fresh_suffix(corpus, "planted.team");
    let team_keys = vec![format!("{base}.1"), format!("{base}.2")];
    let mut authors = corpus.authors().to_vec();
    let mut papers = corpus.papers().to_vec();
    let mut authorship = corpus.authorship().to_vec();
    let first = authors.len();
    authors.extend(team_keys.iter().cloned());
    for i in 0..block_size {
        let paper_index = papers.len();
        papers.push(format!("{base}.p{i}"));
        authorship.push((first, paper_index));
        authorship.push((first + 1, paper_index));
    }
    let planted = Corpus::new(authors, papers, authorship, corpus.citations().to_vec())
        .expect("planted edges are in range");
    (planted, team_keys)
}
