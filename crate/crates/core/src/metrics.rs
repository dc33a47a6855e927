//! Inequality and rank-agreement statistics: Gini coefficient, Spearman
//! rank correlation, deterministic rank tables, and top-share summaries.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("input is empty")]
    EmptyInput,
    #[error("input must have at least {0} values")]
    TooFewValues(usize),
    #[error("all values are zero; the statistic is undefined")]
    AllZero,
    #[error("value at position {index} is {value}; values must be finite and nonnegative")]
    InvalidValue { index: usize, value: f64 },
    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{side} input is constant; rank correlation is undefined")]
    ConstantInput { side: &'static str },
    #[error("fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),
}

/// Tie handling for rank assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    /// Distinct ranks 1..N; ties broken by entity key.
    Ordinal,
    /// Tied entries share the mean of the ranks they span.
    Average,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub entity: String,
    pub score: f64,
    pub rank: f64,
}

/// Entities ordered by nonincreasing score with ranks assigned under the
/// chosen tie policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub entries: Vec<RankEntry>,
    pub tie_policy: TiePolicy,
}

fn check_nonnegative(values: &[f64]) -> Result<(), MetricsError> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(MetricsError::InvalidValue { index, value });
        }
    }
    Ok(())
}

/// Gini coefficient of a nonnegative sample.
///
/// Sorts ascending internally and evaluates
/// G = 2 * sum(i * x_i) / (n * sum(x_i)) - (n + 1) / n with 1-based i.
/// Zero means all values equal; (n-1)/n means one value holds everything.
pub fn gini(values: &[f64]) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    check_nonnegative(values)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Summing the sorted values makes the result independent of input order.
    let total: f64 = sorted.iter().sum();
    if total == 0.0 {
        return Err(MetricsError::AllZero);
    }
    let n = sorted.len() as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (i + 1) as f64 * x)
        .sum();
    Ok(2.0 * weighted / (n * total) - (n + 1.0) / n)
}

/// Average ranks (1-based) with tied values sharing the mean of the ranks
/// they occupy.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean_rank = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson correlation of the average-rank
/// vectors of the two samples. Lies in [-1, 1].
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(MetricsError::TooFewValues(2));
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    let mean_a = ra.iter().sum::<f64>() / n;
    let mean_b = rb.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in ra.iter().zip(&rb) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 {
        return Err(MetricsError::ConstantInput { side: "left" });
    }
    if var_b == 0.0 {
        return Err(MetricsError::ConstantInput { side: "right" });
    }
    // Rank deviations are halves, so cov and the variances are exact sums;
    // perfect monotone agreement or disagreement shows up as exact equality
    // and maps to exactly +/-1 rather than to within an ulp of it.
    if cov == var_a && var_a == var_b {
        return Ok(1.0);
    }
    if cov == -var_a && var_a == var_b {
        return Ok(-1.0);
    }
    Ok((cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
}

/// Builds a rank table sorted by descending score; equal scores are ordered
/// by entity key, which makes the table a pure function of its input.
pub fn make_rank_table(scores: &[(String, f64)], tie_policy: TiePolicy) -> RankTable {
    let mut ordered: Vec<(String, f64)> = scores.to_vec();
    ordered.sort_by(|(ka, sa), (kb, sb)| sb.total_cmp(sa).then_with(|| ka.cmp(kb)));

    let mut entries: Vec<RankEntry> = Vec::with_capacity(ordered.len());
    match tie_policy {
        TiePolicy::Ordinal => {
            for (pos, (entity, score)) in ordered.into_iter().enumerate() {
                entries.push(RankEntry {
                    entity,
                    score,
                    rank: (pos + 1) as f64,
                });
            }
        }
        TiePolicy::Average => {
            let scores_only: Vec<f64> = ordered.iter().map(|(_, s)| *s).collect();
            let mut i = 0;
            while i < ordered.len() {
                let mut j = i;
                while j + 1 < ordered.len() && scores_only[j + 1] == scores_only[i] {
                    j += 1;
                }
                let shared = (i + j + 2) as f64 / 2.0;
                for (entity, score) in ordered[i..=j].iter().cloned() {
                    entries.push(RankEntry {
                        entity,
                        score,
                        rank: shared,
                    });
                }
                i = j + 1;
            }
        }
    }
    RankTable {
        entries,
        tie_policy,
    }
}

/// Share of the total held by the top ceil(fraction * n) values.
pub fn top_share(values: &[f64], fraction: f64) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(MetricsError::InvalidFraction(fraction));
    }
    check_nonnegative(values)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = sorted.iter().sum();
    if total == 0.0 {
        return Err(MetricsError::AllZero);
    }
    let k = ((fraction * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    let top: f64 = sorted[..k].iter().sum();
    Ok(top / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gini_of_constant_samples_is_zero() {
        for c in [1.0, 2.5, 0.125, 3.0] {
            for n in [1usize, 2, 7, 100] {
                assert_eq!(gini(&vec![c; n]).unwrap(), 0.0, "c={c} n={n}");
            }
        }
    }

    #[test]
    fn gini_single_nonzero_reaches_formula_maximum() {
        let mut xs = vec![0.0; 5];
        xs[4] = 1.0;
        assert_eq!(gini(&xs).unwrap(), 0.8);
        // Placement must not matter.
        let mut ys = vec![0.0; 5];
        ys[0] = 1.0;
        assert_eq!(gini(&ys).unwrap(), 0.8);
    }

    /// The literal formula lands within one ulp of (n-1)/n for the
    /// single-nonzero sample at every n; for many n it is exact.
    #[test]
    fn gini_single_nonzero_across_lengths() {
        for n in 2..400usize {
            let mut xs = vec![0.0; n];
            xs[n - 1] = 3.7;
            let g = gini(&xs).unwrap();
            let expected = (n as f64 - 1.0) / n as f64;
            assert!(
                (g - expected).abs() <= expected * f64::EPSILON,
                "n={n}: {g} vs {expected}"
            );
        }
    }

    #[test]
    fn gini_hand_case() {
        let g = gini(&[1.0, 2.0, 3.0]).unwrap();
        assert!((g - 2.0 / 9.0).abs() < 1e-12);
    }

    /// Independent route: mean absolute difference definition.
    fn gini_mean_abs_difference(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let mut acc = 0.0;
        for &a in xs {
            for &b in xs {
                acc += (a - b).abs();
            }
        }
        acc / (2.0 * n * n * mean)
    }

    #[test]
    fn gini_agrees_with_mean_abs_difference_oracle() {
        let samples: Vec<Vec<f64>> = vec![
            vec![1.0, 2.0, 3.0],
            vec![5.0, 0.0, 0.5, 2.25, 2.25],
            vec![10.0, 1.0, 1.0, 1.0],
        ];
        for xs in samples {
            let g = gini(&xs).unwrap();
            let oracle = gini_mean_abs_difference(&xs);
            assert!((g - oracle).abs() < 1e-12, "{g} vs {oracle}");
        }
    }

    #[test]
    fn gini_error_cases() {
        assert_eq!(gini(&[]), Err(MetricsError::EmptyInput));
        assert_eq!(gini(&[0.0, 0.0]), Err(MetricsError::AllZero));
        assert!(matches!(
            gini(&[1.0, -2.0]),
            Err(MetricsError::InvalidValue { .. })
        ));
    }

    #[test]
    fn spearman_hand_cases() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), -1.0);
        let rho = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((rho - 0.8).abs() < 1e-12);
    }

    #[test]
    fn spearman_error_cases() {
        assert_eq!(
            spearman(&[1.0], &[1.0, 2.0]),
            Err(MetricsError::LengthMismatch { left: 1, right: 2 })
        );
        assert_eq!(spearman(&[1.0], &[1.0]), Err(MetricsError::TooFewValues(2)));
        assert!(matches!(
            spearman(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(MetricsError::ConstantInput { side: "left" })
        ));
    }

    #[test]
    fn spearman_handles_ties_with_average_ranks() {
        // Ranks of [1, 2, 2, 4] are [1, 2.5, 2.5, 4].
        assert_eq!(
            average_ranks(&[1.0, 2.0, 2.0, 4.0]),
            vec![1.0, 2.5, 2.5, 4.0]
        );
        let rho = spearman(&[1.0, 2.0, 2.0, 4.0], &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert_eq!(rho, 1.0);
    }

    #[test]
    fn rank_table_orders_and_breaks_ties_by_key() {
        let table = make_rank_table(
            &[("a".to_string(), 1.0), ("b".to_string(), 2.0)],
            TiePolicy::Ordinal,
        );
        assert_eq!(table.entries[0].entity, "b");
        assert_eq!(table.entries[0].rank, 1.0);
        assert_eq!(table.entries[1].entity, "a");
        assert_eq!(table.entries[1].rank, 2.0);

        let tied = make_rank_table(
            &[("b".to_string(), 1.0), ("a".to_string(), 1.0)],
            TiePolicy::Ordinal,
        );
        assert_eq!(tied.entries[0].entity, "a");
        assert_eq!(tied.entries[1].entity, "b");
        assert_eq!(tied.entries[1].rank, 2.0);

        let avg = make_rank_table(
            &[("b".to_string(), 1.0), ("a".to_string(), 1.0)],
            TiePolicy::Average,
        );
        assert_eq!(avg.entries[0].rank, 1.5);
        assert_eq!(avg.entries[1].rank, 1.5);
    }

    #[test]
    fn rank_table_on_toy_paper_scores() {
        // Converged coupled paper scores for the prolific-solo corpus:
        // p6 first, p5 second, p1-p3 tied, p4 last.
        let scores = vec![
            ("p1".to_string(), 1.0 / 7.0),
            ("p2".to_string(), 1.0 / 7.0),
            ("p3".to_string(), 1.0 / 7.0),
            ("p4".to_string(), 2.0 / 21.0),
            ("p5".to_string(), 4.0 / 21.0),
            ("p6".to_string(), 6.0 / 21.0),
        ];
        let table = make_rank_table(&scores, TiePolicy::Ordinal);
        let order: Vec<&str> = table.entries.iter().map(|e| e.entity.as_str()).collect();
        assert_eq!(order, vec!["p6", "p5", "p1", "p2", "p3", "p4"]);
        assert_eq!(table.entries[5].rank, 6.0);
    }

    #[test]
    fn top_share_cases() {
        let uniform = vec![1.0; 10];
        assert!((top_share(&uniform, 0.2).unwrap() - 0.2).abs() < 1e-12);
        let mut single = vec![0.0; 4];
        single[2] = 9.0;
        assert_eq!(top_share(&single, 0.25).unwrap(), 1.0);
        let vals = vec![1.0, 2.0, 3.0, 4.0];
        assert!((top_share(&vals, 0.5).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(top_share(&vals, 1.0).unwrap(), 1.0);
        assert!(matches!(
            top_share(&vals, 0.0),
            Err(MetricsError::InvalidFraction(_))
        ));
        assert!(matches!(
            top_share(&vals, 1.5),
            Err(MetricsError::InvalidFraction(_))
        ));
    }

    proptest! {
        #[test]
        fn gini_is_scale_and_permutation_invariant(
            mut xs in proptest::collection::vec(0.0..100.0f64, 2..40),
            scale in prop::sample::select(vec![0.5f64, 10.0, 1e6]),
        ) {
            prop_assume!(xs.iter().sum::<f64>() > 0.0);
            let base = gini(&xs).unwrap();
            prop_assert!((0.0..1.0).contains(&base));
            let scaled: Vec<f64> = xs.iter().map(|x| x * scale).collect();
            prop_assert!((gini(&scaled).unwrap() - base).abs() < 1e-12);
            xs.reverse();
            prop_assert!((gini(&xs).unwrap() - base).abs() < 1e-15);
        }

        #[test]
        fn gini_of_near_constant_input_is_near_zero(c in 0.01..100.0f64, n in 2usize..50) {
            let g = gini(&vec![c; n]).unwrap();
            prop_assert!(g.abs() < 1e-12);
        }

        #[test]
        fn spearman_is_invariant_under_monotone_transforms(
            xs in proptest::collection::vec(-50.0..50.0f64, 3..30),
            ys in proptest::collection::vec(-50.0..50.0f64, 3..30),
        ) {
            let n = xs.len().min(ys.len());
            let a = &xs[..n];
            let b = &ys[..n];
            let rho = match spearman(a, b) {
                Ok(r) => r,
                Err(_) => return Ok(()),
            };
            let ta: Vec<f64> = a.iter().map(|x| x.exp()).collect();
            let tb: Vec<f64> = b.iter().map(|y| 3.0 * y + 7.0).collect();
            prop_assert_eq!(spearman(&ta, &tb).unwrap(), rho);
            prop_assert!((-1.0..=1.0).contains(&rho));
        }

        #[test]
        fn top_share_is_monotone_in_fraction(
            xs in proptest::collection::vec(0.0..10.0f64, 2..30),
            f1 in 0.05..1.0f64,
            f2 in 0.05..1.0f64,
        ) {
            prop_assume!(xs.iter().sum::<f64>() > 0.0);
            let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
            prop_assert!(top_share(&xs, lo).unwrap() <= top_share(&xs, hi).unwrap() + 1e-15);
        }

        #[test]
        fn rank_tables_are_deterministic(entries in proptest::collection::vec(("[a-e]{1,3}", 0.0..5.0f64), 1..20)) {
            let scores: Vec<(String, f64)> = entries;
            let t1 = make_rank_table(&scores, TiePolicy::Ordinal);
            let t2 = make_rank_table(&scores, TiePolicy::Ordinal);
            prop_assert_eq!(t1, t2);
        }
    }
}
