//! The metric-vs-human correlation pipeline: per-item human means, the
//! human-vs-human split, and the per-metric correlation table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::correlation::{pearson_with, spearman_with, CorrelationResult, PValueMethod};
use crate::corpus::RatingMatrix;
use crate::{Error, Result};

fn rater_indices(ratings: &RatingMatrix, raters: &[String]) -> Result<Vec<usize>> {
    raters
        .iter()
        .map(|r| ratings.rater_index(r).ok_or_else(|| Error::MissingId(r.clone())))
        .collect()
}

/// Mean score per item over the given raters, for items with at least one score.
fn partial_means(ratings: &RatingMatrix, raters: &[usize]) -> BTreeMap<String, f64> {
    let mut means = BTreeMap::new();
    for (i, item) in ratings.items().iter().enumerate() {
        let scores: Vec<f64> = raters
            .iter()
            .filter_map(|&r| ratings.score_at(i, r))
            .map(f64::from)
            .collect();
        if !scores.is_empty() {
            means.insert(item.clone(), scores.iter().sum::<f64>() / scores.len() as f64);
        }
    }
    means
}

/// Mean of the available scores of each item over `raters`. Every item
/// must have at least one score from the subset.
pub fn item_means(ratings: &RatingMatrix, raters: &[String]) -> Result<BTreeMap<String, f64>> {
    if raters.is_empty() {
        return Err(Error::TooFewRaters(0));
    }
    let idx = rater_indices(ratings, raters)?;
    let means = partial_means(ratings, &idx);
    if let Some(missing) = ratings.items().iter().find(|i| !means.contains_key(*i)) {
        return Err(Error::UnratedItem(missing.clone()));
    }
    Ok(means)
}

fn paired(a: &BTreeMap<String, f64>, b: &BTreeMap<String, Option<f64>>) -> (Vec<f64>, Vec<f64>) {
    a.iter()
        .filter_map(|(k, &x)| b.get(k).copied().flatten().map(|y| (x, y)))
        .unzip()
}

fn undefined_to_none(r: Result<CorrelationResult>) -> Result<Option<CorrelationResult>> {
    match r {
        Ok(c) => Ok(Some(c)),
        Err(Error::ConstantInput) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HumanSplit {
    pub group_a: Vec<String>,
    pub group_b: Vec<String>,
    /// Items with at least one score in each group.
    pub n_items: usize,
    /// `None` when a group's item means are constant.
    pub spearman: Option<CorrelationResult>,
    pub pearson: Option<CorrelationResult>,
}

/// Shuffles the raters, splits them in two halves (the first gets the extra
/// rater when the count is odd), and correlates the two groups' item means.
pub fn human_human_correlation<R: Rng + ?Sized>(
    ratings: &RatingMatrix,
    raters: &[String],
    method: PValueMethod,
    rng: &mut R,
) -> Result<HumanSplit> {
    if raters.len() < 2 {
        return Err(Error::TooFewRaters(raters.len()));
    }
    let mut shuffled = raters.to_vec();
    shuffled.shuffle(rng);
    let split = shuffled.len().div_ceil(2);
    let (group_a, group_b) = shuffled.split_at(split);

    let means_a = partial_means(ratings, &rater_indices(ratings, group_a)?);
    let means_b: BTreeMap<String, Option<f64>> = partial_means(ratings, &rater_indices(ratings, group_b)?)
        .into_iter()
        .map(|(k, v)| (k, Some(v)))
        .collect();
    let (x, y) = paired(&means_a, &means_b);
    if x.len() < 3 {
        return Err(Error::TooFewObservations {
            needed: 3,
            got: x.len(),
        });
    }
    Ok(HumanSplit {
        group_a: group_a.to_vec(),
        group_b: group_b.to_vec(),
        n_items: x.len(),
        spearman: undefined_to_none(spearman_with(&x, &y, method))?,
        pearson: undefined_to_none(pearson_with(&x, &y, method))?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricCorrelation {
    pub metric: String,
    /// Items with both a human mean and a defined metric score.
    pub n: usize,
    /// `None` marks an undefined row (constant metric or constant human means).
    pub spearman: Option<CorrelationResult>,
    pub pearson: Option<CorrelationResult>,
}

/// Spearman and Pearson of each metric against the human means over their
/// shared items. Metric scores of `None` (undefined) are dropped pairwise.
pub fn metric_human_table(
    metrics: &BTreeMap<String, BTreeMap<String, Option<f64>>>,
    human: &BTreeMap<String, f64>,
    method: PValueMethod,
) -> Result<Vec<MetricCorrelation>> {
    let mut rows = Vec::with_capacity(metrics.len());
    for (name, scores) in metrics {
        let (h, m) = paired(human, scores);
        if h.len() < 3 {
            return Err(Error::TooFewObservations {
                needed: 3,
                got: h.len(),
            });
        }
        rows.push(MetricCorrelation {
            metric: name.clone(),
            n: h.len(),
            spearman: undefined_to_none(spearman_with(&m, &h, method))?,
            pearson: undefined_to_none(pearson_with(&m, &h, method))?,
        });
    }
    Ok(rows)
}

/// `metric,n,spearman,spearman_p,pearson,pearson_p`; undefined cells are empty.
pub fn correlation_table_csv(rows: &[MetricCorrelation]) -> String {
    let cell = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    let mut out = String::from("metric,n,spearman,spearman_p,pearson,pearson_p\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.metric,
            r.n,
            cell(r.spearman.map(|c| c.coefficient)),
            cell(r.spearman.and_then(|c| c.p_value)),
            cell(r.pearson.map(|c| c.coefficient)),
            cell(r.pearson.and_then(|c| c.p_value)),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;
    use approx::assert_abs_diff_eq;
    use rand_distr::{Distribution, Normal};

    fn grid(rows: &[(&str, &str, u8)]) -> RatingMatrix {
        let mut m = RatingMatrix::default();
        for (i, r, s) in rows {
            m.insert(i, r, *s).unwrap();
        }
        m
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn means() {
        let m = grid(&[("i1", "a", 4), ("i1", "b", 5), ("i2", "a", 3), ("i3", "b", 1)]);
        let single = item_means(&grid(&[("i1", "a", 4), ("i2", "a", 2)]), &names(&["a"])).unwrap();
        assert_eq!(single["i1"], 4.0);
        assert_eq!(single["i2"], 2.0);
        let both = item_means(&m, &names(&["a", "b"])).unwrap();
        assert_eq!(both["i1"], 4.5);
        assert_eq!(both["i2"], 3.0);
        assert_eq!(both["i3"], 1.0);
        assert!(matches!(item_means(&m, &names(&["a"])), Err(Error::UnratedItem(i)) if i == "i3"));
        assert!(item_means(&m, &[]).is_err());
        assert!(matches!(item_means(&m, &names(&["zz"])), Err(Error::MissingId(_))));
    }

    #[test]
    fn human_split_identical_raters() {
        let rows: Vec<_> = [("i1", 1u8), ("i2", 3), ("i3", 5), ("i4", 2)]
            .iter()
            .flat_map(|&(i, s)| [(i, "a", s), (i, "b", s)])
            .collect();
        let m = grid(&rows);
        let mut rng = Seed(5).rng("split");
        let h = human_human_correlation(&m, &names(&["a", "b"]), PValueMethod::TApprox, &mut rng).unwrap();
        assert_abs_diff_eq!(h.spearman.unwrap().coefficient, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h.pearson.unwrap().coefficient, 1.0, epsilon = 1e-12);
        assert_eq!(h.n_items, 4);
    }

    #[test]
    fn human_split_odd_count_and_determinism() {
        let mut rows = Vec::new();
        for (k, item) in ["i1", "i2", "i3", "i4", "i5"].iter().enumerate() {
            for (j, r) in ["a", "b", "c", "d", "e"].iter().enumerate() {
                rows.push((*item, *r, ((k + j) % 5 + 1) as u8));
            }
        }
        let m = grid(&rows);
        let raters = names(&["a", "b", "c", "d", "e"]);
        let run = |seed| {
            let mut rng = Seed(seed).rng("split");
            human_human_correlation(&m, &raters, PValueMethod::TApprox, &mut rng).unwrap()
        };
        let first = run(11);
        assert_eq!(first.group_a.len(), 3);
        assert_eq!(first.group_b.len(), 2);
        assert_eq!(first, run(11));
    }

    #[test]
    fn human_split_affine_groups() {
        // b always gives twice a's score, so the singleton groups are affinely related.
        let rows = [
            ("i1", "a", 1u8), ("i2", "a", 2), ("i3", "a", 1), ("i4", "a", 2),
            ("i1", "b", 2), ("i2", "b", 4), ("i3", "b", 2), ("i4", "b", 4),
        ];
        let m = grid(&rows);
        let mut rng = Seed(1).rng("split");
        let h = human_human_correlation(&m, &names(&["a", "b"]), PValueMethod::TApprox, &mut rng).unwrap();
        assert_abs_diff_eq!(h.pearson.unwrap().coefficient, 1.0, epsilon = 1e-12);
        assert!(human_human_correlation(&m, &names(&["a"]), PValueMethod::TApprox, &mut rng).is_err());
    }

    #[test]
    fn metric_table() {
        let human: BTreeMap<String, f64> =
            (0..100).map(|i| (format!("i{i:03}"), 1.0 + (i % 17) as f64 * 0.25)).collect();
        let exact: BTreeMap<String, Option<f64>> = human.iter().map(|(k, &v)| (k.clone(), Some(v))).collect();
        let mut rng = Seed(2).rng("noise");
        let normal = Normal::new(0.0, 0.01).unwrap();
        let noisy: BTreeMap<String, Option<f64>> = human
            .iter()
            .map(|(k, &v)| (k.clone(), Some(v + normal.sample(&mut rng))))
            .collect();
        let constant: BTreeMap<String, Option<f64>> = human.keys().map(|k| (k.clone(), Some(0.5))).collect();
        let mut with_undefined = exact.clone();
        with_undefined.insert("i000".into(), None);

        let metrics = BTreeMap::from([
            ("const".to_string(), constant),
            ("exact".to_string(), exact),
            ("noisy".to_string(), noisy),
            ("partial".to_string(), with_undefined),
        ]);
        let rows = metric_human_table(&metrics, &human, PValueMethod::TApprox).unwrap();
        assert!(rows[0].spearman.is_none() && rows[0].pearson.is_none());
        assert_abs_diff_eq!(rows[1].spearman.unwrap().coefficient, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[1].pearson.unwrap().coefficient, 1.0, epsilon = 1e-12);
        assert!(rows[2].spearman.unwrap().coefficient > 0.9);
        assert_eq!(rows[3].n, 99);

        let csv = correlation_table_csv(&rows);
        assert!(csv.starts_with("metric,n,spearman,spearman_p,pearson,pearson_p\nconst,100,,,,\n"));

        let tiny = BTreeMap::from([("m".to_string(), BTreeMap::from([("i000".to_string(), Some(1.0))]))]);
        assert!(metric_human_table(&tiny, &human, PValueMethod::TApprox).is_err());
    }
}
