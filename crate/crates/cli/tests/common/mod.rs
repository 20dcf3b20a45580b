#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nlgm::aggregation::{ConfigEcho, EvalConfig, InstanceScore, InstanceScores, MetricReport, SCHEMA_VERSION};
use nlgm::seed::Seed;
use rand::Rng;
use rand_distr::{Distribution, Normal};

pub fn nlgm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlgm"))
        .args(args)
        .env_remove("NLGM_THREADS")
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

pub fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Ratings CSV from (item, rater, score) rows.
pub fn ratings_csv(rows: &[(String, String, u8)]) -> String {
    let mut s = String::from("item_id,rater_id,score\n");
    for (i, r, v) in rows {
        s.push_str(&format!("{i},{r},{v}\n"));
    }
    s
}

/// A grid where every honest rater reports each item's latent quality,
/// off by one with probability `slip`, and the listed contrarians report
/// `6 - quality`. Returns the rows and the latent qualities.
pub fn synthetic_grid(
    items: usize,
    honest: usize,
    contrarians: usize,
    slip: f64,
    seed: u64,
) -> (Vec<(String, String, u8)>, Vec<u8>) {
    let mut rng = Seed(seed).rng("grid");
    let quality: Vec<u8> = (0..items).map(|_| rng.random_range(1..=5)).collect();
    let mut rows = Vec::new();
    for r in 0..honest + contrarians {
        let rater = format!("r{r:02}");
        for (i, &q) in quality.iter().enumerate() {
            let score = if r >= honest {
                6 - q
            } else if rng.random::<f64>() < slip {
                if rng.random::<bool>() { (q + 1).min(5) } else { q.saturating_sub(1).max(1) }
            } else {
                q
            };
            rows.push((format!("i{i:03}"), rater.clone(), score));
        }
    }
    (rows, quality)
}

/// Mean score per item over the given raters.
pub fn rater_means(rows: &[(String, String, u8)], raters: &[String]) -> BTreeMap<String, f64> {
    let mut acc: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for (i, r, v) in rows {
        if raters.contains(r) {
            let e = acc.entry(i.clone()).or_default();
            e.0 += f64::from(*v);
            e.1 += 1;
        }
    }
    acc.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()
}

pub fn add_noise(values: &BTreeMap<String, f64>, sigma: f64, seed: u64) -> BTreeMap<String, f64> {
    let mut rng = Seed(seed).rng("metric-noise");
    let noise = Normal::new(0.0, sigma).unwrap();
    values
        .iter()
        .map(|(k, v)| (k.clone(), v + noise.sample(&mut rng)))
        .collect()
}

/// A report holding one per-instance metric column.
pub fn report_with(metric: &str, values: &BTreeMap<String, f64>) -> String {
    let per_instance = values
        .iter()
        .map(|(id, &v)| InstanceScores {
            id: id.clone(),
            scores: BTreeMap::from([(metric.to_string(), InstanceScore { value: v, defined: true })]),
        })
        .collect();
    MetricReport {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            metrics: vec![metric.to_string()],
            eval: EvalConfig::default(),
            synonym_groups: 0,
            embedding_dim: None,
            sentence_vector_dim: None,
        },
        instances: values.len(),
        corpus_level: BTreeMap::new(),
        per_instance,
        warnings: vec![],
    }
    .to_json()
}

/// Textbook Cohen's kappa over paired labels.
pub fn kappa_oracle(a: &[u8], b: &[u8]) -> f64 {
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / n;
    let chance: f64 = (1..=5u8)
        .map(|c| {
            let pa = a.iter().filter(|&&x| x == c).count() as f64 / n;
            let pb = b.iter().filter(|&&x| x == c).count() as f64 / n;
            pa * pb
        })
        .sum();
    if (1.0 - chance).abs() < 1e-15 {
        1.0
    } else {
        (agree - chance) / (1.0 - chance)
    }
}

/// Twenty training instances over four act signatures with templates whose
/// filler words never collide with slot values.
pub fn dialogue_corpus() -> String {
    let foods = ["thai", "indian", "korean", "french", "greek"];
    let areas = ["north", "south", "east", "west", "centre"];
    let names = ["the lotus", "golden wok", "casa mia", "blue door", "red fort"];
    let mut lines = Vec::new();
    for k in 0..5 {
        let (f, a, n) = (foods[k], areas[k], names[(k + 2) % 5]);
        lines.push(format!(
            r#"{{"id":"fa{k}","hypothesis":"x","references":["there is a {f} place in the {a} ."],"acts":[{{"act":"inform","slots":[{{"type":"food","value":"{f}"}},{{"type":"area","value":"{a}"}}]}}]}}"#
        ));
        lines.push(format!(
            r#"{{"id":"nf{k}","hypothesis":"x","references":["{n} serves {f} dishes ."],"acts":[{{"act":"inform","slots":[{{"type":"name","value":"{n}"}},{{"type":"food","value":"{f}"}}]}}]}}"#
        ));
        lines.push(format!(
            r#"{{"id":"rq{k}","hypothesis":"x","references":["what part of town do you prefer ?"],"acts":[{{"act":"request","slots":[{{"type":"area"}}]}}]}}"#
        ));
        lines.push(format!(
            r#"{{"id":"na{k}","hypothesis":"x","references":["{n} is in the {a} part of town ."],"acts":[{{"act":"inform","slots":[{{"type":"name","value":"{n}"}},{{"type":"area","value":"{a}"}}]}}]}}"#
        ));
    }
    lines.join("\n") + "\n"
}
