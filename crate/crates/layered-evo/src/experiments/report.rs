//! History CSV reading, writing and aggregation.
//!
//! Files store distance-task fitness as positive mean distance (smaller is
//! better) so the curves read like the usual distance-over-generations
//! plots; learning-task scores are stored as-is. The conversion happens
//! once, in [`report_rows`].

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolution::GenerationStats;

pub const HISTORY_HEADER: &str = "generation,best_fitness,mean_fitness";

/// Converts a run history from internal maximize orientation to the file
/// orientation.
pub fn report_rows(history: &[GenerationStats], distance_task: bool) -> Vec<GenerationStats> {
    history
        .iter()
        .map(|s| GenerationStats {
            generation: s.generation,
            best_fitness: if distance_task { -s.best_fitness } else { s.best_fitness },
            mean_fitness: if distance_task { -s.mean_fitness } else { s.mean_fitness },
        })
        .collect()
}

pub fn write_history(path: &Path, rows: &[GenerationStats]) -> Result<()> {
    let mut text = String::with_capacity(rows.len() * 32 + 32);
    text.push_str(HISTORY_HEADER);
    text.push('\n');
    for r in rows {
        use std::fmt::Write as _;
        writeln!(text, "{},{},{}", r.generation, r.best_fitness, r.mean_fitness)
            .expect("string write");
    }
    fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn read_history(path: &Path) -> Result<Vec<GenerationStats>> {
    let malformed = |reason: String| Error::MalformedHistory {
        path: path.to_path_buf(),
        reason,
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == HISTORY_HEADER => {}
        other => {
            return Err(malformed(format!(
                "expected header `{HISTORY_HEADER}`, found {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let mut next = |what: &str| {
            fields
                .next()
                .ok_or_else(|| malformed(format!("row {}: missing {what}", i + 1)))
        };
        let generation = next("generation")?
            .parse::<u32>()
            .map_err(|e| malformed(format!("row {}: generation: {e}", i + 1)))?;
        let best_fitness = next("best_fitness")?
            .parse::<f64>()
            .map_err(|e| malformed(format!("row {}: best_fitness: {e}", i + 1)))?;
        let mean_fitness = next("mean_fitness")?
            .parse::<f64>()
            .map_err(|e| malformed(format!("row {}: mean_fitness: {e}", i + 1)))?;
        if fields.next().is_some() {
            return Err(malformed(format!("row {}: too many fields", i + 1)));
        }
        rows.push(GenerationStats { generation, best_fitness, mean_fitness });
    }
    Ok(rows)
}

/// Per-generation arithmetic mean over equally long histories.
pub fn aggregate(histories: &[Vec<GenerationStats>]) -> Result<Vec<GenerationStats>> {
    let Some(first) = histories.first() else {
        return Err(Error::InvalidConfig("nothing to aggregate".into()));
    };
    for (i, h) in histories.iter().enumerate() {
        if h.len() != first.len() {
            return Err(Error::InvalidConfig(format!(
                "history {i} has {} generations, expected {}",
                h.len(),
                first.len()
            )));
        }
    }
    let n = histories.len() as f64;
    Ok((0..first.len())
        .map(|g| GenerationStats {
            generation: first[g].generation,
            best_fitness: histories.iter().map(|h| h[g].best_fitness).sum::<f64>() / n,
            mean_fitness: histories.iter().map(|h| h[g].mean_fitness).sum::<f64>() / n,
        })
        .collect())
}

/// One-sample t statistic of `samples` against `mu0`. A zero-variance
/// sample returns 0 when it sits exactly on `mu0` and a signed infinity
/// otherwise.
pub fn t_statistic(samples: &[f64], mu0: f64) -> f64 {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return f64::NAN;
    }
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    if se == 0.0 {
        if mean == mu0 {
            0.0
        } else {
            f64::INFINITY * (mean - mu0).signum()
        }
    } else {
        (mean - mu0) / se
    }
}
