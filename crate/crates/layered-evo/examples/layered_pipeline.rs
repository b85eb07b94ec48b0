//! Runs the whole layered pipeline at toy scale: evolve the taxis layer,
//! stack and evolve the avoidance layer on top of the frozen result, add
//! the learning layer, then reopen everything for the merge experiments.
//! Prints the files each stage leaves behind and the summary highlights.

use layered_evo::evolution::EvolutionConfig;
use layered_evo::experiments::{run_experiment, RunOptions};

fn main() -> layered_evo::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| layered_evo::Error::io("tempdir", e))?;
    let out = dir.path();
    let cfg = EvolutionConfig { generations: 6, runs: 2, ..EvolutionConfig::default() };
    let opts = RunOptions::default();

    for exp in ["layered-1", "layered-2", "layered-3", "merge-unfrozen", "merge-connections"] {
        let def = layered_evo::experiments::find(exp)?;
        let report = run_experiment(&def, &cfg, &Default::default(), out, &opts)?;
        let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "{exp:17} final best over runs {:8.2}  final pop mean {:8.2}",
            avg(&report.final_best),
            avg(&report.final_mean)
        );
    }

    println!("files under {:?}:", out);
    let mut paths: Vec<_> = walk(out);
    paths.sort();
    for p in &paths {
        println!("  {}", p.strip_prefix(&format!("{}/", out.display())).unwrap_or(p.as_str()));
    }

    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.join("merge-connections/summary.json"))
            .map_err(|e| layered_evo::Error::io("summary", e))?,
    )
    .map_err(|e| layered_evo::Error::json("summary json", e))?;
    println!("merge-connections connection stats: {}", summary["connection_stats"]);
    println!("condition A comparison:            {}", summary["condition_a_comparison"]);
    Ok(())
}

fn walk(root: &std::path::Path) -> Vec<String> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        if let Ok(entries) = std::fs::read_dir(&dir) {
            for e in entries.flatten() {
                let p = e.path();
                if p.is_dir() {
                    stack.push(p);
                } else {
                    out.push(p.display().to_string());
                }
            }
        }
    }
    out
}
