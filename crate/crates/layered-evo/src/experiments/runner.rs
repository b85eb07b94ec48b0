//! Experiment orchestration: seeding, runs, and all report files.
//!
//! Layout under the output root:
//!
//! ```text
//! out/<experiment>/<run>/history.csv
//! out/<experiment>/<run>/best_genome.json          final champion
//! out/<experiment>/<run>/best_genome_gen099.json   span-boundary champions
//! out/<experiment>/<run>/audit.csv                 per-trial scores (opt-in)
//! out/<experiment>/aggregate.csv
//! out/<experiment>/summary.json
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::{Error, Result};
use crate::evolution::{
    clone_population, extend_and_freeze, random_population, run_evolution, thread_pool,
    EvolutionConfig, Individual, RunOutcome,
};
use crate::neuro::LayeredGenome;
use crate::rng;
use crate::sim::WorldParams;
use crate::tasks::TaskSpec;

use super::registry::{ExperimentDef, Regime};
use super::report::{aggregate, report_rows, t_statistic, write_history};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub threads: usize,
    /// Dump every individual's trial scores per generation.
    pub audit: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { threads: 1, audit: false }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub experiment: String,
    pub out_dir: PathBuf,
    pub histories: Vec<PathBuf>,
    pub champions: Vec<PathBuf>,
    pub aggregate: PathBuf,
    pub summary: PathBuf,
    pub final_best: Vec<f64>,
    pub final_mean: Vec<f64>,
}

pub fn champion_path(out_root: &Path, experiment: &str, run: u32) -> PathBuf {
    out_root.join(experiment).join(run.to_string()).join("best_genome.json")
}

pub fn boundary_champion_path(
    out_root: &Path,
    experiment: &str,
    run: u32,
    generation: u32,
) -> PathBuf {
    out_root
        .join(experiment)
        .join(run.to_string())
        .join(format!("best_genome_gen{generation:03}.json"))
}

fn seed_population(
    def: &ExperimentDef,
    cfg: &EvolutionConfig,
    out_root: &Path,
    run: u32,
    init_rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<Individual>> {
    let Some(source) = def.source else {
        return Ok(random_population(def.architecture, cfg.population, init_rng));
    };
    let champ_file = champion_path(out_root, source, run);
    let champion = LayeredGenome::load(&champ_file)?;

    match def.regime {
        Regime::LayeredStage => {
            let topologies = def.architecture.layer_topologies();
            if champion.layers.len() + 1 != topologies.len() {
                return Err(Error::InvalidGenome(format!(
                    "{} champion has {} layers; {} expects {} before extension",
                    source,
                    champion.layers.len(),
                    def.name,
                    topologies.len() - 1
                )));
            }
            let mut population = clone_population(&champion, cfg.population);
            extend_and_freeze(&mut population, *topologies.last().unwrap(), init_rng)?;
            Ok(population)
        }
        Regime::MergeUnfrozen | Regime::MergeConnections => {
            let mut genome = champion;
            genome.frozen_prefix = 0;
            if def.connection_layers {
                genome = genome.with_empty_connection_layers();
            }
            genome.validate()?;
            Ok(clone_population(&genome, cfg.population))
        }
        _ => Err(Error::InvalidConfig(format!(
            "experiment {} declares a seed source but no seeding rule",
            def.name
        ))),
    }
}

fn check_stage_order(def: &ExperimentDef, cfg: &EvolutionConfig, out_root: &Path) -> Result<()> {
    let Some(source) = def.source else { return Ok(()) };
    for run in 0..cfg.runs {
        let path = champion_path(out_root, source, run);
        if !path.exists() {
            return Err(Error::StageOrder(format!(
                "{} needs champion genomes from {source}; missing {} (run the {source} \
                 experiment first)",
                def.name,
                path.display()
            )));
        }
    }
    Ok(())
}

/// Mean connection count and strength magnitude over the final populations.
struct ConnectionStats {
    per_layer_means: Vec<f64>,
    overall_mean: f64,
    mean_abs_strength: f64,
}

fn connection_stats(finals: &[&[Individual]]) -> Option<ConnectionStats> {
    let sets_per_genome = finals
        .first()?
        .first()?
        .genome
        .connection_layers
        .as_ref()?
        .len();
    let mut counts = vec![0u64; sets_per_genome];
    let mut genomes = 0u64;
    let mut strength_sum = 0.0;
    let mut strength_n = 0u64;
    for pop in finals {
        for ind in *pop {
            let sets = ind.genome.connection_layers.as_ref()?;
            genomes += 1;
            for (i, set) in sets.iter().enumerate() {
                counts[i] += set.len() as u64;
                for c in set {
                    strength_sum += c.strength.abs();
                    strength_n += 1;
                }
            }
        }
    }
    let per_layer_means: Vec<f64> =
        counts.iter().map(|&c| c as f64 / genomes as f64).collect();
    Some(ConnectionStats {
        overall_mean: counts.iter().sum::<u64>() as f64 / (genomes * sets_per_genome as u64) as f64,
        per_layer_means,
        mean_abs_strength: if strength_n == 0 { 0.0 } else { strength_sum / strength_n as f64 },
    })
}

/// Pulls the fitness numbers out of a finished condition-A summary so the
/// merge-connections summary can print both conditions side by side.
fn condition_a_block(out_root: &Path) -> Option<serde_json::Value> {
    let path = out_root.join("merge-unfrozen").join("summary.json");
    let text = fs::read_to_string(path).ok()?;
    let summary: serde_json::Value = serde_json::from_str(&text).ok()?;
    Some(json!({
        "experiment": "merge-unfrozen",
        "final_best_mean": summary.get("final_best_mean")?.clone(),
        "final_mean_mean": summary.get("final_mean_mean")?.clone(),
    }))
}

pub fn run_experiment(
    def: &ExperimentDef,
    cfg: &EvolutionConfig,
    params: &WorldParams,
    out_root: &Path,
    opts: &RunOptions,
) -> Result<RunReport> {
    cfg.validate()?;
    params.validate()?;
    check_stage_order(def, cfg, out_root)?;
    let pool = thread_pool(opts.threads)?;
    let exp_dir = out_root.join(def.name);
    fs::create_dir_all(&exp_dir)
        .map_err(|e| Error::io(format!("creating {}", exp_dir.display()), e))?;

    let schedule: Vec<(TaskSpec, u32)> =
        def.tasks.iter().map(|t| (*t, cfg.generations)).collect();

    let mut histories = Vec::new();
    let mut champions = Vec::new();
    let mut file_rows = Vec::new();
    let mut final_best = Vec::new();
    let mut final_mean = Vec::new();
    let mut per_run_json = Vec::new();
    let mut outcomes: Vec<RunOutcome> = Vec::new();

    for run in 0..cfg.runs {
        let run_seed = rng::run_seed(cfg.master_seed, u64::from(run));
        let mut init_rng = rng::rng_from_seed(rng::init_seed(run_seed));
        let population = seed_population(def, cfg, out_root, run, &mut init_rng)?;

        let run_dir = exp_dir.join(run.to_string());
        fs::create_dir_all(&run_dir)
            .map_err(|e| Error::io(format!("creating {}", run_dir.display()), e))?;

        let mut audit_file = if opts.audit {
            let path = run_dir.join("audit.csv");
            let mut f = fs::File::create(&path)
                .map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
            writeln!(f, "generation,rank,trial,score")
                .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
            Some((std::io::BufWriter::new(f), path))
        } else {
            None
        };
        let mut audit_err: Option<std::io::Error> = None;
        let observer = |generation: u32, population: &[Individual]| {
            if let Some((w, _)) = audit_file.as_mut() {
                if audit_err.is_none() {
                    for (rank, ind) in population.iter().enumerate() {
                        for (trial, score) in ind.trial_scores.iter().enumerate() {
                            if let Err(e) = writeln!(w, "{generation},{rank},{trial},{score}") {
                                audit_err = Some(e);
                                return;
                            }
                        }
                    }
                }
            }
        };

        let outcome =
            run_evolution(population, &schedule, cfg, params, run_seed, &pool, observer)?;
        if let Some(e) = audit_err {
            return Err(Error::io("writing audit rows", e));
        }
        if let Some((mut w, path)) = audit_file {
            w.flush()
                .map_err(|e| Error::io(format!("flushing {}", path.display()), e))?;
        }

        let rows = report_rows(&outcome.history, def.distance_task());
        let history_path = run_dir.join("history.csv");
        write_history(&history_path, &rows)?;
        histories.push(history_path);
        file_rows.push(rows);

        let mut champ_files = Vec::new();
        for (i, champ) in outcome.span_champions.iter().enumerate() {
            let last = i + 1 == outcome.span_champions.len();
            let path = if last {
                champion_path(out_root, def.name, run)
            } else {
                boundary_champion_path(out_root, def.name, run, champ.generation)
            };
            champ.genome.save(&path)?;
            champ_files.push(path);
        }

        if let Some(last) = outcome.history.last() {
            final_best.push(last.best_fitness);
            final_mean.push(last.mean_fitness);
        }
        per_run_json.push(json!({
            "run": run,
            "run_seed": run_seed,
            "final_best": outcome.history.last().map(|s| s.best_fitness),
            "final_mean": outcome.history.last().map(|s| s.mean_fitness),
            "champions": champ_files
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>(),
        }));
        champions.extend(champ_files);
        outcomes.push(outcome);
    }

    let aggregate_path = exp_dir.join("aggregate.csv");
    if cfg.generations > 0 {
        write_history(&aggregate_path, &aggregate(&file_rows)?)?;
    } else {
        write_history(&aggregate_path, &[])?;
    }

    let finals: Vec<&[Individual]> =
        outcomes.iter().map(|o| o.final_population.as_slice()).collect();
    let conn = if def.connection_layers { connection_stats(&finals) } else { None };

    let mean_of = |xs: &[f64]| {
        if xs.is_empty() {
            None
        } else {
            Some(xs.iter().sum::<f64>() / xs.len() as f64)
        }
    };
    let summary = json!({
        "experiment": def.name,
        "description": def.description,
        "architecture": def.architecture.name(),
        "regime": def.regime.name(),
        "schedule": def
            .tasks
            .iter()
            .map(|t| json!({
                "task": t.kind.name(),
                "steps": t.steps,
                "biased_targets": t.target_distribution
                    != crate::tasks::TargetDistribution::Uniform,
                "generations": cfg.generations,
            }))
            .collect::<Vec<_>>(),
        "config": cfg,
        "distance_task": def.distance_task(),
        "per_run": per_run_json,
        "final_best_mean": mean_of(&final_best),
        "final_mean_mean": mean_of(&final_mean),
        "t_stat_final_mean_vs_zero": finite_or_string(t_statistic(&final_mean, 0.0)),
        "connection_stats": conn.as_ref().map(|c| json!({
            "mean_connections_per_layer": c.overall_mean,
            "per_layer_means": c.per_layer_means,
            "mean_abs_strength": c.mean_abs_strength,
        })),
        "condition_a_comparison": if def.regime == Regime::MergeConnections {
            condition_a_block(out_root)
        } else {
            None
        },
    });
    let summary_path = exp_dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::json("serializing summary", e))?;
    fs::write(&summary_path, text)
        .map_err(|e| Error::io(format!("writing {}", summary_path.display()), e))?;

    Ok(RunReport {
        experiment: def.name.to_string(),
        out_dir: exp_dir,
        histories,
        champions,
        aggregate: aggregate_path,
        summary: summary_path,
        final_best,
        final_mean,
    })
}

/// JSON has no Infinity/NaN; fall back to strings for degenerate t values.
fn finite_or_string(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::registry::find;
    use crate::experiments::report::read_history;

    fn tiny_cfg() -> EvolutionConfig {
        EvolutionConfig {
            generations: 3,
            runs: 2,
            trials: 2,
            ..EvolutionConfig::default()
        }
    }

    fn tiny_params() -> WorldParams {
        WorldParams::default()
    }

    fn short_tasks(def: &mut ExperimentDef, steps: u32) {
        for t in &mut def.tasks {
            t.steps = steps;
        }
    }

    #[test]
    fn layered_one_writes_the_full_layout() {
        let dir = tempfile::tempdir().unwrap();
        let mut def = find("layered-1").unwrap();
        short_tasks(&mut def, 30);
        let cfg = tiny_cfg();
        let report =
            run_experiment(&def, &cfg, &tiny_params(), dir.path(), &RunOptions::default())
                .unwrap();

        assert_eq!(report.histories.len(), 2);
        for run in 0..2u32 {
            let h = read_history(&dir.path().join("layered-1").join(run.to_string()).join("history.csv"))
                .unwrap();
            assert_eq!(h.len(), 3);
            assert!(h.iter().all(|r| r.best_fitness >= 0.0), "distance files are positive");
            let champ = LayeredGenome::load(&champion_path(dir.path(), "layered-1", run)).unwrap();
            assert_eq!(champ.layers.len(), 1);
        }
        let agg = read_history(&report.aggregate).unwrap();
        assert_eq!(agg.len(), 3);
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&report.summary).unwrap()).unwrap();
        assert_eq!(summary["experiment"], "layered-1");
        assert_eq!(summary["per_run"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn experiments_are_reproducible_byte_for_byte() {
        let mut def = find("layered-1").unwrap();
        short_tasks(&mut def, 25);
        let cfg = tiny_cfg();
        let mut blobs: Vec<Vec<u8>> = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            run_experiment(&def, &cfg, &tiny_params(), dir.path(), &RunOptions::default())
                .unwrap();
            let mut blob = Vec::new();
            for run in 0..cfg.runs {
                let base = dir.path().join("layered-1").join(run.to_string());
                blob.extend(fs::read(base.join("history.csv")).unwrap());
                blob.extend(fs::read(base.join("best_genome.json")).unwrap());
            }
            blob.extend(fs::read(dir.path().join("layered-1/aggregate.csv")).unwrap());
            blobs.push(blob);
        }
        assert_eq!(blobs[0], blobs[1]);
    }

    #[test]
    fn thread_count_does_not_change_files() {
        let mut def = find("layered-1").unwrap();
        short_tasks(&mut def, 25);
        let cfg = EvolutionConfig { runs: 1, ..tiny_cfg() };
        let mut blobs: Vec<Vec<u8>> = Vec::new();
        for threads in [1usize, 4] {
            let dir = tempfile::tempdir().unwrap();
            let opts = RunOptions { threads, audit: false };
            run_experiment(&def, &cfg, &tiny_params(), dir.path(), &opts).unwrap();
            blobs.push(fs::read(dir.path().join("layered-1/0/history.csv")).unwrap());
        }
        assert_eq!(blobs[0], blobs[1]);
    }

    #[test]
    fn stage_order_is_enforced() {
        let dir = tempfile::tempdir().unwrap();
        let def = find("layered-2").unwrap();
        let err = run_experiment(
            &def,
            &tiny_cfg(),
            &tiny_params(),
            dir.path(),
            &RunOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::StageOrder(_)), "got {err:?}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn layered_pipeline_chains_and_freezes() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = EvolutionConfig { generations: 2, runs: 1, trials: 1, ..EvolutionConfig::default() };
        let params = tiny_params();

        let mut l1 = find("layered-1").unwrap();
        short_tasks(&mut l1, 20);
        run_experiment(&l1, &cfg, &params, dir.path(), &RunOptions::default()).unwrap();
        let stage1 = LayeredGenome::load(&champion_path(dir.path(), "layered-1", 0)).unwrap();

        let mut l2 = find("layered-2").unwrap();
        short_tasks(&mut l2, 20);
        run_experiment(&l2, &cfg, &params, dir.path(), &RunOptions::default()).unwrap();
        let stage2 = LayeredGenome::load(&champion_path(dir.path(), "layered-2", 0)).unwrap();
        assert_eq!(stage2.layers.len(), 2);
        assert_eq!(stage2.frozen_prefix, 1);
        assert_eq!(stage2.layers[0], stage1.layers[0], "stage-1 layer must ride along frozen");

        let mut l3 = find("layered-3").unwrap();
        short_tasks(&mut l3, 20);
        run_experiment(&l3, &cfg, &params, dir.path(), &RunOptions::default()).unwrap();
        let stage3 = LayeredGenome::load(&champion_path(dir.path(), "layered-3", 0)).unwrap();
        assert_eq!(stage3.layers.len(), 3);
        assert_eq!(stage3.frozen_prefix, 2);
        assert_eq!(stage3.layers[..2], stage2.layers[..2]);

        let mut merge = find("merge-connections").unwrap();
        short_tasks(&mut merge, 20);
        // Condition A first, so the comparison block can be emitted.
        let mut unfrozen = find("merge-unfrozen").unwrap();
        short_tasks(&mut unfrozen, 20);
        run_experiment(&unfrozen, &cfg, &params, dir.path(), &RunOptions::default()).unwrap();
        let report =
            run_experiment(&merge, &cfg, &params, dir.path(), &RunOptions::default()).unwrap();
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&report.summary).unwrap()).unwrap();
        assert!(summary["connection_stats"]["mean_connections_per_layer"].is_number());
        assert_eq!(
            summary["condition_a_comparison"]["experiment"],
            "merge-unfrozen"
        );
        let merged = LayeredGenome::load(&champion_path(dir.path(), "merge-connections", 0)).unwrap();
        assert_eq!(merged.frozen_prefix, 0);
        assert!(merged.connection_layers.is_some());
    }

    #[test]
    fn incremental_writes_boundary_champions() {
        let dir = tempfile::tempdir().unwrap();
        let mut def = find("incremental").unwrap();
        short_tasks(&mut def, 20);
        let cfg = EvolutionConfig { generations: 2, runs: 1, trials: 1, ..EvolutionConfig::default() };
        run_experiment(&def, &cfg, &tiny_params(), dir.path(), &RunOptions::default()).unwrap();
        let boundary = boundary_champion_path(dir.path(), "incremental", 0, 1);
        assert!(boundary.exists(), "missing {}", boundary.display());
        LayeredGenome::load(&boundary).unwrap();
        assert!(champion_path(dir.path(), "incremental", 0).exists());
        let h = read_history(&dir.path().join("incremental/0/history.csv")).unwrap();
        assert_eq!(h.len(), 4, "two spans of two generations");
    }

    #[test]
    fn audit_files_record_every_trial() {
        let dir = tempfile::tempdir().unwrap();
        let mut def = find("layered-1").unwrap();
        short_tasks(&mut def, 20);
        let cfg = EvolutionConfig { generations: 2, runs: 1, trials: 2, ..EvolutionConfig::default() };
        let opts = RunOptions { threads: 1, audit: true };
        run_experiment(&def, &cfg, &tiny_params(), dir.path(), &opts).unwrap();
        let text = fs::read_to_string(dir.path().join("layered-1/0/audit.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "generation,rank,trial,score");
        assert_eq!(lines.len(), 1 + 2 * 30 * 2, "header + gens * population * trials");
    }
}
