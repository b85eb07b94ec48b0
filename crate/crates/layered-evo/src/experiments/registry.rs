//! The named experiments and how each seeds its population.

use crate::error::{Error, Result};
use crate::neuro::Architecture;
use crate::tasks::{TaskKind, TaskSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Monolithic,
    Incremental,
    Modularised,
    LayeredStage,
    MergeUnfrozen,
    MergeConnections,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Monolithic => "monolithic",
            Regime::Incremental => "incremental",
            Regime::Modularised => "modularised",
            Regime::LayeredStage => "layered-stage",
            Regime::MergeUnfrozen => "merge-unfrozen",
            Regime::MergeConnections => "merge-connections",
        }
    }
}

/// One registry entry. `tasks` lists the schedule spans in order; every
/// span runs for the configured generation count. `source` names the
/// experiment whose per-run champions seed this one.
#[derive(Debug, Clone)]
pub struct ExperimentDef {
    pub name: &'static str,
    pub description: &'static str,
    pub architecture: Architecture,
    pub tasks: Vec<TaskSpec>,
    pub regime: Regime,
    pub source: Option<&'static str>,
    pub connection_layers: bool,
}

impl ExperimentDef {
    pub fn distance_task(&self) -> bool {
        self.tasks[0].kind.is_distance_task()
    }

    /// Frozen layer count while this experiment evolves.
    pub fn frozen_prefix(&self) -> usize {
        match self.regime {
            Regime::LayeredStage => self.architecture.layer_topologies().len() - 1,
            _ => 0,
        }
    }
}

pub fn registry() -> Vec<ExperimentDef> {
    let photo = TaskSpec::new(TaskKind::Phototaxis);
    let photo_obst = TaskSpec::new(TaskKind::PhototaxisObstacles);
    let learn_obst = TaskSpec::new(TaskKind::LearningObstacles);
    vec![
        ExperimentDef {
            name: "monolithic-full",
            description: "one hybrid network evolved directly on the full learning task",
            architecture: Architecture::Monolithic,
            tasks: vec![learn_obst],
            regime: Regime::Monolithic,
            source: None,
            connection_layers: false,
        },
        ExperimentDef {
            name: "monolithic-full-biased",
            description: "full task with light 0 the target two trials out of three",
            architecture: Architecture::Monolithic,
            tasks: vec![learn_obst.biased()],
            regime: Regime::Monolithic,
            source: None,
            connection_layers: false,
        },
        ExperimentDef {
            name: "monolithic-photo",
            description: "monolithic network on conditional phototaxis, no obstacles",
            architecture: Architecture::Monolithic,
            tasks: vec![photo],
            regime: Regime::Monolithic,
            source: None,
            connection_layers: false,
        },
        ExperimentDef {
            name: "monolithic-photo-obst",
            description: "monolithic network on conditional phototaxis among obstacles",
            architecture: Architecture::Monolithic,
            tasks: vec![photo_obst],
            regime: Regime::Monolithic,
            source: None,
            connection_layers: false,
        },
        ExperimentDef {
            name: "incremental",
            description: "monolithic network, obstacle-free phototaxis first, obstacles added",
            architecture: Architecture::Monolithic,
            tasks: vec![photo, photo_obst],
            regime: Regime::Incremental,
            source: None,
            connection_layers: false,
        },
        ExperimentDef {
            name: "modular-2",
            description: "taxis and avoidance networks evolved simultaneously from scratch",
            architecture: Architecture::SubsumptionTwo,
            tasks: vec![photo_obst],
            regime: Regime::Modularised,
            source: None,
            connection_layers: false,
        },
        ExperimentDef {
            name: "modular-3",
            description: "all three networks evolved simultaneously on the full task",
            architecture: Architecture::SubsumptionThree,
            tasks: vec![learn_obst],
            regime: Regime::Modularised,
            source: None,
            connection_layers: false,
        },
        ExperimentDef {
            name: "layered-1",
            description: "stage 1: the taxis layer alone on obstacle-free phototaxis",
            architecture: Architecture::SubsumptionOne,
            tasks: vec![photo],
            regime: Regime::LayeredStage,
            source: None,
            connection_layers: false,
        },
        ExperimentDef {
            name: "layered-2",
            description: "stage 2: avoidance layer on top of frozen stage-1 champions",
            architecture: Architecture::SubsumptionTwo,
            tasks: vec![photo_obst],
            regime: Regime::LayeredStage,
            source: Some("layered-1"),
            connection_layers: false,
        },
        ExperimentDef {
            name: "layered-3",
            description: "stage 3: learning layer on top of frozen stage-2 champions",
            architecture: Architecture::SubsumptionThree,
            tasks: vec![learn_obst],
            regime: Regime::LayeredStage,
            source: Some("layered-2"),
            connection_layers: false,
        },
        ExperimentDef {
            name: "merge-unfrozen",
            description: "stage-3 champions evolved further with every layer mutable",
            architecture: Architecture::SubsumptionThree,
            tasks: vec![learn_obst],
            regime: Regime::MergeUnfrozen,
            source: Some("layered-3"),
            connection_layers: false,
        },
        ExperimentDef {
            name: "merge-connections",
            description: "as merge-unfrozen, plus evolvable inter-layer connection sets",
            architecture: Architecture::SubsumptionThree,
            tasks: vec![learn_obst],
            regime: Regime::MergeConnections,
            source: Some("layered-3"),
            connection_layers: true,
        },
    ]
}

pub fn find(name: &str) -> Result<ExperimentDef> {
    registry()
        .into_iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::UnknownExperiment(name.into()))
}
