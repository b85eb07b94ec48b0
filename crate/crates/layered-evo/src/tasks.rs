//! Trial tasks: conditional phototaxis and the light-seeking learning task.
//!
//! A trial seeds its own world and controller decode streams, runs a fixed
//! number of steps and reduces to a single score. Phototaxis scores the
//! negated mean distance to the rewarded light, so bigger is better and 0
//! is perfect. The learning task scores rewarded touches minus punished
//! touches; every touch teleports both lights.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::neuro::{Architecture, ControllerState, LayeredGenome};
use crate::rng;
use crate::sim::{SensorFrame, TouchRecord, TraceRow, World, WorldParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskKind {
    Phototaxis,
    PhototaxisObstacles,
    Learning,
    LearningObstacles,
}

impl TaskKind {
    pub fn with_obstacles(&self) -> bool {
        matches!(self, TaskKind::PhototaxisObstacles | TaskKind::LearningObstacles)
    }

    pub fn is_learning(&self) -> bool {
        matches!(self, TaskKind::Learning | TaskKind::LearningObstacles)
    }

    /// Distance tasks report fitness as a positive mean distance in run
    /// histories; raw trial scores stay negated-distance.
    pub fn is_distance_task(&self) -> bool {
        !self.is_learning()
    }

    pub fn default_steps(&self) -> u32 {
        if self.is_learning() {
            400
        } else {
            200
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TaskKind::Phototaxis => "phototaxis",
            TaskKind::PhototaxisObstacles => "phototaxis-obstacles",
            TaskKind::Learning => "learning",
            TaskKind::LearningObstacles => "learning-obstacles",
        }
    }
}

impl std::fmt::Display for TaskKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<TaskKind> {
        match s {
            "phototaxis" => Ok(TaskKind::Phototaxis),
            "phototaxis-obstacles" => Ok(TaskKind::PhototaxisObstacles),
            "learning" => Ok(TaskKind::Learning),
            "learning-obstacles" => Ok(TaskKind::LearningObstacles),
            other => Err(Error::UnknownTask(other.into())),
        }
    }
}

/// How trial targets are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetDistribution {
    #[default]
    Uniform,
    /// Light 0 is the target two trials out of three.
    BiasedLight0,
}

impl TargetDistribution {
    pub fn light0_probability(&self) -> f64 {
        match self {
            TargetDistribution::Uniform => 0.5,
            TargetDistribution::BiasedLight0 => 2.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskSpec {
    pub kind: TaskKind,
    pub steps: u32,
    pub target_distribution: TargetDistribution,
}

impl TaskSpec {
    pub fn new(kind: TaskKind) -> TaskSpec {
        TaskSpec {
            kind,
            steps: kind.default_steps(),
            target_distribution: TargetDistribution::Uniform,
        }
    }

    pub fn biased(mut self) -> TaskSpec {
        self.target_distribution = TargetDistribution::BiasedLight0;
        self
    }

    pub fn with_steps(mut self, steps: u32) -> TaskSpec {
        self.steps = steps;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub score: f64,
    pub touches_correct: u32,
    pub touches_wrong: u32,
    pub steps_run: u32,
}

/// Checks that a genome's architecture can run a task at all.
pub fn check_compatibility(genome: &LayeredGenome, task: &TaskSpec) -> Result<Architecture> {
    let arch = Architecture::of(genome).ok_or_else(|| {
        Error::InvalidGenome("genome does not match a registered architecture".into())
    })?;
    if task.kind.is_learning() && !arch.reads_feedback() {
        return Err(Error::TaskMismatch {
            task: task.kind.name().into(),
            reason: format!("architecture {arch} has no reinforcement inputs"),
        });
    }
    Ok(arch)
}

/// The world a given trial seed produces, plus the rng stream relocations
/// will continue to draw from.
pub fn trial_world(task: &TaskSpec, params: &WorldParams, seed: u64) -> Result<(World, ChaCha8Rng)> {
    let mut world_rng = rng::rng_from_seed(rng::world_seed(seed));
    let mut world_params = *params;
    world_params.target_light0_prob = task.target_distribution.light0_probability();
    let world = World::generate(world_params, task.kind.with_obstacles(), &mut world_rng)?;
    Ok((world, world_rng))
}

/// Runs one trial of `task` for a genome. The seed fully determines the
/// world, the decoded controller and every relocation.
pub fn run_trial(
    genome: &LayeredGenome,
    task: &TaskSpec,
    params: &WorldParams,
    seed: u64,
) -> Result<TrialResult> {
    run_genome_trial(genome, task, params, seed, None)
}

/// Like [`run_trial`] but records the trajectory.
pub fn run_trial_traced(
    genome: &LayeredGenome,
    task: &TaskSpec,
    params: &WorldParams,
    seed: u64,
) -> Result<(TrialResult, Vec<TraceRow>)> {
    let mut trace = Vec::with_capacity(task.steps as usize);
    let result = run_genome_trial(genome, task, params, seed, Some(&mut trace))?;
    Ok((result, trace))
}

fn run_genome_trial(
    genome: &LayeredGenome,
    task: &TaskSpec,
    params: &WorldParams,
    seed: u64,
    trace: Option<&mut Vec<TraceRow>>,
) -> Result<TrialResult> {
    let arch = check_compatibility(genome, task)?;
    let (world, world_rng) = trial_world(task, params, seed)?;
    let mut decode_rng = rng::rng_from_seed(rng::decode_seed(seed));
    let mut controller = ControllerState::decode(genome, &mut decode_rng)?;

    // Learning tasks feed the controller its reinforcement channels; the
    // others pin the conditional input to the trial target and run any
    // learning layer disabled.
    let external_conditional = if task.kind.is_learning() {
        None
    } else {
        if arch == Architecture::SubsumptionThree {
            controller.set_learning_layer_active(false);
        }
        Some(f64::from(world.target_light))
    };

    run_policy_trial(
        |frame| controller.step(frame, external_conditional),
        task,
        world,
        world_rng,
        trace,
        |_, _| {},
    )
}

/// Conditional phototaxis with the default step budget.
pub fn run_phototaxis_trial(
    genome: &LayeredGenome,
    with_obstacles: bool,
    params: &WorldParams,
    seed: u64,
) -> Result<TrialResult> {
    let kind = if with_obstacles { TaskKind::PhototaxisObstacles } else { TaskKind::Phototaxis };
    run_trial(genome, &TaskSpec::new(kind), params, seed)
}

/// The learning task with the default step budget.
pub fn run_learning_trial(
    genome: &LayeredGenome,
    with_obstacles: bool,
    distribution: TargetDistribution,
    params: &WorldParams,
    seed: u64,
) -> Result<TrialResult> {
    let kind = if with_obstacles { TaskKind::LearningObstacles } else { TaskKind::Learning };
    let mut task = TaskSpec::new(kind);
    task.target_distribution = distribution;
    run_trial(genome, &task, params, seed)
}

/// Runs a hand-written control policy through the same trial machinery
/// evolved controllers use, on the exact world the seed would give them.
pub fn run_scripted_trial(
    mut policy: impl FnMut(&SensorFrame) -> (f64, f64),
    task: &TaskSpec,
    params: &WorldParams,
    seed: u64,
) -> Result<TrialResult> {
    let (world, world_rng) = trial_world(task, params, seed)?;
    run_policy_trial(|f| policy(f), task, world, world_rng, None, |_, _| {})
}

/// Core trial loop. Per step: sense (carrying the previous step's touch
/// pulse), drive, move, then in learning tasks score touches and relocate
/// the lights. `on_touch` fires once per touch event, after relocation.
fn run_policy_trial(
    mut policy: impl FnMut(&SensorFrame) -> (f64, f64),
    task: &TaskSpec,
    mut world: World,
    mut world_rng: ChaCha8Rng,
    mut trace: Option<&mut Vec<TraceRow>>,
    mut on_touch: impl FnMut(&World, &TouchRecord),
) -> Result<TrialResult> {
    if task.steps == 0 {
        return Err(Error::InvalidConfig("a trial needs at least one step".into()));
    }
    let learning = task.kind.is_learning();
    let target = world.target_light as usize;
    let mut distance_sum = 0.0;
    let mut correct = 0u32;
    let mut wrong = 0u32;
    let mut pending_touch: Option<TouchRecord> = None;

    for step in 0..task.steps {
        let frame = world.sense(pending_touch.as_ref());
        let (wl, wr) = policy(&frame);
        let touch = world.step_robot(wl, wr);

        if learning {
            if touch.any() {
                for (i, &hit) in touch.touched.iter().enumerate() {
                    if hit {
                        if i == target {
                            correct += 1;
                        } else {
                            wrong += 1;
                        }
                    }
                }
                world.relocate_lights(&mut world_rng)?;
                on_touch(&world, &touch);
            }
            pending_touch = Some(touch);
        } else {
            distance_sum += world.distance_to_target();
        }

        if let Some(rows) = trace.as_deref_mut() {
            rows.push(TraceRow {
                step,
                x: world.robot.position.x,
                y: world.robot.position.y,
                heading: world.robot.heading,
                wheel_l: wl,
                wheel_r: wr,
                feedback: frame.feedback,
            });
        }
    }

    let score = if learning {
        f64::from(correct) - f64::from(wrong)
    } else {
        -(distance_sum / f64::from(task.steps))
    };
    Ok(TrialResult { score, touches_correct: correct, touches_wrong: wrong, steps_run: task.steps })
}
