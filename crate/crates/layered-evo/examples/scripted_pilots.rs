//! Hand-written pilots run through the exact trial machinery evolved
//! controllers use. They are yardsticks: any evolved champion should be
//! judged against what a few lines of if/else can do on the same worlds.
//!
//! Scripted policies only see the [`SensorFrame`], so on the learning
//! tasks they must infer the rewarded light from feedback pulses, just
//! like an evolved learning layer has to.

use layered_evo::experiments::cross_test_scripted;
use layered_evo::pilots::{FlipLearnerPilot, GradientSeeker, PhototaxisPilot};
use layered_evo::sim::{SensorFrame, WorldParams};
use layered_evo::tasks::{TaskKind, TaskSpec};

const TRIALS: u32 = 200;
const SEED: u64 = 11;

fn main() -> layered_evo::Result<()> {
    let params = WorldParams::default();

    println!("== conditional phototaxis, {TRIALS} trials, mean final distance ==");
    let task = TaskSpec::new(TaskKind::Phototaxis);
    let freeze = || |_: &SensorFrame| (0.0, 0.0);
    let chaser = || {
        let mut s = GradientSeeker::new();
        move |f: &SensorFrame| s.step(f.light[0].max(f.light[1]))
    };
    let fixed = |target: usize| {
        move || {
            let mut p = PhototaxisPilot::new(target);
            move |f: &SensorFrame| p.step(f)
        }
    };
    let dist = |s: layered_evo::experiments::ScoreStats| -s.mean.unwrap();
    println!("  stationary        {:7.2}", dist(cross_test_scripted(freeze, &task, &params, TRIALS, SEED)?));
    println!("  brightest chaser  {:7.2}", dist(cross_test_scripted(chaser, &task, &params, TRIALS, SEED)?));
    println!("  always light 0    {:7.2}", dist(cross_test_scripted(fixed(0), &task, &params, TRIALS, SEED)?));
    println!("  always light 1    {:7.2}", dist(cross_test_scripted(fixed(1), &task, &params, TRIALS, SEED)?));
    println!("  the fixed pilots guess the hidden target right half the time,");
    println!("  so they land between the chaser and doing nothing.");
    println!();

    println!("== learning task, {TRIALS} trials, mean correct minus wrong touches ==");
    let flip = || {
        let mut p = FlipLearnerPilot::new();
        move |f: &SensorFrame| p.step(f)
    };
    let stubborn = || {
        let mut p = PhototaxisPilot::new(0);
        move |f: &SensorFrame| p.step(f)
    };
    for (label, task) in [
        ("uniform targets  ", TaskSpec::new(TaskKind::Learning)),
        ("biased to light 0", TaskSpec::new(TaskKind::Learning).biased()),
        ("among obstacles  ", TaskSpec::new(TaskKind::LearningObstacles)),
    ] {
        let f = cross_test_scripted(flip, &task, &params, TRIALS, SEED)?;
        let s = cross_test_scripted(stubborn, &task, &params, TRIALS, SEED)?;
        println!(
            "  {label}  flip-on-punishment {:6.2}   never-flip {:6.2}",
            f.mean.unwrap(),
            s.mean.unwrap()
        );
    }
    println!("  flipping after one punishment pays on every variant; the");
    println!("  stubborn pilot breaks even on uniform draws and only");
    println!("  profits when the distribution favours its guess.");
    Ok(())
}
