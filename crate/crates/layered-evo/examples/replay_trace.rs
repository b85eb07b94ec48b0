//! Replays one trial step by step and saves the trajectory as CSV, the
//! same format the `replay` subcommand of the binary emits. Useful for
//! plotting a controller's path through the arena.

use std::fs;

use layered_evo::neuro::handcrafted;
use layered_evo::sim::{write_trace, WorldParams, TRACE_HEADER};
use layered_evo::tasks::{run_trial_traced, TaskKind, TaskSpec};

fn main() -> layered_evo::Result<()> {
    let genome = handcrafted::scan_and_surge();
    let task = TaskSpec::new(TaskKind::Phototaxis);
    let params = WorldParams::default();
    let seed = 7;

    let (result, trace) = run_trial_traced(&genome, &task, &params, seed)?;
    println!(
        "trial seed {seed}: score {:.2}, {} correct / {} wrong touches, {} steps",
        result.score, result.touches_correct, result.touches_wrong, result.steps_run
    );

    let dir = tempfile::tempdir().map_err(|e| layered_evo::Error::io("tempdir", e))?;
    let path = dir.path().join("trace.csv");
    let file = fs::File::create(&path).map_err(|e| layered_evo::Error::io("create trace", e))?;
    write_trace(file, &trace)?;
    println!("wrote {} rows to {}", trace.len(), path.display());

    println!();
    println!("{TRACE_HEADER}");
    let show = |r: &layered_evo::sim::TraceRow| {
        println!(
            "{:4},{:7.2},{:7.2},{:6.3},{:6.3},{:6.3},{:4.1}",
            r.step, r.x, r.y, r.heading, r.wheel_l, r.wheel_r, r.feedback
        );
    };
    for row in trace.iter().take(5) {
        show(row);
    }
    println!("...");
    for row in trace.iter().rev().take(5).collect::<Vec<_>>().into_iter().rev() {
        show(row);
    }

    // The turning rate is bounded by wheel speed over the axle length, so
    // consecutive rows can never disagree by more than that.
    let max_turn = trace
        .windows(2)
        .map(|w| {
            let d = (w[1].heading - w[0].heading).abs();
            d.min(std::f64::consts::TAU - d)
        })
        .fold(0.0f64, f64::max);
    println!();
    println!("largest per-step heading change: {max_turn:.4} rad");
    Ok(())
}
