//! A guided walk through the simulation: world generation, sensing,
//! differential-drive stepping, collision blocking and light relocation.

use layered_evo::rng;
use layered_evo::sim::{Vec2, World, WorldParams};

fn main() -> layered_evo::Result<()> {
    let params = WorldParams::default();
    let mut world_rng = rng::rng_from_seed(rng::world_seed(12));

    let mut w = World::generate(params, true, &mut world_rng)?;
    println!(
        "arena {}x{}, robot at ({:.1}, {:.1}) heading {:.2} rad, target light {}",
        params.arena_width,
        params.arena_height,
        w.robot.position.x,
        w.robot.position.y,
        w.robot.heading,
        w.target_light
    );
    for light in &w.lights {
        println!("  light {} at ({:.1}, {:.1})", light.id, light.position.x, light.position.y);
    }
    let first = &w.obstacles[0];
    println!(
        "  {} obstacles, first spans ({:.1}, {:.1}) to ({:.1}, {:.1})",
        w.obstacles.len(),
        first.min.x,
        first.min.y,
        first.max.x,
        first.max.y
    );

    // Face light 0 head on and watch the reading climb as we approach.
    let to_light = w.lights[0].position - w.robot.position;
    w.robot.heading = to_light.y.atan2(to_light.x);
    println!("driving straight at light 0:");
    for step in 0..120 {
        let frame = w.sense(None);
        if step % 10 == 0 {
            println!(
                "  step {step:2}  dist {:6.1}  light readings [{:.3}, {:.3}]  front ray {:.3}",
                w.lights[0].position.distance(w.robot.position),
                frame.light[0],
                frame.light[1],
                frame.obstacle[1]
            );
        }
        let touch = w.step_robot(1.0, 1.0);
        if touch.any() {
            println!("  step {step:2}  touched light {}", if touch.touched[0] { 0 } else { 1 });
            let before = w.lights[0].position;
            w.relocate_lights(&mut world_rng)?;
            println!(
                "  lights relocated: light 0 ({:.1}, {:.1}) -> ({:.1}, {:.1})",
                before.x, before.y, w.lights[0].position.x, w.lights[0].position.y
            );
            break;
        }
    }

    // Unequal wheel speeds rotate the heading before any translation, and a
    // blocked translation cancels the move but keeps the turn.
    let mut w = World::generate(params, true, &mut world_rng)?;
    w.robot.position = Vec2::new(params.robot_radius + 1.0, params.arena_height / 2.0);
    w.robot.heading = std::f64::consts::PI; // nose into the left wall
    let before = w.robot.position;
    w.step_robot(1.0, 0.2);
    println!(
        "wall push: moved {:.3} units, heading now {:.3} rad (turn kept, translation blocked)",
        w.robot.position.distance(before),
        w.robot.heading
    );
    Ok(())
}
