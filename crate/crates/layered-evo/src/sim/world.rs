//! The arena: a differential-drive robot, two point lights and optional
//! rectangular obstacles inside a walled box.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::geometry::{ray_wall_distance, wrap_angle, Rect, Vec2};

/// Offsets of the three obstacle rays relative to the robot heading, radians.
pub const RAY_OFFSETS: [f64; 3] = [-1.0, 0.0, 1.0];

const MAX_PLACEMENT_ATTEMPTS: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldParams {
    pub arena_width: f64,
    pub arena_height: f64,
    pub robot_radius: f64,
    pub axle_length: f64,
    /// Wheel speed at full forward command, distance units per step.
    pub max_speed: f64,
    pub light_contact_radius: f64,
    pub obstacle_count: usize,
    /// Obstacle side lengths are drawn uniformly from this closed range.
    pub obstacle_side_range: (f64, f64),
    /// Obstacle rays are cut off at this range.
    pub sensor_range: f64,
    /// Light intensity halves at this distance.
    pub light_falloff: f64,
    /// Probability that light 0 is the rewarded target of a trial.
    pub target_light0_prob: f64,
}

impl Default for WorldParams {
    fn default() -> Self {
        WorldParams {
            arena_width: 500.0,
            arena_height: 500.0,
            robot_radius: 10.0,
            axle_length: 20.0,
            max_speed: 5.0,
            light_contact_radius: 10.0,
            obstacle_count: 10,
            obstacle_side_range: (20.0, 80.0),
            sensor_range: 50.0,
            light_falloff: 100.0,
            target_light0_prob: 0.5,
        }
    }
}

impl WorldParams {
    /// Robot center to light center distance at which a touch registers.
    pub fn contact_reach(&self) -> f64 {
        self.robot_radius + self.light_contact_radius
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.arena_width > 0.0
            && self.arena_height > 0.0
            && self.robot_radius > 0.0
            && self.axle_length > 0.0
            && self.max_speed > 0.0
            && self.light_contact_radius > 0.0
            && self.obstacle_side_range.0 > 0.0
            && self.obstacle_side_range.0 <= self.obstacle_side_range.1
            && self.sensor_range > 0.0
            && self.light_falloff > 0.0
            && (0.0..=1.0).contains(&self.target_light0_prob)
            && self.arena_width >= 2.0 * self.robot_radius
            && self.arena_height >= 2.0 * self.robot_radius;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig("world parameters out of range".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotPose {
    pub position: Vec2,
    /// Radians, wrapped to `[-pi, pi)`.
    pub heading: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightSource {
    pub id: u8,
    pub position: Vec2,
}

/// Which lights the robot touched during a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TouchRecord {
    pub touched: [bool; 2],
}

impl TouchRecord {
    pub fn any(&self) -> bool {
        self.touched[0] || self.touched[1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub params: WorldParams,
    pub robot: RobotPose,
    pub lights: [LightSource; 2],
    pub obstacles: Vec<Rect>,
    /// Index of the rewarded light for the current trial.
    pub target_light: u8,
    pub step_count: u64,
}

impl World {
    /// Samples a fresh arena. Placement order is fixed (robot, lights,
    /// obstacles, target draw) so a seed always reproduces the same world.
    pub fn generate(params: WorldParams, with_obstacles: bool, rng: &mut impl Rng) -> Result<World> {
        params.validate()?;
        let (w, h, r) = (params.arena_width, params.arena_height, params.robot_radius);

        let robot = RobotPose {
            position: Vec2::new(rng.random_range(r..=w - r), rng.random_range(r..=h - r)),
            heading: wrap_angle(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)),
        };

        // Lights land anywhere in the arena but outside the robot's contact
        // reach, mirroring the relocation rule.
        let reach = params.contact_reach();
        let mut lights = [LightSource { id: 0, position: Vec2::ZERO }; 2];
        for (id, light) in lights.iter_mut().enumerate() {
            light.id = id as u8;
            light.position = place_light(&params, robot.position, reach, rng, |_| true)?;
        }

        let mut obstacles = Vec::new();
        if with_obstacles {
            let (side_lo, side_hi) = params.obstacle_side_range;
            for _ in 0..params.obstacle_count {
                let mut placed = false;
                for _ in 0..MAX_PLACEMENT_ATTEMPTS {
                    let sx = rng.random_range(side_lo..=side_hi);
                    let sy = rng.random_range(side_lo..=side_hi);
                    if sx > w || sy > h {
                        continue;
                    }
                    let x0 = rng.random_range(0.0..=w - sx);
                    let y0 = rng.random_range(0.0..=h - sy);
                    let rect = Rect::new(Vec2::new(x0, y0), Vec2::new(x0 + sx, y0 + sy));
                    let clear = !rect.overlaps_disc(robot.position, r)
                        && lights
                            .iter()
                            .all(|l| !rect.overlaps_disc(l.position, params.light_contact_radius));
                    if clear {
                        obstacles.push(rect);
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    return Err(Error::WorldGeneration(format!(
                        "could not place obstacle {} in {} attempts",
                        obstacles.len(),
                        MAX_PLACEMENT_ATTEMPTS
                    )));
                }
            }
        }

        let target_light = if rng.random::<f64>() < params.target_light0_prob { 0 } else { 1 };

        Ok(World { params, robot, lights, obstacles, target_light, step_count: 0 })
    }

    /// Reading of one directional light sensor: the cosine of the bearing
    /// error clipped at zero, attenuated by distance.
    pub fn light_sensor_response(&self, light: &LightSource) -> f64 {
        light_response(&self.robot, light, self.params.light_falloff)
    }

    /// Distance-coded obstacle ray: 1 at contact, 0 at or beyond sensor
    /// range. Arena walls reflect like obstacles.
    pub fn obstacle_ray(&self, offset: f64) -> f64 {
        let dir = Vec2::from_angle(wrap_angle(self.robot.heading + offset));
        let origin = self.robot.position + dir * self.params.robot_radius;
        let range = self.params.sensor_range;

        let mut nearest =
            ray_wall_distance(origin, dir, self.params.arena_width, self.params.arena_height);
        for rect in &self.obstacles {
            if let Some(d) = rect.ray_entry_distance(origin, dir) {
                nearest = nearest.min(d);
            }
        }
        if nearest >= range {
            0.0
        } else {
            1.0 - nearest / range
        }
    }

    /// Full sensor sweep. `touch` carries the result of the step that just
    /// ran, making contact and feedback one-step pulses; pass `None` to hold
    /// those channels at zero.
    pub fn sense(&self, touch: Option<&TouchRecord>) -> SensorFrame {
        let mut frame = SensorFrame {
            light: [
                self.light_sensor_response(&self.lights[0]),
                self.light_sensor_response(&self.lights[1]),
            ],
            obstacle: [
                self.obstacle_ray(RAY_OFFSETS[0]),
                self.obstacle_ray(RAY_OFFSETS[1]),
                self.obstacle_ray(RAY_OFFSETS[2]),
            ],
            contact: [0.0, 0.0],
            feedback: 0.0,
        };
        if let Some(t) = touch {
            if t.any() {
                for i in 0..2 {
                    if t.touched[i] {
                        frame.contact[i] = 1.0;
                    }
                }
                frame.feedback =
                    if t.touched[self.target_light as usize] { 1.0 } else { -1.0 };
            }
        }
        frame
    }

    /// Advances the robot one step from wheel commands in `[-1, 1]`.
    ///
    /// Heading updates first, then the robot translates along the new
    /// heading. A translation that would cross a wall or an obstacle is
    /// cancelled outright; rotation always survives.
    pub fn step_robot(&mut self, wheel_left: f64, wheel_right: f64) -> TouchRecord {
        debug_assert!((-1.0..=1.0).contains(&wheel_left) && (-1.0..=1.0).contains(&wheel_right));
        let v_l = self.params.max_speed * wheel_left;
        let v_r = self.params.max_speed * wheel_right;

        self.robot.heading = wrap_angle(self.robot.heading + (v_r - v_l) / self.params.axle_length);

        let distance = (v_l + v_r) / 2.0;
        let candidate = self.robot.position + Vec2::from_angle(self.robot.heading) * distance;
        if self.pose_is_free(candidate) {
            self.robot.position = candidate;
        }

        self.step_count += 1;

        let reach = self.params.contact_reach();
        let mut touch = TouchRecord::default();
        for (i, light) in self.lights.iter().enumerate() {
            touch.touched[i] = self.robot.position.distance(light.position) <= reach;
        }
        touch
    }

    fn pose_is_free(&self, center: Vec2) -> bool {
        let (w, h, r) = (self.params.arena_width, self.params.arena_height, self.params.robot_radius);
        if center.x < r || center.x > w - r || center.y < r || center.y > h - r {
            return false;
        }
        self.obstacles.iter().all(|rect| !rect.overlaps_disc(center, r))
    }

    /// Moves both lights to fresh positions: clear of every obstacle and
    /// outside the robot's current contact reach. Light 0 is drawn first.
    pub fn relocate_lights(&mut self, rng: &mut impl Rng) -> Result<()> {
        let reach = self.params.contact_reach();
        let robot = self.robot.position;
        let contact_r = self.params.light_contact_radius;
        for i in 0..2 {
            let pos = place_light(&self.params, robot, reach, rng, |p| {
                self.obstacles.iter().all(|rect| !rect.overlaps_disc(p, contact_r))
            })?;
            self.lights[i].position = pos;
        }
        Ok(())
    }

    pub fn target_position(&self) -> Vec2 {
        self.lights[self.target_light as usize].position
    }

    pub fn distance_to_target(&self) -> f64 {
        self.robot.position.distance(self.target_position())
    }
}

fn place_light(
    params: &WorldParams,
    robot: Vec2,
    reach: f64,
    rng: &mut impl Rng,
    extra: impl Fn(Vec2) -> bool,
) -> Result<Vec2> {
    for _ in 0..MAX_PLACEMENT_ATTEMPTS {
        let p = Vec2::new(
            rng.random_range(0.0..=params.arena_width),
            rng.random_range(0.0..=params.arena_height),
        );
        if p.distance(robot) > reach && extra(p) {
            return Ok(p);
        }
    }
    Err(Error::WorldGeneration(format!(
        "could not place a light in {MAX_PLACEMENT_ATTEMPTS} attempts"
    )))
}

/// Directional light response: `max(0, cos(bearing error)) * d0 / (d0 + d)`.
/// A sensor sitting exactly on the light saturates to 1.
pub fn light_response(robot: &RobotPose, light: &LightSource, falloff: f64) -> f64 {
    let offset = light.position - robot.position;
    let d = offset.length();
    if d == 0.0 {
        return 1.0;
    }
    let bearing_error = wrap_angle(offset.y.atan2(offset.x) - robot.heading);
    bearing_error.cos().max(0.0) * falloff / (falloff + d)
}

/// One step's worth of sensor readings, every channel in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorFrame {
    pub light: [f64; 2],
    /// Readings of the rays at [`RAY_OFFSETS`], nearest first turned to 1.
    pub obstacle: [f64; 3],
    pub contact: [f64; 2],
    /// +1 rewarded touch, -1 punished touch, 0 otherwise.
    pub feedback: f64,
}
