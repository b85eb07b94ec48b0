//! Hand-written control policies.
//!
//! These are not meant to be good robotics; they are independent yardsticks
//! the evolved controllers get measured against. [`GradientSeeker`] climbs a
//! single light-sensor reading by flipping its turn direction whenever the
//! reading drops. [`FlipLearnerPilot`] runs the strategy the learning task
//! is supposed to discover: head for light 0, and after one punishment head
//! for light 1 instead.

use crate::sim::SensorFrame;

/// Wheel commands while turning: the inner wheel keeps enough speed to
/// stay quick, and the differential gives a turn circle tighter than the
/// light contact reach, so an orbiting seeker still touches.
const OUTER_WHEEL: f64 = 1.0;
const INNER_WHEEL: f64 = 0.2;

/// One-sensor gradient climber. Always moves; turns one way until the
/// reading shrinks, then turns the other way. Near the source this settles
/// into a slalom that passes over it.
#[derive(Debug, Clone)]
pub struct GradientSeeker {
    turn_left: bool,
    last: f64,
}

impl GradientSeeker {
    pub fn new() -> GradientSeeker {
        GradientSeeker { turn_left: false, last: -1.0 }
    }

    /// Forget the previous reading, e.g. after the lights jump.
    pub fn reset(&mut self) {
        self.last = -1.0;
    }

    pub fn step(&mut self, reading: f64) -> (f64, f64) {
        if reading < self.last {
            self.turn_left = !self.turn_left;
        }
        self.last = reading;
        if self.turn_left {
            (INNER_WHEEL, OUTER_WHEEL)
        } else {
            (OUTER_WHEEL, INNER_WHEEL)
        }
    }
}

impl Default for GradientSeeker {
    fn default() -> Self {
        GradientSeeker::new()
    }
}

/// Proportional phototaxis toward a fixed target light.
#[derive(Debug, Clone)]
pub struct PhototaxisPilot {
    seeker: GradientSeeker,
    target: usize,
}

impl PhototaxisPilot {
    pub fn new(target: usize) -> PhototaxisPilot {
        assert!(target < 2);
        PhototaxisPilot { seeker: GradientSeeker::new(), target }
    }

    pub fn step(&mut self, frame: &SensorFrame) -> (f64, f64) {
        self.seeker.step(frame.light[self.target])
    }
}

/// Obstacle ray reading treated as "too close, veer off".
const AVOID_TRIGGER: f64 = 0.65;
/// Straight steps committed after veering clear, so the escape actually
/// leaves the obstacle behind instead of instantly re-aiming at the light.
const ESCAPE_STEPS: u32 = 12;

/// The flip strategy: seek light 0 until a negative feedback pulse, then
/// seek light 1 for the rest of the trial. A small avoidance reflex keeps
/// it from grinding against obstacles on the obstacle task variant.
#[derive(Debug, Clone)]
pub struct FlipLearnerPilot {
    seeker: GradientSeeker,
    belief: usize,
    escape: u32,
}

impl FlipLearnerPilot {
    pub fn new() -> FlipLearnerPilot {
        FlipLearnerPilot { seeker: GradientSeeker::new(), belief: 0, escape: 0 }
    }

    pub fn step(&mut self, frame: &SensorFrame) -> (f64, f64) {
        if frame.feedback != 0.0 {
            if frame.feedback < 0.0 {
                self.belief = 1;
            }
            // Any touch moved both lights.
            self.seeker.reset();
        }

        let worst = frame.obstacle.iter().cloned().fold(0.0, f64::max);
        if worst > AVOID_TRIGGER {
            self.escape = ESCAPE_STEPS;
            self.seeker.reset();
            // Rotate in place away from the more crowded side; ray 0 looks
            // right of the heading, ray 2 left.
            return if frame.obstacle[2] > frame.obstacle[0] {
                (0.5, -0.5)
            } else {
                (-0.5, 0.5)
            };
        }
        if self.escape > 0 {
            self.escape -= 1;
            return (1.0, 1.0);
        }

        self.seeker.step(frame.light[self.belief])
    }
}

impl Default for FlipLearnerPilot {
    fn default() -> Self {
        FlipLearnerPilot::new()
    }
}
