//! Plane geometry used by the arena: vectors, axis-aligned rectangles,
//! ray casting and disc overlap tests.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        Vec2 { x: theta.cos(), y: theta.sin() }
    }

    pub fn length(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).length()
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let wrapped = (theta + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can return exactly 2*pi when theta + pi rounds onto it.
    if wrapped >= PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

/// Axis-aligned rectangle; `min` is the lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Vec2,
    pub max: Vec2,
}

impl Rect {
    pub fn new(min: Vec2, max: Vec2) -> Self {
        debug_assert!(min.x <= max.x && min.y <= max.y);
        Rect { min, max }
    }

    pub fn closest_point(&self, p: Vec2) -> Vec2 {
        Vec2::new(p.x.clamp(self.min.x, self.max.x), p.y.clamp(self.min.y, self.max.y))
    }

    /// True when a disc strictly overlaps the rectangle. Tangency does not
    /// count, so a robot resting against a face is legal.
    pub fn overlaps_disc(&self, center: Vec2, radius: f64) -> bool {
        let closest = self.closest_point(center);
        let d = closest - center;
        d.dot(d) < radius * radius
    }

    /// Slab-method ray intersection. Returns the entry distance along the
    /// (unit) direction, 0 when the origin already lies inside or on the
    /// boundary, `None` on a miss.
    pub fn ray_entry_distance(&self, origin: Vec2, dir: Vec2) -> Option<f64> {
        let mut t_min = f64::NEG_INFINITY;
        let mut t_max = f64::INFINITY;

        for (o, d, lo, hi) in [
            (origin.x, dir.x, self.min.x, self.max.x),
            (origin.y, dir.y, self.min.y, self.max.y),
        ] {
            if d == 0.0 {
                if o < lo || o > hi {
                    return None;
                }
            } else {
                let inv = 1.0 / d;
                let (t0, t1) = ((lo - o) * inv, (hi - o) * inv);
                let (t0, t1) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
                t_min = t_min.max(t0);
                t_max = t_max.min(t1);
                if t_min > t_max {
                    return None;
                }
            }
        }

        if t_max < 0.0 {
            return None;
        }
        Some(t_min.max(0.0))
    }
}

/// Distance from an interior point to the arena boundary along a unit
/// direction. The arena spans `[0, width] x [0, height]`.
pub fn ray_wall_distance(origin: Vec2, dir: Vec2, width: f64, height: f64) -> f64 {
    let mut t_exit = f64::INFINITY;
    for (o, d, lo, hi) in [(origin.x, dir.x, 0.0, width), (origin.y, dir.y, 0.0, height)] {
        if d > 0.0 {
            t_exit = t_exit.min((hi - o) / d);
        } else if d < 0.0 {
            t_exit = t_exit.min((lo - o) / d);
        }
    }
    t_exit.max(0.0)
}
