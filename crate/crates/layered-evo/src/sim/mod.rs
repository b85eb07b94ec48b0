//! Arena simulation: geometry, the world itself and trajectory traces.

pub mod geometry;
pub mod trace;
pub mod world;

pub use geometry::{wrap_angle, Rect, Vec2};
pub use trace::{write_trace, TraceRow, TRACE_HEADER};
pub use world::{
    light_response, LightSource, RobotPose, SensorFrame, TouchRecord, World, WorldParams,
    RAY_OFFSETS,
};
