//! Deterministic neuroevolution workbench for a light-seeking robot with a
//! subsumption-style layered controller.
//!
//! A simulated differential-drive robot lives in a square arena with two
//! light sources and optional box obstacles. Controllers are stacks of
//! small feedforward networks: a conditional-phototaxis layer, an obstacle
//! avoidance layer that can grab the wheels through a gate output, and a
//! plastic learning layer that figures out which light currently pays.
//! The [`evolution`] module evolves these stacks with a clone-and-mutate
//! genetic algorithm; [`experiments`] packages the named comparisons
//! (monolithic, incremental, modularised, layered, and layer merging) with
//! all their file output.
//!
//! Everything is deterministic: a master seed plus a config reproduces
//! every trial, genome and CSV byte for byte, independent of thread count.
//! Start with the `examples/` directory; each example exercises one major
//! capability end to end.

pub mod error;
pub mod evolution;
pub mod experiments;
pub mod neuro;
pub mod pilots;
pub mod rng;
pub mod sim;
pub mod tasks;

pub use error::{Error, Result};
