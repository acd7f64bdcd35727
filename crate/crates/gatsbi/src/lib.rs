//! GATsBi: hybrid trajectory forecasting for bicycles.
//!
//! Bicycles move like vehicles in the short term (non-holonomic kinematics)
//! and like pedestrians in the long term (social interaction). This crate
//! combines both views:
//!
//! - a **physics module**: four knowledge-based predictors (constant velocity,
//!   constant acceleration, bicycle kinematics, extended Kalman filter) whose
//!   forecasts are encoded into a joint latent embedding;
//! - a **social module**: a single-layer graph attention network over the
//!   ego's neighborhood, with exponential perception decay on past frames and
//!   constant-velocity anticipation of neighbor futures;
//! - a **fusion module** decoding the combined embedding through an LSTM;
//! - an **output module** producing either a unimodal trajectory or a
//!   per-timestep bivariate Gaussian mixture, with three sampling strategies.
//!
//! The crate also ships dataset ingestion and windowing, coordinate
//! transforms (homography, polar, lane, relative lane), a synthetic
//! circular-track scene generator, and a training/evaluation harness that
//! reports ADE/FDE across k scene-grouped folds.
//!
//! Most capabilities have a runnable demo under `examples/`; the `gatsbi`
//! binary exposes the same functionality as subcommands
//! (`gen-synthetic`, `train`, `evaluate`, `predict`, `plot`).

pub mod cli;
pub mod config;
pub mod error;
pub mod fusion;
pub mod geometry;
pub mod harness;
pub mod metrics;
pub mod model;
pub mod nn;
pub mod physics;
pub mod plot;
pub mod social;
pub mod traj;

pub use error::{Error, Result};
pub use traj::{AgentId, DatasetConfig, SampleWindow, Scene, TrackedPoint, Trajectory};
