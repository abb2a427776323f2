//! Reference-governor feedback motion planning for disk robots with
//! higher-order dynamics.
//!
//! A first-order path-pursuit planner drives a governor point `g`; the robot
//! follows `g` under PhD control, and the governor only moves while the
//! predicted motion range of the robot keeps a positive distance to the
//! free-space boundary. Everything is generic over the scalar type; the
//! aliases below fix it to `f64` or `f32`.
//!
//! ```
//! use refgov::control::PhdController;
//! use refgov::environment::{build_free_space, Environment, Region};
//! use refgov::planner::ReferencePath;
//! use refgov::prediction::PredictionMethod;
//! use refgov::simulator::{Scenario, TraceStatus};
//! use refgov::Vec2;
//!
//! # fn main() -> refgov::Result<()> {
//! let env = Environment::new(
//!     Region::Disk { center: Vec2::new(0.0, 0.0), radius: 5.0 },
//!     vec![Region::Disk { center: Vec2::new(0.0, 0.0), radius: 3.0 }],
//!     0.25,
//! );
//! let fs = build_free_space(&env)?;
//! let path = ReferencePath::new(vec![Vec2::new(4.0, 0.0), Vec2::new(2.8, 2.8), Vec2::new(0.0, 4.0)])?;
//! let ctrl = PhdController::uniform(3, -2.0, -1.0)?;
//! let trace = Scenario::new(fs, path, ctrl, PredictionMethod::Vandermonde)?.run()?;
//! assert_eq!(trace.status, TraceStatus::Converged);
//! assert!(trace.min_clearance() > 0.0);
//! # Ok(())
//! # }
//! ```

// Negated comparisons are deliberate: they reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod environment;
pub mod error;
pub mod geometry;
pub mod governor;
pub mod linalg;
pub mod planner;
pub mod prediction;
pub mod simulator;
mod scalar;
mod vec2;

pub use error::{Error, Result};
pub use scalar::Real;
pub use vec2::Vec2;

pub type Vec2F64 = Vec2<f64>;
pub type Vec2F32 = Vec2<f32>;
pub type ConvexSetF64 = geometry::ConvexSet<f64>;
pub type ConvexSetF32 = geometry::ConvexSet<f32>;
pub type EnvironmentF64 = environment::Environment<f64>;
pub type EnvironmentF32 = environment::Environment<f32>;
pub type FreeSpaceF64 = environment::FreeSpace<f64>;
pub type FreeSpaceF32 = environment::FreeSpace<f32>;
pub type PhdControllerF64 = control::PhdController<f64>;
pub type PhdControllerF32 = control::PhdController<f32>;
pub type RobotStateF64 = control::RobotState<f64>;
pub type RobotStateF32 = control::RobotState<f32>;
pub type PredictorF64 = prediction::Predictor<f64>;
pub type PredictorF32 = prediction::Predictor<f32>;
pub type ReferencePathF64 = planner::ReferencePath<f64>;
pub type ReferencePathF32 = planner::ReferencePath<f32>;
pub type ScenarioF64 = simulator::Scenario<f64>;
pub type ScenarioF32 = simulator::Scenario<f32>;
pub type TraceF64 = simulator::Trace<f64>;
pub type TraceF32 = simulator::Trace<f32>;
