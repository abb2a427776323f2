use std::fmt;

use crate::control::RobotState;
use crate::prediction::MotionRange;
use crate::{Real, Vec2};

use super::IntegratorStats;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStatus {
    Converged,
    /// Horizon reached before convergence.
    Horizon,
    /// Integration aborted; the trace holds the samples up to the failure.
    Error(String),
}

impl TraceStatus {
    pub fn name(&self) -> &'static str {
        match self {
            TraceStatus::Converged => "converged",
            TraceStatus::Horizon => "horizon",
            TraceStatus::Error(_) => "error",
        }
    }
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStatus::Error(msg) => write!(f, "error: {msg}"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceSample<T> {
    pub t: T,
    pub state: RobotState<T>,
    pub governor: Vec2<T>,
    /// Safety level.
    pub delta: T,
    /// Norm of the planner's reference velocity.
    pub ref_speed: T,
    /// Signed distance from the robot position to the free-space boundary,
    /// negative outside the free space.
    pub clearance: T,
    pub governor_in_domain: bool,
    pub range: MotionRange<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceSummary<T> {
    pub travel_time: T,
    pub min_clearance: T,
    pub path_length: T,
    pub status: TraceStatus,
}

/// Time-stamped robot and governor trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace<T> {
    pub samples: Vec<TraceSample<T>>,
    pub status: TraceStatus,
    pub stats: IntegratorStats,
}

impl<T: Real> Trace<T> {
    pub fn is_converged(&self) -> bool {
        self.status == TraceStatus::Converged
    }

    /// Time of the last sample.
    pub fn travel_time(&self) -> T {
        self.samples.last().map_or(T::zero(), |s| s.t)
    }

    pub fn min_clearance(&self) -> T {
        self.samples.iter().fold(T::infinity(), |m, s| m.min(s.clearance))
    }

    /// Length of the sampled robot trajectory.
    pub fn path_length(&self) -> T {
        self.samples.windows(2).map(|w| w[0].state.position().distance(w[1].state.position())).sum()
    }

    pub fn governor_always_in_domain(&self) -> bool {
        self.samples.iter().all(|s| s.governor_in_domain)
    }

    pub fn summary(&self) -> TraceSummary<T> {
        TraceSummary {
            travel_time: self.travel_time(),
            min_clearance: self.min_clearance(),
            path_length: self.path_length(),
            status: self.status.clone(),
        }
    }
}
