//! Motion prediction: convex sets bounding the future positions of the
//! closed loop driven toward a fixed goal.

mod lyapunov;
mod vandermonde;

pub use lyapunov::{
    lyapunov_beta, lyapunov_range, lyapunov_residual_matrix, solve_continuous_lyapunov, solve_lyapunov,
    LyapunovCertificate,
};
pub use vandermonde::{vandermonde_coefficients, vandermonde_range, VandermondeCoefficients};

use std::fmt;
use std::str::FromStr;

use crate::control::{PhdController, RobotState};
use crate::geometry::{Ball, ConvexSet, Mat2};
use crate::{Error, Real, Result, Vec2};

/// Convex set containing the future trajectory.
#[derive(Clone, Debug, PartialEq)]
pub enum MotionRange<T> {
    /// `{center + scale * shape^(1/2) u : |u| <= 1}`.
    ProjectedEllipsoid { center: Vec2<T>, shape: Mat2<T>, scale: T },
    /// Convex hull of the vertices; the first vertex is the goal.
    Simplex(Vec<Vec2<T>>),
}

impl<T: Real> MotionRange<T> {
    pub fn to_convex_set(&self) -> ConvexSet<T> {
        match self {
            MotionRange::ProjectedEllipsoid { center, shape, scale } => {
                if *scale == T::zero() {
                    ConvexSet::Point(*center)
                } else {
                    ConvexSet::Ellipse { center: *center, shape: *shape, scale: *scale }
                }
            }
            MotionRange::Simplex(vs) => match vs.len() {
                1 => ConvexSet::Point(vs[0]),
                2 => ConvexSet::Segment(vs[0], vs[1]),
                _ => ConvexSet::Polytope(vs.clone()),
            },
        }
    }

    pub fn contains_point(&self, p: Vec2<T>, tol: T) -> bool {
        self.to_convex_set().contains_point(p, tol)
    }
}

/// `B(g, beta ||x - g~||)`, which contains the motion range of either method.
pub fn range_bounding_ball<T: Real>(beta: T, state: &RobotState<T>, goal: Vec2<T>) -> Ball<T> {
    Ball { center: goal, radius: beta * state.error_norm(goal) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PredictionMethod {
    Lyapunov,
    Vandermonde,
}

impl PredictionMethod {
    pub const ALL: [PredictionMethod; 2] = [PredictionMethod::Lyapunov, PredictionMethod::Vandermonde];

    pub fn name(self) -> &'static str {
        match self {
            PredictionMethod::Lyapunov => "lyapunov",
            PredictionMethod::Vandermonde => "vandermonde",
        }
    }
}

impl fmt::Display for PredictionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PredictionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lyapunov" => Ok(PredictionMethod::Lyapunov),
            "vandermonde" => Ok(PredictionMethod::Vandermonde),
            other => Err(Error::InvalidParameter { name: "method", reason: format!("unknown prediction method {other:?}") }),
        }
    }
}

/// A prediction method bound to a particular controller.
#[derive(Clone, Debug, PartialEq)]
pub enum Predictor<T> {
    Lyapunov(LyapunovCertificate<T>),
    Vandermonde(VandermondeCoefficients<T>),
}

impl<T: Real> Predictor<T> {
    pub fn new(method: PredictionMethod, ctrl: &PhdController<T>) -> Result<Self> {
        Ok(match method {
            PredictionMethod::Lyapunov => Predictor::Lyapunov(solve_lyapunov(ctrl, None)?),
            PredictionMethod::Vandermonde => Predictor::Vandermonde(VandermondeCoefficients::new(ctrl)?),
        })
    }

    pub fn method(&self) -> PredictionMethod {
        match self {
            Predictor::Lyapunov(_) => PredictionMethod::Lyapunov,
            Predictor::Vandermonde(_) => PredictionMethod::Vandermonde,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Predictor::Lyapunov(c) => c.order(),
            Predictor::Vandermonde(c) => c.order(),
        }
    }

    pub fn beta(&self) -> T {
        match self {
            Predictor::Lyapunov(c) => c.beta(),
            Predictor::Vandermonde(c) => c.beta(),
        }
    }

    pub fn predict(&self, state: &RobotState<T>, goal: Vec2<T>) -> Result<MotionRange<T>> {
        match self {
            Predictor::Lyapunov(c) => lyapunov_range(c, state, goal),
            Predictor::Vandermonde(c) => vandermonde_range(c, state, goal),
        }
    }

    pub fn bounding_ball(&self, state: &RobotState<T>, goal: Vec2<T>) -> Ball<T> {
        range_bounding_ball(self.beta(), state, goal)
    }

    /// Lipschitz constants `(L_x, L_g)` of the range map in the Hausdorff
    /// metric with respect to the state and the goal.
    pub fn lipschitz_constants(&self) -> (T, T) {
        match self {
            Predictor::Lyapunov(c) => (c.beta(), T::one() + c.beta()),
            Predictor::Vandermonde(c) => (T::c(c.order() as f64).sqrt() * c.beta(), T::one()),
        }
    }
}
