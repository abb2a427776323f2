//! Coupled robot–governor simulation.
//!
//! The robot runs PhD control toward the governor `g`; the governor follows
//! the path planner's reference, throttled by the safety level of the
//! predicted motion range.

mod dopri5;
mod trace;

pub use dopri5::{integrate, Dopri5, IntegratorSettings, IntegratorStats};
pub use trace::{Trace, TraceSample, TraceStatus, TraceSummary};

use crate::control::{PhdController, RobotState};
use crate::environment::FreeSpace;
use crate::governor::{governor_velocity, safety_level};
use crate::planner::{in_planner_domain, reference_field, ReferencePath};
use crate::prediction::{MotionRange, PredictionMethod, Predictor};
use crate::{Error, Real, Result, Vec2};

/// Default reference-governor gain (1/s).
pub const DEFAULT_GOVERNOR_GAIN: f64 = 4.0;
/// Default path-pursuit gain (1/s).
pub const DEFAULT_PATH_GAIN: f64 = 1.0;
/// Default simulated horizon (s).
pub const DEFAULT_HORIZON: f64 = 120.0;
/// Default number of output samples per accepted step.
pub const DEFAULT_REFINE: usize = 4;

/// Zero-motion thresholds at the path goal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convergence<T> {
    /// Bound on `|p - goal|` and `|g - goal|` (m).
    pub position: T,
    /// Bound on every higher derivative norm.
    pub motion: T,
}

impl<T: Real> Default for Convergence<T> {
    fn default() -> Self {
        Self { position: T::c(1e-2), motion: T::c(1e-2) }
    }
}

impl<T: Real> Convergence<T> {
    pub fn is_met(&self, state: &RobotState<T>, governor: Vec2<T>, goal: Vec2<T>) -> bool {
        state.position().distance(goal) < self.position
            && governor.distance(goal) < self.position
            && state.derivatives()[1..].iter().all(|d| d.norm() < self.motion)
    }
}

/// Time derivative of the coupled system and the quantities behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemDerivative<T> {
    pub robot: RobotState<T>,
    pub governor: Vec2<T>,
    pub delta: T,
    pub reference: Vec2<T>,
    pub range: MotionRange<T>,
}

/// Simulation setup.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<T> {
    free_space: FreeSpace<T>,
    path: ReferencePath<T>,
    controller: PhdController<T>,
    predictor: Predictor<T>,
    k_g: T,
    k_path: T,
    initial_state: RobotState<T>,
    initial_governor: Vec2<T>,
    integrator: IntegratorSettings<T>,
    horizon: T,
    convergence: Convergence<T>,
    refine: usize,
}

fn check_param<T: Real>(name: &'static str, value: T, allow_zero: bool) -> Result<()> {
    let ok = value.is_finite() && (value > T::zero() || (allow_zero && value == T::zero()));
    if ok {
        Ok(())
    } else {
        let bound = if allow_zero { ">= 0" } else { "> 0" };
        Err(Error::InvalidParameter { name, reason: format!("must be finite and {bound}, got {value}") })
    }
}

impl<T: Real> Scenario<T> {
    /// Scenario with default gains, horizon and tolerances. The robot starts
    /// at rest at the first waypoint, with the governor on top of it.
    pub fn new(free_space: FreeSpace<T>, path: ReferencePath<T>, controller: PhdController<T>, method: PredictionMethod) -> Result<Self> {
        let predictor = Predictor::new(method, &controller)?;
        let start = path.waypoints()[0];
        let initial_state = RobotState::zero_motion(start, controller.order());
        Ok(Self {
            free_space,
            path,
            controller,
            predictor,
            k_g: T::c(DEFAULT_GOVERNOR_GAIN),
            k_path: T::c(DEFAULT_PATH_GAIN),
            initial_state,
            initial_governor: start,
            integrator: IntegratorSettings::default(),
            horizon: T::c(DEFAULT_HORIZON),
            convergence: Convergence::default(),
            refine: DEFAULT_REFINE,
        })
    }

    /// `k_g = 0` freezes the governor.
    pub fn with_gains(mut self, k_g: T, k_path: T) -> Result<Self> {
        check_param("k_g", k_g, true)?;
        check_param("k_path", k_path, false)?;
        self.k_g = k_g;
        self.k_path = k_path;
        Ok(self)
    }

    pub fn with_initial_state(mut self, state: RobotState<T>, governor: Vec2<T>) -> Result<Self> {
        if state.order() != self.controller.order() {
            return Err(Error::DimensionMismatch { expected: self.controller.order(), actual: state.order() });
        }
        if !governor.is_finite() {
            return Err(Error::NonFinite("initial governor"));
        }
        self.initial_state = state;
        self.initial_governor = governor;
        Ok(self)
    }

    pub fn with_integrator(mut self, settings: IntegratorSettings<T>) -> Result<Self> {
        settings.validate()?;
        self.integrator = settings;
        Ok(self)
    }

    pub fn with_horizon(mut self, horizon: T) -> Result<Self> {
        check_param("horizon", horizon, false)?;
        self.horizon = horizon;
        Ok(self)
    }

    pub fn with_convergence(mut self, convergence: Convergence<T>) -> Result<Self> {
        check_param("convergence.position", convergence.position, false)?;
        check_param("convergence.motion", convergence.motion, false)?;
        self.convergence = convergence;
        Ok(self)
    }

    /// Output samples per accepted step (at least 1).
    pub fn with_refine(mut self, refine: usize) -> Self {
        self.refine = refine.max(1);
        self
    }

    pub fn free_space(&self) -> &FreeSpace<T> {
        &self.free_space
    }

    pub fn path(&self) -> &ReferencePath<T> {
        &self.path
    }

    pub fn controller(&self) -> &PhdController<T> {
        &self.controller
    }

    pub fn predictor(&self) -> &Predictor<T> {
        &self.predictor
    }

    pub fn method(&self) -> PredictionMethod {
        self.predictor.method()
    }

    pub fn governor_gain(&self) -> T {
        self.k_g
    }

    pub fn path_gain(&self) -> T {
        self.k_path
    }

    pub fn initial_state(&self) -> &RobotState<T> {
        &self.initial_state
    }

    pub fn initial_governor(&self) -> Vec2<T> {
        self.initial_governor
    }

    pub fn integrator(&self) -> &IntegratorSettings<T> {
        &self.integrator
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn convergence(&self) -> &Convergence<T> {
        &self.convergence
    }

    pub fn goal(&self) -> Vec2<T> {
        self.path.goal()
    }

    /// Checks the start conditions and returns the initial safety level.
    pub fn validate(&self) -> Result<T> {
        self.path.check_clearance(&self.free_space)?;
        let g = self.initial_governor;
        let clearance = if self.free_space.contains(g) { self.free_space.point_boundary_distance(g) } else { T::zero() };
        let path_distance = self.path.distance_to(g);
        if !self.free_space.contains(g) || path_distance > clearance {
            return Err(Error::GovernorOutsideDomain {
                point: [g.x.as_f64(), g.y.as_f64()],
                path_distance: path_distance.as_f64(),
                clearance: clearance.as_f64(),
            });
        }
        let delta = self.system_derivative(&self.initial_state, g)?.delta;
        if !(delta > T::zero()) {
            return Err(Error::UnsafeStart(delta.as_f64()));
        }
        Ok(delta)
    }

    /// Non-fatal findings about the setup.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let components = self.free_space.connected_components(200);
        if components > 1 {
            out.push(format!("free space appears to have {components} disconnected components"));
        }
        out
    }

    /// Robot and governor derivatives at `(x, g)`.
    pub fn system_derivative(&self, state: &RobotState<T>, g: Vec2<T>) -> Result<SystemDerivative<T>> {
        let robot = self.controller.closed_loop_derivative(state, g)?;
        let range = self.predictor.predict(state, g)?;
        let delta = safety_level(&self.free_space, &range, state.position())?;
        let reference = reference_field(&self.path, g, &self.free_space, self.k_path);
        let governor = governor_velocity(delta, reference, self.k_g);
        Ok(SystemDerivative { robot, governor, delta, reference, range })
    }

    fn split(&self, y: &[T]) -> Result<(RobotState<T>, Vec2<T>)> {
        let n = 2 * self.controller.order();
        if y.len() != n + 2 {
            return Err(Error::DimensionMismatch { expected: n + 2, actual: y.len() });
        }
        Ok((RobotState::from_flat(&y[..n])?, Vec2::new(y[n], y[n + 1])))
    }

    fn sample(&self, t: T, y: &[T]) -> Result<TraceSample<T>> {
        let (state, g) = self.split(y)?;
        let d = self.system_derivative(&state, g)?;
        let p = state.position();
        let dist = self.free_space.point_boundary_distance(p);
        let clearance = if self.free_space.contains(p) { dist } else { -dist };
        Ok(TraceSample {
            t,
            governor_in_domain: in_planner_domain(&self.path, g, &self.free_space),
            state,
            governor: g,
            delta: d.delta,
            ref_speed: d.reference.norm(),
            clearance,
            range: d.range,
        })
    }

    fn converged(&self, y: &[T]) -> bool {
        self.split(y).is_ok_and(|(x, g)| self.convergence.is_met(&x, g, self.goal()))
    }

    /// Integrates until convergence or the horizon.
    pub fn run(&self) -> Result<Trace<T>> {
        self.validate()?;
        let mut y0 = self.initial_state.to_flat();
        y0.extend([self.initial_governor.x, self.initial_governor.y]);
        let mut samples = vec![self.sample(T::zero(), &y0)?];
        if self.converged(&y0) {
            return Ok(Trace { samples, status: TraceStatus::Converged, stats: IntegratorStats::default() });
        }

        let mut rhs = |_t: T, y: &[T], out: &mut [T]| -> Result<()> {
            let (state, g) = self.split(y)?;
            let d = self.system_derivative(&state, g)?;
            let flat = d.robot.to_flat();
            out[..flat.len()].copy_from_slice(&flat);
            out[flat.len()] = d.governor.x;
            out[flat.len() + 1] = d.governor.y;
            Ok(())
        };
        let mut stepper = Dopri5::new(&mut rhs, T::zero(), y0, self.horizon, self.integrator)?;
        let status = loop {
            if let Err(e) = stepper.step(&mut rhs, self.horizon) {
                break TraceStatus::Error(e.to_string());
            }
            match self.record_step(&stepper, &mut samples) {
                Err(e) => break TraceStatus::Error(e.to_string()),
                Ok(true) => break TraceStatus::Converged,
                Ok(false) if stepper.t() >= self.horizon => break TraceStatus::Horizon,
                Ok(false) => {}
            }
        };
        Ok(Trace { samples, status, stats: stepper.stats() })
    }

    /// Appends the samples of the last step; returns whether convergence was
    /// reached, in which case the final sample sits at the first converged
    /// time located on the dense output.
    fn record_step(&self, stepper: &Dopri5<T>, samples: &mut Vec<TraceSample<T>>) -> Result<bool> {
        let (t0, t1) = (stepper.t_old(), stepper.t());
        let mut prev = t0;
        for k in 1..=self.refine {
            let t = if k == self.refine { t1 } else { t0 + (t1 - t0) * T::c(k as f64) / T::c(self.refine as f64) };
            let y = if k == self.refine { stepper.y().to_vec() } else { stepper.dense_output(t) };
            if self.converged(&y) {
                let (mut lo, mut hi) = (prev, t);
                for _ in 0..64 {
                    let mid = (lo + hi) * T::c(0.5);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.converged(&stepper.dense_output(mid)) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let y_hit = if hi == t { y } else { stepper.dense_output(hi) };
                samples.push(self.sample(hi, &y_hit)?);
                return Ok(true);
            }
            samples.push(self.sample(t, &y)?);
            prev = t;
        }
        Ok(false)
    }
}

/// Runs `scenario`.
pub fn run<T: Real>(scenario: &Scenario<T>) -> Result<Trace<T>> {
    scenario.run()
}

/// Coupled derivative at `(x, g)`.
pub fn system_derivative<T: Real>(scenario: &Scenario<T>, state: &RobotState<T>, g: Vec2<T>) -> Result<SystemDerivative<T>> {
    scenario.system_derivative(state, g)
}
