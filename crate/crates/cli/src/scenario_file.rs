//! JSON scenario documents.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use refgov::control::{PhdController, RobotState};
use refgov::environment::{build_free_space, Environment, Region};
use refgov::planner::ReferencePath;
use refgov::prediction::PredictionMethod;
use refgov::simulator::{Convergence, IntegratorSettings, Scenario};
use refgov::Vec2;

/// Current schema version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("malformed scenario: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("initial state is unsafe: safety level {delta:e} must be positive")]
    UnsafeStart { delta: f64 },
    #[error("{0}")]
    Model(#[from] refgov::Error),
}

fn field_error(field: impl Into<String>, reason: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Field { field: field.into(), reason: reason.to_string() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegionSpec {
    Disk { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

impl RegionSpec {
    fn to_region(&self) -> Region<f64> {
        match self {
            RegionSpec::Disk { center, radius } => Region::Disk { center: Vec2::from(*center), radius: *radius },
            RegionSpec::Polygon { vertices } => Region::Polygon(vertices.iter().map(|&v| Vec2::from(v)).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    pub workspace: RegionSpec,
    #[serde(default)]
    pub obstacles: Vec<RegionSpec>,
    pub robot_radius: f64,
}

/// A real root, or a complex root as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootSpec {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    pub position: f64,
    pub motion: f64,
}

/// Versioned scenario document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub environment: EnvironmentSpec,
    pub path: Vec<[f64; 2]>,
    pub order: usize,
    /// Explicit characteristic roots; excludes `root_interval`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<RootSpec>>,
    /// `[lo, hi]`: `order` roots uniformly spaced over the interval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_interval: Option<[f64; 2]>,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_path: Option<f64>,
    /// Robot position and derivatives; defaults to rest at the first waypoint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_governor: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSpec>,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        if file.version != SCHEMA_VERSION {
            return Err(field_error("version", format!("unsupported version {}, expected {SCHEMA_VERSION}", file.version)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn method(&self) -> Result<PredictionMethod, ScenarioError> {
        self.method.parse().map_err(|_| field_error("method", format!("expected \"lyapunov\" or \"vandermonde\", got {:?}", self.method)))
    }

    pub fn controller(&self) -> Result<PhdController<f64>, ScenarioError> {
        match (&self.roots, &self.root_interval) {
            (Some(_), Some(_)) => Err(field_error("roots", "give either `roots` or `root_interval`, not both")),
            (None, None) => Err(field_error("roots", "one of `roots` or `root_interval` is required")),
            (None, Some([lo, hi])) => {
                PhdController::uniform(self.order, *lo, *hi).map_err(|e| field_error("root_interval", e))
            }
            (Some(roots), None) => {
                if roots.len() != self.order {
                    return Err(field_error("roots", format!("expected {} roots for order {}, got {}", self.order, self.order, roots.len())));
                }
                let complex: Vec<Complex<f64>> = roots
                    .iter()
                    .map(|r| match r {
                        RootSpec::Real(x) => Complex::new(*x, 0.0),
                        RootSpec::Complex([re, im]) => Complex::new(*re, *im),
                    })
                    .collect();
                PhdController::from_complex_roots(&complex).map_err(|e| field_error("roots", e))
            }
        }
    }

    /// Builds the scenario without checking the start conditions.
    pub fn build_unchecked(&self) -> Result<Scenario<f64>, ScenarioError> {
        if self.order == 0 || self.order > refgov::control::MAX_ORDER {
            return Err(field_error("order", format!("must be in 1..={}, got {}", refgov::control::MAX_ORDER, self.order)));
        }
        let env = Environment::new(
            self.environment.workspace.to_region(),
            self.environment.obstacles.iter().map(RegionSpec::to_region).collect(),
            self.environment.robot_radius,
        );
        let fs = build_free_space(&env).map_err(|e| field_error("environment", e))?;
        let path = ReferencePath::new(self.path.iter().map(|&p| Vec2::from(p)).collect()).map_err(|e| field_error("path", e))?;
        let ctrl = self.controller()?;
        let mut s = Scenario::new(fs, path, ctrl, self.method()?).map_err(|e| field_error("method", e))?;

        let k_g = self.k_g.unwrap_or(s.governor_gain());
        let k_path = self.k_path.unwrap_or(s.path_gain());
        s = s.with_gains(k_g, k_path).map_err(|e| field_error(if k_g < 0.0 || !k_g.is_finite() { "k_g" } else { "k_path" }, e))?;
        if self.initial_state.is_some() || self.initial_governor.is_some() {
            let state = match &self.initial_state {
                Some(ds) => RobotState::new(ds.iter().map(|&d| Vec2::from(d)).collect()).map_err(|e| field_error("initial_state", e))?,
                None => s.initial_state().clone(),
            };
            let g = self.initial_governor.map(Vec2::from).unwrap_or(state.position());
            s = s.with_initial_state(state, g).map_err(|e| field_error("initial_state", e))?;
        }
        if let Some(spec) = &self.integrator {
            let mut settings = *s.integrator();
            settings.rtol = spec.rtol.unwrap_or(settings.rtol);
            settings.atol = spec.atol.unwrap_or(settings.atol);
            settings.max_step = spec.max_step.or(settings.max_step);
            s = s.with_integrator(settings).map_err(|e| field_error("integrator", e))?;
        }
        if let Some(h) = self.horizon {
            s = s.with_horizon(h).map_err(|e| field_error("horizon", e))?;
        }
        if let Some(c) = &self.convergence {
            s = s
                .with_convergence(Convergence { position: c.position, motion: c.motion })
                .map_err(|e| field_error("convergence", e))?;
        }
        Ok(s)
    }

    /// Builds and validates the scenario.
    pub fn build(&self) -> Result<Scenario<f64>, ScenarioError> {
        let s = self.build_unchecked()?;
        check_start(&s)?;
        Ok(s)
    }
}

/// Checks the start conditions, naming the offending field.
pub fn check_start(s: &Scenario<f64>) -> Result<f64, ScenarioError> {
    s.validate().map_err(|e| match e {
        refgov::Error::UnsafeStart(delta) => ScenarioError::UnsafeStart { delta },
        refgov::Error::GovernorOutsideDomain { .. } => field_error("initial_governor", e),
        refgov::Error::InvalidGeometry(_) => field_error("path", e),
        other => ScenarioError::Model(other),
    })
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario<f64>, ScenarioError> {
    ScenarioFile::from_json(text)?.build()
}

/// Integrator overrides from the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub horizon: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, s: Scenario<f64>) -> Result<Scenario<f64>, ScenarioError> {
        let mut settings: IntegratorSettings<f64> = *s.integrator();
        settings.rtol = self.rtol.unwrap_or(settings.rtol);
        settings.atol = self.atol.unwrap_or(settings.atol);
        let mut s = s.with_integrator(settings).map_err(|e| field_error("--tol-rel/--tol-abs", e))?;
        if let Some(h) = self.horizon {
            s = s.with_horizon(h).map_err(|e| field_error("--horizon", e))?;
        }
        Ok(s)
    }
}
