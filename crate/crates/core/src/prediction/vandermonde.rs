use num_complex::Complex;

use crate::control::{monic_coefficients, PhdController, RobotState};
use crate::{Error, Real, Result, Vec2};

use super::MotionRange;

/// Coefficients `h^_0..h^_{n-1}` of the monic polynomial whose roots are the
/// controller roots with one instance of the largest (slowest) root removed.
#[derive(Clone, Debug, PartialEq)]
pub struct VandermondeCoefficients<T> {
    coefficients: Vec<T>,
    beta: T,
}

impl<T: Real> VandermondeCoefficients<T> {
    pub fn from_roots(roots: &[T]) -> Result<Self> {
        if roots.is_empty() || roots.len() > crate::control::MAX_ORDER {
            return Err(Error::OrderOutOfRange(roots.len()));
        }
        if let Some(r) = roots.iter().find(|r| !(**r < T::zero()) || !r.is_finite()) {
            return Err(Error::NotNonOvershooting(format!("{r}")));
        }
        let slowest = roots
            .iter()
            .enumerate()
            .fold(0, |best, (i, r)| if *r > roots[best] { i } else { best });
        let rest: Vec<Complex<T>> =
            roots.iter().enumerate().filter(|(i, _)| *i != slowest).map(|(_, &r)| Complex::new(r, T::zero())).collect();
        let mut coefficients: Vec<T> = monic_coefficients(&rest).into_iter().map(|c| c.re).collect();
        coefficients.push(T::one());
        let max = coefficients.iter().fold(T::zero(), |m, &c| m.max(c));
        let beta = T::c(roots.len() as f64).sqrt() * max / coefficients[0];
        Ok(Self { coefficients, beta })
    }

    /// Requires an all-real-root controller.
    pub fn new(ctrl: &PhdController<T>) -> Result<Self> {
        let roots = ctrl.real_roots().ok_or_else(|| Error::NotNonOvershooting("complex root".into()))?;
        Self::from_roots(&roots)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    /// `beta = sqrt(n) max_i h^_i / h^_0`.
    pub fn beta(&self) -> T {
        self.beta
    }
}

/// Non-overshooting coefficients of the controller.
pub fn vandermonde_coefficients<T: Real>(ctrl: &PhdController<T>) -> Result<VandermondeCoefficients<T>> {
    VandermondeCoefficients::new(ctrl)
}

/// Simplex with vertices `g, p, p + (h^_1/h^_0) p', ..., sum_i (h^_i/h^_0) p^(i)`.
pub fn vandermonde_range<T: Real>(
    coeffs: &VandermondeCoefficients<T>,
    state: &RobotState<T>,
    goal: Vec2<T>,
) -> Result<MotionRange<T>> {
    let n = coeffs.order();
    if state.order() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: state.order() });
    }
    let h0 = coeffs.coefficients[0];
    let mut vertices = Vec::with_capacity(n + 1);
    vertices.push(goal);
    let mut acc = state.position();
    vertices.push(acc);
    for i in 1..n {
        acc += state.derivative(i) * (coeffs.coefficients[i] / h0);
        vertices.push(acc);
    }
    Ok(MotionRange::Simplex(vertices))
}
