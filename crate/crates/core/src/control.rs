//! Proportional higher-order derivative (PhD) control.
//!
//! The n-th order robot `p^(n) = -sum_i k_i p^(i) + k_0 g` is driven to zero
//! motion at the goal `g`. Gains are the coefficients of the monic
//! characteristic polynomial `prod_i (lambda - lambda_i)`.

use num_complex::Complex;

use crate::linalg::Matrix;
use crate::{Error, Real, Result, Vec2};

/// Highest supported controller order.
pub const MAX_ORDER: usize = 8;

/// Stacked position and its first `n - 1` time derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotState<T> {
    derivatives: Vec<Vec2<T>>,
}

impl<T: Real> RobotState<T> {
    pub fn new(derivatives: Vec<Vec2<T>>) -> Result<Self> {
        if derivatives.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        if derivatives.iter().any(|d| !d.is_finite()) {
            return Err(Error::NonFinite("robot state"));
        }
        Ok(Self { derivatives })
    }

    /// Zero-motion state: at `position` with all higher derivatives zero.
    pub fn zero_motion(position: Vec2<T>, order: usize) -> Self {
        let mut derivatives = vec![Vec2::zero(); order.max(1)];
        derivatives[0] = position;
        Self { derivatives }
    }

    pub fn order(&self) -> usize {
        self.derivatives.len()
    }

    pub fn position(&self) -> Vec2<T> {
        self.derivatives[0]
    }

    pub fn derivative(&self, i: usize) -> Vec2<T> {
        self.derivatives[i]
    }

    pub fn derivatives(&self) -> &[Vec2<T>] {
        &self.derivatives
    }

    pub fn is_zero_motion(&self) -> bool {
        self.derivatives[1..].iter().all(|d| *d == Vec2::zero())
    }

    /// `(p0.x, p0.y, p1.x, p1.y, ...)`.
    pub fn to_flat(&self) -> Vec<T> {
        self.derivatives.iter().flat_map(|d| [d.x, d.y]).collect()
    }

    pub fn from_flat(flat: &[T]) -> Result<Self> {
        if flat.is_empty() || !flat.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: 2 * (flat.len() / 2).max(1), actual: flat.len() });
        }
        Self::new(flat.chunks_exact(2).map(|c| Vec2::new(c[0], c[1])).collect())
    }

    /// `||x - (g, 0, ..., 0)||`.
    pub fn error_norm(&self, goal: Vec2<T>) -> T {
        let first = (self.derivatives[0] - goal).norm_squared();
        self.derivatives[1..].iter().fold(first, |acc, d| acc + d.norm_squared()).sqrt()
    }

    /// Flattened `x - (g, 0, ..., 0)`.
    pub fn error_flat(&self, goal: Vec2<T>) -> Vec<T> {
        let mut flat = self.to_flat();
        flat[0] -= goal.x;
        flat[1] -= goal.y;
        flat
    }
}

/// PhD controller with validated Hurwitz characteristic roots.
#[derive(Clone, Debug, PartialEq)]
pub struct PhdController<T> {
    roots: Vec<Complex<T>>,
    gains: Vec<T>,
    companion: Matrix<T>,
}

impl<T: Real> PhdController<T> {
    /// Controller with real negative roots (non-overshooting).
    pub fn from_roots(roots: &[T]) -> Result<Self> {
        let complex: Vec<Complex<T>> = roots.iter().map(|&r| Complex::new(r, T::zero())).collect();
        Self::from_complex_roots(&complex)
    }

    /// Controller with arbitrary Hurwitz roots; non-real roots must come in
    /// conjugate pairs.
    pub fn from_complex_roots(roots: &[Complex<T>]) -> Result<Self> {
        let gains = gains_from_complex_roots(roots)?;
        let companion = companion_matrix(&gains);
        Ok(Self { roots: roots.to_vec(), gains, companion })
    }

    /// Controller of the given order with roots uniformly spaced over
    /// `[lo, hi]`.
    pub fn uniform(order: usize, lo: T, hi: T) -> Result<Self> {
        Self::from_roots(&uniform_roots(order, lo, hi)?)
    }

    pub fn order(&self) -> usize {
        self.gains.len()
    }

    pub fn gains(&self) -> &[T] {
        &self.gains
    }

    pub fn roots(&self) -> &[Complex<T>] {
        &self.roots
    }

    pub fn companion(&self) -> &Matrix<T> {
        &self.companion
    }

    /// All roots real (and, being Hurwitz, negative).
    pub fn is_non_overshooting(&self) -> bool {
        self.roots.iter().all(|r| r.im == T::zero())
    }

    /// Real parts of the roots if all of them are real.
    pub fn real_roots(&self) -> Option<Vec<T>> {
        self.is_non_overshooting().then(|| self.roots.iter().map(|r| r.re).collect())
    }

    /// Slowest decay rate: the root real part closest to zero.
    pub fn slowest_root(&self) -> T {
        self.roots.iter().fold(T::neg_infinity(), |m, r| m.max(r.re))
    }

    fn check_order(&self, state: &RobotState<T>) -> Result<()> {
        if state.order() != self.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), actual: state.order() });
        }
        Ok(())
    }

    /// Time derivative `(p^(1), ..., p^(n-1), p^(n))` of the closed loop.
    pub fn closed_loop_derivative(&self, state: &RobotState<T>, goal: Vec2<T>) -> Result<RobotState<T>> {
        self.check_order(state)?;
        let n = self.order();
        let x = state.derivatives();
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(&x[1..]);
        let mut top = goal * self.gains[0];
        for (k, d) in self.gains.iter().zip(x) {
            top -= *d * *k;
        }
        out.push(top);
        Ok(RobotState { derivatives: out })
    }

    /// Same derivative through the state-space form `(A ⊗ I_2)(x - g~)`.
    pub fn state_space_derivative(&self, state: &RobotState<T>, goal: Vec2<T>) -> Result<Vec<T>> {
        self.check_order(state)?;
        let big = self.companion.kron(&Matrix::identity(2));
        Ok(big.mul_vec(&state.error_flat(goal)))
    }
}

/// `order` roots uniformly spaced over `[lo, hi]`, ordered from `hi` down.
/// A single root sits at `hi`.
pub fn uniform_roots<T: Real>(order: usize, lo: T, hi: T) -> Result<Vec<T>> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::OrderOutOfRange(order));
    }
    if !(lo <= hi) {
        return Err(Error::InvalidParameter { name: "root_interval", reason: format!("lower end {lo} exceeds upper end {hi}") });
    }
    if order == 1 {
        return Ok(vec![hi]);
    }
    let step = (hi - lo) / T::c((order - 1) as f64);
    Ok((0..order).map(|i| if i + 1 == order { lo } else { hi - step * T::c(i as f64) }).collect())
}

/// Coefficients `c_0..c_{m-1}` (ascending, leading 1 omitted) of the monic
/// polynomial with the given roots.
pub(crate) fn monic_coefficients<T: Real>(roots: &[Complex<T>]) -> Vec<Complex<T>> {
    // poly holds ascending coefficients including the leading one.
    let mut poly = vec![Complex::new(T::one(), T::zero())];
    for &r in roots {
        let mut next = vec![Complex::new(T::zero(), T::zero()); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        poly = next;
    }
    poly.pop();
    poly
}

/// Gains `k_0..k_{n-1}` with `lambda^n + sum_i k_i lambda^i = prod_i (lambda - lambda_i)`.
pub fn gains_from_roots<T: Real>(roots: &[T]) -> Result<Vec<T>> {
    let complex: Vec<Complex<T>> = roots.iter().map(|&r| Complex::new(r, T::zero())).collect();
    gains_from_complex_roots(&complex)
}

pub fn gains_from_complex_roots<T: Real>(roots: &[Complex<T>]) -> Result<Vec<T>> {
    if roots.is_empty() || roots.len() > MAX_ORDER {
        return Err(Error::OrderOutOfRange(roots.len()));
    }
    for r in roots {
        if !(r.re < T::zero()) || !r.im.is_finite() || !r.re.is_finite() {
            return Err(Error::NotHurwitz(format!("{} + {}i", r.re, r.im)));
        }
    }
    check_conjugate_pairs(roots)?;
    Ok(monic_coefficients(roots).into_iter().map(|c| c.re).collect())
}

fn check_conjugate_pairs<T: Real>(roots: &[Complex<T>]) -> Result<()> {
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] || roots[i].im == T::zero() {
            continue;
        }
        let target = roots[i].conj();
        let tol = T::c(1e3) * T::epsilon() * target.norm();
        let partner = (0..roots.len()).find(|&j| j != i && !used[j] && (roots[j] - target).norm() <= tol);
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return Err(Error::UnpairedComplexRoot),
        }
    }
    Ok(())
}

/// Companion matrix: ones on the superdiagonal, `-(k_0..k_{n-1})` as last row.
pub fn companion_matrix<T: Real>(gains: &[T]) -> Matrix<T> {
    let n = gains.len();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = T::one();
    }
    for (j, &k) in gains.iter().enumerate() {
        a[(n - 1, j)] = -k;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gains_examples() {
        assert_eq!(gains_from_roots(&[-1.0]).unwrap(), vec![1.0]);
        assert_eq!(gains_from_roots(&[-1.0, -2.0]).unwrap(), vec![2.0, 3.0]);
        let g = gains_from_roots(&[-1.0f64, -1.5, -2.0]).unwrap();
        for (a, b) in g.iter().zip([3.0, 6.5, 4.5]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_pair_gains() {
        // (l + 1 - i)(l + 1 + i) = l^2 + 2l + 2
        let g = gains_from_complex_roots(&[Complex::new(-1.0, 1.0), Complex::new(-1.0, -1.0)]).unwrap();
        assert_eq!(g, vec![2.0, 2.0]);
        assert_eq!(gains_from_complex_roots(&[Complex::new(-1.0, 1.0)]), Err(Error::UnpairedComplexRoot));
    }

    #[test]
    fn rejects_bad_roots() {
        assert!(matches!(gains_from_roots(&[-1.0, 0.0]), Err(Error::NotHurwitz(_))));
        assert!(matches!(gains_from_roots(&[0.5]), Err(Error::NotHurwitz(_))));
        assert_eq!(gains_from_roots::<f64>(&[]), Err(Error::OrderOutOfRange(0)));
        assert_eq!(gains_from_roots(&[-1.0; 9]), Err(Error::OrderOutOfRange(9)));
    }

    #[test]
    fn companion_examples() {
        assert_eq!(companion_matrix(&[2.0, 3.0]), Matrix::from_rows(&[[0.0, 1.0], [-2.0, -3.0]]));
        assert_eq!(companion_matrix(&[1.0]), Matrix::from_rows(&[[-1.0]]));
    }

    #[test]
    fn uniform_roots_cover_interval() {
        assert_eq!(uniform_roots(2, -2.0, -1.0).unwrap(), vec![-1.0, -2.0]);
        assert_eq!(uniform_roots(3, -2.0, -1.0).unwrap(), vec![-1.0, -1.5, -2.0]);
        assert_eq!(uniform_roots(1, -2.0, -1.0).unwrap(), vec![-1.0]);
        assert!(uniform_roots(0, -2.0, -1.0).is_err());
    }

    #[test]
    fn closed_loop_example() {
        let ctrl = PhdController::from_roots(&[-1.0, -2.0]).unwrap();
        let x = RobotState::new(vec![Vec2::new(1.0, 0.0), Vec2::zero()]).unwrap();
        let dx = ctrl.closed_loop_derivative(&x, Vec2::zero()).unwrap();
        assert_eq!(dx.derivatives(), &[Vec2::zero(), Vec2::new(-2.0, 0.0)]);
        assert_eq!(ctrl.state_space_derivative(&x, Vec2::zero()).unwrap(), vec![0.0, 0.0, -2.0, 0.0]);
    }

    #[test]
    fn equilibrium_at_goal() {
        let ctrl = PhdController::uniform(4, -2.0, -1.0).unwrap();
        let goal = Vec2::new(0.3, -1.2);
        let dx = ctrl.closed_loop_derivative(&RobotState::zero_motion(goal, 4), goal).unwrap();
        assert!(dx.derivatives().iter().all(|d| *d == Vec2::zero()));
    }

    #[test]
    fn order_mismatch() {
        let ctrl = PhdController::from_roots(&[-1.0, -2.0]).unwrap();
        let x = RobotState::zero_motion(Vec2::zero(), 3);
        assert_eq!(ctrl.closed_loop_derivative(&x, Vec2::zero()), Err(Error::DimensionMismatch { expected: 2, actual: 3 }));
    }

    #[test]
    fn f32_controller() {
        let ctrl = PhdController::<f32>::uniform(3, -2.0, -1.0).unwrap();
        assert!((ctrl.gains()[1] - 6.5).abs() < 1e-5);
    }
}
