use crate::control::{PhdController, RobotState};
use crate::geometry::Mat2;
use crate::linalg::{Lu, Matrix};
use crate::{Error, Real, Result, Vec2};

use super::MotionRange;

/// Solves `A^T P + P A + Q = 0` by vectorization:
/// `(I ⊗ A^T + A^T ⊗ I) vec(P) = -vec(Q)`, followed by one step of
/// iterative refinement.
pub fn solve_continuous_lyapunov<T: Real>(a: &Matrix<T>, q: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.rows();
    if !a.is_square() || q.rows() != n || q.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: q.rows() });
    }
    let at = a.transpose();
    let eye = Matrix::identity(n);
    let op = &eye.kron(&at) + &at.kron(&eye);
    let lu = Lu::new(&op)?;

    // Column-stacked vec.
    let vec_of = |m: &Matrix<T>| -> Vec<T> { (0..n * n).map(|k| m[(k % n, k / n)]).collect() };
    let unvec = |v: &[T]| Matrix::from_fn(n, n, |i, j| v[i + j * n]);

    let rhs: Vec<T> = vec_of(q).into_iter().map(|v| -v).collect();
    let mut p = unvec(&lu.solve(&rhs)?).symmetrized();
    let residual = lyapunov_residual_matrix(a, &p, q);
    let correction = unvec(&lu.solve(&vec_of(&residual).into_iter().map(|v| -v).collect::<Vec<_>>())?);
    p = (&p + &correction).symmetrized();
    Ok(p)
}

/// `A^T P + P A + Q`.
pub fn lyapunov_residual_matrix<T: Real>(a: &Matrix<T>, p: &Matrix<T>, q: &Matrix<T>) -> Matrix<T> {
    let lhs = &(&a.transpose() * p) + &(p * a);
    &lhs + q
}

/// Quadratic Lyapunov function `V(x) = ||x - g~||_P^2` for a PhD closed loop.
#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovCertificate<T> {
    order: usize,
    /// Full `2n x 2n` matrix acting on the stacked planar state.
    p: Matrix<T>,
    /// `P_n` when `P = P_n ⊗ I_2`.
    factor: Option<Matrix<T>>,
    decay: Matrix<T>,
    /// Projected shape `I^T P^-1 I`.
    shape: Mat2<T>,
    beta: T,
}

impl<T: Real> LyapunovCertificate<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.p
    }

    /// The `n x n` Kronecker factor, present when `C = I`.
    pub fn factor(&self) -> Option<&Matrix<T>> {
        self.factor.as_ref()
    }

    pub fn decay(&self) -> &Matrix<T> {
        &self.decay
    }

    pub fn shape(&self) -> Mat2<T> {
        self.shape
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Frobenius norm of `(A ⊗ I)^T P + P (A ⊗ I) + C^T C`.
    pub fn residual(&self, ctrl: &PhdController<T>) -> T {
        let big = ctrl.companion().kron(&Matrix::identity(2));
        let q = &self.decay.transpose() * &self.decay;
        lyapunov_residual_matrix(&big, &self.p, &q).frobenius_norm()
    }

    /// `||x - g~||_P`.
    pub fn weighted_norm(&self, state: &RobotState<T>, goal: Vec2<T>) -> Result<T> {
        if state.order() != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, actual: state.order() });
        }
        let v = match &self.factor {
            Some(pn) => {
                let e: Vec<Vec2<T>> =
                    state.derivatives().iter().enumerate().map(|(i, &d)| if i == 0 { d - goal } else { d }).collect();
                let mut acc = T::zero();
                for i in 0..self.order {
                    for j in 0..self.order {
                        acc += pn[(i, j)] * e[i].dot(e[j]);
                    }
                }
                acc
            }
            None => self.p.quadratic_form(&state.error_flat(goal)),
        };
        Ok(v.max(T::zero()).sqrt())
    }
}

/// Lyapunov certificate for the closed loop of `ctrl`.
///
/// `decay` is the `m x 2n` matrix `C`; `None` means `C = I_{2n}`, in which
/// case the Kronecker structure `P = P_n ⊗ I_2` is used and only an `n x n`
/// equation is solved.
pub fn solve_lyapunov<T: Real>(ctrl: &PhdController<T>, decay: Option<&Matrix<T>>) -> Result<LyapunovCertificate<T>> {
    let n = ctrl.order();
    let dim = 2 * n;
    if ctrl.slowest_root() >= T::zero() {
        return Err(Error::NotHurwitz(format!("{}", ctrl.slowest_root())));
    }
    let is_identity = decay.is_none_or(|c| *c == Matrix::identity(dim));
    let (p, factor, decay) = if is_identity {
        let pn = solve_continuous_lyapunov(ctrl.companion(), &Matrix::identity(n))?;
        (pn.kron(&Matrix::identity(2)), Some(pn), Matrix::identity(dim))
    } else {
        let c = decay.expect("non-identity decay matrix").clone();
        if c.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: c.cols() });
        }
        let big = ctrl.companion().kron(&Matrix::identity(2));
        let q = &c.transpose() * &c;
        (solve_continuous_lyapunov(&big, &q)?, None, c)
    };

    let min_eig = p.min_eigenvalue()?;
    if !(min_eig > T::zero()) {
        // Unobservable (A, C) leaves P singular.
        return Err(Error::NotPositiveDefinite(min_eig.as_f64()));
    }
    let shape = match &factor {
        Some(pn) => Mat2::scaled_identity(pn.inverse()?[(0, 0)]),
        None => Mat2::from_matrix(&p.inverse()?.block(0, 0, 2, 2)).symmetrized(),
    };
    let beta = lyapunov_beta_of(&shape, &p)?;
    Ok(LyapunovCertificate { order: n, p, factor, decay, shape, beta })
}

fn lyapunov_beta_of<T: Real>(shape: &Mat2<T>, p: &Matrix<T>) -> Result<T> {
    let p_norm = match p.rows() {
        0 => T::zero(),
        _ => p.max_eigenvalue()?,
    };
    Ok(shape.max_eigenvalue().max(T::zero()).sqrt() * p_norm.max(T::zero()).sqrt())
}

/// `beta = ||I^T P^-1 I||^(1/2) ||P||^(1/2)`.
pub fn lyapunov_beta<T: Real>(cert: &LyapunovCertificate<T>) -> T {
    cert.beta
}

/// Projected Lyapunov ellipsoid `E(g, I^T P^-1 I, ||x - g~||_P)`.
pub fn lyapunov_range<T: Real>(cert: &LyapunovCertificate<T>, state: &RobotState<T>, goal: Vec2<T>) -> Result<MotionRange<T>> {
    let scale = cert.weighted_norm(state, goal)?;
    Ok(MotionRange::ProjectedEllipsoid { center: goal, shape: cert.shape, scale })
}
