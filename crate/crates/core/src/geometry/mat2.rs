use crate::linalg::Matrix;
use crate::{Error, Real, Result, Vec2};

/// Row-major 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Mat2<T> {
    pub const fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::diagonal(T::one(), T::one())
    }

    pub fn diagonal(x: T, y: T) -> Self {
        Self::new(x, T::zero(), T::zero(), y)
    }

    pub fn scaled_identity(s: T) -> Self {
        Self::diagonal(s, s)
    }

    #[inline]
    pub fn mul_vec(&self, v: Vec2<T>) -> Vec2<T> {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn symmetrized(&self) -> Self {
        let off = (self.b + self.c) * T::c(0.5);
        Self::new(self.a, off, off, self.d)
    }

    pub fn determinant(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn max_abs(&self) -> T {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    /// Eigen-decomposition of the symmetric part: eigenvalues in descending
    /// order with their unit eigenvectors.
    pub fn symmetric_eigen(&self) -> ([T; 2], [Vec2<T>; 2]) {
        let s = self.symmetrized();
        let half = T::c(0.5);
        let mean = (s.a + s.d) * half;
        let diff = (s.a - s.d) * half;
        let rad = diff.hypot(s.b);
        let (l1, l2) = (mean + rad, mean - rad);
        if s.b == T::zero() {
            return if s.a >= s.d {
                ([s.a, s.d], [Vec2::new(T::one(), T::zero()), Vec2::new(T::zero(), T::one())])
            } else {
                ([s.d, s.a], [Vec2::new(T::zero(), T::one()), Vec2::new(T::one(), T::zero())])
            };
        }
        // (s.b, l1 - s.a) and (l1 - s.d, s.b) both span the first eigenspace;
        // pick the better conditioned one.
        let v1 = if diff >= T::zero() { Vec2::new(l1 - s.d, s.b) } else { Vec2::new(s.b, l1 - s.a) };
        let v1 = v1.normalized().unwrap_or(Vec2::new(T::one(), T::zero()));
        ([l1, l2], [v1, v1.perp()])
    }

    pub fn max_eigenvalue(&self) -> T {
        self.symmetric_eigen().0[0]
    }

    pub fn check_symmetric(&self) -> Result<()> {
        let asym = (self.b - self.c).abs();
        if asym > T::SYMMETRY_TOL * T::one().max(self.max_abs()) || !asym.is_finite() {
            return Err(Error::NotSymmetric(asym.as_f64()));
        }
        Ok(())
    }

    pub fn check_psd(&self) -> Result<()> {
        self.check_symmetric()?;
        let min = self.symmetric_eigen().0[1];
        if min < -T::EIGEN_TOL * T::one().max(self.max_abs()) {
            return Err(Error::Indefinite(min.as_f64()));
        }
        Ok(())
    }

    pub fn sqrt_psd(&self) -> Result<Self> {
        self.check_psd()?;
        let ([l1, l2], [v1, v2]) = self.symmetric_eigen();
        let (s1, s2) = (l1.max(T::zero()).sqrt(), l2.max(T::zero()).sqrt());
        Ok(Self::new(
            s1 * v1.x * v1.x + s2 * v2.x * v2.x,
            s1 * v1.x * v1.y + s2 * v2.x * v2.y,
            s1 * v1.y * v1.x + s2 * v2.y * v2.x,
            s1 * v1.y * v1.y + s2 * v2.y * v2.y,
        ))
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> T {
        self.transpose().mul(self).max_eigenvalue().max(T::zero()).sqrt()
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_rows(&[[self.a, self.b], [self.c, self.d]])
    }

    /// Reads the leading 2x2 block.
    pub fn from_matrix(m: &Matrix<T>) -> Self {
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
    }
}
