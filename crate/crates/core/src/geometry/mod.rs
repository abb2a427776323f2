//! Planar convex sets, metric projection and set distances.
//!
//! Every [`ConvexSet`] variant exposes a support function, which is all the
//! GJK distance engine in [`convex_distance`] needs. [`brute_force_distance`]
//! is an independent sampling oracle used to cross-check it.

mod arc;
mod gjk;
mod mat2;
mod sampling;

pub use arc::{point_segment_distance, Arc, FreeSide};
pub use gjk::{convex_distance, convex_distance_with, GjkSettings};
pub use mat2::Mat2;
pub use sampling::{brute_force_distance, convex_hull, sample_boundary};

use crate::linalg::Matrix;
use crate::{Error, Real, Result, Vec2};

/// Closed Euclidean ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball<T> {
    pub center: Vec2<T>,
    pub radius: T,
}

impl<T: Real> Ball<T> {
    pub fn new(center: Vec2<T>, radius: T) -> Result<Self> {
        if !(radius >= T::zero()) || !center.is_finite() {
            return Err(Error::InvalidGeometry(format!("ball radius must be >= 0, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, p: Vec2<T>) -> bool {
        p.distance(self.center) <= self.radius
    }
}

impl<T: Real> From<Ball<T>> for ConvexSet<T> {
    fn from(b: Ball<T>) -> Self {
        ConvexSet::Disk { center: b.center, radius: b.radius }
    }
}

/// Metric projection of `point` onto the closed ball.
pub fn project_to_ball<T: Real>(point: Vec2<T>, ball: &Ball<T>) -> Vec2<T> {
    let offset = point - ball.center;
    let dist = offset.norm();
    if dist <= ball.radius {
        point
    } else {
        ball.center + offset * (ball.radius / dist)
    }
}

/// Compact convex subset of the plane.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexSet<T> {
    Point(Vec2<T>),
    Segment(Vec2<T>, Vec2<T>),
    Disk { center: Vec2<T>, radius: T },
    /// `{center + scale * shape^(1/2) u : |u| <= 1}` with `shape` symmetric PSD.
    Ellipse { center: Vec2<T>, shape: Mat2<T>, scale: T },
    /// Convex hull of the vertices (need not be in hull order).
    Polytope(Vec<Vec2<T>>),
}

impl<T: Real> ConvexSet<T> {
    pub fn disk(center: Vec2<T>, radius: T) -> Result<Self> {
        let s = ConvexSet::Disk { center, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn ellipse(center: Vec2<T>, shape: Mat2<T>, scale: T) -> Result<Self> {
        let s = ConvexSet::Ellipse { center, shape, scale };
        s.validate()?;
        Ok(s)
    }

    pub fn polytope(vertices: Vec<Vec2<T>>) -> Result<Self> {
        let s = ConvexSet::Polytope(vertices);
        s.validate()?;
        Ok(s)
    }

    /// Checks the variant invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexSet::Point(p) => finite(*p),
            ConvexSet::Segment(a, b) => finite(*a).and(finite(*b)),
            ConvexSet::Disk { center, radius } => {
                finite(*center)?;
                if !(*radius >= T::zero()) {
                    return Err(Error::InvalidGeometry(format!("disk radius must be >= 0, got {radius}")));
                }
                Ok(())
            }
            ConvexSet::Ellipse { center, shape, scale } => {
                finite(*center)?;
                if !(*scale >= T::zero()) {
                    return Err(Error::InvalidGeometry(format!("ellipse scale must be >= 0, got {scale}")));
                }
                shape.check_psd()
            }
            ConvexSet::Polytope(vs) => {
                if vs.is_empty() {
                    return Err(Error::InvalidGeometry("polytope needs at least one vertex".into()));
                }
                vs.iter().try_for_each(|&v| finite(v))
            }
        }
    }

    /// A point of the set; used to seed iterative algorithms.
    pub fn any_point(&self) -> Vec2<T> {
        match self {
            ConvexSet::Point(p) => *p,
            ConvexSet::Segment(a, b) => a.lerp(*b, T::c(0.5)),
            ConvexSet::Disk { center, .. } | ConvexSet::Ellipse { center, .. } => *center,
            ConvexSet::Polytope(vs) => vs[0],
        }
    }

    /// `argmax_{x in set} <x, direction>`.
    pub fn support_point(&self, direction: Vec2<T>) -> Result<Vec2<T>> {
        if direction.x == T::zero() && direction.y == T::zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(self.support_unchecked(direction))
    }

    pub(crate) fn support_unchecked(&self, d: Vec2<T>) -> Vec2<T> {
        match self {
            ConvexSet::Point(p) => *p,
            ConvexSet::Segment(a, b) => {
                if b.dot(d) > a.dot(d) {
                    *b
                } else {
                    *a
                }
            }
            ConvexSet::Disk { center, radius } => match d.normalized() {
                Some(u) => *center + u * *radius,
                None => *center,
            },
            ConvexSet::Ellipse { center, shape, scale } => {
                let qd = shape.mul_vec(d);
                let n2 = d.dot(qd);
                if n2 > T::zero() {
                    *center + qd * (*scale / n2.sqrt())
                } else {
                    *center
                }
            }
            ConvexSet::Polytope(vs) => {
                let mut best = vs[0];
                let mut best_dot = best.dot(d);
                for &v in &vs[1..] {
                    let dot = v.dot(d);
                    if dot > best_dot {
                        best = v;
                        best_dot = dot;
                    }
                }
                best
            }
        }
    }

    /// A ball containing the set (not necessarily the smallest one).
    pub fn bounding_ball(&self) -> Ball<T> {
        let half = T::c(0.5);
        let (center, radius) = match self {
            ConvexSet::Point(p) => (*p, T::zero()),
            ConvexSet::Segment(a, b) => (a.lerp(*b, half), a.distance(*b) * half),
            ConvexSet::Disk { center, radius } => (*center, *radius),
            ConvexSet::Ellipse { center, shape, scale } => (*center, *scale * shape.max_eigenvalue().max(T::zero()).sqrt()),
            ConvexSet::Polytope(vs) => {
                let (lo, hi) = vs.iter().fold((vs[0], vs[0]), |(lo, hi), v| {
                    (Vec2::new(lo.x.min(v.x), lo.y.min(v.y)), Vec2::new(hi.x.max(v.x), hi.y.max(v.y)))
                });
                let c = lo.lerp(hi, half);
                (c, vs.iter().fold(T::zero(), |r, v| r.max(v.distance(c))))
            }
        };
        Ball { center, radius }
    }

    /// `max_{x in set} |x - p|`. Exact except for anisotropic ellipses,
    /// where the bounding-ball radius gives an upper bound.
    pub fn max_distance_from(&self, p: Vec2<T>) -> T {
        match self {
            ConvexSet::Point(q) => p.distance(*q),
            ConvexSet::Segment(a, b) => p.distance(*a).max(p.distance(*b)),
            ConvexSet::Disk { center, radius } => p.distance(*center) + *radius,
            ConvexSet::Ellipse { center, shape, scale } => {
                p.distance(*center) + *scale * shape.max_eigenvalue().max(T::zero()).sqrt()
            }
            ConvexSet::Polytope(vs) => vs.iter().fold(T::zero(), |m, v| m.max(p.distance(*v))),
        }
    }

    /// Image of the set under `x -> a x + b`.
    pub fn affine_image(&self, a: &Mat2<T>, b: Vec2<T>) -> Self {
        let f = |p: Vec2<T>| a.mul_vec(p) + b;
        match self {
            ConvexSet::Point(p) => ConvexSet::Point(f(*p)),
            ConvexSet::Segment(p, q) => ConvexSet::Segment(f(*p), f(*q)),
            ConvexSet::Disk { center, radius } => ConvexSet::Ellipse {
                center: f(*center),
                shape: a.mul(&a.transpose()),
                scale: *radius,
            },
            ConvexSet::Ellipse { center, shape, scale } => ConvexSet::Ellipse {
                center: f(*center),
                shape: a.mul(shape).mul(&a.transpose()).symmetrized(),
                scale: *scale,
            },
            ConvexSet::Polytope(vs) => ConvexSet::Polytope(vs.iter().map(|&v| f(v)).collect()),
        }
    }

    pub fn translated(&self, b: Vec2<T>) -> Self {
        self.affine_image(&Mat2::identity(), b)
    }

    /// Membership test with absolute tolerance `tol`. Sampling-based
    /// oracles use this; the distance engine does not.
    pub fn contains_point(&self, p: Vec2<T>, tol: T) -> bool {
        match self {
            ConvexSet::Point(q) => p.distance(*q) <= tol,
            ConvexSet::Segment(a, b) => point_segment_distance(p, *a, *b) <= tol,
            ConvexSet::Disk { center, radius } => p.distance(*center) <= *radius + tol,
            ConvexSet::Ellipse { center, shape, scale } => {
                // In the eigenbasis the set is an axis-aligned ellipse with
                // semi-axes scale * sqrt(sigma_i).
                let (values, vectors) = shape.symmetric_eigen();
                let d = p - *center;
                let mut acc = T::zero();
                for (sigma, axis) in values.into_iter().zip(vectors) {
                    let z = d.dot(axis);
                    let semi = *scale * sigma.max(T::zero()).sqrt();
                    if semi <= tol {
                        if z.abs() > tol {
                            return false;
                        }
                    } else {
                        let r = (z.abs() - tol).max(T::zero()) / semi;
                        acc += r * r;
                    }
                }
                acc <= T::one()
            }
            ConvexSet::Polytope(vs) => {
                let hull = convex_hull(vs);
                match hull.len() {
                    1 => p.distance(hull[0]) <= tol,
                    2 => point_segment_distance(p, hull[0], hull[1]) <= tol,
                    n => (0..n).all(|i| {
                        let a = hull[i];
                        let b = hull[(i + 1) % n];
                        let len = a.distance(b);
                        (b - a).cross(p - a) >= -tol * len
                    }),
                }
            }
        }
    }
}

fn finite<T: Real>(p: Vec2<T>) -> Result<()> {
    if p.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("convex set"))
    }
}

/// Principal square root `R` of a symmetric PSD matrix, `R R^T = S`.
pub fn matrix_sqrt_psd<T: Real>(s: &Matrix<T>) -> Result<Matrix<T>> {
    s.sqrt_psd()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    #[test]
    fn projection_examples() {
        let unit = Ball::new(v(0.0, 0.0), 1.0).unwrap();
        assert_eq!(project_to_ball(v(3.0, 0.0), &unit), v(1.0, 0.0));
        assert_eq!(project_to_ball(v(0.2, 0.0), &unit), v(0.2, 0.0));
        let five = Ball::new(v(0.0, 0.0), 5.0).unwrap();
        assert_eq!(project_to_ball(v(3.0, 4.0), &five), v(3.0, 4.0));
    }

    #[test]
    fn projection_zero_radius_collapses_to_center() {
        let b = Ball::new(v(1.0, 2.0), 0.0).unwrap();
        assert_eq!(project_to_ball(v(5.0, -3.0), &b), v(1.0, 2.0));
    }

    #[test]
    fn support_examples() {
        let disk = ConvexSet::disk(v(0.0, 0.0), 2.0).unwrap();
        assert_eq!(disk.support_point(v(0.0, 1.0)).unwrap(), v(0.0, 2.0));
        let tri = ConvexSet::polytope(vec![v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0)]).unwrap();
        assert_eq!(tri.support_point(v(1.0, 0.0)).unwrap(), v(1.0, 0.0));
        let ell = ConvexSet::ellipse(v(0.0, 0.0), Mat2::diagonal(4.0, 1.0), 1.0).unwrap();
        let s = ell.support_point(v(1.0, 0.0)).unwrap();
        assert!((s - v(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ellipse_support_matches_dense_boundary_sampling() {
        let shape = Mat2::new(2.0, 0.7, 0.7, 1.0);
        let ell = ConvexSet::ellipse(v(0.5, -1.0), shape, 1.3).unwrap();
        let root = shape.sqrt_psd().unwrap();
        for k in 0..16 {
            let d = Vec2::from_angle(k as f64 * 0.4 + 0.1);
            let s = ell.support_point(d).unwrap();
            let best = (0..200_000)
                .map(|i| {
                    let u = Vec2::from_angle(i as f64 * std::f64::consts::TAU / 200_000.0);
                    v(0.5, -1.0) + root.mul_vec(u) * 1.3
                })
                .map(|p| p.dot(d))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((s.dot(d) - best).abs() < 1e-9, "direction {k}");
        }
    }

    #[test]
    fn zero_direction_is_an_error() {
        let disk = ConvexSet::disk(v(0.0, 0.0), 1.0).unwrap();
        assert_eq!(disk.support_point(v(0.0, 0.0)), Err(Error::ZeroDirection));
    }

    #[test]
    fn invalid_sets_rejected() {
        assert!(ConvexSet::disk(v(0.0, 0.0), -1.0).is_err());
        assert!(ConvexSet::<f64>::polytope(vec![]).is_err());
        assert!(ConvexSet::ellipse(v(0.0, 0.0), Mat2::new(1.0, 0.5, 0.4, 1.0), 1.0).is_err());
        assert!(ConvexSet::ellipse(v(0.0, 0.0), Mat2::diagonal(1.0, -1.0), 1.0).is_err());
    }

    #[test]
    fn sqrt_psd_examples() {
        let i = Matrix::<f64>::identity(2);
        assert!((&matrix_sqrt_psd(&i).unwrap() - &i).max_abs() < 1e-15);
        let d = Matrix::diagonal(&[4.0, 9.0]);
        let r = matrix_sqrt_psd(&d).unwrap();
        assert!((&r - &Matrix::diagonal(&[2.0, 3.0])).max_abs() < 1e-14);
        assert!(matrix_sqrt_psd(&Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]])).is_err());
        assert!(matrix_sqrt_psd(&Matrix::diagonal(&[1.0, -0.5])).is_err());
    }

    #[test]
    fn project_to_ball_works_in_f32() {
        let b = Ball::new(Vec2::new(0.0f32, 0.0), 1.0).unwrap();
        assert_eq!(project_to_ball(Vec2::new(0.0f32, -4.0), &b), Vec2::new(0.0, -1.0));
    }
}
