//! Path-pursuit reference planner: move toward the farthest point along a
//! piecewise-linear path that lies in the current clearance ball.

use crate::environment::FreeSpace;
use crate::geometry::point_segment_distance;
use crate::{Error, Real, Result, Vec2};

/// Piecewise-linear path parametrized by normalized arc length.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferencePath<T> {
    waypoints: Vec<Vec2<T>>,
    /// Normalized cumulative arc length at each waypoint.
    alphas: Vec<T>,
    length: T,
}

impl<T: Real> ReferencePath<T> {
    pub fn new(waypoints: Vec<Vec2<T>>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::TooFewWaypoints(waypoints.len()));
        }
        if waypoints.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("path waypoint"));
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        let mut acc = T::zero();
        cumulative.push(acc);
        for w in waypoints.windows(2) {
            acc += w[0].distance(w[1]);
            cumulative.push(acc);
        }
        if !(acc > T::zero()) {
            return Err(Error::DegeneratePath);
        }
        let alphas = cumulative.into_iter().map(|s| s / acc).collect();
        Ok(Self { waypoints, alphas, length: acc })
    }

    pub fn waypoints(&self) -> &[Vec2<T>] {
        &self.waypoints
    }

    pub fn length(&self) -> T {
        self.length
    }

    /// `P(1)`.
    pub fn goal(&self) -> Vec2<T> {
        self.waypoints[self.waypoints.len() - 1]
    }

    /// `P(alpha)` for `alpha` clamped to `[0, 1]`.
    pub fn point_at(&self, alpha: T) -> Vec2<T> {
        let alpha = alpha.max(T::zero()).min(T::one());
        let i = self.alphas.partition_point(|&a| a < alpha).clamp(1, self.waypoints.len() - 1);
        let (a0, a1) = (self.alphas[i - 1], self.alphas[i]);
        if a1 <= a0 {
            return self.waypoints[i];
        }
        self.waypoints[i - 1].lerp(self.waypoints[i], (alpha - a0) / (a1 - a0))
    }

    /// Closest path point `(alpha, point)`; ties go to the larger `alpha`.
    pub fn closest_point(&self, p: Vec2<T>) -> (T, Vec2<T>) {
        let mut best = (T::zero(), self.waypoints[0], T::infinity());
        for i in 0..self.waypoints.len() - 1 {
            let (a, b) = (self.waypoints[i], self.waypoints[i + 1]);
            let d = b - a;
            let len2 = d.norm_squared();
            let t = if len2 > T::zero() { ((p - a).dot(d) / len2).max(T::zero()).min(T::one()) } else { T::zero() };
            let q = a + d * t;
            let dist = p.distance(q);
            if dist <= best.2 {
                best = (self.alphas[i] + (self.alphas[i + 1] - self.alphas[i]) * t, q, dist);
            }
        }
        (best.0, best.1)
    }

    /// `d(p, P)`.
    pub fn distance_to(&self, p: Vec2<T>) -> T {
        self.waypoints.windows(2).fold(T::infinity(), |m, w| m.min(point_segment_distance(p, w[0], w[1])))
    }

    /// Checks that every waypoint has positive clearance.
    pub fn check_clearance(&self, fs: &FreeSpace<T>) -> Result<()> {
        for (i, &w) in self.waypoints.iter().enumerate() {
            if !fs.contains(w) || !(fs.point_boundary_distance(w) > T::zero()) {
                return Err(Error::InvalidGeometry(format!(
                    "path waypoint {i} at ({}, {}) is not in the interior of the free space",
                    w.x, w.y
                )));
            }
        }
        Ok(())
    }
}

/// Result of projecting a governor position onto the path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectedGoal<T> {
    pub alpha: T,
    pub point: Vec2<T>,
    /// False when no path point lies in the clearance ball and the closest
    /// path point was used instead.
    pub in_domain: bool,
}

/// Largest `alpha` with `|P(alpha) - g| <= d(g, dF)`.
pub fn projected_path_goal<T: Real>(path: &ReferencePath<T>, g: Vec2<T>, fs: &FreeSpace<T>) -> ProjectedGoal<T> {
    projected_path_goal_with_radius(path, g, fs.point_boundary_distance(g))
}

/// Largest `alpha` with `|P(alpha) - g| <= radius`.
pub fn projected_path_goal_with_radius<T: Real>(path: &ReferencePath<T>, g: Vec2<T>, radius: T) -> ProjectedGoal<T> {
    let wp = &path.waypoints;
    let r2 = radius * radius;
    for i in (0..wp.len() - 1).rev() {
        let (a, b) = (wp[i], wp[i + 1]);
        let d = b - a;
        let e = a - g;
        let qa = d.norm_squared();
        let qc = e.norm_squared() - r2;
        let t = if qa == T::zero() {
            if qc <= T::zero() {
                Some(T::one())
            } else {
                None
            }
        } else {
            let qb = d.dot(e);
            let disc = qb * qb - qa * qc;
            if disc < T::zero() {
                None
            } else {
                let root = disc.sqrt();
                let (t1, t2) = ((-qb - root) / qa, (-qb + root) / qa);
                (t2 >= T::zero() && t1 <= T::one()).then(|| t2.min(T::one()))
            }
        };
        if let Some(t) = t {
            let (a0, a1) = (path.alphas[i], path.alphas[i + 1]);
            return ProjectedGoal { alpha: a0 + (a1 - a0) * t, point: a + d * t, in_domain: true };
        }
    }
    let (alpha, point) = path.closest_point(g);
    ProjectedGoal { alpha, point, in_domain: false }
}

/// Whether `d(g, P) <= d(g, dF)`.
pub fn in_planner_domain<T: Real>(path: &ReferencePath<T>, g: Vec2<T>, fs: &FreeSpace<T>) -> bool {
    path.distance_to(g) <= fs.point_boundary_distance(g)
}

/// `-k_path (g - P*(g))`.
pub fn reference_field<T: Real>(path: &ReferencePath<T>, g: Vec2<T>, fs: &FreeSpace<T>, k_path: T) -> Vec2<T> {
    (projected_path_goal(path, g, fs).point - g) * k_path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{build_free_space, Environment, Region};

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    #[test]
    fn path_validation() {
        assert_eq!(ReferencePath::new(vec![v(0.0, 0.0)]), Err(Error::TooFewWaypoints(1)));
        assert_eq!(ReferencePath::new(vec![v(1.0, 1.0), v(1.0, 1.0)]), Err(Error::DegeneratePath));
    }

    #[test]
    fn arc_length_parametrization() {
        let p = ReferencePath::new(vec![v(0.0, 0.0), v(3.0, 0.0), v(3.0, 1.0)]).unwrap();
        assert_eq!(p.length(), 4.0);
        assert_eq!(p.point_at(0.5), v(2.0, 0.0));
        assert_eq!(p.point_at(0.875), v(3.0, 0.5));
        assert_eq!(p.point_at(1.0), v(3.0, 1.0));
        assert_eq!(p.point_at(-1.0), v(0.0, 0.0));
    }

    #[test]
    fn whole_path_inside_ball() {
        let p = ReferencePath::new(vec![v(0.0, 0.0), v(1.0, 0.0)]).unwrap();
        let pg = projected_path_goal_with_radius(&p, v(0.5, 0.0), 2.0);
        assert_eq!((pg.alpha, pg.point, pg.in_domain), (1.0, v(1.0, 0.0), true));
    }

    #[test]
    fn ball_cuts_segment() {
        let p = ReferencePath::new(vec![v(0.0, 0.0), v(1.0, 0.0)]).unwrap();
        let pg = projected_path_goal_with_radius(&p, v(0.0, 0.0), 0.5);
        assert_eq!((pg.alpha, pg.point), (0.5, v(0.5, 0.0)));
    }

    #[test]
    fn last_intersection_wins() {
        // Leaves the unit ball around the origin and comes back.
        let p = ReferencePath::new(vec![v(-0.5, 0.0), v(3.0, 0.0), v(0.0, 0.5), v(0.0, 3.0)]).unwrap();
        let pg = projected_path_goal_with_radius(&p, v(0.0, 0.0), 1.0);
        assert!((pg.point - v(0.0, 1.0)).norm() < 1e-12);
        let dense = (0..=100_000)
            .map(|k| k as f64 / 100_000.0)
            .filter(|&a| p.point_at(a).norm() <= 1.0)
            .fold(0.0, f64::max);
        assert!((pg.alpha - dense).abs() < 1e-4);
    }

    #[test]
    fn outside_domain_falls_back_to_closest_point() {
        let p = ReferencePath::new(vec![v(0.0, 0.0), v(1.0, 0.0)]).unwrap();
        let pg = projected_path_goal_with_radius(&p, v(0.5, 2.0), 1.0);
        assert!(!pg.in_domain);
        assert_eq!(pg.point, v(0.5, 0.0));
    }

    #[test]
    fn grazing_contact() {
        let p = ReferencePath::new(vec![v(-1.0, 1.0), v(1.0, 1.0)]).unwrap();
        let pg = projected_path_goal_with_radius(&p, v(0.0, 0.0), 1.0);
        assert!(pg.in_domain);
        assert!((pg.point - v(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn field_examples() {
        let env = Environment::new(Region::Polygon(vec![v(-5.0, -5.0), v(5.0, -5.0), v(5.0, 5.0), v(-5.0, 5.0)]), vec![], 0.0);
        let fs = build_free_space(&env).unwrap();
        let p = ReferencePath::new(vec![v(0.0, 0.0), v(1.0, 1.0)]).unwrap();
        assert_eq!(reference_field(&p, v(1.0, 1.0), &fs, 1.0), v(0.0, 0.0));
        let p = ReferencePath::new(vec![v(0.0, 0.0), v(0.3, 0.4), v(3.0, 4.0)]).unwrap();
        // Clearance 5 around the origin reaches (3, 4) exactly.
        let r = reference_field(&p, v(0.0, 0.0), &fs, 1.0);
        assert!((r - v(3.0, 4.0)).norm() < 1e-12);
    }
}
