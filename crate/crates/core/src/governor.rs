//! Safety assessment of predicted motion and the reference governor.
//!
//! The governor `g` moves toward the planner's reference only as fast as the
//! safety level `Delta` (the clearance of the predicted motion range) allows.

use crate::environment::FreeSpace;
use crate::geometry::{project_to_ball, Ball};
use crate::prediction::MotionRange;
use crate::{Real, Result, Vec2};

/// Governor position.
pub type GovernorState<T> = Vec2<T>;

/// Clearance of the predicted motion range; zero when the robot is outside
/// the free space or on its boundary.
pub fn safety_level<T: Real>(fs: &FreeSpace<T>, range: &MotionRange<T>, robot_pos: Vec2<T>) -> Result<T> {
    if !fs.contains(robot_pos) || fs.point_boundary_distance(robot_pos) <= T::zero() {
        return Ok(T::zero());
    }
    fs.set_boundary_distance(&range.to_convex_set())
}

/// `k_g min(Delta, |r|) r / |r|`, zero at `r = 0`.
pub fn governor_velocity<T: Real>(delta: T, ref_vel: Vec2<T>, k_g: T) -> Vec2<T> {
    let speed = ref_vel.norm();
    if speed == T::zero() || delta <= T::zero() {
        return Vec2::zero();
    }
    ref_vel * (k_g * delta.min(speed) / speed)
}

/// Projection form: `k_g proj_{B(0, Delta)}(r)`.
pub fn governor_velocity_projection<T: Real>(delta: T, ref_vel: Vec2<T>, k_g: T) -> Vec2<T> {
    let ball = Ball { center: Vec2::zero(), radius: delta.max(T::zero()) };
    project_to_ball(ref_vel, &ball) * k_g
}

/// Shifted-ball form: `-k_g (g - proj_{B(g, Delta)}(g + r))`.
pub fn governor_velocity_shifted<T: Real>(g: Vec2<T>, delta: T, ref_vel: Vec2<T>, k_g: T) -> Vec2<T> {
    let ball = Ball { center: g, radius: delta.max(T::zero()) };
    -(g - project_to_ball(g + ref_vel, &ball)) * k_g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{build_free_space, Environment, Region};
    use crate::geometry::Mat2;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    fn annulus() -> FreeSpace<f64> {
        let env = Environment::new(
            Region::Disk { center: v(0.0, 0.0), radius: 3.0 },
            vec![Region::Disk { center: v(0.0, 0.0), radius: 1.0 }],
            0.0,
        );
        build_free_space(&env).unwrap()
    }

    #[test]
    fn velocity_examples() {
        assert_eq!(governor_velocity(0.0, v(3.0, -1.0), 4.0), v(0.0, 0.0));
        assert_eq!(governor_velocity(0.5, v(1.0, 0.0), 4.0), v(2.0, 0.0));
        assert_eq!(governor_velocity(10.0, v(1.0, 0.0), 4.0), v(4.0, 0.0));
        assert_eq!(governor_velocity(1.0, v(0.0, 0.0), 4.0), v(0.0, 0.0));
    }

    #[test]
    fn forms_agree() {
        let g = v(0.3, -2.0);
        for (delta, r) in [(0.5, v(1.0, 2.0)), (3.0, v(1.0, 2.0)), (0.0, v(1.0, 0.0)), (1.0, v(0.0, 0.0))] {
            let c = governor_velocity(delta, r, 4.0);
            assert!((c - governor_velocity_projection(delta, r, 4.0)).norm() < 1e-14);
            assert!((c - governor_velocity_shifted(g, delta, r, 4.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn safety_examples() {
        let fs = annulus();
        let outside = MotionRange::Simplex(vec![v(0.0, 0.0), v(0.1, 0.0)]);
        assert_eq!(safety_level(&fs, &outside, v(0.0, 0.0)).unwrap(), 0.0);

        let g = v(2.0, 0.0);
        let point = MotionRange::Simplex(vec![g]);
        assert!((safety_level(&fs, &point, g).unwrap() - 1.0).abs() < 1e-12);

        let disk = MotionRange::ProjectedEllipsoid { center: g, shape: Mat2::identity(), scale: 0.5 };
        assert!((safety_level(&fs, &disk, g).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn robot_on_boundary_is_unsafe() {
        let fs = annulus();
        let range = MotionRange::Simplex(vec![v(2.0, 0.0), v(3.0, 0.0)]);
        assert_eq!(safety_level(&fs, &range, v(3.0, 0.0)).unwrap(), 0.0);
    }
}
