use crate::{Real, Vec2};

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance<T: Real>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == T::zero() {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).max(T::zero()).min(T::one());
    p.distance(a + ab * t)
}

/// Side of an arc's supporting circle on which free space lies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeSide {
    /// Free space is outside the circle (arcs of inflated obstacles).
    Outside,
    /// Free space is inside the circle (boundary of a disk workspace).
    Inside,
}

/// Counter-clockwise circular arc from `start` through `start + sweep` (radians).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc<T> {
    pub center: Vec2<T>,
    pub radius: T,
    pub start: T,
    pub sweep: T,
    pub free_side: FreeSide,
}

impl<T: Real> Arc<T> {
    pub fn full_circle(center: Vec2<T>, radius: T, free_side: FreeSide) -> Self {
        Self { center, radius, start: T::zero(), sweep: T::TAU(), free_side }
    }

    pub fn point_at(&self, angle: T) -> Vec2<T> {
        self.center + Vec2::from_angle(angle) * self.radius
    }

    pub fn start_point(&self) -> Vec2<T> {
        self.point_at(self.start)
    }

    pub fn end_point(&self) -> Vec2<T> {
        self.point_at(self.start + self.sweep)
    }

    pub fn is_full_circle(&self) -> bool {
        self.sweep >= T::TAU()
    }

    pub fn contains_angle(&self, angle: T) -> bool {
        if self.is_full_circle() {
            return true;
        }
        let tau = T::TAU();
        let mut rel = (angle - self.start) % tau;
        if rel < T::zero() {
            rel += tau;
        }
        rel <= self.sweep
    }

    pub fn distance_to_point(&self, p: Vec2<T>) -> T {
        let d = p - self.center;
        let r = d.norm();
        if r == T::zero() {
            return self.radius;
        }
        if self.contains_angle(d.angle()) {
            (r - self.radius).abs()
        } else {
            p.distance(self.start_point()).min(p.distance(self.end_point()))
        }
    }

    /// Polyline approximation lying on the free side of the arc, no farther
    /// than `eps` from it. Endpoints coincide with the arc's endpoints.
    ///
    /// Inside arcs use inscribed chords; outside arcs use circumscribed
    /// tangent segments. Either way, distances from free-space sets to the
    /// polyline never exceed the distance to the arc.
    pub fn polygonize(&self, eps: T) -> Vec<Vec2<T>> {
        if self.radius <= T::zero() || self.sweep <= T::zero() {
            return vec![self.center];
        }
        let two = T::c(2.0);
        let half_angle = match self.free_side {
            FreeSide::Inside => (T::one() - (eps / self.radius).min(T::one())).acos(),
            FreeSide::Outside => (self.radius / (self.radius + eps)).acos(),
        }
        .min(T::FRAC_PI_4());
        let mut segments = (self.sweep / (two * half_angle)).ceil().to_usize().unwrap_or(1).max(1);
        if self.is_full_circle() {
            segments = segments.max(4);
        }
        let step = self.sweep / T::c(segments as f64);
        match self.free_side {
            FreeSide::Inside => (0..=segments).map(|k| self.point_at(self.start + step * T::c(k as f64))).collect(),
            FreeSide::Outside => {
                let outer = self.radius / (step / two).cos();
                let mut pts = Vec::with_capacity(segments + 2);
                pts.push(self.start_point());
                for k in 1..=segments {
                    let angle = self.start + step * (T::c(k as f64) - T::c(0.5));
                    pts.push(self.center + Vec2::from_angle(angle) * outer);
                }
                pts.push(self.end_point());
                pts
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn segment_distance_cases() {
        let a = Vec2::new(0.0, 0.0);
        let b = Vec2::new(2.0, 0.0);
        assert_eq!(point_segment_distance(Vec2::new(1.0, 1.0), a, b), 1.0);
        assert_eq!(point_segment_distance(Vec2::new(-3.0, 4.0), a, b), 5.0);
        assert_eq!(point_segment_distance(Vec2::new(1.0, 1.0), a, a), 2f64.sqrt());
    }

    #[test]
    fn arc_distance_inside_and_outside_angular_range() {
        let arc = Arc { center: Vec2::new(0.0, 0.0), radius: 1.0, start: 0.0, sweep: FRAC_PI_2, free_side: FreeSide::Outside };
        assert!((arc.distance_to_point(Vec2::new(2.0, 2.0)) - (8f64.sqrt() - 1.0)).abs() < 1e-15);
        // Below the start ray: nearest point is the start point (1, 0).
        assert!((arc.distance_to_point(Vec2::new(1.0, -1.0)) - 1.0).abs() < 1e-15);
        assert_eq!(arc.distance_to_point(Vec2::new(0.0, 0.0)), 1.0);
    }

    #[test]
    fn arc_angle_wraps() {
        let arc = Arc { center: Vec2::new(0.0, 0.0), radius: 1.0, start: 1.5 * PI, sweep: PI, free_side: FreeSide::Outside };
        assert!(arc.contains_angle(0.0));
        assert!(arc.contains_angle(-0.4));
        assert!(!arc.contains_angle(PI));
    }

    #[test]
    fn polygonization_stays_on_free_side_within_eps() {
        let eps = 1e-3;
        for side in [FreeSide::Inside, FreeSide::Outside] {
            let arc = Arc { center: Vec2::new(1.0, -2.0), radius: 3.0, start: 0.3, sweep: 2.0, free_side: side };
            let pts = arc.polygonize(eps);
            assert_eq!(pts[0], arc.start_point());
            assert!((*pts.last().unwrap() - arc.end_point()).norm() < 1e-12);
            for w in pts.windows(2) {
                for k in 0..=20 {
                    let q = w[0].lerp(w[1], k as f64 / 20.0);
                    let r = q.distance(arc.center);
                    match side {
                        FreeSide::Inside => assert!(r <= 3.0 + 1e-12 && r >= 3.0 - eps - 1e-12),
                        FreeSide::Outside => assert!(r >= 3.0 - 1e-12 && r <= 3.0 + eps + 1e-12),
                    }
                }
            }
        }
    }
}
