//! Gilbert-Johnson-Keerthi distance between planar convex sets.

use super::ConvexSet;
use crate::{Error, Real, Result, Vec2};

#[derive(Clone, Copy, Debug)]
pub struct GjkSettings<T> {
    /// Guaranteed absolute accuracy of the returned distance.
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for GjkSettings<T> {
    fn default() -> Self {
        Self { tolerance: T::DISTANCE_TOL, max_iterations: 128 }
    }
}

/// Minimum Euclidean distance between two convex sets, 0 when they intersect.
pub fn convex_distance<T: Real>(a: &ConvexSet<T>, b: &ConvexSet<T>) -> Result<T> {
    convex_distance_with(a, b, &GjkSettings::default())
}

/// [`convex_distance`] with explicit settings.
///
/// The result is the length of an actual point pair `a - b`, so it never
/// underestimates the distance; it exceeds it by at most `tolerance`.
pub fn convex_distance_with<T: Real>(a: &ConvexSet<T>, b: &ConvexSet<T>, settings: &GjkSettings<T>) -> Result<T> {
    // Disks reduce to their centres: d(disk, X) = max(0, d(centre, X) - radius).
    if let (ConvexSet::Disk { center: c1, radius: r1 }, ConvexSet::Disk { center: c2, radius: r2 }) = (a, b) {
        return Ok((c1.distance(*c2) - *r1 - *r2).max(T::zero()));
    }
    if let ConvexSet::Disk { center, radius } = a {
        let core = convex_distance_with(&ConvexSet::Point(*center), b, settings)?;
        return Ok((core - *radius).max(T::zero()));
    }
    if let ConvexSet::Disk { center, radius } = b {
        let core = convex_distance_with(a, &ConvexSet::Point(*center), settings)?;
        return Ok((core - *radius).max(T::zero()));
    }

    let support = |d: Vec2<T>| a.support_unchecked(d) - b.support_unchecked(-d);
    // Stop well inside the requested accuracy so that callers comparing two
    // distances still see differences below `tolerance`.
    let target = settings.tolerance * T::c(0.01);

    let mut simplex = Simplex::new(a.any_point() - b.any_point());
    let mut v = simplex.points[0];
    let mut lower = T::zero();
    let mut dist = v.norm();

    for _ in 0..settings.max_iterations {
        if dist == T::zero() {
            return Ok(T::zero());
        }
        let w = support(-v);
        lower = lower.max(v.dot(w) / dist);
        if dist - lower <= target {
            return Ok(dist);
        }
        if simplex.contains(w) {
            break;
        }
        simplex.push(w);
        match simplex.reduce() {
            None => return Ok(T::zero()),
            Some(next) => {
                let next_dist = next.norm();
                if next_dist >= dist {
                    // No progress: rounding has taken over.
                    break;
                }
                v = next;
                dist = next_dist;
            }
        }
    }
    if dist - lower <= settings.tolerance {
        Ok(dist)
    } else {
        Err(Error::DistanceNotConverged { iterations: settings.max_iterations, lower: lower.as_f64(), upper: dist.as_f64() })
    }
}

struct Simplex<T> {
    points: [Vec2<T>; 3],
    len: usize,
}

impl<T: Real> Simplex<T> {
    fn new(p: Vec2<T>) -> Self {
        Self { points: [p; 3], len: 1 }
    }

    fn contains(&self, w: Vec2<T>) -> bool {
        self.points[..self.len].contains(&w)
    }

    fn push(&mut self, w: Vec2<T>) {
        debug_assert!(self.len < 3);
        self.points[self.len] = w;
        self.len += 1;
    }

    fn set(&mut self, pts: &[Vec2<T>]) {
        self.points[..pts.len()].copy_from_slice(pts);
        self.len = pts.len();
    }

    /// Replaces the simplex by the smallest face containing the point closest
    /// to the origin and returns that point; `None` if the origin is enclosed.
    fn reduce(&mut self) -> Option<Vec2<T>> {
        match self.len {
            1 => Some(self.points[0]),
            2 => {
                let (v, keep) = closest_on_segment(self.points[0], self.points[1]);
                let pts = self.points;
                match keep {
                    Keep::A => self.set(&[pts[0]]),
                    Keep::B => self.set(&[pts[1]]),
                    Keep::Both => {}
                }
                Some(v)
            }
            _ => {
                let [a, b, c] = self.points;
                let area = (b - a).cross(c - a);
                if area != T::zero() {
                    let s = area.signum();
                    let inside = (b - a).cross(-a) * s >= T::zero()
                        && (c - b).cross(-b) * s >= T::zero()
                        && (a - c).cross(-c) * s >= T::zero();
                    if inside {
                        return None;
                    }
                }
                let mut best: Option<Candidate<T>> = None;
                for (p, q) in [(a, b), (b, c), (c, a)] {
                    let (v, keep) = closest_on_segment(p, q);
                    let d = v.norm_squared();
                    if best.as_ref().is_none_or(|(bd, ..)| d < *bd) {
                        best = Some((d, v, [p, q], keep));
                    }
                }
                let (_, v, [p, q], keep) = best.expect("three edges");
                match keep {
                    Keep::A => self.set(&[p]),
                    Keep::B => self.set(&[q]),
                    Keep::Both => self.set(&[p, q]),
                }
                Some(v)
            }
        }
    }
}

/// Squared distance, closest point, kept edge and which vertices survive.
type Candidate<T> = (T, Vec2<T>, [Vec2<T>; 2], Keep);

enum Keep {
    A,
    B,
    Both,
}

fn closest_on_segment<T: Real>(a: Vec2<T>, b: Vec2<T>) -> (Vec2<T>, Keep) {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == T::zero() {
        return (a, Keep::A);
    }
    let t = -a.dot(ab) / len2;
    if t <= T::zero() {
        (a, Keep::A)
    } else if t >= T::one() {
        (b, Keep::B)
    } else {
        // Component of a orthogonal to ab; avoids cancellation in a + t ab.
        let n = ab.perp();
        let v = n * (a.dot(n) / len2);
        (v, Keep::Both)
    }
}
