//! Boundary sampling and the brute-force distance oracle.

use std::cmp::Ordering;

use super::{point_segment_distance, ConvexSet};
use crate::{Real, Vec2};

/// Convex hull in counter-clockwise order (Andrew's monotone chain).
/// Collinear points are dropped; a degenerate input yields 1 or 2 points.
pub fn convex_hull<T: Real>(points: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap_or(Ordering::Equal).then(a.y.partial_cmp(&b.y).unwrap_or(Ordering::Equal)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Vec2<T>> = Vec::with_capacity(pts.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2<T>>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= T::zero() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        // All points collinear: keep the extremes.
        return vec![pts[0], pts[pts.len() - 1]];
    }
    hull
}

/// `count` points on the boundary of the set (fewer for degenerate sets).
pub fn sample_boundary<T: Real>(set: &ConvexSet<T>, count: usize) -> Vec<Vec2<T>> {
    let count = count.max(2);
    let frac = |k: usize, n: usize| T::c(k as f64) / T::c(n as f64);
    match set {
        ConvexSet::Point(p) => vec![*p],
        ConvexSet::Segment(a, b) => (0..count).map(|k| a.lerp(*b, frac(k, count - 1))).collect(),
        ConvexSet::Disk { center, radius } => {
            (0..count).map(|k| *center + Vec2::from_angle(T::TAU() * frac(k, count)) * *radius).collect()
        }
        ConvexSet::Ellipse { center, shape, scale } => {
            let ([l1, l2], [v1, v2]) = shape.symmetric_eigen();
            let (a1, a2) = (v1 * (l1.max(T::zero()).sqrt() * *scale), v2 * (l2.max(T::zero()).sqrt() * *scale));
            (0..count)
                .map(|k| {
                    let (s, c) = (T::TAU() * frac(k, count)).sin_cos();
                    *center + a1 * c + a2 * s
                })
                .collect()
        }
        ConvexSet::Polytope(vs) => {
            let hull = convex_hull(vs);
            if hull.len() == 1 {
                return hull;
            }
            let n = hull.len();
            let edges: Vec<(Vec2<T>, Vec2<T>)> = if n == 2 { vec![(hull[0], hull[1])] } else { (0..n).map(|i| (hull[i], hull[(i + 1) % n])).collect() };
            let perimeter: T = edges.iter().map(|(a, b)| a.distance(*b)).sum();
            let mut out = Vec::with_capacity(count + n);
            for (a, b) in edges {
                let len = a.distance(b);
                let k = (T::c(count as f64) * len / perimeter).ceil().to_usize().unwrap_or(1).max(1);
                out.extend((0..k).map(|i| a.lerp(b, frac(i, k))));
            }
            if n == 2 {
                out.push(hull[1]);
            }
            out
        }
    }
}

/// Membership predicate with precomputed hull/eigenbasis.
fn membership<T: Real>(set: &ConvexSet<T>, tol: T) -> Box<dyn Fn(Vec2<T>) -> bool + '_> {
    match set {
        ConvexSet::Polytope(vs) => {
            let hull = convex_hull(vs);
            Box::new(move |p| match hull.len() {
                1 => p.distance(hull[0]) <= tol,
                2 => point_segment_distance(p, hull[0], hull[1]) <= tol,
                n => (0..n).all(|i| {
                    let (a, b) = (hull[i], hull[(i + 1) % n]);
                    (b - a).cross(p - a) >= -tol * a.distance(b)
                }),
            })
        }
        other => Box::new(move |p| other.contains_point(p, tol)),
    }
}

/// Minimum pairwise distance between `samples` boundary points of each set,
/// or 0 if a boundary sample of one set lies in the other.
///
/// Independent of the GJK engine: it only uses boundary parametrizations and
/// membership tests. Never smaller than the true distance (up to rounding).
pub fn brute_force_distance<T: Real>(a: &ConvexSet<T>, b: &ConvexSet<T>, samples: usize) -> T {
    let sa = sample_boundary(a, samples);
    let sb = sample_boundary(b, samples);
    let scale = sa.iter().chain(&sb).fold(T::one(), |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let tol = T::epsilon() * T::c(64.0) * scale;
    let in_b = membership(b, tol);
    let in_a = membership(a, tol);
    if sa.iter().any(|&p| in_b(p)) || sb.iter().any(|&p| in_a(p)) {
        return T::zero();
    }
    closest_pair(&sa, &sb)
}

/// Exact minimum over all pairs, pruned by a sweep along the axis joining the
/// two clouds' centroids.
fn closest_pair<T: Real>(sa: &[Vec2<T>], sb: &[Vec2<T>]) -> T {
    let centroid = |s: &[Vec2<T>]| s.iter().fold(Vec2::zero(), |acc, &p| acc + p) / T::c(s.len() as f64);
    let axis = (centroid(sb) - centroid(sa)).normalized().unwrap_or(Vec2::new(T::one(), T::zero()));
    let mut proj_b: Vec<(T, Vec2<T>)> = sb.iter().map(|&p| (p.dot(axis), p)).collect();
    proj_b.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
    let keys: Vec<T> = proj_b.iter().map(|e| e.0).collect();

    // Visit a's points nearest to b first so the bound tightens quickly.
    let mut order: Vec<(T, Vec2<T>)> = sa.iter().map(|&p| (p.dot(axis), p)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(Ordering::Equal));

    let mut best = T::infinity();
    for (pa, p) in order {
        let start = keys.partition_point(|&k| k < pa);
        for &(pb, q) in proj_b[start..].iter() {
            if pb - pa >= best {
                break;
            }
            best = best.min(p.distance(q));
        }
        for &(pb, q) in proj_b[..start].iter().rev() {
            if pa - pb >= best {
                break;
            }
            best = best.min(p.distance(q));
        }
    }
    best
}
