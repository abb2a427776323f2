//! Clipping of piece boundaries to the free-space boundary.

use super::{BoundaryPrimitive, InflatedObstacle, Region};
use crate::geometry::{Arc, FreeSide};
use crate::{Real, Vec2};

const SAMPLES: usize = 512;
const BISECTIONS: usize = 60;

#[derive(Clone, Copy, PartialEq)]
enum Owner {
    Workspace,
    Obstacle(usize),
}

/// Boundaries of the eroded workspace and the inflated obstacles, restricted
/// to the parts that bound the free space.
///
/// Transitions are located by sampling and bisection; a sub-sample overlap
/// may survive, which only adds boundary points outside the free space.
pub(super) fn clipped_boundary<T: Real>(eroded: &Region<T>, inflated: &[InflatedObstacle<T>]) -> Vec<BoundaryPrimitive<T>> {
    let mut pieces: Vec<(Owner, BoundaryPrimitive<T>)> = Vec::new();
    match eroded {
        Region::Disk { center, radius } => {
            pieces.push((Owner::Workspace, BoundaryPrimitive::Arc(Arc::full_circle(*center, *radius, FreeSide::Inside))))
        }
        Region::Polygon(vs) => {
            let n = vs.len();
            pieces.extend((0..n).map(|i| (Owner::Workspace, BoundaryPrimitive::Segment(vs[i], vs[(i + 1) % n]))));
        }
    }
    for (j, o) in inflated.iter().enumerate() {
        pieces.extend(o.boundary().into_iter().map(|p| (Owner::Obstacle(j), p)));
    }

    let scale = eroded.bounding_ball();
    let tol = T::c(64.0) * T::epsilon() * (scale.radius + scale.center.norm()).max(T::one());
    let keep = |owner: Owner, q: Vec2<T>| -> bool {
        if owner != Owner::Workspace && eroded.signed_distance(q) > tol {
            return false;
        }
        inflated.iter().enumerate().all(|(k, o)| owner == Owner::Obstacle(k) || o.signed_distance(q) >= -tol)
    };

    let mut out = Vec::new();
    for (owner, prim) in pieces {
        if prim.length() <= T::zero() {
            continue;
        }
        for (u0, u1) in kept_intervals(|u| keep(owner, prim.point_at(u))) {
            if u1 > u0 {
                out.push(prim.sub(u0, u1));
            }
        }
    }
    out
}

/// Maximal parameter intervals in `[0, 1]` where `keep` holds.
fn kept_intervals<T: Real>(keep: impl Fn(T) -> bool) -> Vec<(T, T)> {
    let at = |k: usize| T::c(k as f64) / T::c(SAMPLES as f64);
    let flags: Vec<bool> = (0..=SAMPLES).map(|k| keep(at(k))).collect();
    let boundary = |lo: T, hi: T, lo_kept: bool| -> T {
        let (mut lo, mut hi) = (lo, hi);
        for _ in 0..BISECTIONS {
            let mid = (lo + hi) * T::c(0.5);
            if keep(mid) == lo_kept {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo_kept {
            lo
        } else {
            hi
        }
    };
    let mut intervals = Vec::new();
    let mut start = if flags[0] { Some(T::zero()) } else { None };
    for k in 0..SAMPLES {
        match (flags[k], flags[k + 1]) {
            (true, false) => {
                let end = boundary(at(k), at(k + 1), true);
                intervals.push((start.take().unwrap_or(at(k)), end));
            }
            (false, true) => start = Some(boundary(at(k), at(k + 1), false)),
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push((s, T::one()));
    }
    intervals
}
