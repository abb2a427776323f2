//! Workspace, obstacles and the free space of a disk-shaped robot.
//!
//! The free space is the workspace eroded by the robot radius minus the
//! obstacles dilated by it. Point queries use explicit boundary primitives
//! (segments and circular arcs clipped to the free-space boundary). Convex
//! set queries are answered piecewise against the eroded workspace and each
//! dilated obstacle, which is exact for sets lying in the free space.

mod clip;

use crate::geometry::{convex_distance, convex_hull, point_segment_distance, Arc, Ball, ConvexSet, FreeSide};
use crate::{Error, Real, Result, Vec2};

/// Default chordal tolerance for polygonizing arcs.
pub const DEFAULT_ARC_TOLERANCE: f64 = 1e-3;

/// A closed convex planar region.
#[derive(Clone, Debug, PartialEq)]
pub enum Region<T> {
    Disk { center: Vec2<T>, radius: T },
    /// Convex polygon; vertices may be given in any order.
    Polygon(Vec<Vec2<T>>),
}

impl<T: Real> Region<T> {
    /// Signed distance: negative inside, zero on the boundary.
    pub fn signed_distance(&self, p: Vec2<T>) -> T {
        match self {
            Region::Disk { center, radius } => p.distance(*center) - *radius,
            Region::Polygon(vs) => polygon_signed_distance(vs, p),
        }
    }

    pub fn bounding_ball(&self) -> Ball<T> {
        match self {
            Region::Disk { center, radius } => Ball { center: *center, radius: *radius },
            Region::Polygon(vs) => ConvexSet::Polytope(vs.clone()).bounding_ball(),
        }
    }

    pub fn area(&self) -> T {
        match self {
            Region::Disk { radius, .. } => T::PI() * *radius * *radius,
            Region::Polygon(vs) => polygon_area(vs),
        }
    }

    pub fn to_convex_set(&self) -> ConvexSet<T> {
        match self {
            Region::Disk { center, radius } => ConvexSet::Disk { center: *center, radius: *radius },
            Region::Polygon(vs) => ConvexSet::Polytope(vs.clone()),
        }
    }

    /// Validates and returns the canonical form (counter-clockwise hull for
    /// polygons).
    fn canonical(&self, what: &str) -> Result<Self> {
        match self {
            Region::Disk { center, radius } => {
                if !center.is_finite() || !radius.is_finite() || !(*radius > T::zero()) {
                    return Err(Error::InvalidGeometry(format!("{what}: disk radius must be positive and finite")));
                }
                Ok(self.clone())
            }
            Region::Polygon(vs) => {
                if vs.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidGeometry(format!("{what}: non-finite vertex")));
                }
                let hull = convex_hull(vs);
                if hull.len() < 3 {
                    return Err(Error::InvalidGeometry(format!("{what}: polygon needs 3 non-collinear vertices")));
                }
                let scale = hull.iter().fold(T::one(), |m, v| m.max(v.x.abs()).max(v.y.abs()));
                let tol = T::c(1e-9) * scale;
                if vs.iter().any(|&v| polygon_signed_distance(&hull, v) < -tol) {
                    return Err(Error::InvalidGeometry(format!("{what}: polygon is not convex")));
                }
                Ok(Region::Polygon(hull))
            }
        }
    }
}

/// Area of a simple polygon given in counter-clockwise order.
fn polygon_area<T: Real>(vs: &[Vec2<T>]) -> T {
    let n = vs.len();
    (0..n).map(|i| vs[i].cross(vs[(i + 1) % n])).sum::<T>() * T::c(0.5)
}

/// Outward unit normal of the counter-clockwise edge `a -> b`.
fn outward_normal<T: Real>(a: Vec2<T>, b: Vec2<T>) -> Vec2<T> {
    let e = b - a;
    Vec2::new(e.y, -e.x) / e.norm()
}

/// Signed distance to a counter-clockwise convex polygon.
fn polygon_signed_distance<T: Real>(vs: &[Vec2<T>], p: Vec2<T>) -> T {
    let n = vs.len();
    let mut max_plane = T::neg_infinity();
    let mut min_edge = T::infinity();
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        max_plane = max_plane.max(outward_normal(a, b).dot(p - a));
        min_edge = min_edge.min(point_segment_distance(p, a, b));
    }
    if max_plane <= T::zero() {
        max_plane
    } else {
        min_edge
    }
}

/// Workspace, obstacles and robot radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Environment<T> {
    pub workspace: Region<T>,
    pub obstacles: Vec<Region<T>>,
    pub robot_radius: T,
}

impl<T: Real> Environment<T> {
    pub fn new(workspace: Region<T>, obstacles: Vec<Region<T>>, robot_radius: T) -> Self {
        Self { workspace, obstacles, robot_radius }
    }

    /// Checks the geometry and returns a copy with canonical polygons.
    pub fn validated(&self) -> Result<Self> {
        if !(self.robot_radius >= T::zero()) || !self.robot_radius.is_finite() {
            return Err(Error::InvalidGeometry(format!("robot radius must be >= 0, got {}", self.robot_radius)));
        }
        let workspace = self.workspace.canonical("workspace")?;
        let obstacles = self
            .obstacles
            .iter()
            .enumerate()
            .map(|(i, o)| o.canonical(&format!("obstacle {i}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { workspace, obstacles, robot_radius: self.robot_radius })
    }
}

/// Piece of the free-space boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryPrimitive<T> {
    Segment(Vec2<T>, Vec2<T>),
    Arc(Arc<T>),
}

impl<T: Real> BoundaryPrimitive<T> {
    pub fn distance_to_point(&self, p: Vec2<T>) -> T {
        match self {
            BoundaryPrimitive::Segment(a, b) => point_segment_distance(p, *a, *b),
            BoundaryPrimitive::Arc(arc) => arc.distance_to_point(p),
        }
    }

    /// Point at normalized parameter `u` in `[0, 1]`.
    pub fn point_at(&self, u: T) -> Vec2<T> {
        match self {
            BoundaryPrimitive::Segment(a, b) => a.lerp(*b, u),
            BoundaryPrimitive::Arc(arc) => arc.point_at(arc.start + arc.sweep * u),
        }
    }

    pub fn length(&self) -> T {
        match self {
            BoundaryPrimitive::Segment(a, b) => a.distance(*b),
            BoundaryPrimitive::Arc(arc) => arc.radius * arc.sweep,
        }
    }

    /// Restriction to the parameter range `[u0, u1]`.
    pub fn sub(&self, u0: T, u1: T) -> Self {
        match self {
            BoundaryPrimitive::Segment(..) => BoundaryPrimitive::Segment(self.point_at(u0), self.point_at(u1)),
            BoundaryPrimitive::Arc(arc) => {
                if u0 == T::zero() && u1 == T::one() {
                    return *self;
                }
                BoundaryPrimitive::Arc(Arc { start: arc.start + arc.sweep * u0, sweep: arc.sweep * (u1 - u0), ..*arc })
            }
        }
    }

    /// Polyline within `eps` of the primitive, on its free side.
    pub fn polyline(&self, eps: T) -> Vec<Vec2<T>> {
        match self {
            BoundaryPrimitive::Segment(a, b) => vec![*a, *b],
            BoundaryPrimitive::Arc(arc) => arc.polygonize(eps),
        }
    }
}

/// An obstacle dilated by the robot radius.
#[derive(Clone, Debug, PartialEq)]
pub struct InflatedObstacle<T> {
    core: Region<T>,
    radius: T,
    bound: Ball<T>,
}

impl<T: Real> InflatedObstacle<T> {
    fn new(core: Region<T>, radius: T) -> Self {
        let b = core.bounding_ball();
        Self { bound: Ball { center: b.center, radius: b.radius + radius }, core, radius }
    }

    pub fn core(&self) -> &Region<T> {
        &self.core
    }

    /// Dilation radius.
    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn bounding_ball(&self) -> Ball<T> {
        self.bound
    }

    /// Signed distance to the dilated obstacle.
    pub fn signed_distance(&self, p: Vec2<T>) -> T {
        self.core.signed_distance(p) - self.radius
    }

    /// Whether `p` lies in the open dilated obstacle.
    pub fn contains_interior(&self, p: Vec2<T>) -> bool {
        self.signed_distance(p) < T::zero()
    }

    /// Distance from a convex set to the dilated obstacle.
    pub fn distance_to_set(&self, s: &ConvexSet<T>) -> Result<T> {
        match &self.core {
            Region::Disk { center, radius } => {
                convex_distance(s, &ConvexSet::Disk { center: *center, radius: *radius + self.radius })
            }
            Region::Polygon(vs) => Ok((convex_distance(s, &ConvexSet::Polytope(vs.clone()))? - self.radius).max(T::zero())),
        }
    }

    /// Exact area of the Minkowski sum with the disk.
    pub fn area(&self) -> T {
        let r = self.radius;
        match &self.core {
            Region::Disk { radius, .. } => T::PI() * (*radius + r) * (*radius + r),
            Region::Polygon(vs) => {
                let n = vs.len();
                let perimeter: T = (0..n).map(|i| vs[i].distance(vs[(i + 1) % n])).sum();
                polygon_area(vs) + perimeter * r + T::PI() * r * r
            }
        }
    }

    /// Full boundary: offset edges and corner arcs for polygons, a circle for
    /// disks.
    pub fn boundary(&self) -> Vec<BoundaryPrimitive<T>> {
        let r = self.radius;
        match &self.core {
            Region::Disk { center, radius } => {
                vec![BoundaryPrimitive::Arc(Arc::full_circle(*center, *radius + r, FreeSide::Outside))]
            }
            Region::Polygon(vs) => {
                let n = vs.len();
                let mut out = Vec::with_capacity(2 * n);
                for i in 0..n {
                    let (a, b) = (vs[i], vs[(i + 1) % n]);
                    let nrm = outward_normal(a, b);
                    out.push(BoundaryPrimitive::Segment(a + nrm * r, b + nrm * r));
                    if r > T::zero() {
                        let c = vs[(i + 2) % n];
                        let next = outward_normal(b, c);
                        let mut sweep = next.angle() - nrm.angle();
                        if sweep < T::zero() {
                            sweep += T::TAU();
                        }
                        out.push(BoundaryPrimitive::Arc(Arc {
                            center: b,
                            radius: r,
                            start: nrm.angle(),
                            sweep,
                            free_side: FreeSide::Outside,
                        }));
                    }
                }
                out
            }
        }
    }
}

/// Collision-free positions of the robot center.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeSpace<T> {
    env: Environment<T>,
    eroded: Region<T>,
    inflated: Vec<InflatedObstacle<T>>,
    primitives: Vec<BoundaryPrimitive<T>>,
    arc_tolerance: T,
}

/// Builds the free space of `env`.
pub fn build_free_space<T: Real>(env: &Environment<T>) -> Result<FreeSpace<T>> {
    let env = env.validated()?;
    let rho = env.robot_radius;
    let eroded = match &env.workspace {
        Region::Disk { center, radius } => {
            if !(*radius > rho) {
                return Err(Error::EmptyFreeSpace);
            }
            Region::Disk { center: *center, radius: *radius - rho }
        }
        Region::Polygon(vs) => erode_polygon(vs, rho)?,
    };
    let inflated: Vec<InflatedObstacle<T>> = env.obstacles.iter().map(|o| InflatedObstacle::new(o.clone(), rho)).collect();
    let primitives = clip::clipped_boundary(&eroded, &inflated);
    if primitives.is_empty() {
        return Err(Error::EmptyFreeSpace);
    }
    Ok(FreeSpace { env, eroded, inflated, primitives, arc_tolerance: T::c(DEFAULT_ARC_TOLERANCE) })
}

fn erode_polygon<T: Real>(vs: &[Vec2<T>], rho: T) -> Result<Region<T>> {
    let n = vs.len();
    let mut poly = vs.to_vec();
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        let nrm = outward_normal(a, b);
        poly = clip_halfplane(&poly, nrm, nrm.dot(a) - rho);
        if poly.is_empty() {
            return Err(Error::EmptyFreeSpace);
        }
    }
    let hull = convex_hull(&poly);
    if hull.len() < 3 || !(polygon_area(&hull) > T::zero()) {
        return Err(Error::EmptyFreeSpace);
    }
    Ok(Region::Polygon(hull))
}

/// Part of a convex polygon with `n . q <= c`.
fn clip_halfplane<T: Real>(poly: &[Vec2<T>], n: Vec2<T>, c: T) -> Vec<Vec2<T>> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let (p, q) = (poly[i], poly[(i + 1) % m]);
        let (dp, dq) = (n.dot(p) - c, n.dot(q) - c);
        if dp <= T::zero() {
            out.push(p);
        }
        if (dp < T::zero() && dq > T::zero()) || (dp > T::zero() && dq < T::zero()) {
            out.push(p + (q - p) * (dp / (dp - dq)));
        }
    }
    out
}

impl<T: Real> FreeSpace<T> {
    pub fn environment(&self) -> &Environment<T> {
        &self.env
    }

    pub fn robot_radius(&self) -> T {
        self.env.robot_radius
    }

    pub fn eroded_workspace(&self) -> &Region<T> {
        &self.eroded
    }

    pub fn inflated_obstacles(&self) -> &[InflatedObstacle<T>] {
        &self.inflated
    }

    /// Boundary primitives; their union is the free-space boundary.
    pub fn boundary_primitives(&self) -> &[BoundaryPrimitive<T>] {
        &self.primitives
    }

    pub fn arc_tolerance(&self) -> T {
        self.arc_tolerance
    }

    pub fn with_arc_tolerance(mut self, eps: T) -> Result<Self> {
        if !(eps > T::zero()) {
            return Err(Error::InvalidParameter { name: "arc_tolerance", reason: format!("must be positive, got {eps}") });
        }
        self.arc_tolerance = eps;
        Ok(self)
    }

    /// Boundary primitives as polylines at the arc tolerance.
    pub fn boundary_polylines(&self) -> Vec<Vec<Vec2<T>>> {
        self.primitives.iter().map(|p| p.polyline(self.arc_tolerance)).collect()
    }

    /// Closed-set membership: boundary points are contained.
    pub fn contains(&self, p: Vec2<T>) -> bool {
        self.eroded.signed_distance(p) <= T::zero() && self.inflated.iter().all(|o| !o.contains_interior(p))
    }

    /// Distance from `p` to the free-space boundary.
    pub fn point_boundary_distance(&self, p: Vec2<T>) -> T {
        self.primitives.iter().fold(T::infinity(), |m, prim| m.min(prim.distance_to_point(p)))
    }

    /// Distance from a convex set to the free-space boundary, or zero if the
    /// set leaves the free space.
    pub fn set_boundary_distance(&self, s: &ConvexSet<T>) -> Result<T> {
        let mut best = match &self.eroded {
            Region::Disk { center, radius } => *radius - s.max_distance_from(*center),
            Region::Polygon(vs) => {
                let n = vs.len();
                let mut m = T::infinity();
                for i in 0..n {
                    let (a, b) = (vs[i], vs[(i + 1) % n]);
                    let nrm = outward_normal(a, b);
                    m = m.min(nrm.dot(a) - s.support_unchecked(nrm).dot(nrm));
                }
                m
            }
        };
        if !(best > T::zero()) {
            return Ok(T::zero());
        }
        let sb = s.bounding_ball();
        for o in &self.inflated {
            let ob = o.bounding_ball();
            if sb.center.distance(ob.center) - sb.radius - ob.radius >= best {
                continue;
            }
            best = best.min(o.distance_to_set(s)?);
            if best <= T::zero() {
                return Ok(T::zero());
            }
        }
        Ok(best)
    }

    /// Number of 4-connected components of free grid cells on a
    /// `resolution x resolution` grid over the workspace.
    pub fn connected_components(&self, resolution: usize) -> usize {
        let res = resolution.max(2);
        let b = self.eroded.bounding_ball();
        let step = b.radius * T::c(2.0) / T::c(res as f64);
        let origin = b.center - Vec2::new(b.radius, b.radius);
        let cell = |i: usize, j: usize| origin + Vec2::new(step * (T::c(i as f64) + T::c(0.5)), step * (T::c(j as f64) + T::c(0.5)));
        let free: Vec<bool> = (0..res * res).map(|k| self.contains(cell(k % res, k / res))).collect();
        let mut seen = vec![false; res * res];
        let mut components = 0;
        for start in 0..res * res {
            if !free[start] || seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(k) = stack.pop() {
                let (i, j) = (k % res, k / res);
                let mut visit = |ni: usize, nj: usize| {
                    let nk = ni + nj * res;
                    if free[nk] && !seen[nk] {
                        seen[nk] = true;
                        stack.push(nk);
                    }
                };
                if i > 0 {
                    visit(i - 1, j);
                }
                if i + 1 < res {
                    visit(i + 1, j);
                }
                if j > 0 {
                    visit(i, j - 1);
                }
                if j + 1 < res {
                    visit(i, j + 1);
                }
            }
        }
        components
    }
}
