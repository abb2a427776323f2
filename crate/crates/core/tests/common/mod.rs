#![allow(dead_code)]

use rand::Rng;
use refgov::control::{PhdController, RobotState};
use refgov::environment::{build_free_space, Environment, FreeSpace, Region};
use refgov::geometry::{ConvexSet, Mat2};
use refgov::Vec2;

pub fn v(x: f64, y: f64) -> Vec2<f64> {
    Vec2::new(x, y)
}

pub fn annulus(inner: f64, outer: f64, rho: f64) -> FreeSpace<f64> {
    let env = Environment::new(
        Region::Disk { center: v(0.0, 0.0), radius: outer },
        vec![Region::Disk { center: v(0.0, 0.0), radius: inner }],
        rho,
    );
    build_free_space(&env).unwrap()
}

/// 10 x 10 room with a square, a disk and a triangle.
pub fn room(rho: f64) -> FreeSpace<f64> {
    let env = Environment::new(
        Region::Polygon(vec![v(0.0, 0.0), v(10.0, 0.0), v(10.0, 10.0), v(0.0, 10.0)]),
        vec![
            Region::Polygon(vec![v(2.0, 2.0), v(4.0, 2.0), v(4.0, 4.0), v(2.0, 4.0)]),
            Region::Disk { center: v(7.0, 3.0), radius: 1.0 },
            Region::Polygon(vec![v(4.0, 6.0), v(7.0, 7.0), v(5.0, 8.5)]),
        ],
        rho,
    );
    build_free_space(&env).unwrap()
}

pub fn rand_vec<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Vec2<f64> {
    v(rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

pub fn rand_psd<R: Rng>(rng: &mut R) -> Mat2<f64> {
    let m = Mat2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    m.mul(&m.transpose()).symmetrized()
}

/// Random compact convex set of any variant, centered near `at`.
pub fn rand_set<R: Rng>(rng: &mut R, at: Vec2<f64>, size: f64) -> ConvexSet<f64> {
    match rng.gen_range(0..5) {
        0 => ConvexSet::Point(at + rand_vec(rng, -size, size)),
        1 => ConvexSet::Segment(at + rand_vec(rng, -size, size), at + rand_vec(rng, -size, size)),
        2 => ConvexSet::Disk { center: at + rand_vec(rng, -size, size) * 0.5, radius: rng.gen_range(0.0..size) },
        3 => ConvexSet::Ellipse { center: at + rand_vec(rng, -size, size) * 0.5, shape: rand_psd(rng), scale: rng.gen_range(0.0..size) },
        _ => {
            let k = rng.gen_range(1..7);
            ConvexSet::Polytope((0..k).map(|_| at + rand_vec(rng, -size, size)).collect())
        }
    }
}

pub fn rand_state<R: Rng>(rng: &mut R, order: usize, around: Vec2<f64>, spread: f64) -> RobotState<f64> {
    let mut d = vec![around + rand_vec(rng, -spread, spread)];
    d.extend((1..order).map(|_| rand_vec(rng, -spread, spread)));
    RobotState::new(d).unwrap()
}

/// Fixed-step classical RK4 of the closed loop toward a fixed goal; calls
/// `visit` at every step including t = 0.
pub fn rk4_closed_loop(
    ctrl: &PhdController<f64>,
    x0: &RobotState<f64>,
    goal: Vec2<f64>,
    t_end: f64,
    h: f64,
    mut visit: impl FnMut(f64, &RobotState<f64>),
) -> RobotState<f64> {
    let f = |y: &[f64]| ctrl.state_space_derivative(&RobotState::from_flat(y).unwrap(), goal).unwrap();
    let mut y = x0.to_flat();
    let steps = (t_end / h).round() as usize;
    visit(0.0, x0);
    for k in 0..steps {
        let k1 = f(&y);
        let y2: Vec<f64> = y.iter().zip(&k1).map(|(a, b)| a + 0.5 * h * b).collect();
        let k2 = f(&y2);
        let y3: Vec<f64> = y.iter().zip(&k2).map(|(a, b)| a + 0.5 * h * b).collect();
        let k3 = f(&y3);
        let y4: Vec<f64> = y.iter().zip(&k3).map(|(a, b)| a + h * b).collect();
        let k4 = f(&y4);
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        visit((k + 1) as f64 * h, &RobotState::from_flat(&y).unwrap());
    }
    RobotState::from_flat(&y).unwrap()
}

/// Shoelace area of a closed polygon.
pub fn polygon_area(pts: &[Vec2<f64>]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum::<f64>().abs() / 2.0
}

/// Random set centered uniformly in `[lo, hi]^2`.
pub fn rand_set_in<R: Rng>(rng: &mut R, lo: f64, hi: f64, size: f64) -> ConvexSet<f64> {
    let at = rand_vec(rng, lo, hi);
    rand_set(rng, at, size)
}
