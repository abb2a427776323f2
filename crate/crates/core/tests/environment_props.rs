mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refgov::environment::{build_free_space, Environment, FreeSpace, Region};
use refgov::geometry::ConvexSet;
use refgov::Vec2;

fn free_point<R: Rng>(rng: &mut R, fs: &FreeSpace<f64>, lo: f64, hi: f64) -> Vec2<f64> {
    loop {
        let p = rand_vec(rng, lo, hi);
        if fs.contains(p) {
            return p;
        }
    }
}

fn spaces() -> Vec<(FreeSpace<f64>, f64, f64)> {
    vec![(annulus(1.0, 3.0, 0.1), -3.0, 3.0), (room(0.2), 0.0, 10.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn point_distance_is_one_lipschitz(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (fs, lo, hi) in spaces() {
            let p = rand_vec(&mut rng, lo, hi);
            let q = p + rand_vec(&mut rng, -0.5, 0.5);
            let (dp, dq) = (fs.point_boundary_distance(p), fs.point_boundary_distance(q));
            prop_assert!((dp - dq).abs() <= p.distance(q) + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn set_distance_at_most_point_distance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (fs, lo, hi) in spaces() {
            let p = free_point(&mut rng, &fs, lo, hi);
            let s = rand_set(&mut rng, p, 0.5);
            let s = ConvexSet::Polytope(match s {
                ConvexSet::Polytope(mut vs) => { vs.push(p); vs }
                other => refgov::geometry::sample_boundary(&other, 32).into_iter().chain([p]).collect(),
            });
            let ds = fs.set_boundary_distance(&s).unwrap();
            prop_assert!(ds <= fs.point_boundary_distance(p) + 1e-12);
            prop_assert!(ds >= 0.0);
        }
    }

    #[test]
    fn singleton_matches_point_distance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (fs, lo, hi) in spaces() {
            let p = free_point(&mut rng, &fs, lo, hi);
            let ds = fs.set_boundary_distance(&ConvexSet::Point(p)).unwrap();
            prop_assert!((ds - fs.point_boundary_distance(p)).abs() <= fs.arc_tolerance());
        }
    }

    #[test]
    fn shrinking_radius_never_decreases_distance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small = rng.gen_range(0.0..0.2);
        let big = small + rng.gen_range(0.0..0.2);
        let (fs_small, fs_big) = (room(small), room(big));
        let p = free_point(&mut rng, &fs_big, 0.0, 10.0);
        prop_assert!(fs_small.contains(p));
        prop_assert!(fs_small.point_boundary_distance(p) >= fs_big.point_boundary_distance(p) - 1e-12);
        let s = rand_set(&mut rng, p, 0.3);
        prop_assert!(fs_small.set_boundary_distance(&s).unwrap() >= fs_big.set_boundary_distance(&s).unwrap() - 1e-12);
    }
}

#[test]
fn inflated_square_area_by_monte_carlo() {
    let unit = Region::Polygon(vec![v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]);
    let env = Environment::new(
        Region::Polygon(vec![v(-5.0, -5.0), v(5.0, -5.0), v(5.0, 5.0), v(-5.0, 5.0)]),
        vec![unit],
        0.1,
    );
    let fs = build_free_space(&env).unwrap();
    let obs = &fs.inflated_obstacles()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (lo, hi) = (-0.1, 1.1);
    let n = 1_000_000;
    let hits = (0..n).filter(|_| obs.signed_distance(v(rng.gen_range(lo..hi), rng.gen_range(lo..hi))) <= 0.0).count();
    let mc = hits as f64 / n as f64 * (hi - lo) * (hi - lo);
    let expected = 1.0 + 4.0 * 0.1 + std::f64::consts::PI * 0.01;
    assert!((mc - expected).abs() / expected < 0.005, "{mc} vs {expected}");
    assert!((obs.area() - expected).abs() < 1e-12);
}
