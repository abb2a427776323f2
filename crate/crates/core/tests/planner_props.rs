mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refgov::planner::{in_planner_domain, projected_path_goal, projected_path_goal_with_radius, reference_field, ReferencePath};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn projected_goal_matches_dense_scan(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(2..6);
        let path = ReferencePath::new((0..k).map(|_| rand_vec(&mut rng, -3.0, 3.0)).collect()).unwrap();
        let g = rand_vec(&mut rng, -3.0, 3.0);
        let radius = path.distance_to(g) + rng.gen_range(0.0..2.0);
        let pg = projected_path_goal_with_radius(&path, g, radius);
        prop_assert!(pg.in_domain);
        prop_assert!(pg.point.distance(g) <= radius + 1e-9);
        prop_assert!(pg.point.distance(path.point_at(pg.alpha)) <= 1e-9);
        let steps = 20_000;
        let dense = (0..=steps).map(|i| i as f64 / steps as f64).filter(|&a| path.point_at(a).distance(g) <= radius).fold(0.0, f64::max);
        // No sampled alpha beyond the returned one lies in the ball.
        prop_assert!(dense <= pg.alpha + 1e-9);
        prop_assert!(pg.alpha - dense <= 2.0 / steps as f64 * path.length().max(1.0) / radius.max(1e-3));
    }

    #[test]
    fn field_bounded_by_clearance(seed in any::<u64>(), k_path in 0.1..3.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = annulus(1.0, 3.0, 0.1);
        let path = ReferencePath::new(vec![v(2.0, 0.0), v(0.0, 2.0), v(-2.0, 0.0), v(0.0, -2.0)]).unwrap();
        let g = rand_vec(&mut rng, -3.0, 3.0);
        if fs.contains(g) && in_planner_domain(&path, g, &fs) {
            let r = reference_field(&path, g, &fs, k_path);
            prop_assert!(r.norm() <= k_path * fs.point_boundary_distance(g) + 1e-9);
            prop_assert!(projected_path_goal(&path, g, &fs).in_domain);
        }
    }
}

#[test]
fn field_vanishes_only_at_goal() {
    let fs = annulus(1.0, 3.0, 0.1);
    let path = ReferencePath::new(vec![v(2.0, 0.0), v(0.0, 2.0), v(-2.0, 0.0), v(0.0, -2.0)]).unwrap();
    let goal = path.goal();
    let m = 300;
    let mut checked = 0;
    for i in 0..=m {
        for j in 0..=m {
            let g = v(-3.0 + 6.0 * i as f64 / m as f64, -3.0 + 6.0 * j as f64 / m as f64);
            if !fs.contains(g) || !in_planner_domain(&path, g, &fs) || g.distance(goal) < 1e-9 {
                continue;
            }
            checked += 1;
            assert!(reference_field(&path, g, &fs, 1.0).norm() > 1e-9, "field vanishes at {g:?}");
        }
    }
    assert!(checked > 1000);
    assert!(reference_field(&path, goal, &fs, 1.0).norm() < 1e-12);
}

#[test]
fn straight_corridor_field_follows_path() {
    let fs = room(0.2);
    let path = ReferencePath::new(vec![v(1.0, 1.0), v(9.0, 1.0)]).unwrap();
    for i in 0..80 {
        let g = path.point_at(i as f64 / 80.0);
        let r = reference_field(&path, g, &fs, 1.0);
        assert!(r.y.abs() < 1e-12 && r.x > 0.0, "{r:?} at {g:?}");
    }
}
