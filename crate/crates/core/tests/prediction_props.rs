mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refgov::control::{PhdController, RobotState};
use refgov::geometry::sample_boundary;
use refgov::governor::safety_level;
use refgov::prediction::{PredictionMethod, Predictor};

fn predictor(method: PredictionMethod, n: usize) -> Predictor<f64> {
    Predictor::new(method, &PhdController::uniform(n, -2.0, -1.0).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn trajectories_stay_in_range(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctrl: PhdController<f64> = PhdController::uniform(n, -2.0, -1.0).unwrap();
        let goal = v(0.5, -0.5);
        let x0 = rand_state(&mut rng, n, goal, 1.0);
        let t_end = 10.0 / ctrl.slowest_root().abs();
        for method in PredictionMethod::ALL {
            let set = predictor(method, n).predict(&x0, goal).unwrap().to_convex_set();
            let mut ok = true;
            rk4_closed_loop(&ctrl, &x0, goal, t_end, 1e-3, |_, x| ok &= set.contains_point(x.position(), 1e-6));
            prop_assert!(ok, "{:?} order {} left its range", method, n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn range_inside_bounding_ball(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let goal = rand_vec(&mut rng, -2.0, 2.0);
        let x = rand_state(&mut rng, n, goal, 2.0);
        for method in PredictionMethod::ALL {
            let p = predictor(method, n);
            let radius = p.beta() * x.error_norm(goal);
            for q in sample_boundary(&p.predict(&x, goal).unwrap().to_convex_set(), 256) {
                prop_assert!(q.distance(goal) <= radius + 1e-9);
            }
            let ball = p.bounding_ball(&x, goal);
            prop_assert_eq!(ball.center, goal);
            prop_assert!((ball.radius - radius).abs() <= 1e-12 * radius.max(1.0));
        }
    }

    #[test]
    fn range_shrinks_to_goal(seed in any::<u64>(), n in 1usize..=5, scale in 0.0..1.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let goal = rand_vec(&mut rng, -2.0, 2.0);
        let x = rand_state(&mut rng, n, goal, 2.0);
        // Scale the error toward zero motion at the goal.
        let mut d: Vec<_> = x.derivatives().to_vec();
        d[0] = goal + (d[0] - goal) * scale;
        for e in d.iter_mut().skip(1) {
            *e = *e * scale;
        }
        let xs = RobotState::new(d).unwrap();
        for method in PredictionMethod::ALL {
            let p = predictor(method, n);
            let pts = sample_boundary(&p.predict(&xs, goal).unwrap().to_convex_set(), 128);
            let diam = pts.iter().flat_map(|a| pts.iter().map(move |b| a.distance(*b))).fold(0.0, f64::max);
            prop_assert!(diam <= 2.0 * p.beta() * xs.error_norm(goal) + 1e-9);
        }
        let at_goal = RobotState::zero_motion(goal, n);
        for method in PredictionMethod::ALL {
            let set = predictor(method, n).predict(&at_goal, goal).unwrap().to_convex_set();
            prop_assert!(sample_boundary(&set, 16).iter().all(|q| *q == goal));
        }
    }

    #[test]
    fn simplex_area_below_ellipse_area(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let goal = rand_vec(&mut rng, -2.0, 2.0);
        let x = rand_state(&mut rng, n, goal, 2.0);
        let area = |m| polygon_area(&sample_boundary(&predictor(m, n).predict(&x, goal).unwrap().to_convex_set(), 2048));
        let (simplex, ellipse) = (area(PredictionMethod::Vandermonde), area(PredictionMethod::Lyapunov));
        prop_assert!(simplex <= ellipse * 1.001 + 1e-12, "{} > {}", simplex, ellipse);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn safety_level_is_lipschitz(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = annulus(1.0, 4.0, 0.1);
        let g = v(rng.gen_range(2.0..3.0), rng.gen_range(-0.5..0.5));
        let x = rand_state(&mut rng, n, g, 0.3);
        let g2 = g + rand_vec(&mut rng, -0.2, 0.2);
        let x2 = RobotState::new(x.derivatives().iter().map(|&d| d + rand_vec(&mut rng, -0.05, 0.05)).collect()).unwrap();
        for method in PredictionMethod::ALL {
            let p = predictor(method, n);
            let (lx, lg) = p.lipschitz_constants();
            let delta = |x: &RobotState<f64>, g| safety_level(&fs, &p.predict(x, g).unwrap(), x.position()).unwrap();
            let d0 = delta(&x, g);
            prop_assert!((d0 - delta(&x, g2)).abs() <= lg * g.distance(g2) + 1e-9);
            // The state bound only applies while the robot stays in the free space.
            if fs.point_boundary_distance(x.position()) > 0.0 && fs.point_boundary_distance(x2.position()) > 0.0 {
                let dx = RobotState::new(x.derivatives().iter().zip(x2.derivatives()).map(|(a, b)| *a - *b).collect()).unwrap().error_norm(v(0.0, 0.0));
                prop_assert!((d0 - delta(&x2, g)).abs() <= lx * dx + 1e-9);
            }
        }
    }
}

#[test]
fn closed_form_betas() {
    let ly = predictor(PredictionMethod::Lyapunov, 2);
    let vd = predictor(PredictionMethod::Vandermonde, 2);
    assert!((vd.beta() - 2f64.sqrt()).abs() < 1e-12);
    let expected = ((1.5 + 1.25f64.sqrt()) / 2.0).sqrt();
    assert!((ly.beta() - expected).abs() < 1e-12);
    assert!((ly.beta() - 1.1441).abs() < 1e-3);
}
