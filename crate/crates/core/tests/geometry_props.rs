mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refgov::geometry::{brute_force_distance, convex_distance, matrix_sqrt_psd, project_to_ball, Ball, ConvexSet, Mat2};
use refgov::linalg::Matrix;

fn pt() -> impl Strategy<Value = refgov::Vec2<f64>> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| v(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn projection_is_idempotent_and_nonexpansive(p in pt(), q in pt(), c in pt(), r in 0.0..5.0f64) {
        let ball = Ball::new(c, r).unwrap();
        let pp = project_to_ball(p, &ball);
        prop_assert!(project_to_ball(pp, &ball).distance(pp) <= 1e-12);
        prop_assert!(pp.distance(c) <= r + 1e-12);
        let pq = project_to_ball(q, &ball);
        prop_assert!(pp.distance(pq) <= p.distance(q) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn distance_is_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rand_set_in(&mut rng, -3.0, 3.0, 2.0);
        let b = rand_set_in(&mut rng, -3.0, 3.0, 2.0);
        let (dab, dba) = (convex_distance(&a, &b).unwrap(), convex_distance(&b, &a).unwrap());
        prop_assert!((dab - dba).abs() < 1e-12, "{} vs {}", dab, dba);
    }

    #[test]
    fn translation_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = rand_set(&mut rng, v(0.0, 0.0), 2.0);
        let y = rand_set_in(&mut rng, -4.0, 4.0, 2.0);
        let (b, b2) = (rand_vec(&mut rng, -3.0, 3.0), rand_vec(&mut rng, -3.0, 3.0));
        let d1 = convex_distance(&x.translated(b), &y).unwrap();
        let d2 = convex_distance(&x.translated(b2), &y).unwrap();
        prop_assert!((d1 - d2).abs() <= b.distance(b2) + 1e-9);
    }

    #[test]
    fn linear_map_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..7);
        let verts: Vec<_> = (0..k).map(|_| rand_vec(&mut rng, -2.0, 2.0)).collect();
        let radius = verts.iter().fold(0.0f64, |m, p| m.max(p.norm()));
        let x = ConvexSet::Polytope(verts);
        let y = rand_set_in(&mut rng, -4.0, 4.0, 2.0);
        let m = |rng: &mut ChaCha8Rng| Mat2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (a, a2) = (m(&mut rng), m(&mut rng));
        let d1 = convex_distance(&x.affine_image(&a, v(0.0, 0.0)), &y).unwrap();
        let d2 = convex_distance(&x.affine_image(&a2, v(0.0, 0.0)), &y).unwrap();
        prop_assert!((d1 - d2).abs() <= a.sub(&a2).spectral_norm() * radius + 1e-9);
    }

    #[test]
    fn gjk_never_exceeds_sampling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rand_set_in(&mut rng, -3.0, 3.0, 2.0);
        let b = rand_set_in(&mut rng, -3.0, 3.0, 2.0);
        let exact = convex_distance(&a, &b).unwrap();
        let sampled = brute_force_distance(&a, &b, 2000);
        prop_assert!(exact <= sampled + 1e-9, "{} > {}", exact, sampled);
    }

    #[test]
    fn psd_square_root(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..6);
        let b: Matrix<f64> = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let s = Matrix::from_fn(n, n, |i, j| (0..n).map(|k| b[(i, k)] * b[(j, k)]).sum());
        let r = matrix_sqrt_psd(&s).unwrap();
        let rt = r.transpose();
        for i in 0..n {
            for j in 0..n {
                let rr: f64 = (0..n).map(|k| r[(i, k)] * rt[(k, j)]).sum();
                let sij: f64 = s[(i, j)];
                prop_assert!((rr - sij).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn sampling_gap_is_small_at_high_resolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let a = rand_set_in(&mut rng, -3.0, 3.0, 2.0);
        let b = rand_set_in(&mut rng, -3.0, 3.0, 2.0);
        let exact = convex_distance(&a, &b).unwrap();
        let sampled = brute_force_distance(&a, &b, 10_000);
        assert!(sampled - exact < 1e-3, "{a:?} {b:?}: {exact} vs {sampled}");
    }
}
