use perjet_core::generate::{random_flat_chart, random_invertible, random_shape};
use perjet_core::{
    curvature_is_flat, reduce_chart_mod_p_at, reduce_matrix, solve_limp, solve_limp_with,
    verify_flat_frame, xi_eval_with, DerivativeOrder, FrameCheck, PrimeField, Rationals,
    SeriesRing, WeilAlgebra,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn gauge_charts_are_flat_and_frames_match_the_gauge() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=4);
        let r = rng.random_range(0..=3);
        let shape = random_shape(&mut rng, m, 3);
        let g = random_flat_chart(&mut rng, n, &shape, &[5, 7, 11]);
        assert!(curvature_is_flat(&g.chart).is_flat());
        let f0 = random_invertible(&mut rng, &Rationals, m);
        let limp = solve_limp(&g.chart, &g.basepoint, &f0, r).unwrap();
        assert_eq!(verify_flat_frame(&limp).unwrap(), FrameCheck::Ok);

        let alg = WeilAlgebra::new(Rationals, n, r).unwrap();
        let ring = SeriesRing(alg.clone());
        let gs = g.gauge.try_map(|e| e.eval(&g.basepoint)).unwrap();
        let correction = gs.inverse(&Rationals).unwrap().mul(&Rationals, &f0);
        let expanded = g.gauge.try_map(|e| e.taylor(&alg, &g.basepoint)).unwrap();
        let lifted = correction.map(|x| perjet_core::TruncatedSeries::constant(&alg, x.clone()));
        assert_eq!(expanded.mul(&ring, &lifted), limp.frame);
    }
}

#[test]
fn derivative_orders_agree_over_prime_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in [5u64, 7, 11] {
        let field = PrimeField::new(p).unwrap();
        for _ in 0..5 {
            let n = rng.random_range(1..=3);
            let m = rng.random_range(1..=3);
            let r = rng.random_range(0..=3);
            let shape = random_shape(&mut rng, m, 2);
            let g = random_flat_chart(&mut rng, n, &shape, &[p]);
            let (chart, s) = reduce_chart_mod_p_at(&g.chart, p, &g.basepoint).unwrap();
            let f0 = reduce_matrix(&field, &random_invertible(&mut rng, &Rationals, m));
            let Ok(f0) = f0 else { continue };
            if !f0.is_invertible(&field) {
                continue;
            }
            let seed: u64 = rng.random();
            let alg = WeilAlgebra::new(field, n, r).unwrap();
            for q in alg.monomials() {
                let a = xi_eval_with(&chart, &s, &f0, q, DerivativeOrder::LastNonzero).unwrap();
                let b = xi_eval_with(&chart, &s, &f0, q, DerivativeOrder::Random(seed)).unwrap();
                assert_eq!(a, b);
            }
            let limp = solve_limp_with(&chart, &s, &f0, r, DerivativeOrder::FirstNonzero).unwrap();
            assert_eq!(verify_flat_frame(&limp).unwrap(), FrameCheck::Ok);
        }
    }
}
