mod common;

use common::*;
use proptest::prelude::*;
use proxcert::brute::worst_ratio_grid;
use proxcert::rates::{
    classic_descent_slack, interpolation_slacks, pl_gap_bound, refined_descent_slack,
};
use proxcert::rho;
use proxcert::rng::SplitMix64;

#[test]
fn rho_is_minimized_at_two_over_l_plus_mu() {
    for (mu, lip) in [(1.0, 10.0), (0.5, 2.0), (3.0, 3.0), (0.01, 100.0)] {
        let n = 20_000;
        let (mut best_t, mut best) = (0.0, f64::INFINITY);
        for i in 1..=n {
            let t = 2.0 / lip * i as f64 / n as f64 * 1.5;
            let r = rho(t, mu, lip).unwrap();
            if r < best {
                best = r;
                best_t = t;
            }
        }
        let t_star = 2.0 / (lip + mu);
        let grid_step = 3.0 / lip / n as f64;
        assert!(
            (best_t - t_star).abs() <= grid_step,
            "({mu},{lip}): {best_t} vs {t_star}"
        );
        assert!((best - (lip - mu) / (lip + mu)).abs() <= lip * grid_step);
    }
}

#[test]
fn rho_at_most_one_for_convex_case() {
    for lip in [0.1, 1.0, 10.0, 1e4] {
        for i in 1..=1000 {
            let t = 2.0 / lip * i as f64 / 1000.0;
            assert!(rho(t, 0.0, lip).unwrap() <= 1.0 + 1e-15);
        }
    }
}

#[test]
fn new_pl_rate_dominates_baseline() {
    for i in 0..=100_000 {
        let a = i as f64 / 100_000.0;
        assert!((1.0 - a) / (1.0 + a) <= 1.0 - a);
        let b = pl_gap_bound(1.0, a.max(1e-300), 1.0).unwrap();
        assert!(b.new_bound <= b.baseline_bound);
    }
}

#[test]
fn pl_rates_at_tenth_of_lipschitz() {
    // η/L = 0.1 at t = 1/L
    let lip = 10.0;
    let b = pl_gap_bound(1.0, 1.0, 1.0 / lip).unwrap();
    assert!((b.new_bound - 9.0 / 11.0).abs() < 1e-15);
    assert!((b.baseline_bound - 0.9).abs() < 1e-15);
    assert!(((9.0f64 / 11.0).powi(10) - 0.1344).abs() < 5e-5);
    assert!((0.9f64.powi(10) - 0.3487).abs() < 5e-5);
}

#[test]
fn brute_grid_equals_rho_exactly() {
    let mut rng = SplitMix64::new(1000);
    for _ in 0..1000 {
        let mu = rng.uniform_in(0.0, 5.0);
        let lip = mu + rng.uniform_in(1e-3, 20.0);
        let t = rng.uniform_in(1e-3, 3.0 / lip);
        let n = 2 + (rng.next_u64() % 500) as usize;
        assert_eq!(worst_ratio_grid(mu, lip, t, n), rho(t, mu, lip).unwrap());
    }
}

#[test]
fn two_level_quadratics_interpolate_exactly() {
    let mut rng = SplitMix64::new(77);
    for _ in 0..200 {
        let mu = rng.uniform_in(0.1, 2.0);
        let lip = mu + rng.uniform_in(0.1, 10.0);
        let c: Vec<f64> = (0..4).map(|i| if i % 2 == 0 { mu } else { lip }).collect();
        let b = scaled_normal(&mut rng, 4, 1.0);
        let f = quadratic(&c, Some(&b));
        let x = scaled_normal(&mut rng, 4, 3.0);
        let y = scaled_normal(&mut rng, 4, 3.0);
        let s = interpolation_slacks(f.as_ref(), &x, &y).unwrap();
        assert!(s.interp.value.abs() <= 1e-9, "{s:?}");
    }
}

#[test]
fn refined_descent_exceeds_classic_by_forward_term() {
    let mut rng = SplitMix64::new(8);
    for _ in 0..1000 {
        let t = rng.uniform_in(0.01, 1.0);
        let mu = rng.uniform_in(0.0, 0.99 / t);
        let (px, pxp) = (rng.uniform_in(0.0, 10.0), rng.uniform_in(-5.0, 5.0));
        let (g, gp) = (rng.uniform_in(0.0, 3.0), rng.uniform_in(1e-3, 3.0));
        let refined = refined_descent_slack(px, pxp, g, gp, t, mu).unwrap();
        let classic = classic_descent_slack(px, pxp, g, t);
        let extra = t / (2.0 * (1.0 - mu * t)) * gp * gp;
        assert!(classic.value - refined.value > 0.0);
        assert!(
            (classic.value - refined.value - extra).abs() <= 1e-12 * extra.max(px.abs()).max(1.0)
        );
    }
}

proptest! {
    #[test]
    fn rho_matches_its_definition(mu in 0.0f64..10.0, extra in 0.0f64..10.0, t in 1e-6f64..2.0) {
        let lip = mu + extra + 1e-9;
        let r = rho(t, mu, lip).unwrap();
        prop_assert!(r >= (1.0 - lip * t).abs() && r >= (1.0 - mu * t).abs());
        prop_assert!(r == (1.0 - lip * t).abs() || r == (1.0 - mu * t).abs());
    }
}
