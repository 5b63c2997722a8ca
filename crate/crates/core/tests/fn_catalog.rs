mod common;

use common::*;
use nalgebra::DMatrix;
use proxcert::brute::fd_gradient;
use proxcert::linalg::{self, Matrix};
use proxcert::rates::interpolation_slacks;
use proxcert::rng::SplitMix64;
use proxcert::smooth::{make_least_squares, SmoothOracle};

fn assert_fd_agrees(f: &dyn SmoothOracle, points: usize, seed: u64) {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..points {
        let x = scaled_normal(&mut rng, f.dim(), 2.0);
        let g = f.gradient(&x);
        let fd = fd_gradient(f, &x, 1e-6);
        let err = linalg::norm(&linalg::sub(&g, &fd));
        assert!(
            err <= 1e-5 * linalg::norm(&g).max(1.0),
            "gradient mismatch {err} at {x:?}"
        );
    }
}

#[test]
fn quadratic_gradient_matches_finite_differences() {
    assert_fd_agrees(quadratic(&[1.0, 10.0], None).as_ref(), 50, 1);
}

#[test]
fn logistic_gradient_matches_finite_differences() {
    assert_fd_agrees(seeded_logistic(10, 10, 3, 0.0).as_ref(), 50, 2);
    assert_fd_agrees(seeded_logistic(10, 10, 3, 0.5).as_ref(), 50, 3);
}

#[test]
fn least_squares_gradient_matches_finite_differences() {
    assert_fd_agrees(seeded_least_squares(7, 6, 4).as_ref(), 50, 4);
}

#[test]
fn least_squares_constants_match_independent_eigensolver() {
    let mut rng = SplitMix64::new(7);
    let a = random_matrix(&mut rng, 6, 4);
    let rows: Vec<Vec<f64>> = a.clone().into();
    let ls = make_least_squares(a, vec![0.0; 6]).unwrap();

    let dense = DMatrix::from_fn(6, 4, |i, j| rows[i][j]);
    let gram = dense.transpose() * &dense;
    let eig = gram.symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    assert!((ls.lip() - max).abs() < 1e-10, "{} vs {max}", ls.lip());
    assert!((ls.mu() - min).abs() < 1e-10, "{} vs {min}", ls.mu());
    assert_eq!(ls.eta_pl(), Some(ls.mu()));
}

#[test]
fn wide_least_squares_is_rank_deficient() {
    let mut rng = SplitMix64::new(3);
    let a = random_matrix(&mut rng, 2, 4);
    let rows: Vec<Vec<f64>> = a.clone().into();
    let ls = make_least_squares(a, vec![1.0, -1.0]).unwrap();
    assert_eq!(ls.mu(), 0.0);

    let dense = DMatrix::from_fn(2, 4, |i, j| rows[i][j]);
    let gram = &dense * dense.transpose();
    let smallest_nonzero = gram.symmetric_eigen().eigenvalues.min();
    assert!((ls.eta_pl().unwrap() - smallest_nonzero).abs() < 1e-10);
    assert!(ls.minimum().unwrap().abs() < 1e-20);
}

#[test]
fn interpolation_inequalities_hold_on_catalog() {
    let mut rng = SplitMix64::new(2024);
    for (name, f) in catalog() {
        for _ in 0..1000 {
            let x = scaled_normal(&mut rng, f.dim(), 3.0);
            let y = scaled_normal(&mut rng, f.dim(), 3.0);
            let s = interpolation_slacks(f.as_ref(), &x, &y).unwrap();
            for slack in s.all() {
                assert!(slack.holds(1e-9), "{name}: {s:?}");
            }
        }
    }
}

#[test]
fn declared_lipschitz_constant_is_attained_by_quadratics() {
    let f = quadratic(&[1.0, 7.0, 3.0], Some(&[1.0, 1.0, -2.0]));
    let x = [0.3, 2.0, -1.0];
    let y = [0.3, -0.5, -1.0];
    let dg = linalg::norm(&linalg::sub(&f.gradient(&x), &f.gradient(&y)));
    let dx = linalg::norm(&linalg::sub(&x, &y));
    assert!((dg - f.lip() * dx).abs() < 1e-12);
}

#[test]
fn strong_convexity_midpoint_test() {
    let mut rng = SplitMix64::new(99);
    for (name, f) in catalog() {
        let mu = f.mu();
        let h = |x: &[f64]| f.value(x) - 0.5 * mu * linalg::dot(x, x);
        for _ in 0..200 {
            let x = scaled_normal(&mut rng, f.dim(), 3.0);
            let y = scaled_normal(&mut rng, f.dim(), 3.0);
            let m: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
            let gap = 0.5 * (h(&x) + h(&y)) - h(&m);
            let scale = h(&x).abs().max(h(&y).abs()).max(1.0);
            assert!(gap >= -1e-12 * scale, "{name}: midpoint gap {gap}");
        }
    }
}

#[test]
fn rank_deficient_identity_examples() {
    let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
    let ls = make_least_squares(a, vec![0.0, 0.0]).unwrap();
    assert_eq!((ls.mu(), ls.lip(), ls.eta_pl()), (0.0, 1.0, Some(1.0)));
}
