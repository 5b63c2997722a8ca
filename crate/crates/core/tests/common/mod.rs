#![allow(dead_code)]

use std::sync::Arc;

use proxcert::linalg::Matrix;
use proxcert::rng::SplitMix64;
use proxcert::smooth::{
    make_least_squares, make_logistic, make_quadratic, QuadraticSpec, SmoothOracle,
};

pub fn quadratic(c: &[f64], b: Option<&[f64]>) -> Arc<dyn SmoothOracle> {
    Arc::new(
        make_quadratic(&QuadraticSpec {
            diag_spectrum: c.to_vec(),
            linear_term: b.map(<[f64]>::to_vec),
            offset: 0.0,
        })
        .unwrap(),
    )
}

pub fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> Matrix {
    let data: Vec<Vec<f64>> = (0..rows).map(|_| rng.normal_vec(cols)).collect();
    Matrix::from_rows(&data).unwrap()
}

pub fn seeded_least_squares(seed: u64, rows: usize, cols: usize) -> Arc<dyn SmoothOracle> {
    let mut rng = SplitMix64::new(seed);
    let a = random_matrix(&mut rng, rows, cols);
    let b = rng.normal_vec(rows);
    Arc::new(make_least_squares(a, b).unwrap())
}

pub fn seeded_logistic(seed: u64, rows: usize, cols: usize, l2: f64) -> Arc<dyn SmoothOracle> {
    let mut rng = SplitMix64::new(seed);
    let a = random_matrix(&mut rng, rows, cols);
    let labels = (0..rows)
        .map(|_| if rng.uniform() < 0.5 { -1.0 } else { 1.0 })
        .collect();
    Arc::new(make_logistic(a, labels, l2).unwrap())
}

/// One of each catalog oracle.
pub fn catalog() -> Vec<(&'static str, Arc<dyn SmoothOracle>)> {
    vec![
        (
            "quadratic",
            quadratic(&[1.0, 2.5, 10.0], Some(&[0.5, -1.0, 2.0])),
        ),
        ("least_squares", seeded_least_squares(7, 6, 4)),
        ("logistic", seeded_logistic(11, 10, 3, 0.0)),
        ("logistic_l2", seeded_logistic(12, 10, 3, 0.3)),
    ]
}

pub fn scaled_normal(rng: &mut SplitMix64, n: usize, scale: f64) -> Vec<f64> {
    rng.normal_vec(n).into_iter().map(|v| v * scale).collect()
}
