//! Smooth convex oracles `f` with declared curvature constants.
//!
//! Every oracle reports its strong-convexity modulus `mu` and gradient
//! Lipschitz constant `lip` exactly (quadratics) or from a Jacobi
//! eigensolve of the Gram matrix (least squares, logistic).

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, jacobi_eigen, Matrix};

/// A smooth convex function with known `mu ≤ lip`.
pub trait SmoothOracle: Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// Strong-convexity modulus.
    fn mu(&self) -> f64;
    /// Gradient Lipschitz constant.
    fn lip(&self) -> f64;

    /// Polyak-Łojasiewicz constant, when it is known in closed form.
    fn pl_constant(&self) -> Option<f64> {
        None
    }

    /// `min f` over the whole space, when it is known in closed form.
    fn minimum(&self) -> Option<f64> {
        None
    }

    fn as_quadratic(&self) -> Option<&Quadratic> {
        None
    }
}

/// Diagonal quadratic `½ Σ cᵢxᵢ² + ⟨b, x⟩ + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticSpec {
    pub diag_spectrum: Vec<f64>,
    #[serde(default)]
    pub linear_term: Option<Vec<f64>>,
    #[serde(default)]
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    spectrum: Vec<f64>,
    linear: Vec<f64>,
    offset: f64,
    mu: f64,
    lip: f64,
}

pub fn make_quadratic(spec: &QuadraticSpec) -> Result<Quadratic> {
    let c = &spec.diag_spectrum;
    if c.is_empty() {
        return Err(Error::InvalidSpec("empty spectrum".into()));
    }
    if let Some((i, v)) = c
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
    {
        return Err(Error::InvalidSpec(format!(
            "spectrum entry {i} is {v}, expected a finite value >= 0"
        )));
    }
    let linear = match &spec.linear_term {
        Some(b) if b.len() != c.len() => {
            return Err(Error::InvalidSpec(format!(
                "linear term has {} entries, spectrum has {}",
                b.len(),
                c.len()
            )))
        }
        Some(b) => b.clone(),
        None => vec![0.0; c.len()],
    };
    let mu = c.iter().copied().fold(f64::INFINITY, f64::min);
    let lip = c.iter().copied().fold(0.0, f64::max);
    if lip <= 0.0 {
        return Err(Error::InvalidSpec(
            "spectrum needs at least one positive entry".into(),
        ));
    }
    Ok(Quadratic {
        spectrum: c.clone(),
        linear,
        offset: spec.offset,
        mu,
        lip,
    })
}

impl Quadratic {
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

impl SmoothOracle for Quadratic {
    fn dim(&self) -> usize {
        self.spectrum.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let quad: f64 = self
            .spectrum
            .iter()
            .zip(x)
            .map(|(c, xi)| 0.5 * c * xi * xi)
            .sum();
        quad + linalg::dot(&self.linear, x) + self.offset
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.spectrum
            .iter()
            .zip(&self.linear)
            .zip(x)
            .map(|((c, b), xi)| c * xi + b)
            .collect()
    }

    fn mu(&self) -> f64 {
        self.mu
    }

    fn lip(&self) -> f64 {
        self.lip
    }

    fn minimum(&self) -> Option<f64> {
        let mut min = self.offset;
        for (c, b) in self.spectrum.iter().zip(&self.linear) {
            if *c > 0.0 {
                min -= 0.5 * b * b / c;
            } else if *b != 0.0 {
                return None;
            }
        }
        Some(min)
    }

    fn as_quadratic(&self) -> Option<&Quadratic> {
        Some(self)
    }
}

/// Gram eigenvalues at or below this fraction of the largest are treated as zero.
const RANK_TOLERANCE: f64 = 1e-10;

/// `½‖Ax − b‖²`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: Matrix,
    b: Vec<f64>,
    mu: f64,
    lip: f64,
    eta_pl: Option<f64>,
    minimum: f64,
    eigenvalues: Vec<f64>,
}

pub fn make_least_squares(a: Matrix, b: Vec<f64>) -> Result<LeastSquares> {
    if a.rows() != b.len() {
        return Err(Error::InvalidSpec(format!(
            "A has {} rows but b has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let eig = jacobi_eigen(&a.gram())?;
    let n = a.cols();
    let lip = eig.values[n - 1].max(0.0);
    let cutoff = RANK_TOLERANCE * lip;
    let nonzero = |v: f64| v > cutoff;
    let mu = if nonzero(eig.values[0]) {
        eig.values[0]
    } else {
        0.0
    };
    let eta_pl = eig.values.iter().copied().find(|&v| nonzero(v));

    // Minimum-norm least-squares solution through the Gram eigenbasis.
    let atb = a.tr_mul_vec(&b);
    let mut x_star = vec![0.0; n];
    for k in 0..n {
        let lambda = eig.values[k];
        if !nonzero(lambda) {
            continue;
        }
        let vk: Vec<f64> = (0..n).map(|i| eig.vectors.get(i, k)).collect();
        let coef = linalg::dot(&vk, &atb) / lambda;
        for (xs, v) in x_star.iter_mut().zip(&vk) {
            *xs += coef * v;
        }
    }
    let residual = linalg::sub(&a.mul_vec(&x_star), &b);
    let minimum = 0.5 * linalg::dot(&residual, &residual);

    Ok(LeastSquares {
        a,
        b,
        mu,
        lip,
        eta_pl,
        minimum,
        eigenvalues: eig.values,
    })
}

impl LeastSquares {
    /// Smallest nonzero Gram eigenvalue.
    pub fn eta_pl(&self) -> Option<f64> {
        self.eta_pl
    }

    pub fn gram_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

impl SmoothOracle for LeastSquares {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r = linalg::sub(&self.a.mul_vec(x), &self.b);
        0.5 * linalg::dot(&r, &r)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = linalg::sub(&self.a.mul_vec(x), &self.b);
        self.a.tr_mul_vec(&r)
    }

    fn mu(&self) -> f64 {
        self.mu
    }

    fn lip(&self) -> f64 {
        self.lip
    }

    fn pl_constant(&self) -> Option<f64> {
        self.eta_pl
    }

    fn minimum(&self) -> Option<f64> {
        Some(self.minimum)
    }
}

/// `Σ log(1 + exp(−yᵢ⟨aᵢ, x⟩)) + (l2/2)‖x‖²`.
#[derive(Debug, Clone)]
pub struct Logistic {
    a: Matrix,
    labels: Vec<f64>,
    l2_reg: f64,
    lip: f64,
}

pub fn make_logistic(a: Matrix, labels: Vec<f64>, l2_reg: f64) -> Result<Logistic> {
    if a.rows() != labels.len() {
        return Err(Error::InvalidSpec(format!(
            "A has {} rows but {} labels were given",
            a.rows(),
            labels.len()
        )));
    }
    if let Some((i, y)) = labels
        .iter()
        .enumerate()
        .find(|(_, y)| **y != 1.0 && **y != -1.0)
    {
        return Err(Error::InvalidSpec(format!("label {i} is {y}, expected ±1")));
    }
    if !(l2_reg >= 0.0) || !l2_reg.is_finite() {
        return Err(Error::InvalidSpec(format!("l2_reg = {l2_reg}")));
    }
    let eig = jacobi_eigen(&a.gram())?;
    let lip = eig.values.last().copied().unwrap_or(0.0).max(0.0) / 4.0 + l2_reg;
    Ok(Logistic {
        a,
        labels,
        l2_reg,
        lip,
    })
}

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl SmoothOracle for Logistic {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let loss: f64 = (0..self.a.rows())
            .map(|i| softplus(-self.labels[i] * linalg::dot(self.a.row(i), x)))
            .sum();
        loss + 0.5 * self.l2_reg * linalg::dot(x, x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = linalg::scale(x, self.l2_reg);
        for i in 0..self.a.rows() {
            let y = self.labels[i];
            let w = -y * sigmoid(-y * linalg::dot(self.a.row(i), x));
            for (gj, aij) in g.iter_mut().zip(self.a.row(i)) {
                *gj += w * aij;
            }
        }
        g
    }

    fn mu(&self) -> f64 {
        self.l2_reg
    }

    fn lip(&self) -> f64 {
        self.lip
    }
}
