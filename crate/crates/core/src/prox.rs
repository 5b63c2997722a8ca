//! Nonsmooth convex terms `g` with closed-form proximal operators.
//!
//! All built-ins are separable, so `∂g(x)` is a product of closed
//! intervals and `d(0, ∂φ(x))` reduces to a coordinate-wise clamp.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::pg::CompositeProblem;

/// Closed interval `[lo, hi]`, endpoints possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn contains(&self, v: f64, slack: f64) -> bool {
        v >= self.lo - slack && v <= self.hi + slack
    }

    /// Projection of `v` onto the interval.
    pub fn clamp(&self, v: f64) -> f64 {
        v.max(self.lo).min(self.hi)
    }
}

/// A proper closed convex function with an exact proximal operator.
pub trait NonsmoothOracle: Debug + Send + Sync {
    /// `g(x)`, `+∞` outside the domain.
    fn value(&self, x: &[f64]) -> f64;

    /// `argmin_u step·g(u) + ½‖u − x‖²`.
    fn prox(&self, x: &[f64], step: f64) -> Vec<f64>;

    /// Fixed dimension, for terms that carry per-coordinate data.
    fn dim(&self) -> Option<usize> {
        None
    }

    /// True when `g ≡ 0`.
    fn is_zero(&self) -> bool {
        false
    }

    fn separable(&self) -> Option<&dyn Separable> {
        None
    }
}

/// Coordinate-wise view of a separable `g = Σ gᵢ(xᵢ)`.
pub trait Separable {
    fn value_1d(&self, i: usize, u: f64) -> f64;

    fn prox_1d(&self, i: usize, v: f64, step: f64) -> f64;

    /// `∂gᵢ(v)`, or `None` when `v ∉ dom gᵢ`.
    fn subdiff_interval(&self, i: usize, v: f64) -> Option<Interval>;

    /// `dom gᵢ` as an interval.
    fn domain_1d(&self, _i: usize) -> Interval {
        Interval::REAL_LINE
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} = {v}, expected a finite value >= 0"
        )))
    }
}

fn soft_threshold(v: f64, tau: f64) -> f64 {
    v.signum() * (v.abs() - tau).max(0.0)
}

/// Coordinate-wise soft threshold `sign(xᵢ)·max(|xᵢ| − tau, 0)`.
pub fn prox_l1(x: &[f64], tau: f64) -> Result<Vec<f64>> {
    check_nonneg("tau", tau)?;
    Ok(x.iter().map(|&v| soft_threshold(v, tau)).collect())
}

/// Coordinate-wise clamp to `[lo, hi]`.
pub fn prox_box(x: &[f64], lo: &[f64], hi: &[f64]) -> Result<Vec<f64>> {
    let b = BoxIndicator::new(lo.to_vec(), hi.to_vec())?;
    if x.len() != lo.len() {
        return Err(Error::Dimension {
            expected: lo.len(),
            got: x.len(),
        });
    }
    Ok(b.prox(x, 1.0))
}

/// Prox of `tau1·‖·‖₁ + (tau2/2)‖·‖²`: soft threshold by `tau1`, then shrink by `1/(1 + tau2)`.
pub fn prox_elastic_net(x: &[f64], tau1: f64, tau2: f64) -> Result<Vec<f64>> {
    check_nonneg("tau1", tau1)?;
    check_nonneg("tau2", tau2)?;
    Ok(x.iter()
        .map(|&v| soft_threshold(v, tau1) / (1.0 + tau2))
        .collect())
}

/// `g ≡ 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Zero;

pub fn zero_oracle() -> Zero {
    Zero
}

impl NonsmoothOracle for Zero {
    fn value(&self, _x: &[f64]) -> f64 {
        0.0
    }

    fn prox(&self, x: &[f64], _step: f64) -> Vec<f64> {
        x.to_vec()
    }

    fn is_zero(&self) -> bool {
        true
    }

    fn separable(&self) -> Option<&dyn Separable> {
        Some(self)
    }
}

impl Separable for Zero {
    fn value_1d(&self, _i: usize, _u: f64) -> f64 {
        0.0
    }

    fn prox_1d(&self, _i: usize, v: f64, _step: f64) -> f64 {
        v
    }

    fn subdiff_interval(&self, _i: usize, _v: f64) -> Option<Interval> {
        Some(Interval::point(0.0))
    }
}

/// `weight·‖x‖₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Norm {
    weight: f64,
}

impl L1Norm {
    pub fn new(weight: f64) -> Result<Self> {
        check_nonneg("weight", weight)?;
        Ok(Self { weight })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

impl NonsmoothOracle for L1Norm {
    fn value(&self, x: &[f64]) -> f64 {
        self.weight * x.iter().map(|v| v.abs()).sum::<f64>()
    }

    fn prox(&self, x: &[f64], step: f64) -> Vec<f64> {
        x.iter()
            .map(|&v| soft_threshold(v, step * self.weight))
            .collect()
    }

    fn separable(&self) -> Option<&dyn Separable> {
        Some(self)
    }
}

impl Separable for L1Norm {
    fn value_1d(&self, _i: usize, u: f64) -> f64 {
        self.weight * u.abs()
    }

    fn prox_1d(&self, _i: usize, v: f64, step: f64) -> f64 {
        soft_threshold(v, step * self.weight)
    }

    fn subdiff_interval(&self, _i: usize, v: f64) -> Option<Interval> {
        Some(if v == 0.0 {
            Interval::new(-self.weight, self.weight)
        } else {
            Interval::point(self.weight * v.signum())
        })
    }
}

/// Indicator of the box `{x : lo ≤ x ≤ hi}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxIndicator {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxIndicator {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::InvalidSpec(format!(
                "box bounds have lengths {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        for (i, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if !(l <= h) || *l == f64::INFINITY || *h == f64::NEG_INFINITY {
                return Err(Error::InvalidSpec(format!(
                    "box coordinate {i} has lo = {l} > hi = {h}"
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }
}

impl NonsmoothOracle for BoxIndicator {
    fn value(&self, x: &[f64]) -> f64 {
        if x.len() == self.lo.len() && (0..x.len()).all(|i| self.value_1d(i, x[i]) == 0.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, x: &[f64], _step: f64) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| self.prox_1d(i, v, 1.0))
            .collect()
    }

    fn dim(&self) -> Option<usize> {
        Some(self.lo.len())
    }

    fn separable(&self) -> Option<&dyn Separable> {
        Some(self)
    }
}

impl Separable for BoxIndicator {
    fn value_1d(&self, i: usize, u: f64) -> f64 {
        if u >= self.lo[i] && u <= self.hi[i] {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox_1d(&self, i: usize, v: f64, _step: f64) -> f64 {
        v.max(self.lo[i]).min(self.hi[i])
    }

    fn subdiff_interval(&self, i: usize, v: f64) -> Option<Interval> {
        let (lo, hi) = (self.lo[i], self.hi[i]);
        if v < lo || v > hi {
            return None;
        }
        // normal cone of [lo, hi] at v
        let left = if v == lo { f64::NEG_INFINITY } else { 0.0 };
        let right = if v == hi { f64::INFINITY } else { 0.0 };
        Some(Interval::new(left, right))
    }

    fn domain_1d(&self, i: usize) -> Interval {
        Interval::new(self.lo[i], self.hi[i])
    }
}

/// `l1·‖x‖₁ + (l2/2)‖x‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticNet {
    l1: f64,
    l2: f64,
}

impl ElasticNet {
    pub fn new(l1: f64, l2: f64) -> Result<Self> {
        check_nonneg("l1", l1)?;
        check_nonneg("l2", l2)?;
        Ok(Self { l1, l2 })
    }
}

impl NonsmoothOracle for ElasticNet {
    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .map(|&u| self.l1 * u.abs() + 0.5 * self.l2 * u * u)
            .sum()
    }

    fn prox(&self, x: &[f64], step: f64) -> Vec<f64> {
        x.iter().map(|&v| self.prox_1d(0, v, step)).collect()
    }

    fn separable(&self) -> Option<&dyn Separable> {
        Some(self)
    }
}

impl Separable for ElasticNet {
    fn value_1d(&self, _i: usize, u: f64) -> f64 {
        self.l1 * u.abs() + 0.5 * self.l2 * u * u
    }

    fn prox_1d(&self, _i: usize, v: f64, step: f64) -> f64 {
        soft_threshold(v, step * self.l1) / (1.0 + step * self.l2)
    }

    fn subdiff_interval(&self, _i: usize, v: f64) -> Option<Interval> {
        Some(if v == 0.0 {
            Interval::new(-self.l1, self.l1)
        } else {
            Interval::point(self.l1 * v.signum() + self.l2 * v)
        })
    }
}

/// `d(0, ∂φ(x))` together with the subgradient of `g` attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdiffDistance {
    pub value: f64,
    pub attaining_subgradient: Vec<f64>,
}

/// Exact distance from the origin to `∂φ(x) = ∇f(x) + ∂g(x)` for separable `g`.
pub fn subdiff_distance(problem: &CompositeProblem, x: &[f64]) -> Result<SubdiffDistance> {
    let sep = problem
        .nonsmooth()
        .separable()
        .ok_or(Error::UnsupportedStructure)?;
    let grad = problem.smooth().gradient(x);
    subdiff_distance_with_gradient(sep, x, &grad)
}

pub(crate) fn subdiff_distance_with_gradient(
    sep: &dyn Separable,
    x: &[f64],
    grad: &[f64],
) -> Result<SubdiffDistance> {
    let mut s = Vec::with_capacity(x.len());
    let mut sq = 0.0;
    for (i, (&xi, &gi)) in x.iter().zip(grad).enumerate() {
        if !gi.is_finite() {
            return Err(Error::NonFiniteGradient {
                coordinate: i,
                value: gi,
            });
        }
        let interval = sep.subdiff_interval(i, xi).ok_or(Error::Domain {
            coordinate: i,
            value: xi,
        })?;
        let si = interval.clamp(-gi);
        let r = gi + si;
        sq += r * r;
        s.push(si);
    }
    Ok(SubdiffDistance {
        value: sq.sqrt(),
        attaining_subgradient: s,
    })
}

/// Checks `v ∈ ∂g(u)` coordinate-wise, allowing `slack`.
pub fn in_subdifferential(sep: &dyn Separable, u: &[f64], v: &[f64], slack: f64) -> bool {
    u.iter().zip(v).enumerate().all(|(i, (&ui, &vi))| {
        sep.subdiff_interval(i, ui)
            .is_some_and(|iv| iv.contains(vi, slack))
    })
}
