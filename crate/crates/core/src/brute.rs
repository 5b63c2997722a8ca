//! Brute-force reference oracles.
//!
//! Nothing here calls the closed-form proximal operators or the rate
//! formulas; tests compare those against the routines below.

use crate::error::{Error, Result};
use crate::smooth::SmoothOracle;

const GOLDEN_MAX_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub argmin: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit before the bracket shrank below `tol`.
    pub converged: bool,
}

/// Search interval used for built-in terms whose subgradients are bounded by
/// their weights.
pub fn default_bracket(x: f64, t: f64) -> (f64, f64) {
    let r = 10.0 * (1.0 + t);
    (x - r, x + r)
}

/// Intersects a bracket with the domain of an indicator-like term.
pub fn clip_bracket(bracket: (f64, f64), domain: (f64, f64)) -> Result<(f64, f64)> {
    let lo = bracket.0.max(domain.0);
    let hi = bracket.1.min(domain.1);
    if lo > hi {
        return Err(Error::Bracket { lo, hi });
    }
    Ok((lo, hi))
}

/// Golden-section minimization of `u ↦ t·g(u) + ½(u − x)²` over `bracket`.
pub fn prox_1d_golden(
    g: impl Fn(f64) -> f64,
    t: f64,
    x: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<GoldenResult> {
    if !(t > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t}, tol = {tol}")));
    }
    let h = |u: f64| t * g(u) + 0.5 * (u - x) * (u - x);
    let (mut a, mut b) = bracket;
    if !(a <= b) {
        return Err(Error::Bracket { lo: a, hi: b });
    }
    let (ha, hb) = (h(a), h(b));
    let hmid = h(0.5 * (a + b));
    if ha < hmid && hb < hmid {
        return Err(Error::Bracket { lo: a, hi: b });
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut hc, mut hd) = (h(c), h(d));
    let mut iterations = 0;
    while b - a > tol && iterations < GOLDEN_MAX_ITERS {
        iterations += 1;
        if hc <= hd {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d);
        }
    }
    let converged = b - a <= tol;
    if !converged {
        log::warn!(
            "golden section stopped after {iterations} iterations with width {}",
            b - a
        );
    }

    let mid = 0.5 * (a + b);
    let mut best = (mid, h(mid));
    for (u, hu) in [(bracket.0, ha), (bracket.1, hb)] {
        if hu < best.1 {
            best = (u, hu);
        }
    }
    Ok(GoldenResult {
        argmin: best.0,
        iterations,
        converged,
    })
}

/// Central differences `(f(x + h·eᵢ) − f(x − h·eᵢ)) / 2h`.
pub fn fd_gradient(f: &dyn SmoothOracle, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f.value(&probe);
            probe[i] = x[i] - h;
            let down = f.value(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Worst one-step contraction `max_c |1 − c·t|` of the proximal gradient
/// norm over 1D quadratics `(c/2)x²` with `c` on a uniform grid of `[mu, lip]`.
pub fn worst_ratio_grid(mu: f64, lip: f64, t: f64, grid_points: usize) -> f64 {
    let n = grid_points.max(2);
    let h = (lip - mu) / (n - 1) as f64;
    (0..n)
        .map(|j| {
            let c = if j == n - 1 {
                lip
            } else {
                (mu + j as f64 * h).min(lip)
            };
            (1.0 - c * t).abs()
        })
        .fold(0.0, f64::max)
}
