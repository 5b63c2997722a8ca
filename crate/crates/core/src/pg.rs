//! The proximal gradient iteration `x⁺ = prox_{tg}(x − t∇f(x))` with a
//! constant step, the proximal gradient map `𝒢ₜ(x) = (x − x⁺)/t`, and
//! trace recording.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::prox::{subdiff_distance_with_gradient, NonsmoothOracle};
use crate::smooth::SmoothOracle;

/// `φ = f + g`, optionally with `min φ` and a PL constant `η`.
#[derive(Debug, Clone)]
pub struct CompositeProblem {
    smooth: Arc<dyn SmoothOracle>,
    nonsmooth: Arc<dyn NonsmoothOracle>,
    known_min: Option<f64>,
    pl_constant: Option<f64>,
}

impl CompositeProblem {
    /// Builds the problem and fills in `min φ` and `η` where they have a
    /// closed form: `g ≡ 0` with an oracle that reports them, or a
    /// diagonal quadratic plus a separable `g` (minimum only).
    pub fn new(smooth: Arc<dyn SmoothOracle>, nonsmooth: Arc<dyn NonsmoothOracle>) -> Result<Self> {
        if let Some(d) = nonsmooth.dim() {
            if d != smooth.dim() {
                return Err(Error::Dimension {
                    expected: smooth.dim(),
                    got: d,
                });
            }
        }
        let mut problem = Self {
            smooth,
            nonsmooth,
            known_min: None,
            pl_constant: None,
        };
        if problem.nonsmooth.is_zero() {
            problem.known_min = problem.smooth.minimum();
            problem.pl_constant = problem.smooth.pl_constant();
        } else {
            problem.known_min = problem.separable_quadratic_minimum();
        }
        Ok(problem)
    }

    pub fn with_known_min(mut self, known_min: Option<f64>) -> Self {
        self.known_min = known_min;
        self
    }

    pub fn with_pl_constant(mut self, eta: Option<f64>) -> Result<Self> {
        if let Some(e) = eta {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::InvalidConstants(format!(
                    "PL constant must be positive, got {e}"
                )));
            }
        }
        self.pl_constant = eta;
        Ok(self)
    }

    pub fn smooth(&self) -> &dyn SmoothOracle {
        self.smooth.as_ref()
    }

    pub fn nonsmooth(&self) -> &dyn NonsmoothOracle {
        self.nonsmooth.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.smooth.dim()
    }

    pub fn known_min(&self) -> Option<f64> {
        self.known_min
    }

    pub fn pl_constant(&self) -> Option<f64> {
        self.pl_constant
    }

    /// `min_u ½cu² + bu + gᵢ(u)` is attained at `prox_{gᵢ/c}(−b/c)`.
    fn separable_quadratic_minimum(&self) -> Option<f64> {
        let q = self.smooth.as_quadratic()?;
        let sep = self.nonsmooth.separable()?;
        let mut x = Vec::with_capacity(q.spectrum().len());
        for (i, (&c, &b)) in q.spectrum().iter().zip(q.linear()).enumerate() {
            if c <= 0.0 {
                return None;
            }
            x.push(sep.prox_1d(i, -b / c, 1.0 / c));
        }
        let v = phi_value(self, &x);
        v.is_finite().then_some(v)
    }
}

/// `φ(x) = f(x) + g(x)`; `+∞` outside `dom g`.
pub fn phi_value(problem: &CompositeProblem, x: &[f64]) -> f64 {
    let g = problem.nonsmooth.value(x);
    if g == f64::INFINITY {
        return g;
    }
    problem.smooth.value(x) + g
}

/// One proximal gradient step.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxGradStep {
    /// `𝒢ₜ(x)`
    pub g_t: Vec<f64>,
    pub x_plus: Vec<f64>,
    /// The element of `∂g(x⁺)` selected by the prox: `𝒢ₜ(x) − ∇f(x)`.
    pub s_plus: Vec<f64>,
}

fn check_step(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "step must be positive and finite, got {t}"
        )))
    }
}

fn check_gradient(grad: &[f64]) -> Result<()> {
    match grad.iter().position(|g| !g.is_finite()) {
        Some(i) => Err(Error::NonFiniteGradient {
            coordinate: i,
            value: grad[i],
        }),
        None => Ok(()),
    }
}

pub fn prox_grad_map(problem: &CompositeProblem, x: &[f64], t: f64) -> Result<ProxGradStep> {
    check_step(t)?;
    if x.len() != problem.dim() {
        return Err(Error::Dimension {
            expected: problem.dim(),
            got: x.len(),
        });
    }
    let grad = problem.smooth.gradient(x);
    step_from_gradient(problem, x, &grad, t)
}

fn step_from_gradient(
    problem: &CompositeProblem,
    x: &[f64],
    grad: &[f64],
    t: f64,
) -> Result<ProxGradStep> {
    check_gradient(grad)?;
    let forward: Vec<f64> = x.iter().zip(grad).map(|(xi, gi)| xi - t * gi).collect();
    let x_plus = problem.nonsmooth.prox(&forward, t);
    let g_t: Vec<f64> = x.iter().zip(&x_plus).map(|(a, b)| (a - b) / t).collect();
    let s_plus = linalg::sub(&g_t, grad);
    Ok(ProxGradStep {
        g_t,
        x_plus,
        s_plus,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateRecord {
    pub k: usize,
    pub x: Vec<f64>,
    pub phi: f64,
    /// `𝒢ₜ(x)`
    pub prox_grad: Vec<f64>,
    pub prox_grad_norm: f64,
    /// Subgradient of `g` at `x⁺` picked by the step.
    pub s_plus: Vec<f64>,
    /// `‖∇f(x⁺) + s⁺‖`
    pub residual_grad_norm: f64,
    /// `d(0, ∂φ(x))`, present when `g` is separable.
    pub subdiff_dist: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIters,
    ToleranceMet,
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub step: f64,
    pub records: Vec<IterateRecord>,
    pub stop_reason: StopReason,
    /// True when the start point was outside `dom g` and record 0 is its projection.
    pub projected_start: bool,
}

/// Runs PG with constant step `t` until `‖𝒢ₜ(x)‖ ≤ tol·max(1, ‖𝒢ₜ(x₀)‖)`
/// or `max_iters` steps have been taken.
pub fn run_pg(
    problem: &CompositeProblem,
    x0: &[f64],
    t: f64,
    max_iters: usize,
    tol: f64,
) -> Result<Trace> {
    check_step(t)?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tol = {tol}")));
    }
    if x0.len() != problem.dim() {
        return Err(Error::Dimension {
            expected: problem.dim(),
            got: x0.len(),
        });
    }
    let lip = problem.smooth.lip();
    if t * lip > 2.0 {
        log::warn!(
            "step {t} exceeds 2/L = {}; contraction factor exceeds 1",
            2.0 / lip
        );
    }

    let mut x = x0.to_vec();
    let mut projected_start = false;
    if problem.nonsmooth.value(&x) == f64::INFINITY {
        x = problem.nonsmooth.prox(&x, t);
        projected_start = true;
    }
    let phi0 = phi_value(problem, &x);
    if !phi0.is_finite() {
        return Err(Error::StartPoint(phi0));
    }

    let separable = problem.nonsmooth.separable();
    let mut grad = problem.smooth.gradient(&x);
    let mut phi = phi0;
    let mut records = Vec::new();
    let mut threshold = None;

    let stop_reason = loop {
        let k = records.len();
        let step = step_from_gradient(problem, &x, &grad, t)?;
        let grad_plus = problem.smooth.gradient(&step.x_plus);
        let residual = linalg::norm(&linalg::add(&grad_plus, &step.s_plus));
        let subdiff_dist = match separable {
            Some(sep) => Some(subdiff_distance_with_gradient(sep, &x, &grad)?.value),
            None => None,
        };
        let g_norm = linalg::norm(&step.g_t);
        let threshold = *threshold.get_or_insert(tol * g_norm.max(1.0));
        let ProxGradStep {
            g_t,
            x_plus,
            s_plus,
        } = step;
        records.push(IterateRecord {
            k,
            x: std::mem::replace(&mut x, x_plus),
            phi,
            prox_grad: g_t,
            prox_grad_norm: g_norm,
            s_plus,
            residual_grad_norm: residual,
            subdiff_dist,
        });

        if g_norm <= threshold {
            break StopReason::ToleranceMet;
        }
        if k == max_iters {
            break StopReason::MaxIters;
        }
        if x == records[k].x {
            break StopReason::Stalled;
        }
        grad = grad_plus;
        phi = phi_value(problem, &x);
    };

    Ok(Trace {
        step: t,
        records,
        stop_reason,
        projected_start,
    })
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

impl Trace {
    /// CSV with columns `k, phi, prox_grad_norm, residual_grad_norm,
    /// subdiff_dist, ratio_to_prev`; floats carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("k,phi,prox_grad_norm,residual_grad_norm,subdiff_dist,ratio_to_prev\n");
        let mut prev: Option<f64> = None;
        for r in &self.records {
            let dist = r.subdiff_dist.map(fmt17).unwrap_or_default();
            let ratio = match prev {
                Some(p) if p > 0.0 => fmt17(r.prox_grad_norm / p),
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.k,
                fmt17(r.phi),
                fmt17(r.prox_grad_norm),
                fmt17(r.residual_grad_norm),
                dist,
                ratio
            );
            prev = Some(r.prox_grad_norm);
        }
        out
    }

    pub fn last(&self) -> &IterateRecord {
        self.records.last().expect("trace has at least one record")
    }
}
