//! Closed-form contraction factors, descent coefficients, PL rates and the
//! inequality slacks built from them.
//!
//! Every slack is oriented so that a nonnegative value means the inequality
//! holds. Slacks carry the magnitude of their largest term; comparisons use
//! `value ≥ −tol·max(1, scale)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pg::IterateRecord;
use crate::smooth::SmoothOracle;

/// Default relative tolerance for slack comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub value: f64,
    pub scale: f64,
}

impl Slack {
    pub fn new(value: f64, terms: &[f64]) -> Self {
        let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        Self { value, scale }
    }

    /// `value / max(1, scale)`.
    pub fn normalized(&self) -> f64 {
        self.value / self.scale.max(1.0)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.normalized() >= -tol
    }
}

fn check_constants(mu: f64, lip: f64) -> Result<()> {
    if !(mu >= 0.0) || !(lip > 0.0) || !lip.is_finite() {
        return Err(Error::InvalidConstants(format!(
            "need 0 <= mu and L > 0, got mu = {mu}, L = {lip}"
        )));
    }
    if mu > lip {
        return Err(Error::InvalidConstants(format!(
            "mu = {mu} exceeds L = {lip}"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} = {v}, expected > 0"
        )))
    }
}

/// `ρ(t) = max{|1 − L·t|, |1 − μ·t|}`.
pub fn rho(t: f64, mu: f64, lip: f64) -> Result<f64> {
    check_constants(mu, lip)?;
    check_positive("t", t)?;
    Ok((1.0 - lip * t).abs().max((1.0 - mu * t).abs()))
}

/// All theoretical quantities for one `(t, μ, L, η)` setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBound {
    pub rho: f64,
    /// `t/2`
    pub descent_coeff_now: f64,
    /// `t/(2(1 − μt))`, `+∞` once `μt ≥ 1`.
    pub descent_coeff_next: f64,
    /// `(1 − ηt)/(1 + ηt)`
    pub pl_rate_new: Option<f64>,
    /// `1 − ηt`
    pub pl_rate_baseline: Option<f64>,
}

pub fn rate_bound(t: f64, mu: f64, lip: f64, eta: Option<f64>) -> Result<RateBound> {
    let rho = rho(t, mu, lip)?;
    let descent_coeff_next = if mu * t < 1.0 {
        t / (2.0 * (1.0 - mu * t))
    } else {
        f64::INFINITY
    };
    let (pl_rate_new, pl_rate_baseline) = match eta {
        Some(e) => {
            check_positive("eta", e)?;
            let a = e * t;
            (Some((1.0 - a) / (1.0 + a)), Some(1.0 - a))
        }
        None => (None, None),
    };
    Ok(RateBound {
        rho,
        descent_coeff_now: t / 2.0,
        descent_coeff_next,
        pl_rate_new,
        pl_rate_baseline,
    })
}

/// `φ(x) − φ(x⁺) − (t/2)‖𝒢ₜ(x)‖² − (t/(2(1 − μt)))‖𝒢ₜ(x⁺)‖²`.
///
/// With `mu = 0` this is the convex-case form; fed with gradient norms and
/// `g ≡ 0` it is the gradient-descent form.
pub fn refined_descent_slack(
    phi_x: f64,
    phi_xp: f64,
    g_norm: f64,
    gp_norm: f64,
    t: f64,
    mu: f64,
) -> Result<Slack> {
    check_positive("t", t)?;
    if !(mu >= 0.0) {
        return Err(Error::InvalidConstants(format!("mu = {mu}")));
    }
    if mu * t >= 1.0 {
        return Err(Error::SingularCoefficient(mu * t));
    }
    let now = 0.5 * t * g_norm * g_norm;
    let next = t / (2.0 * (1.0 - mu * t)) * gp_norm * gp_norm;
    Ok(Slack::new(
        phi_x - phi_xp - now - next,
        &[phi_x, phi_xp, now, next],
    ))
}

/// The classic bound `φ(x) ≥ φ(x⁺) + (t/2)‖𝒢ₜ(x)‖²`.
pub fn classic_descent_slack(phi_x: f64, phi_xp: f64, g_norm: f64, t: f64) -> Slack {
    let now = 0.5 * t * g_norm * g_norm;
    Slack::new(phi_x - phi_xp - now, &[phi_x, phi_xp, now])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlBounds {
    /// `gap·(1 − ηt)/(1 + ηt)`
    pub new_bound: f64,
    /// `gap·(1 − ηt)`
    pub baseline_bound: f64,
}

pub fn pl_gap_bound(gap: f64, eta: f64, t: f64) -> Result<PlBounds> {
    if !(gap >= 0.0) {
        return Err(Error::InvalidArgument(format!("gap = {gap}")));
    }
    check_positive("eta", eta)?;
    check_positive("t", t)?;
    let a = eta * t;
    if a > 1.0 {
        return Err(Error::InvalidConstants(format!(
            "eta*t = {a} exceeds 1 (the PL constant cannot exceed the curvature)"
        )));
    }
    Ok(PlBounds {
        new_bound: gap * (1.0 - a) / (1.0 + a),
        baseline_bound: gap * (1.0 - a),
    })
}

/// How slack (iv) of [`interpolation_slacks`] was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationForm {
    /// The full interpolation inequality (`μ < L`).
    Full,
    /// `μ = L`: the slack is `−‖x − y − (∇f(x) − ∇f(y))/L‖`.
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationSlacks {
    /// `‖∇f(x) − ∇f(y)‖ − μ‖x − y‖`
    pub lower_lip: Slack,
    /// `L‖x − y‖ − ‖∇f(x) − ∇f(y)‖`
    pub upper_lip: Slack,
    /// `⟨Δg, Δx⟩ − μL/(μ+L)‖Δx‖² − 1/(μ+L)‖Δg‖²`
    pub inner_prod: Slack,
    /// The smooth strongly convex interpolation inequality.
    pub interp: Slack,
    pub interp_form: InterpolationForm,
}

impl InterpolationSlacks {
    pub fn all(&self) -> [Slack; 4] {
        [self.lower_lip, self.upper_lip, self.inner_prod, self.interp]
    }
}

/// The curvature inequalities for `f` at the pair `(x, y)`, using the
/// oracle's declared `mu` and `lip`.
pub fn interpolation_slacks(
    f: &dyn SmoothOracle,
    x: &[f64],
    y: &[f64],
) -> Result<InterpolationSlacks> {
    let (mu, lip) = (f.mu(), f.lip());
    check_constants(mu, lip)?;
    let gx = f.gradient(x);
    let gy = f.gradient(y);
    let dx = linalg::sub(x, y);
    let dg = linalg::sub(&gx, &gy);
    let ndx = linalg::norm(&dx);
    let ndg = linalg::norm(&dg);

    let lower_lip = Slack::new(ndg - mu * ndx, &[ndg, mu * ndx]);
    let upper_lip = Slack::new(lip * ndx - ndg, &[ndg, lip * ndx]);

    let inner = linalg::dot(&dg, &dx);
    let a = mu * lip / (mu + lip) * ndx * ndx;
    let b = ndg * ndg / (mu + lip);
    let inner_prod = Slack::new(inner - a - b, &[inner, a, b]);

    let residual: Vec<f64> = dx.iter().zip(&dg).map(|(d, g)| d - g / lip).collect();
    let nres = linalg::norm(&residual);
    let (interp, interp_form) = if mu < lip {
        let fx = f.value(x);
        let fy = f.value(y);
        let lin = linalg::dot(&gy, &dx);
        let grad_term = ndg * ndg / (2.0 * lip);
        let res_term = mu * lip / (2.0 * (lip - mu)) * nres * nres;
        (
            Slack::new(
                fx - fy - lin - grad_term - res_term,
                &[fx, fy, lin, grad_term, res_term],
            ),
            InterpolationForm::Full,
        )
    } else {
        (
            Slack::new(-nres, &[ndx, ndg / lip]),
            InterpolationForm::Limit,
        )
    };

    Ok(InterpolationSlacks {
        lower_lip,
        upper_lip,
        inner_prod,
        interp,
        interp_form,
    })
}

/// The three links of the contraction chain
/// `‖𝒢ₜ(x⁺)‖ ≤ d(0,∂φ(x⁺)) ≤ ρ‖𝒢ₜ(x)‖ ≤ ρ·d(0,∂φ(x))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSlacks {
    /// `d(0,∂φ(x⁺)) − ‖𝒢ₜ(x⁺)‖`; needs a separable `g`.
    pub s1: Option<Slack>,
    /// `ρ‖𝒢ₜ(x)‖ − d(0,∂φ(x⁺))`, with `‖∇f(x⁺) + s⁺‖` standing in for the
    /// distance when it is unavailable.
    pub s2: Slack,
    /// `ρ·d(0,∂φ(x)) − ρ‖𝒢ₜ(x)‖`; needs a separable `g`.
    pub s3: Option<Slack>,
}

impl ChainSlacks {
    pub fn worst(&self) -> Slack {
        [self.s1, Some(self.s2), self.s3]
            .into_iter()
            .flatten()
            .min_by(|a, b| a.normalized().total_cmp(&b.normalized()))
            .expect("s2 is always present")
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::IncompleteRecord(format!("{name} = {v}")))
    }
}

pub fn theorem1_chain_slacks(
    prev: &IterateRecord,
    next: &IterateRecord,
    rho: f64,
) -> Result<ChainSlacks> {
    if next.k != prev.k + 1 {
        return Err(Error::IncompleteRecord(format!(
            "records {} and {} are not consecutive",
            prev.k, next.k
        )));
    }
    let g = finite("prox_grad_norm", prev.prox_grad_norm)?;
    let gp = finite("prox_grad_norm", next.prox_grad_norm)?;
    let d = prev
        .subdiff_dist
        .map(|v| finite("subdiff_dist", v))
        .transpose()?;
    let dp = next
        .subdiff_dist
        .map(|v| finite("subdiff_dist", v))
        .transpose()?;

    let s1 = dp.map(|dp| Slack::new(dp - gp, &[dp, gp]));
    let upper = match dp {
        Some(dp) => dp,
        None => finite("residual_grad_norm", prev.residual_grad_norm)?,
    };
    let s2 = Slack::new(rho * g - upper, &[rho * g, upper]);
    let s3 = d.map(|d| Slack::new(rho * d - rho * g, &[rho * d, rho * g]));
    Ok(ChainSlacks { s1, s2, s3 })
}
