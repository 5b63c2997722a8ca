//! Per-run certification of a proximal gradient trace against the
//! contraction chain, the refined descent inequalities and the PL rates,
//! plus constructive worst-case instances and seeded problem suites.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pg::{phi_value, run_pg, CompositeProblem, IterateRecord, Trace};
use crate::prox::{BoxIndicator, ElasticNet, L1Norm, NonsmoothOracle, Zero};
use crate::rates::{self, Slack, DEFAULT_TOLERANCE};
use crate::rng::SplitMix64;
use crate::smooth::{make_quadratic, QuadraticSpec};

/// Ratio pairs whose denominator is below this are left out of tightness statistics.
pub const RATIO_FLOOR: f64 = 1e-14;

/// A pair also needs `t·‖𝒢ₜ(x)‖ ≥ RATIO_RELATIVE_STEP · max(1, ‖x‖)`: shorter
/// steps are dominated by cancellation in `x − x⁺` and give meaningless ratios.
pub const RATIO_RELATIVE_STEP: f64 = 1e-5;

/// Relative slack on `t ≤ 1/L` so that `t = 1.0 / L` always qualifies.
const STEP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Thm1Chain,
    Lemma2,
    DescentAdd20,
    DescentAdd21,
    DescentAdd22,
    PlAdd23,
    PlGeneralized,
    Interpolation,
    Tightness,
}

impl CheckName {
    pub const ALL: [CheckName; 9] = [
        CheckName::Thm1Chain,
        CheckName::Lemma2,
        CheckName::DescentAdd20,
        CheckName::DescentAdd21,
        CheckName::DescentAdd22,
        CheckName::PlAdd23,
        CheckName::PlGeneralized,
        CheckName::Interpolation,
        CheckName::Tightness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Thm1Chain => "thm1_chain",
            CheckName::Lemma2 => "lemma2",
            CheckName::DescentAdd20 => "descent_add20",
            CheckName::DescentAdd21 => "descent_add21",
            CheckName::DescentAdd22 => "descent_add22",
            CheckName::PlAdd23 => "pl_add23",
            CheckName::PlGeneralized => "pl_generalized",
            CheckName::Interpolation => "interpolation",
            CheckName::Tightness => "tightness",
        }
    }
}

impl std::fmt::Display for CheckName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Evaluated,
    NotApplicable,
}

/// Whether a check certifies a theorem under known hypotheses or only
/// self-consistency with a constant estimated from the trace itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Theorem,
    EmpiricalEta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: CheckName,
    pub status: CheckStatus,
    pub grade: Grade,
    /// Smallest normalized slack `value / max(1, scale)`; absent when nothing was evaluated.
    pub worst_slack: Option<f64>,
    pub worst_iteration: Option<usize>,
    pub tolerance: f64,
    pub passed: bool,
    /// Theoretical rate the check compares against, where one exists.
    pub bound: Option<f64>,
    /// Observed worst rate (contraction ratio) where meaningful.
    pub observed: Option<f64>,
    pub note: Option<String>,
}

impl CheckResult {
    fn not_applicable(name: CheckName, tolerance: f64, why: &str) -> Self {
        Self {
            name,
            status: CheckStatus::NotApplicable,
            grade: Grade::Theorem,
            worst_slack: None,
            worst_iteration: None,
            tolerance,
            passed: true,
            bound: None,
            observed: None,
            note: Some(why.to_string()),
        }
    }

    fn evaluated(name: CheckName, tolerance: f64, worst: Worst) -> Self {
        let passed = worst.slack.is_none_or(|s| s >= -tolerance);
        Self {
            name,
            status: CheckStatus::Evaluated,
            grade: Grade::Theorem,
            worst_slack: worst.slack,
            worst_iteration: worst.iteration,
            tolerance,
            passed,
            bound: None,
            observed: None,
            note: None,
        }
    }

    fn with_bound(mut self, bound: Option<f64>, observed: Option<f64>) -> Self {
        self.bound = bound;
        self.observed = observed;
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub problem_id: String,
    pub step: f64,
    pub mu: f64,
    pub lip: f64,
    pub rho: f64,
    pub iterations: usize,
    pub checks: Vec<CheckResult>,
    pub overall: Verdict,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    pub fn check(&self, name: CheckName) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "problem_id,check,status,grade,worst_slack,worst_iteration,tolerance,passed,bound,observed\n",
        );
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Evaluated => "evaluated",
                CheckStatus::NotApplicable => "not_applicable",
            };
            let grade = match c.grade {
                Grade::Theorem => "theorem",
                Grade::EmpiricalEta => "empirical_eta",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{:.16e},{},{},{}",
                self.problem_id,
                c.name,
                status,
                grade,
                opt(c.worst_slack),
                c.worst_iteration.map(|k| k.to_string()).unwrap_or_default(),
                c.tolerance,
                c.passed,
                opt(c.bound),
                opt(c.observed),
            );
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub problem_id: String,
    /// Checks to run; `None` runs all of them.
    pub checks: Option<Vec<CheckName>>,
    pub tolerance: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            problem_id: "problem".to_string(),
            checks: None,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl CertifyOptions {
    pub fn with_id(id: impl Into<String>) -> Self {
        Self {
            problem_id: id.into(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Worst {
    slack: Option<f64>,
    iteration: Option<usize>,
}

impl Worst {
    fn update(&mut self, slack: Slack, k: usize) {
        let v = slack.normalized();
        if self.slack.is_none_or(|w| v < w || v.is_nan()) {
            self.slack = Some(v);
            self.iteration = Some(k);
        }
    }
}

fn check_consistency(problem: &CompositeProblem, trace: &Trace) -> Result<()> {
    if trace.records.is_empty() {
        return Err(Error::Consistency("trace has no records".into()));
    }
    if !(trace.step > 0.0) {
        return Err(Error::Consistency(format!("step {}", trace.step)));
    }
    for (i, r) in trace.records.iter().enumerate() {
        if r.k != i {
            return Err(Error::Consistency(format!(
                "record {i} is labelled k = {}",
                r.k
            )));
        }
        if r.x.len() != problem.dim() {
            return Err(Error::Consistency(format!(
                "record {i} has dimension {}, problem has {}",
                r.x.len(),
                problem.dim()
            )));
        }
    }
    let first = &trace.records[0];
    let phi = phi_value(problem, &first.x);
    if phi.to_bits() != first.phi.to_bits() {
        return Err(Error::Consistency(format!(
            "phi(x0) = {phi} but the trace recorded {}",
            first.phi
        )));
    }
    Ok(())
}

fn ratio_reliable(r: &IterateRecord, t: f64) -> bool {
    r.prox_grad_norm >= RATIO_FLOOR
        && t * r.prox_grad_norm >= RATIO_RELATIVE_STEP * linalg::norm(&r.x).max(1.0)
}

/// Largest `‖𝒢ₜ(x⁺)‖/‖𝒢ₜ(x)‖` over consecutive records, skipping converged pairs.
pub fn worst_contraction_ratio(trace: &Trace) -> Option<f64> {
    trace
        .records
        .windows(2)
        .filter(|w| ratio_reliable(&w[0], trace.step))
        .map(|w| w[1].prox_grad_norm / w[0].prox_grad_norm)
        .reduce(f64::max)
}

/// `min ½‖𝒢ₜ(x)‖² / (φ(x) − min φ)` over the trace, ignoring gaps at roundoff level.
pub fn empirical_pl_constant(problem: &CompositeProblem, trace: &Trace) -> Option<f64> {
    let min = problem.known_min()?;
    let floor = gap_floor(min);
    trace
        .records
        .iter()
        .filter_map(|r| {
            let gap = r.phi - min;
            (gap > floor).then(|| 0.5 * r.prox_grad_norm * r.prox_grad_norm / gap)
        })
        .reduce(f64::min)
        .map(|eta| eta.min(1.0 / trace.step))
        .filter(|eta| *eta > 0.0)
}

fn gap_floor(min: f64) -> f64 {
    1e-9 * min.abs().max(1.0)
}

/// Evaluates every requested check on a trace produced by [`run_pg`] on `problem`.
pub fn certify_trace(
    problem: &CompositeProblem,
    trace: &Trace,
    opts: &CertifyOptions,
) -> Result<CertificationReport> {
    check_consistency(problem, trace)?;
    let f = problem.smooth();
    let g = problem.nonsmooth();
    let (t, mu, lip) = (trace.step, f.mu(), f.lip());
    let rho = rates::rho(t, mu, lip)?;
    let tol = opts.tolerance;
    let recs = &trace.records;
    let descent_ok = t * lip <= 1.0 + STEP_SLACK;
    let wanted = |c: CheckName| opts.checks.as_ref().is_none_or(|v| v.contains(&c));

    let mut checks = Vec::new();
    for name in CheckName::ALL {
        if !wanted(name) {
            continue;
        }
        let result = match name {
            CheckName::Thm1Chain => {
                let mut worst = Worst::default();
                for w in recs.windows(2) {
                    worst.update(
                        rates::theorem1_chain_slacks(&w[0], &w[1], rho)?.worst(),
                        w[0].k,
                    );
                }
                let mut r = CheckResult::evaluated(name, tol, worst)
                    .with_bound(Some(rho), worst_contraction_ratio(trace));
                if g.separable().is_none() {
                    r = r.with_note("nonseparable g: middle link only, via ‖∇f(x⁺)+s⁺‖");
                }
                r
            }
            CheckName::Tightness => match worst_contraction_ratio(trace) {
                Some(ratio) => {
                    let mut worst = Worst::default();
                    for w in recs.windows(2).filter(|w| ratio_reliable(&w[0], t)) {
                        let r = w[1].prox_grad_norm / w[0].prox_grad_norm;
                        worst.update(Slack::new(rho - r, &[rho, r]), w[0].k);
                    }
                    CheckResult::evaluated(name, tol, worst).with_bound(Some(rho), Some(ratio))
                }
                None => CheckResult::not_applicable(
                    name,
                    tol,
                    "no ratio pairs above the convergence floor",
                ),
            },
            CheckName::Lemma2 => {
                if g.separable().is_none() {
                    CheckResult::not_applicable(name, tol, "g is not separable")
                } else {
                    let mut worst = Worst::default();
                    for r in recs {
                        let d = r.subdiff_dist.ok_or_else(|| {
                            Error::IncompleteRecord(format!("record {} lacks subdiff_dist", r.k))
                        })?;
                        worst.update(
                            Slack::new(d - r.prox_grad_norm, &[d, r.prox_grad_norm]),
                            r.k,
                        );
                    }
                    CheckResult::evaluated(name, tol, worst)
                }
            }
            CheckName::DescentAdd20 | CheckName::DescentAdd21 if !descent_ok => {
                CheckResult::not_applicable(name, tol, "step exceeds 1/L")
            }
            CheckName::DescentAdd20 => {
                let mut worst = Worst::default();
                let singular = mu * t >= 1.0;
                for w in recs.windows(2) {
                    let (a, b) = (&w[0], &w[1]);
                    let s = if singular {
                        let base = rates::refined_descent_slack(
                            a.phi,
                            b.phi,
                            a.prox_grad_norm,
                            b.prox_grad_norm,
                            t,
                            0.0,
                        )?;
                        let vanish = Slack::new(-b.prox_grad_norm, &[]);
                        if vanish.normalized() < base.normalized() {
                            vanish
                        } else {
                            base
                        }
                    } else {
                        rates::refined_descent_slack(
                            a.phi,
                            b.phi,
                            a.prox_grad_norm,
                            b.prox_grad_norm,
                            t,
                            mu,
                        )?
                    };
                    worst.update(s, a.k);
                }
                let r = CheckResult::evaluated(name, tol, worst);
                if singular {
                    r.with_note("mu*t = 1: convex-case form plus ‖𝒢ₜ(x⁺)‖ = 0")
                } else {
                    r
                }
            }
            CheckName::DescentAdd21 => {
                let mut worst = Worst::default();
                for w in recs.windows(2) {
                    let (a, b) = (&w[0], &w[1]);
                    let s = rates::refined_descent_slack(
                        a.phi,
                        b.phi,
                        a.prox_grad_norm,
                        b.prox_grad_norm,
                        t,
                        0.0,
                    )?;
                    worst.update(s, a.k);
                }
                CheckResult::evaluated(name, tol, worst)
            }
            CheckName::DescentAdd22 => {
                if !g.is_zero() {
                    CheckResult::not_applicable(name, tol, "g is not identically zero")
                } else if !descent_ok {
                    CheckResult::not_applicable(name, tol, "step exceeds 1/L")
                } else {
                    let norms: Vec<f64> = recs
                        .iter()
                        .map(|r| linalg::norm(&f.gradient(&r.x)))
                        .collect();
                    let mut worst = Worst::default();
                    for (i, w) in recs.windows(2).enumerate() {
                        let s = rates::refined_descent_slack(
                            w[0].phi,
                            w[1].phi,
                            norms[i],
                            norms[i + 1],
                            t,
                            0.0,
                        )?;
                        worst.update(s, w[0].k);
                    }
                    CheckResult::evaluated(name, tol, worst)
                }
            }
            CheckName::PlAdd23 => match (g.is_zero(), problem.known_min(), problem.pl_constant()) {
                (false, _, _) => {
                    CheckResult::not_applicable(name, tol, "g is not identically zero")
                }
                (_, None, _) => CheckResult::not_applicable(name, tol, "min f unknown"),
                (_, _, None) => CheckResult::not_applicable(name, tol, "PL constant unknown"),
                _ if !descent_ok => CheckResult::not_applicable(name, tol, "step exceeds 1/L"),
                (true, Some(min), Some(eta)) => pl_check(name, trace, min, eta, tol)?,
            },
            CheckName::PlGeneralized => match problem.known_min() {
                None => CheckResult::not_applicable(name, tol, "min phi unknown"),
                Some(_) if !descent_ok => {
                    CheckResult::not_applicable(name, tol, "step exceeds 1/L")
                }
                Some(min) => match problem.pl_constant() {
                    Some(eta) => pl_check(name, trace, min, eta, tol)?,
                    None => match empirical_pl_constant(problem, trace) {
                        Some(eta) => {
                            let mut r = pl_check(name, trace, min, eta, tol)?;
                            r.grade = Grade::EmpiricalEta;
                            r.with_note(format!("empirical eta = {eta:.16e}"))
                        }
                        None => CheckResult::not_applicable(
                            name,
                            tol,
                            "no PL constant and no gap above roundoff to estimate one",
                        ),
                    },
                },
            },
            CheckName::Interpolation => {
                let mut worst = Worst::default();
                let mut pairs: Vec<(usize, usize)> = (1..recs.len())
                    .flat_map(|i| [(i - 1, i), (i, i - 1)])
                    .collect();
                if recs.len() > 2 {
                    pairs.push((0, recs.len() - 1));
                }
                for (i, j) in pairs {
                    let s = rates::interpolation_slacks(f, &recs[i].x, &recs[j].x)?;
                    for slack in s.all() {
                        worst.update(slack, recs[i].k);
                    }
                }
                CheckResult::evaluated(name, tol, worst)
            }
        };
        checks.push(result);
    }

    let overall = if checks.iter().all(|c| c.passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CertificationReport {
        problem_id: opts.problem_id.clone(),
        step: t,
        mu,
        lip,
        rho,
        iterations: recs.len() - 1,
        checks,
        overall,
    })
}

fn pl_check(name: CheckName, trace: &Trace, min: f64, eta: f64, tol: f64) -> Result<CheckResult> {
    let t = trace.step;
    if eta * t > 1.0 + STEP_SLACK {
        return Ok(CheckResult::not_applicable(name, tol, "eta*t exceeds 1"));
    }
    let eta = eta.min(1.0 / t);
    let mut worst = Worst::default();
    for w in trace.records.windows(2) {
        let gap = w[0].phi - min;
        let gap_next = w[1].phi - min;
        let bound = rates::pl_gap_bound(gap.max(0.0), eta, t)?;
        worst.update(
            Slack::new(bound.new_bound - gap_next, &[w[0].phi, w[1].phi, min]),
            w[0].k,
        );
    }
    let a = eta * t;
    let rate = (1.0 - a) / (1.0 + a);
    Ok(CheckResult::evaluated(name, tol, worst)
        .with_bound(Some(rate), None)
        .with_note(format!(
            "eta = {eta:.16e}, baseline rate = {:.16e}",
            1.0 - a
        )))
}

/// The 1D quadratic `(c/2)x²`, `g ≡ 0`, `x₀ = 1`, with `c ∈ {μ, L}` maximizing `|1 − ct|`
/// (ties go to `μ`). One PG step contracts `‖𝒢ₜ‖` by exactly `ρ(t)`.
pub fn worst_case_instance(mu: f64, lip: f64, t: f64) -> Result<(CompositeProblem, Vec<f64>)> {
    if !(mu > 0.0) || !(mu <= lip) || !lip.is_finite() {
        return Err(Error::InvalidConstants(format!(
            "need 0 < mu <= L, got mu = {mu}, L = {lip}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t = {t}")));
    }
    let c = if (1.0 - mu * t).abs() >= (1.0 - lip * t).abs() {
        mu
    } else {
        lip
    };
    let f = make_quadratic(&QuadraticSpec {
        diag_spectrum: vec![c],
        linear_term: None,
        offset: 0.0,
    })?;
    let problem = CompositeProblem::new(Arc::new(f), Arc::new(Zero))?;
    Ok((problem, vec![1.0]))
}

/// Worst observed one-step contraction of `‖𝒢ₜ‖` over `steps` PG iterations.
pub fn tightness_measurement(
    problem: &CompositeProblem,
    x0: &[f64],
    t: f64,
    steps: usize,
) -> Result<f64> {
    let trace = run_pg(problem, x0, t, steps, 0.0)?;
    if trace.records[0].prox_grad_norm == 0.0 {
        return Err(Error::DegenerateStart);
    }
    Ok(worst_contraction_ratio(&trace).unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GKind {
    Zero,
    L1,
    Box,
    ElasticNet,
}

impl GKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GKind::Zero => "zero",
            GKind::L1 => "l1",
            GKind::Box => "box",
            GKind::ElasticNet => "elastic_net",
        }
    }

    /// Unit-weight instance: `‖x‖₁`, the box `[−1, 1]ⁿ`, or `‖x‖₁ + ½‖x‖²`.
    pub fn build(self, dim: usize) -> Result<Arc<dyn NonsmoothOracle>> {
        Ok(match self {
            GKind::Zero => Arc::new(Zero),
            GKind::L1 => Arc::new(L1Norm::new(1.0)?),
            GKind::Box => Arc::new(BoxIndicator::uniform(dim, -1.0, 1.0)?),
            GKind::ElasticNet => Arc::new(ElasticNet::new(1.0, 1.0)?),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub id: String,
    pub problem: CompositeProblem,
    pub x0: Vec<f64>,
}

/// Seeded diagonal-quadratic problems with spectra log-uniform in
/// `[mu, lip]` (both endpoints present when `dim ≥ 2`), standard-normal
/// linear terms and standard-normal `x₀` rescaled to norm 10.
pub fn random_suite(
    seed: u64,
    count: usize,
    dim: usize,
    mu: f64,
    lip: f64,
    g_kind: GKind,
) -> Result<Vec<SuiteInstance>> {
    if count == 0 || dim == 0 {
        return Err(Error::InvalidArgument("count and dim must be >= 1".into()));
    }
    if !(mu >= 0.0) || !(mu <= lip) || !(lip > 0.0) {
        return Err(Error::InvalidConstants(format!("mu = {mu}, L = {lip}")));
    }
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|i| {
            let spectrum: Vec<f64> = (0..dim)
                .map(|j| match j {
                    0 => mu,
                    1 => lip,
                    _ if mu > 0.0 => rng.log_uniform(mu, lip),
                    _ => rng.uniform_in(mu, lip),
                })
                .collect();
            let linear = rng.normal_vec(dim);
            let x0 = rng.normal_vec(dim);
            let n = linalg::norm(&x0);
            let x0 = if n > 0.0 {
                linalg::scale(&x0, 10.0 / n)
            } else {
                x0
            };
            let f = make_quadratic(&QuadraticSpec {
                diag_spectrum: spectrum,
                linear_term: Some(linear),
                offset: 0.0,
            })?;
            let problem = CompositeProblem::new(Arc::new(f), g_kind.build(dim)?)?;
            Ok(SuiteInstance {
                id: format!("seed{seed}-{}-{i:04}", g_kind.as_str()),
                problem,
                x0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_zero(c: &[f64]) -> CompositeProblem {
        let f = make_quadratic(&QuadraticSpec {
            diag_spectrum: c.to_vec(),
            linear_term: None,
            offset: 0.0,
        })
        .unwrap();
        CompositeProblem::new(Arc::new(f), Arc::new(Zero)).unwrap()
    }

    #[test]
    fn diagonal_quadratic_certifies_with_ratio_rho() {
        let p = quad_zero(&[1.0, 10.0]);
        let tr = run_pg(&p, &[1.0, 1.0], 0.1, 200, 0.0).unwrap();
        let rep = certify_trace(&p, &tr, &CertifyOptions::default()).unwrap();
        assert!(rep.passed(), "{rep:#?}");
        let thm1 = rep.check(CheckName::Thm1Chain).unwrap();
        assert_eq!(thm1.bound, Some(0.9));
        assert!((thm1.observed.unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn large_step_gates_descent_checks() {
        let p = quad_zero(&[1.0, 10.0]);
        let tr = run_pg(&p, &[1.0, 1.0], 0.15, 100, 0.0).unwrap();
        let rep = certify_trace(&p, &tr, &CertifyOptions::default()).unwrap();
        assert!(rep.passed());
        for name in [
            CheckName::DescentAdd20,
            CheckName::DescentAdd21,
            CheckName::DescentAdd22,
        ] {
            assert_eq!(rep.check(name).unwrap().status, CheckStatus::NotApplicable);
        }
        let thm1 = rep.check(CheckName::Thm1Chain).unwrap();
        assert_eq!(thm1.status, CheckStatus::Evaluated);
        assert_eq!(thm1.bound, Some(rates::rho(0.15, 1.0, 10.0).unwrap()));
    }

    #[test]
    fn singular_coefficient_falls_back() {
        let p = quad_zero(&[2.0]);
        let tr = run_pg(&p, &[1.0], 0.5, 5, 0.0).unwrap();
        let rep = certify_trace(&p, &tr, &CertifyOptions::default()).unwrap();
        let c = rep.check(CheckName::DescentAdd20).unwrap();
        assert_eq!(c.status, CheckStatus::Evaluated);
        assert!(c.passed);
        assert!(c.note.is_some());
    }

    #[test]
    fn selected_checks_only() {
        let p = quad_zero(&[1.0]);
        let tr = run_pg(&p, &[1.0], 0.5, 5, 0.0).unwrap();
        let opts = CertifyOptions {
            checks: Some(vec![CheckName::Lemma2]),
            ..CertifyOptions::default()
        };
        let rep = certify_trace(&p, &tr, &opts).unwrap();
        assert_eq!(rep.checks.len(), 1);
    }

    #[test]
    fn mismatched_trace_is_rejected() {
        let p = quad_zero(&[1.0]);
        let q = quad_zero(&[1.0, 2.0]);
        let tr = run_pg(&q, &[1.0, 1.0], 0.5, 5, 0.0).unwrap();
        assert!(matches!(
            certify_trace(&p, &tr, &CertifyOptions::default()),
            Err(Error::Consistency(_))
        ));
        let p3 = quad_zero(&[3.0, 2.0]);
        assert!(matches!(
            certify_trace(&p3, &tr, &CertifyOptions::default()),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn violated_inequality_fails_the_report() {
        let p = quad_zero(&[1.0, 10.0]);
        let mut tr = run_pg(&p, &[1.0, 1.0], 0.1, 10, 0.0).unwrap();
        tr.records[3].prox_grad_norm *= 2.0;
        let rep = certify_trace(&p, &tr, &CertifyOptions::default()).unwrap();
        assert_eq!(rep.overall, Verdict::Fail);
        assert!(!rep.check(CheckName::Thm1Chain).unwrap().passed);
    }

    #[test]
    fn worst_case_branches() {
        let (p, _) = worst_case_instance(1.0, 10.0, 0.1).unwrap();
        assert_eq!(p.smooth().lip(), 1.0);
        let (p, _) = worst_case_instance(1.0, 10.0, 0.19).unwrap();
        assert_eq!(p.smooth().lip(), 10.0);
        let (p, x0) = worst_case_instance(3.0, 3.0, 0.1).unwrap();
        let r = tightness_measurement(&p, &x0, 0.1, 20).unwrap();
        assert!((r - 0.7).abs() < 1e-12);
        assert!(worst_case_instance(2.0, 1.0, 0.1).is_err());
        assert!(worst_case_instance(0.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn degenerate_start() {
        let p = quad_zero(&[1.0]);
        assert_eq!(
            tightness_measurement(&p, &[0.0], 0.1, 10).unwrap_err(),
            Error::DegenerateStart
        );
    }

    #[test]
    fn suite_is_deterministic() {
        let a = random_suite(9, 5, 4, 1.0, 10.0, GKind::L1).unwrap();
        let b = random_suite(9, 5, 4, 1.0, 10.0, GKind::L1).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.x0, y.x0);
            let (qx, qy) = (
                x.problem.smooth().as_quadratic().unwrap(),
                y.problem.smooth().as_quadratic().unwrap(),
            );
            assert_eq!(qx, qy);
            assert_eq!(qx.spectrum()[0], 1.0);
            assert_eq!(qx.spectrum()[1], 10.0);
            assert!((linalg::norm(&x.x0) - 10.0).abs() < 1e-12);
        }
        let c = random_suite(3, 3, 4, 2.0, 2.0, GKind::Zero).unwrap();
        assert!(c.iter().all(|s| s
            .problem
            .smooth()
            .as_quadratic()
            .unwrap()
            .spectrum()
            .iter()
            .all(|&v| v == 2.0)));
    }

    #[test]
    fn check_names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.as_str().parse::<CheckName>().unwrap(), c);
        }
        assert!("thm2".parse::<CheckName>().is_err());
    }
}
