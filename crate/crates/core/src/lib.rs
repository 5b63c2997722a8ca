//! Proximal gradient method for `min f(x) + g(x)` with a certifier that
//! checks, on every run, the worst-case contraction of the proximal
//! gradient norm by `ρ(t) = max{|1 − Lt|, |1 − μt|}`, the refined
//! sufficient-decrease inequality and the improved PL rate
//! `(1 − ηt)/(1 + ηt)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod brute;
pub mod certify;
pub mod error;
pub mod instance;
pub mod linalg;
pub mod pg;
pub mod prox;
pub mod rates;
pub mod rng;
pub mod smooth;

pub use certify::{
    certify_trace, random_suite, tightness_measurement, worst_case_instance, CertificationReport,
    CertifyOptions, CheckName, CheckResult, GKind,
};
pub use error::{Error, Result};
pub use pg::{
    phi_value, prox_grad_map, run_pg, CompositeProblem, IterateRecord, StopReason, Trace,
};
pub use prox::{subdiff_distance, NonsmoothOracle, Separable};
pub use rates::{rho, Slack};
pub use smooth::SmoothOracle;
