//! Serializable problem descriptions, as they appear in experiment configs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::pg::CompositeProblem;
use crate::prox::{BoxIndicator, ElasticNet, L1Norm, NonsmoothOracle, Zero};
use crate::smooth::{
    make_least_squares, make_logistic, make_quadratic, QuadraticSpec, SmoothOracle,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SmoothSpec {
    Quadratic {
        spectrum: Vec<f64>,
        #[serde(default)]
        linear: Option<Vec<f64>>,
        #[serde(default)]
        offset: f64,
    },
    LeastSquares {
        a: Matrix,
        b: Vec<f64>,
    },
    Logistic {
        a: Matrix,
        labels: Vec<f64>,
        #[serde(default)]
        l2_reg: f64,
    },
}

impl SmoothSpec {
    pub fn build(&self) -> Result<Arc<dyn SmoothOracle>> {
        Ok(match self {
            SmoothSpec::Quadratic {
                spectrum,
                linear,
                offset,
            } => Arc::new(make_quadratic(&QuadraticSpec {
                diag_spectrum: spectrum.clone(),
                linear_term: linear.clone(),
                offset: *offset,
            })?),
            SmoothSpec::LeastSquares { a, b } => {
                Arc::new(make_least_squares(a.clone(), b.clone())?)
            }
            SmoothSpec::Logistic { a, labels, l2_reg } => {
                Arc::new(make_logistic(a.clone(), labels.clone(), *l2_reg)?)
            }
        })
    }
}

/// A box bound given either per coordinate or as one value for all.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Uniform(f64),
    PerCoordinate(Vec<f64>),
}

impl Bound {
    fn expand(&self, dim: usize) -> Vec<f64> {
        match self {
            Bound::Uniform(v) => vec![*v; dim],
            Bound::PerCoordinate(v) => v.clone(),
        }
    }
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonsmoothSpec {
    Zero,
    L1 {
        #[serde(default = "unit")]
        weight: f64,
    },
    Box {
        lo: Bound,
        hi: Bound,
    },
    ElasticNet {
        l1: f64,
        l2: f64,
    },
}

impl NonsmoothSpec {
    pub fn build(&self, dim: usize) -> Result<Arc<dyn NonsmoothOracle>> {
        Ok(match self {
            NonsmoothSpec::Zero => Arc::new(Zero),
            NonsmoothSpec::L1 { weight } => Arc::new(L1Norm::new(*weight)?),
            NonsmoothSpec::Box { lo, hi } => {
                Arc::new(BoxIndicator::new(lo.expand(dim), hi.expand(dim))?)
            }
            NonsmoothSpec::ElasticNet { l1, l2 } => Arc::new(ElasticNet::new(*l1, *l2)?),
        })
    }
}

fn zero_spec() -> NonsmoothSpec {
    NonsmoothSpec::Zero
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub smooth: SmoothSpec,
    #[serde(default = "zero_spec")]
    pub nonsmooth: NonsmoothSpec,
    /// Overrides the closed-form `min φ`, if any.
    #[serde(default)]
    pub known_min: Option<f64>,
    /// PL constant `η`; least-squares problems with `g ≡ 0` get one automatically.
    #[serde(default)]
    pub eta: Option<f64>,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<CompositeProblem> {
        let f = self.smooth.build()?;
        let g = self.nonsmooth.build(f.dim())?;
        let mut p = CompositeProblem::new(f, g)?;
        if self.known_min.is_some() {
            p = p.with_known_min(self.known_min);
        }
        if self.eta.is_some() {
            p = p.with_pl_constant(self.eta)?;
        }
        if p.dim() == 0 {
            return Err(Error::InvalidSpec("problem has dimension 0".into()));
        }
        Ok(p)
    }
}
