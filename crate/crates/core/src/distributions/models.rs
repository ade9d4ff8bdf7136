use std::fmt;
use std::str::FromStr;

use super::special::ln_factorial;
use crate::error::{Error, Result};

/// Shenton–Skees-geometric distribution on x = 1, 2, ...
///
/// P(x) = p (1 - p)^(x-1) [1 + a (x - 1/p)], with 0 < p <= 1 and
/// 0 <= a <= p / (1 - p). The correction term sums to zero over the
/// support, so the pmf is normalized for every admissible `a`; at the upper
/// boundary of `a` the mass at x = 1 vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsGeometric {
    p: f64,
    a: f64,
}

// Relative slack on the upper bound of `a` so that a = max_a(p) computed in
// floating point is accepted.
const BOUNDARY_SLACK: f64 = 1e-12;

impl SsGeometric {
    pub fn new(p: f64, a: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "p must lie in (0, 1], got {p}"
            )));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidParams(format!(
                "a must be finite and >= 0, got {a}"
            )));
        }
        if p == 1.0 {
            if a != 0.0 {
                return Err(Error::InvalidParams(format!(
                    "a must be 0 when p = 1, got {a}"
                )));
            }
        } else if a > Self::max_a(p) * (1.0 + BOUNDARY_SLACK) {
            return Err(Error::InvalidParams(format!(
                "a must not exceed p/(1-p) = {} for p = {p}, got {a}",
                Self::max_a(p)
            )));
        }
        Ok(SsGeometric { p, a })
    }

    /// Upper end of the admissible `a` range for a given `p`.
    pub fn max_a(p: f64) -> f64 {
        if p >= 1.0 {
            0.0
        } else {
            p / (1.0 - p)
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn pmf(&self, x: u32) -> Result<f64> {
        if x < 1 {
            return Err(Error::Domain(format!(
                "SS-geometric support starts at 1, got x = {x}"
            )));
        }
        Ok(self.prob(x))
    }

    pub(crate) fn prob(&self, x: u32) -> f64 {
        let q = 1.0 - self.p;
        let geometric = if x == 1 {
            self.p
        } else {
            self.p * q.powi(x as i32 - 1)
        };
        // The bracket is >= 0 on the admissible box; clamp rounding noise at the boundary.
        let bracket = (1.0 + self.a * (x as f64 - 1.0 / self.p)).max(0.0);
        geometric * bracket
    }

    pub fn mean(&self) -> f64 {
        let p = self.p;
        1.0 / p + self.a * (1.0 - p) / (p * p)
    }

    pub fn variance(&self) -> f64 {
        let p = self.p;
        let q = 1.0 - p;
        let second = (2.0 - p) / (p * p) + self.a * q * (4.0 - p) / (p * p * p);
        second - self.mean().powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poisson {
    lambda: f64,
}

impl Poisson {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParams(format!(
                "lambda must be finite and > 0, got {lambda}"
            )));
        }
        Ok(Poisson { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn pmf(&self, x: u32) -> f64 {
        if x == 0 {
            return (-self.lambda).exp();
        }
        (-self.lambda + x as f64 * self.lambda.ln() - ln_factorial(x)).exp()
    }

    pub fn mean(&self) -> f64 {
        self.lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    SsGeometric,
    Poisson,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::SsGeometric => "ss-geometric",
            ModelKind::Poisson => "poisson",
        }
    }

    pub fn min_support(self) -> u32 {
        match self {
            ModelKind::SsGeometric => 1,
            ModelKind::Poisson => 0,
        }
    }

    pub fn param_count(self) -> u32 {
        match self {
            ModelKind::SsGeometric => 2,
            ModelKind::Poisson => 1,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ss-geometric" => Ok(ModelKind::SsGeometric),
            "poisson" => Ok(ModelKind::Poisson),
            other => Err(Error::InvalidParams(format!("unknown model {other:?}"))),
        }
    }
}

/// A fully parameterized discrete model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    SsGeometric(SsGeometric),
    Poisson(Poisson),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::SsGeometric(_) => ModelKind::SsGeometric,
            Model::Poisson(_) => ModelKind::Poisson,
        }
    }

    /// Probability at `x`; zero below the support.
    pub fn prob(&self, x: u32) -> f64 {
        match self {
            Model::SsGeometric(m) if x >= 1 => m.prob(x),
            Model::SsGeometric(_) => 0.0,
            Model::Poisson(m) => m.pmf(x),
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            Model::SsGeometric(m) => vec![("p", m.p()), ("a", m.a())],
            Model::Poisson(m) => vec![("lambda", m.lambda())],
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Model::SsGeometric(m) => m.mean(),
            Model::Poisson(m) => m.mean(),
        }
    }
}

impl From<SsGeometric> for Model {
    fn from(m: SsGeometric) -> Self {
        Model::SsGeometric(m)
    }
}

impl From<Poisson> for Model {
    fn from(m: Poisson) -> Self {
        Model::Poisson(m)
    }
}
