//! Discrete models, open-tail pooling, chi-square goodness of fit and
//! parameter estimation.

mod fit;
mod models;
mod pooling;
pub mod special;

pub use fit::{
    chi_square_min_estimate, evaluate_fit, fit_discrete, moment_estimate, DfMode, DiscreteModelFit,
    FitMethod,
};
pub use models::{Model, ModelKind, Poisson, SsGeometric};
pub use pooling::{chi_square_statistic, pool_open_tail, PooledClass};
pub use special::chi_square_sf;

use crate::error::Result;

/// `Px = p (1-p)^(x-1) [1 + a (x - 1/p)]` for x >= 1.
pub fn ss_geometric_pmf(params: &SsGeometric, x: u32) -> Result<f64> {
    params.pmf(x)
}

/// `1/p + a (1-p) / p^2`.
pub fn ss_geometric_mean(params: &SsGeometric) -> f64 {
    params.mean()
}

pub fn poisson_pmf(params: &Poisson, x: u32) -> f64 {
    params.pmf(x)
}
