//! Parameter estimation and goodness of fit for the discrete models.
//!
//! Two estimators are available. The moment method matches the sample
//! mean (Poisson) or the sample mean and population variance
//! (SS-geometric). Chi-square minimization evaluates the pooled Pearson
//! statistic on a fixed grid over the admissible parameter box (step
//! 1e-3) and then refines the best grid point with a pattern search whose
//! step halves down to below 1e-6. Both are deterministic: ties keep the
//! first point visited, which is the lexicographically smallest one.

use std::fmt;
use std::str::FromStr;

use super::models::{Model, ModelKind, Poisson, SsGeometric};
use super::pooling::{chi_square_statistic, ClassLayout, PooledClass};
use super::special::chi_square_sf;
use crate::error::{Error, Result};
use crate::model::{FrequencyTable, VarianceMode};

const GRID_STEP: f64 = 1e-3;
const GRID_POINTS: u32 = 1000;
const REFINE_STOP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitMethod {
    Moment,
    ChiSquareMin,
    /// Parameters supplied by the caller, only evaluated.
    Given,
}

impl FitMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FitMethod::Moment => "moment",
            FitMethod::ChiSquareMin => "chisq-min",
            FitMethod::Given => "given",
        }
    }
}

impl fmt::Display for FitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moment" => Ok(FitMethod::Moment),
            "chisq-min" => Ok(FitMethod::ChiSquareMin),
            "given" => Ok(FitMethod::Given),
            other => Err(Error::InvalidParams(format!(
                "unknown estimation method {other:?}"
            ))),
        }
    }
}

/// How degrees of freedom are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DfMode {
    ClassesMinusOne,
    ClassesMinusOneMinusParams,
    Fixed(u32),
}

impl DfMode {
    pub fn degrees_of_freedom(self, classes: usize, kind: ModelKind) -> i64 {
        match self {
            DfMode::ClassesMinusOne => classes as i64 - 1,
            DfMode::ClassesMinusOneMinusParams => classes as i64 - 1 - kind.param_count() as i64,
            DfMode::Fixed(df) => df as i64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteModelFit {
    pub model: Model,
    pub method: FitMethod,
    pub classes: Vec<PooledClass>,
    pub chi_square: f64,
    pub df: i64,
    /// `None` when `df < 1`.
    pub p_value: Option<f64>,
}

impl DiscreteModelFit {
    pub fn df_for(&self, mode: DfMode) -> i64 {
        mode.degrees_of_freedom(self.classes.len(), self.model.kind())
    }

    pub fn p_value_at(&self, df: i64) -> Option<f64> {
        p_value(self.chi_square, df)
    }

    pub fn observed_total(&self) -> u64 {
        self.classes.iter().map(|c| c.observed).sum()
    }
}

fn p_value(chi_square: f64, df: i64) -> Option<f64> {
    if df < 1 {
        return None;
    }
    chi_square_sf(chi_square, u32::try_from(df).ok()?).ok()
}

/// Pools the table under `model` and computes chi-square, df and p-value.
pub fn evaluate_fit(
    table: &FrequencyTable,
    model: Model,
    df_mode: DfMode,
) -> Result<DiscreteModelFit> {
    evaluate(table, model, FitMethod::Given, df_mode)
}

fn evaluate(
    table: &FrequencyTable,
    model: Model,
    method: FitMethod,
    df_mode: DfMode,
) -> Result<DiscreteModelFit> {
    let layout = ClassLayout::new(table, model.kind())?;
    let classes = layout.classes(&model);
    let chi_square = chi_square_statistic(&classes)?;
    let df = df_mode.degrees_of_freedom(classes.len(), model.kind());
    Ok(DiscreteModelFit {
        model,
        method,
        chi_square,
        df,
        p_value: p_value(chi_square, df),
        classes,
    })
}

pub fn fit_discrete(
    table: &FrequencyTable,
    kind: ModelKind,
    method: FitMethod,
    df_mode: DfMode,
) -> Result<DiscreteModelFit> {
    let model = match method {
        FitMethod::Moment => moment_estimate(table, kind)?,
        FitMethod::ChiSquareMin => chi_square_min_estimate(table, kind)?,
        FitMethod::Given => {
            return Err(Error::InvalidParams(
                "the given-parameters method needs parameters; use evaluate_fit".into(),
            ))
        }
    };
    evaluate(table, model, method, df_mode)
}

/// Moment estimates.
pub fn moment_estimate(table: &FrequencyTable, kind: ModelKind) -> Result<Model> {
    let moments = table.moments(VarianceMode::Population)?;
    if let Some((lo, _)) = table.observed_range() {
        if lo < kind.min_support() {
            return Err(Error::Domain(format!(
                "{kind} support starts at {}, but the table has observations at {lo}",
                kind.min_support()
            )));
        }
    }
    match kind {
        ModelKind::Poisson => {
            if moments.mean > 0.0 {
                Ok(Poisson::new(moments.mean)?.into())
            } else {
                Err(Error::NoFeasibleParameters(
                    "poisson: sample mean is 0".into(),
                ))
            }
        }
        ModelKind::SsGeometric => {
            ss_geometric_moments(moments.mean, moments.variance).map(Model::from)
        }
    }
}

/// Solves mean and variance for (p, a). The mean equation fixes
/// a(p) = (m p - 1) p / (1 - p), which stays admissible for
/// p in [1/m, min(1, 2/m)]; the variance equation is then solved on that
/// interval, or its residual minimized when it has no root there.
fn ss_geometric_moments(mean: f64, variance: f64) -> Result<SsGeometric> {
    if mean <= 1.0 {
        return SsGeometric::new(1.0, 0.0);
    }
    let a_of = |p: f64| ((mean * p - 1.0) * p / (1.0 - p)).max(0.0);
    let residual = |p: f64| {
        SsGeometric::new(p, a_of(p).min(SsGeometric::max_a(p)))
            .map(|m| m.variance() - variance)
            .unwrap_or(f64::NAN)
    };
    let lo = 1.0 / mean;
    let hi = (2.0 / mean).min(1.0 - 1e-9);
    const SCAN: usize = 2000;
    let grid: Vec<f64> = (0..=SCAN)
        .map(|i| lo + (hi - lo) * i as f64 / SCAN as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&p| residual(p)).collect();

    let p = if let Some(i) =
        (0..SCAN).find(|&i| values[i] == 0.0 || values[i] * values[i + 1] < 0.0)
    {
        if values[i] == 0.0 {
            grid[i]
        } else {
            bisect(&residual, grid[i], grid[i + 1])
        }
    } else {
        // Boundary projection: closest variance the admissible curve reaches.
        let (i, _) = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .ok_or_else(|| Error::NoFeasibleParameters("ss-geometric moment equations".into()))?;
        let left = grid[i.saturating_sub(1)];
        let right = grid[(i + 1).min(SCAN)];
        golden_min(|p| residual(p).abs(), left, right)
    };
    SsGeometric::new(p, a_of(p).min(SsGeometric::max_a(p)))
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 || (hi - lo) < 1e-15 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        let c = hi - ratio * (hi - lo);
        let d = lo + ratio * (hi - lo);
        if f(c) <= f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes the pooled chi-square over the admissible parameter box.
pub fn chi_square_min_estimate(table: &FrequencyTable, kind: ModelKind) -> Result<Model> {
    let layout = ClassLayout::new(table, kind)?;
    if layout.len() == 1 {
        // A single open class fits every parameter value exactly.
        return moment_estimate(table, kind);
    }
    match kind {
        ModelKind::Poisson => poisson_chi_square_min(table, &layout),
        ModelKind::SsGeometric => ss_geometric_chi_square_min(&layout),
    }
}

fn poisson_chi_square_min(table: &FrequencyTable, layout: &ClassLayout) -> Result<Model> {
    let objective = |lambda: f64| {
        Poisson::new(lambda)
            .ok()
            .and_then(|m| layout.chi_square(&Model::from(m)))
    };
    let max_x = table.observed_range().map(|(_, hi)| hi).unwrap_or(0) as f64;
    let mean = table.moments(VarianceMode::Population)?.mean;
    let upper = 2.0 * max_x.max(mean) + 5.0;
    let steps = (upper / GRID_STEP).ceil() as u32;

    let mut best: Option<(f64, f64)> = None;
    for i in 1..=steps {
        let lambda = i as f64 * GRID_STEP;
        if let Some(chi) = objective(lambda) {
            if best.is_none_or(|(b, _)| chi < b) {
                best = Some((chi, lambda));
            }
        }
    }
    let (mut best_chi, mut lambda) =
        best.ok_or_else(|| Error::NoFeasibleParameters("poisson chi-square minimization".into()))?;

    let mut step = GRID_STEP;
    while step >= REFINE_STOP {
        let mut moved = false;
        for candidate in [lambda - step, lambda + step] {
            if candidate <= 0.0 {
                continue;
            }
            if let Some(chi) = objective(candidate) {
                if chi < best_chi {
                    best_chi = chi;
                    lambda = candidate;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    Ok(Poisson::new(lambda)?.into())
}

fn ss_geometric_chi_square_min(layout: &ClassLayout) -> Result<Model> {
    let objective = |p: f64, a: f64| {
        SsGeometric::new(p, a)
            .ok()
            .and_then(|m| layout.chi_square(&Model::from(m)))
    };

    // Grid over p and over the fraction t of the admissible a-range, since
    // the upper bound p/(1-p) grows without limit as p approaches 1.
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 1..=GRID_POINTS {
        let p = i as f64 * GRID_STEP;
        let a_max = SsGeometric::max_a(p);
        let t_points = if i == GRID_POINTS { 0 } else { GRID_POINTS };
        for j in 0..=t_points {
            let a = if j == GRID_POINTS {
                a_max
            } else {
                j as f64 * GRID_STEP * a_max
            };
            if let Some(chi) = objective(p, a) {
                if best.is_none_or(|(b, _, _)| chi < b) {
                    best = Some((chi, p, a));
                }
            }
        }
    }
    let (mut best_chi, mut p, mut a) = best.ok_or_else(|| {
        Error::NoFeasibleParameters("ss-geometric chi-square minimization".into())
    })?;

    let project = |p: f64, a: f64| {
        let p = p.clamp(REFINE_STOP, 1.0);
        (p, a.clamp(0.0, SsGeometric::max_a(p)))
    };
    let mut step = GRID_STEP;
    while step >= REFINE_STOP {
        let mut moved = false;
        for (dp, da) in [(-step, 0.0), (step, 0.0), (0.0, -step), (0.0, step)] {
            let (cp, ca) = project(p + dp, a + da);
            if let Some(chi) = objective(cp, ca) {
                if chi < best_chi {
                    best_chi = chi;
                    p = cp;
                    a = ca;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    Ok(SsGeometric::new(p, a)?.into())
}
