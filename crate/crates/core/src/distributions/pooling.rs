use std::fmt;

use super::models::{Model, ModelKind};
use crate::error::{Error, Result};
use crate::model::FrequencyTable;

/// One class of a goodness-of-fit table. The last class of a pooled table
/// is open: it stands for every value `>= value`.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledClass {
    pub value: u32,
    pub open: bool,
    pub observed: u64,
    pub expected: f64,
}

impl PooledClass {
    pub fn label(&self) -> String {
        if self.open {
            format!(">={}", self.value)
        } else {
            self.value.to_string()
        }
    }
}

impl fmt::Display for PooledClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: f={} NP={}",
            self.label(),
            self.observed,
            self.expected
        )
    }
}

/// Observed counts laid out as pooled classes, independent of model parameters.
#[derive(Debug, Clone)]
pub(crate) struct ClassLayout {
    start: u32,
    observed: Vec<u64>,
    n: f64,
}

impl ClassLayout {
    pub(crate) fn new(table: &FrequencyTable, kind: ModelKind) -> Result<Self> {
        let total = table.total();
        if total == 0 {
            return Err(Error::EmptyTable);
        }
        let (lo, hi) = table.observed_range().ok_or(Error::EmptyTable)?;
        let start = kind.min_support();
        if lo < start {
            return Err(Error::Domain(format!(
                "{kind} support starts at {start}, but the table has observations at {lo}"
            )));
        }
        let observed = (start..=hi).map(|x| table.get(x)).collect();
        Ok(ClassLayout {
            start,
            observed,
            n: total as f64,
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.observed.len()
    }

    pub(crate) fn classes(&self, model: &Model) -> Vec<PooledClass> {
        let last = self.observed.len() - 1;
        let mut lower = 0.0;
        self.observed
            .iter()
            .enumerate()
            .map(|(i, &observed)| {
                let value = self.start + i as u32;
                let expected = if i == last {
                    self.n - lower
                } else {
                    let e = self.n * model.prob(value);
                    lower += e;
                    e
                };
                PooledClass {
                    value,
                    open: i == last,
                    observed,
                    expected,
                }
            })
            .collect()
    }

    /// Pooled chi-square without allocating; `None` when a class has no
    /// positive expectation.
    pub(crate) fn chi_square(&self, model: &Model) -> Option<f64> {
        let last = self.observed.len() - 1;
        let mut lower = 0.0;
        let mut chi = 0.0;
        for (i, &observed) in self.observed.iter().enumerate() {
            let expected = if i == last {
                self.n - lower
            } else {
                let e = self.n * model.prob(self.start + i as u32);
                lower += e;
                e
            };
            if !(expected > 0.0) || !expected.is_finite() {
                return None;
            }
            let d = observed as f64 - expected;
            chi += d * d / expected;
        }
        Some(chi)
    }
}

/// Expected frequencies under `model` with the last observed class opened
/// into a right tail.
///
/// Classes run individually from the model's first support value up to the
/// largest observed value; that last class takes `N` minus the expectations
/// of all lower classes, so the expectations sum to `N`.
pub fn pool_open_tail(table: &FrequencyTable, model: &Model) -> Result<Vec<PooledClass>> {
    Ok(ClassLayout::new(table, model.kind())?.classes(model))
}

/// Pearson statistic over pooled classes.
pub fn chi_square_statistic(classes: &[PooledClass]) -> Result<f64> {
    let mut chi = 0.0;
    for c in classes {
        if !(c.expected > 0.0) {
            return Err(Error::PoolClassesFirst {
                class: c.label(),
                expected: c.expected,
            });
        }
        let d = c.observed as f64 - c.expected;
        chi += d * d / c.expected;
    }
    Ok(chi)
}
