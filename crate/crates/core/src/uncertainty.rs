//! Mean orthographic uncertainty, its variance and the two-sample z-test.

use std::str::FromStr;

use crate::complexity::Z_CRITICAL;
use crate::error::{Error, Result};
use crate::model::{FrequencyTable, VarianceMode};

/// Statistics of a representation histogram (x = number of representations,
/// f(x) = number of phonemes).
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyStats {
    pub label: String,
    /// Mean of log2 x over phonemes, in bits.
    pub u_bar: f64,
    pub n: u64,
    pub mean: f64,
    /// Population variance of x.
    pub variance: f64,
    /// `s² / (0.48 N x̄²)`.
    pub variance_of_u: f64,
}

impl UncertaintyStats {
    pub fn summary(&self) -> UncertaintySummary {
        UncertaintySummary {
            label: self.label.clone(),
            u_bar: self.u_bar,
            variance: self.variance_of_u,
        }
    }
}

pub fn mean_uncertainty(
    table: &FrequencyTable,
    label: impl Into<String>,
) -> Result<UncertaintyStats> {
    let n = table.total();
    if n == 0 {
        return Err(Error::EmptyTable);
    }
    if table.get(0) > 0 {
        return Err(Error::Domain(
            "a phoneme cannot have zero graphemic representations".into(),
        ));
    }
    let nf = n as f64;
    let u_bar = table
        .iter()
        .filter(|&(_, f)| f > 0)
        .map(|(x, f)| f as f64 * (x as f64).log2())
        .sum::<f64>()
        / nf;
    let moments = table.moments(VarianceMode::Population)?;
    let variance_of_u = moments.variance / (0.48 * nf * moments.mean * moments.mean);
    Ok(UncertaintyStats {
        label: label.into(),
        u_bar,
        n,
        mean: moments.mean,
        variance: moments.variance,
        variance_of_u,
    })
}

/// The two numbers the z-test needs, for languages known only by summary.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintySummary {
    pub label: String,
    pub u_bar: f64,
    pub variance: f64,
}

impl UncertaintySummary {
    pub fn new(label: impl Into<String>, u_bar: f64, variance: f64) -> Self {
        UncertaintySummary {
            label: label.into(),
            u_bar,
            variance,
        }
    }
}

impl From<&UncertaintyStats> for UncertaintySummary {
    fn from(s: &UncertaintyStats) -> Self {
        s.summary()
    }
}

/// How the two variances enter the z denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum VarianceCombination {
    /// V1 + V2.
    #[default]
    Sum,
    /// V1 - V2, kept for literal reproduction; fails unless positive.
    Difference,
}

impl VarianceCombination {
    pub fn as_str(self) -> &'static str {
        match self {
            VarianceCombination::Sum => "sum",
            VarianceCombination::Difference => "difference",
        }
    }
}

impl FromStr for VarianceCombination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(VarianceCombination::Sum),
            "difference" => Ok(VarianceCombination::Difference),
            other => Err(Error::InvalidParams(format!(
                "unknown variance combination {other:?} (expected sum or difference)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonResult {
    pub languages: (String, String),
    /// Absolute value of the statistic.
    pub z: f64,
    /// (U1 - U2) / sqrt(V1 ⊕ V2) with its sign.
    pub signed_z: f64,
    pub significant: bool,
}

pub fn compare_uncertainty(
    first: &UncertaintySummary,
    second: &UncertaintySummary,
    combination: VarianceCombination,
) -> Result<ComparisonResult> {
    for s in [first, second] {
        if !(s.variance > 0.0) || !s.variance.is_finite() {
            return Err(Error::InvalidParams(format!(
                "variance of {} must be positive, got {}",
                s.label, s.variance
            )));
        }
    }
    let combined = match combination {
        VarianceCombination::Sum => first.variance + second.variance,
        VarianceCombination::Difference => first.variance - second.variance,
    };
    if !(combined > 0.0) {
        return Err(Error::NonPositiveVariance {
            first: first.label.clone(),
            second: second.label.clone(),
            v1: first.variance,
            v2: second.variance,
            combined,
        });
    }
    let signed_z = (first.u_bar - second.u_bar) / combined.sqrt();
    let z = signed_z.abs();
    Ok(ComparisonResult {
        languages: (first.label.clone(), second.label.clone()),
        z,
        signed_z,
        significant: z > Z_CRITICAL,
    })
}

/// Compares `target` with each of `others`, in order.
pub fn comparison_table(
    target: &UncertaintySummary,
    others: &[UncertaintySummary],
    combination: VarianceCombination,
) -> Result<Vec<ComparisonResult>> {
    others
        .iter()
        .map(|o| compare_uncertainty(target, o, combination))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table3() -> FrequencyTable {
        FrequencyTable::from_pairs([(1, 10), (2, 12), (3, 9), (4, 2), (5, 2), (6, 3)]).unwrap()
    }

    #[test]
    fn ukrainian_histogram() {
        let s = mean_uncertainty(&table3(), "Ukrainian").unwrap();
        // independent: (12 + 9 log2 3 + 4 + 2 log2 5 + 3 log2 6) / 38
        let expected =
            (12.0 + 9.0 * 3f64.log2() + 4.0 + 2.0 * 5f64.log2() + 3.0 * 6f64.log2()) / 38.0;
        assert!((s.u_bar - expected).abs() < 1e-12);
        assert!((s.u_bar - 1.1227).abs() < 1e-4);
        assert!((s.mean - 97.0 / 38.0).abs() < 1e-12);
        assert!((s.variance - 2.1420).abs() < 5e-4);
        assert!((s.variance_of_u - 0.018022).abs() < 1e-5);
        assert_eq!(s.n, 38);
    }

    #[test]
    fn one_representation_each_is_certain() {
        let s = mean_uncertainty(&FrequencyTable::from_pairs([(1, 20)]).unwrap(), "x").unwrap();
        assert_eq!(s.u_bar, 0.0);
        assert_eq!(s.variance_of_u, 0.0);
    }

    #[test]
    fn two_representations_each_is_one_bit() {
        let s = mean_uncertainty(&FrequencyTable::from_pairs([(2, 7)]).unwrap(), "x").unwrap();
        assert_eq!(s.u_bar, 1.0);
    }

    #[test]
    fn zero_support_and_empty_tables() {
        let t = FrequencyTable::from_pairs([(0, 1), (1, 3)]).unwrap();
        assert!(matches!(mean_uncertainty(&t, "x"), Err(Error::Domain(_))));
        // explicit zero count at 0 is harmless
        let t = FrequencyTable::from_pairs([(0, 0), (1, 3)]).unwrap();
        assert!(mean_uncertainty(&t, "x").is_ok());
        assert!(matches!(
            mean_uncertainty(&FrequencyTable::new(), "x"),
            Err(Error::EmptyTable)
        ));
    }

    #[test]
    fn self_comparison() {
        let s = mean_uncertainty(&table3(), "Ukrainian").unwrap().summary();
        let r = compare_uncertainty(&s, &s, VarianceCombination::Sum).unwrap();
        assert_eq!(r.z, 0.0);
        assert!(!r.significant);
    }

    #[test]
    fn slovak_consistency() {
        let uk = mean_uncertainty(&table3(), "Ukrainian").unwrap().summary();
        let sk = UncertaintySummary::new("Slovak", 0.7586, 0.012039);
        let r = compare_uncertainty(&uk, &sk, VarianceCombination::Sum).unwrap();
        assert!((r.z - 2.10).abs() < 0.01, "{}", r.z);
        assert!(r.significant);
        assert_eq!(r.languages, ("Ukrainian".to_string(), "Slovak".to_string()));
    }

    #[test]
    fn difference_mode_guards() {
        let a = UncertaintySummary::new("a", 1.0, 0.02);
        let b = UncertaintySummary::new("b", 0.5, 0.02);
        assert!(matches!(
            compare_uncertainty(&a, &b, VarianceCombination::Difference),
            Err(Error::NonPositiveVariance { .. })
        ));
        let c = UncertaintySummary::new("c", 0.5, 0.01);
        let r = compare_uncertainty(&a, &c, VarianceCombination::Difference).unwrap();
        assert!((r.z - 0.5 / 0.01f64.sqrt()).abs() < 1e-12);
        assert!(compare_uncertainty(&c, &a, VarianceCombination::Difference).is_err());
    }

    #[test]
    fn non_positive_variance_is_rejected() {
        let a = UncertaintySummary::new("a", 1.0, 0.0);
        let b = UncertaintySummary::new("b", 0.5, 0.02);
        assert!(compare_uncertainty(&a, &b, VarianceCombination::Sum).is_err());
    }

    #[test]
    fn sign_is_kept_internally() {
        let a = UncertaintySummary::new("a", 0.5, 0.01);
        let b = UncertaintySummary::new("b", 1.0, 0.015);
        let r = compare_uncertainty(&a, &b, VarianceCombination::Sum).unwrap();
        assert!(r.signed_z < 0.0 && r.z > 0.0);
        assert_eq!(r.z, -r.signed_z);
    }

    #[test]
    fn tables() {
        let uk = UncertaintySummary::new("Ukrainian", 1.1227, 0.018022);
        assert!(comparison_table(&uk, &[], VarianceCombination::Sum)
            .unwrap()
            .is_empty());
        let rows =
            comparison_table(&uk, std::slice::from_ref(&uk), VarianceCombination::Sum).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].z, 0.0);
    }

    #[test]
    fn combination_names() {
        assert_eq!(
            "sum".parse::<VarianceCombination>().unwrap(),
            VarianceCombination::Sum
        );
        assert_eq!(
            "difference".parse::<VarianceCombination>().unwrap(),
            VarianceCombination::Difference
        );
        assert!("both".parse::<VarianceCombination>().is_err());
    }
}
