//! Letter differences as minimum-cost component matchings, the pairwise
//! distance matrix and mean distinctivities.

use serde::{Deserialize, Serialize};

use crate::assignment::min_cost_assignment;
use crate::error::{Error, Result};
use crate::model::{Alphabet, Component, Letter};

/// Cost of matching a component against nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbsenceCost {
    /// The missing component's complexity weight (point 1, line 2, arc 3).
    ComponentWeight,
    Fixed(u32),
}

/// Weights for component differences. The defaults (3 / 1 / component
/// weight / 0) are a placeholder calibration and can be replaced from a
/// TOML file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DifferenceWeights {
    pub kind_mismatch: u32,
    pub orientation_mismatch: u32,
    pub absence: AbsenceCost,
    /// Multiplies |#connections1 - #connections2|; 0 leaves connections out.
    pub connection_weight: u32,
}

impl Default for DifferenceWeights {
    fn default() -> Self {
        DifferenceWeights {
            kind_mismatch: 3,
            orientation_mismatch: 1,
            absence: AbsenceCost::ComponentWeight,
            connection_weight: 0,
        }
    }
}

pub fn component_difference(
    first: Option<&Component>,
    second: Option<&Component>,
    weights: &DifferenceWeights,
) -> Result<u32> {
    let absent = |c: &Component| match weights.absence {
        AbsenceCost::ComponentWeight => c.kind.weight(),
        AbsenceCost::Fixed(w) => w,
    };
    match (first, second) {
        (None, None) => Err(Error::Domain("cannot compare two absent components".into())),
        (Some(c), None) | (None, Some(c)) => Ok(absent(c)),
        (Some(a), Some(b)) => {
            let mut cost = 0;
            if a.kind != b.kind {
                cost += weights.kind_mismatch;
            }
            if a.orientation != b.orientation {
                cost += weights.orientation_mismatch;
            }
            Ok(cost)
        }
    }
}

/// Minimum over all matchings of the two component lists (the shorter one
/// padded with absent entries) of the summed component differences, plus
/// the optional connection-count term.
pub fn letter_distance(first: &Letter, second: &Letter, weights: &DifferenceWeights) -> u32 {
    let n = first.components.len().max(second.components.len());
    let cost: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let a = first.components.get(i);
                    let b = second.components.get(j);
                    // padding against padding never occurs in an optimal matching but fills the square
                    component_difference(a, b, weights).unwrap_or(0) as i64
                })
                .collect()
        })
        .collect();
    let matching = min_cost_assignment(&cost).cost as u32;
    let connections = first.connections.len().abs_diff(second.connections.len()) as u32;
    matching + connections * weights.connection_weight
}

/// Labeled symmetric matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    labels: Vec<char>,
    values: Vec<Vec<u32>>,
}

impl DistanceMatrix {
    pub fn new(labels: Vec<char>, values: Vec<Vec<u32>>) -> Result<Self> {
        let n = labels.len();
        if values.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "{n} labels but {} rows",
                values.len()
            )));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "matrix is not square: row {} has {} entries, expected {n}",
                    labels[i],
                    row.len()
                )));
            }
        }
        for i in 0..n {
            if values[i][i] != 0 {
                return Err(Error::InvalidMatrix(format!(
                    "non-zero diagonal at {}: {}",
                    labels[i], values[i][i]
                )));
            }
            for j in (i + 1)..n {
                if values[i][j] != values[j][i] {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric pair ({}, {}): {} vs {}",
                        labels[i], labels[j], values[i][j], values[j][i]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if labels[i] == labels[j] {
                    return Err(Error::InvalidMatrix(format!(
                        "duplicate label {}",
                        labels[i]
                    )));
                }
            }
        }
        Ok(DistanceMatrix { labels, values })
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, a: char, b: char) -> Option<u32> {
        let i = self.labels.iter().position(|&l| l == a)?;
        let j = self.labels.iter().position(|&l| l == b)?;
        Some(self.values[i][j])
    }
}

/// Distances between every pair of letters, in alphabet order.
pub fn distance_matrix(alphabet: &Alphabet, weights: &DifferenceWeights) -> DistanceMatrix {
    let letters = &alphabet.letters;
    let n = letters.len();
    let mut values = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = letter_distance(&letters[i], &letters[j], weights);
            values[i][j] = d;
            values[j][i] = d;
        }
    }
    DistanceMatrix {
        labels: letters.iter().map(|l| l.glyph).collect(),
        values,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinctivityStats {
    /// Row sum divided by I - 1, in matrix order.
    pub per_letter: Vec<(char, f64)>,
    /// Mean of the per-letter means.
    pub overall: f64,
}

impl DistinctivityStats {
    pub fn mean_of(&self, glyph: char) -> Option<f64> {
        self.per_letter
            .iter()
            .find(|(g, _)| *g == glyph)
            .map(|&(_, m)| m)
    }
}

pub fn mean_distinctivities(matrix: &DistanceMatrix) -> Result<DistinctivityStats> {
    let n = matrix.len();
    if n < 2 {
        return Err(Error::TooFewLetters(n));
    }
    let per_letter: Vec<(char, f64)> = matrix
        .labels
        .iter()
        .zip(&matrix.values)
        .map(|(&g, row)| {
            (
                g,
                row.iter().map(|&v| v as u64).sum::<u64>() as f64 / (n - 1) as f64,
            )
        })
        .collect();
    let overall = per_letter.iter().map(|(_, m)| m).sum::<f64>() / n as f64;
    Ok(DistinctivityStats {
        per_letter,
        overall,
    })
}
