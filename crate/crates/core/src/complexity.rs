//! Letter complexity by the composition method and the runs test for
//! uniformity of the resulting complexity distribution.

use crate::error::{Error, Result};
use crate::model::{Alphabet, FrequencyTable, Letter, VarianceMode};

/// Two-sided 5% critical value of the standard normal.
pub const Z_CRITICAL: f64 = 1.96;

/// Sum of the component weights plus the sum of the connection weights.
pub fn letter_complexity(letter: &Letter) -> u32 {
    let components: u32 = letter.components.iter().map(|c| c.kind.weight()).sum();
    let connections: u32 = letter.connections.iter().map(|c| c.weight()).sum();
    components + connections
}

/// Histogram of letter complexities, densified over `[min C, max C]`.
pub fn complexity_distribution(alphabet: &Alphabet) -> Result<FrequencyTable> {
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    Ok(
        FrequencyTable::from_observations(alphabet.letters.iter().map(letter_complexity))
            .densified(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityStats {
    /// Complexity per glyph, in alphabet order.
    pub per_letter: Vec<(char, u32)>,
    pub mean: f64,
    /// Sample standard deviation (N - 1 denominator).
    pub sd: f64,
    pub distribution: FrequencyTable,
}

pub fn complexity_stats(alphabet: &Alphabet) -> Result<ComplexityStats> {
    let distribution = complexity_distribution(alphabet)?;
    let moments = distribution.moments(VarianceMode::Sample)?;
    Ok(ComplexityStats {
        per_letter: alphabet
            .letters
            .iter()
            .map(|l| (l.glyph, letter_complexity(l)))
            .collect(),
        mean: moments.mean,
        sd: moments.sd,
        distribution,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunsTestResult {
    /// Uniform expectation I / (R + 1).
    pub expected_frequency: f64,
    pub runs: usize,
    /// Number of classes, R + 1.
    pub n: usize,
    /// Classes at or below the expectation.
    pub n1: usize,
    /// Classes strictly above the expectation.
    pub n2: usize,
    pub expected_runs: f64,
    pub sigma_runs: f64,
    pub z: f64,
    pub significant: bool,
}

/// Runs test about the mean for a uniform distribution over the densified
/// support of `table`.
///
/// A class is "above" when its frequency is strictly greater than
/// E = N / (R + 1); a frequency equal to E counts as "below".
/// z = (|r - E(r)| - 0.5) / sigma_r and the result is significant when
/// z >= 1.96.
pub fn runs_test_uniform(table: &FrequencyTable) -> Result<RunsTestResult> {
    let dense = table.densified();
    let total = dense.total();
    if total == 0 {
        return Err(Error::EmptyTable);
    }
    let n = dense.iter().count();
    let expected_frequency = total as f64 / n as f64;
    let above: Vec<bool> = dense
        .iter()
        .map(|(_, f)| f as f64 > expected_frequency)
        .collect();
    let stats = RunStatistics::from_labels(&above)?;
    let z = (stats.runs as f64 - stats.expected_runs).abs() - 0.5;
    let z = z / stats.sigma_runs;
    Ok(RunsTestResult {
        expected_frequency,
        runs: stats.runs,
        n,
        n1: stats.below,
        n2: stats.above,
        expected_runs: stats.expected_runs,
        sigma_runs: stats.sigma_runs,
        z,
        significant: z >= Z_CRITICAL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RunStatistics {
    pub runs: usize,
    pub above: usize,
    pub below: usize,
    pub expected_runs: f64,
    pub sigma_runs: f64,
}

impl RunStatistics {
    pub(crate) fn from_labels(above: &[bool]) -> Result<Self> {
        let n2 = above.iter().filter(|&&a| a).count();
        let n1 = above.len() - n2;
        // with one class on each side sigma_r is zero
        if n1 == 0 || n2 == 0 || n1 + n2 == 2 {
            return Err(Error::DegenerateRuns {
                above: n2,
                below: n1,
            });
        }
        let runs = 1 + above.windows(2).filter(|w| w[0] != w[1]).count();
        let n = above.len() as f64;
        let prod = 2.0 * n1 as f64 * n2 as f64;
        let expected_runs = 1.0 + prod / n;
        let sigma_runs = (prod * (prod - n) / (n * n * (n - 1.0))).sqrt();
        Ok(RunStatistics {
            runs,
            above: n2,
            below: n1,
            expected_runs,
            sigma_runs,
        })
    }
}
