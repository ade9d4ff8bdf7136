//! Reports made of titled sections (a table, `key=value` fields and notes),
//! rendered as plain text, CSV or Markdown. Output is byte-deterministic.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::bundle::DatasetBundle;
use crate::complexity::{complexity_stats, runs_test_uniform, RunsTestResult};
use crate::distinctivity::{mean_distinctivities, DistanceMatrix};
use crate::distributions::{
    evaluate_fit, fit_discrete, DfMode, DiscreteModelFit, FitMethod, Model, ModelKind,
};
use crate::error::{Error, Result};
use crate::model::{
    representation_histogram, Alphabet, ComponentKind, ConnectionKind, FrequencyTable,
};
use crate::uncertainty::{
    comparison_table, mean_uncertainty, ComparisonResult, UncertaintyStats, UncertaintySummary,
    VarianceCombination,
};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Real { value: f64, precision: usize },
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn real(value: f64, precision: usize) -> Cell {
        Cell::Real { value, precision }
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Real { value, precision } => format_real(*value, *precision),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Text(s)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Cell {
        Cell::Int(i)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Cell {
        Cell::Int(i as i64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Cell {
        Cell::Int(i as i64)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Cell {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Cell {
        Cell::Text(if b { "yes" } else { "no" }.to_string())
    }
}

/// Fixed-precision formatting without a negative zero.
pub fn format_real(value: f64, precision: usize) -> String {
    let s = format!("{value:.precision$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<I, S>(headers: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section {
    pub title: String,
    pub table: Option<Table>,
    pub fields: Vec<(String, Cell)>,
    pub notes: Vec<String>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn field(mut self, key: impl Into<String>, value: impl Into<Cell>) -> Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn extend(&mut self, other: Report) {
        self.sections.extend(other.sections);
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Text,
    /// Tables only, separated by a blank line.
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidParams(format!(
                "unknown format {other:?} (expected text, csv or md)"
            ))),
        }
    }
}

pub fn emit_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => emit_text(report),
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Markdown => emit_markdown(report),
    }
}

fn rendered(table: &Table) -> Vec<Vec<String>> {
    table
        .rows
        .iter()
        .map(|r| r.iter().map(Cell::render).collect())
        .collect()
}

fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    for (i, s) in report.sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "== {} ==", s.title);
        if let Some(table) = &s.table {
            let rows = rendered(table);
            let widths: Vec<usize> = (0..table.headers.len())
                .map(|c| {
                    rows.iter()
                        .map(|r| r[c].chars().count())
                        .chain([table.headers[c].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(&table.headers));
            for r in &rows {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for (k, v) in &s.fields {
            let _ = writeln!(out, "{k}={}", v.render());
        }
        for n in &s.notes {
            let _ = writeln!(out, "note: {n}");
        }
    }
    out
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_csv(report: &Report) -> String {
    let mut out = String::new();
    let tables = report.sections.iter().filter_map(|s| s.table.as_ref());
    for (i, table) in tables.enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let header: Vec<String> = table.headers.iter().map(|h| csv_cell(h)).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for r in rendered(table) {
            let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
    }
    out
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn emit_markdown(report: &Report) -> String {
    let mut out = String::new();
    for (i, s) in report.sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "## {}\n", s.title);
        if let Some(table) = &s.table {
            let header: Vec<String> = table.headers.iter().map(|h| md_cell(h)).collect();
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let _ = writeln!(out, "|{}", " --- |".repeat(table.headers.len()));
            for r in rendered(table) {
                let cells: Vec<String> = r.iter().map(|c| md_cell(c)).collect();
                let _ = writeln!(out, "| {} |", cells.join(" | "));
            }
            if !s.fields.is_empty() || !s.notes.is_empty() {
                out.push('\n');
            }
        }
        for (k, v) in &s.fields {
            let _ = writeln!(out, "- {k}={}", v.render());
        }
        if !s.notes.is_empty() {
            if !s.fields.is_empty() {
                out.push('\n');
            }
            for n in &s.notes {
                let _ = writeln!(out, "> {n}");
            }
        }
    }
    out
}

// ---------------------------------------------------------------- builders

/// `n×w+w` style sum of weights (count × weight), in order of first
/// appearance, or `—`.
fn weight_formula(weights: impl IntoIterator<Item = u32>) -> String {
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for w in weights {
        match groups.iter_mut().find(|(g, _)| *g == w) {
            Some((_, n)) => *n += 1,
            None => groups.push((w, 1)),
        }
    }
    if groups.is_empty() {
        return "—".to_string();
    }
    groups
        .iter()
        .map(|&(w, n)| {
            if n == 1 {
                w.to_string()
            } else {
                format!("{n}×{w}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// Per-letter decomposition and complexity. The only table is
/// `glyph,components,connections,complexity`.
pub fn complexity_report(alphabet: &Alphabet) -> Result<Report> {
    let stats = complexity_stats(alphabet)?;
    let mut table = Table::new(["glyph", "components", "connections", "complexity"]);
    for (letter, &(_, c)) in alphabet.letters.iter().zip(&stats.per_letter) {
        table.push(vec![
            letter.glyph.to_string().into(),
            weight_formula(
                letter
                    .components
                    .iter()
                    .map(|c| ComponentKind::weight(c.kind)),
            )
            .into(),
            weight_formula(
                letter
                    .connections
                    .iter()
                    .map(|&k| ConnectionKind::weight(k)),
            )
            .into(),
            c.into(),
        ]);
    }
    let total: u64 = stats.per_letter.iter().map(|&(_, c)| c as u64).sum();
    let section = Section::new("Letter complexity")
        .with_table(table)
        .field("letters", alphabet.len())
        .field("total", total)
        .field("mean", Cell::real(stats.mean, 4))
        .field("sd", Cell::real(stats.sd, 2))
        .note("sd uses the sample convention (n - 1)");
    Ok(Report {
        sections: vec![section],
    })
}

fn runs_section(result: &RunsTestResult) -> Section {
    Section::new("Runs test for uniformity")
        .field("E", Cell::real(result.expected_frequency, 2))
        .field("r", result.runs)
        .field("n", result.n)
        .field("n1", result.n1)
        .field("n2", result.n2)
        .field("E(r)", Cell::real(result.expected_runs, 2))
        .field("sigma_r", Cell::real(result.sigma_runs, 4))
        .field("z", Cell::real(result.z, 2))
        .field("significant", result.significant)
}

fn distribution_table(table: &FrequencyTable) -> Table {
    let mut t = Table::new(["x", "f"]);
    for (x, f) in table.iter() {
        t.push(vec![x.into(), f.into()]);
    }
    t
}

/// Complexity histogram (densified) and the runs test about its mean.
pub fn runs_test_report(alphabet: &Alphabet) -> Result<Report> {
    let stats = complexity_stats(alphabet)?;
    let result = runs_test_uniform(&stats.distribution)?;
    Ok(Report {
        sections: vec![
            Section::new("Complexity distribution")
                .with_table(distribution_table(&stats.distribution)),
            runs_section(&result),
        ],
    })
}

/// Degrees of freedom reported for a fit: its own plus the other two
/// conventions, without repeats, in ascending order.
fn reported_dfs(fit: &DiscreteModelFit) -> Vec<i64> {
    let mut dfs = vec![
        fit.df,
        fit.df_for(DfMode::ClassesMinusOneMinusParams),
        fit.df_for(DfMode::ClassesMinusOne),
    ];
    dfs.sort_unstable();
    dfs.dedup();
    dfs.retain(|&d| d >= 1);
    dfs
}

/// Observed and expected class frequencies, chi-square and p-values.
pub fn fit_report(title: &str, fit: &DiscreteModelFit) -> Report {
    let mut table = Table::new(["x", "f", "NP"]);
    for c in &fit.classes {
        table.push(vec![
            c.label().into(),
            c.observed.into(),
            Cell::real(c.expected, 2),
        ]);
    }
    let mut section = Section::new(title)
        .with_table(table)
        .field("model", fit.model.kind().as_str())
        .field("method", fit.method.as_str());
    for (name, value) in fit.model.params() {
        section = section.field(name, Cell::real(value, 4));
    }
    section = section
        .field("N", fit.observed_total())
        .field("chi_square", Cell::real(fit.chi_square, 2))
        .field("df", fit.df);
    let dfs = reported_dfs(fit);
    for &df in &dfs {
        let p = fit
            .p_value_at(df)
            .map_or(Cell::text("n/a"), |p| Cell::real(p, 2));
        section = section.field(format!("P(df={df})"), p);
    }
    if fit.df < 1 {
        section = section.note("no degrees of freedom left; p-value undefined");
    }
    if dfs.len() > 1 {
        let k = fit.classes.len();
        let m = fit.model.kind().param_count();
        section = section.note(format!(
            "df conventions differ: {k} classes - 1 - {m} parameters = {}, {k} classes - 1 = {}; both p-values shown",
            fit.df_for(DfMode::ClassesMinusOneMinusParams),
            fit.df_for(DfMode::ClassesMinusOne),
        ));
    }
    Report {
        sections: vec![section],
    }
}

fn uncertainty_section(stats: &UncertaintyStats, histogram: &FrequencyTable) -> Section {
    Section::new(format!("Orthographic uncertainty: {}", stats.label))
        .with_table(distribution_table(histogram))
        .field("N", stats.n)
        .field("Ū", Cell::real(stats.u_bar, 4))
        .field("x̄", Cell::real(stats.mean, 4))
        .field("s²", Cell::real(stats.variance, 4))
        .field("V(Ū)", Cell::real(stats.variance_of_u, 6))
        .note("s² uses the population convention (n)")
}

fn comparison_section(
    target: &UncertaintySummary,
    others: &[UncertaintySummary],
    rows: &[ComparisonResult],
) -> Section {
    let mut table = Table::new(["label", "U_bar", "V", "z", "significant"]);
    table.push(vec![
        target.label.clone().into(),
        Cell::real(target.u_bar, 4),
        Cell::real(target.variance, 6),
        "".into(),
        "".into(),
    ]);
    for (o, r) in others.iter().zip(rows) {
        table.push(vec![
            o.label.clone().into(),
            Cell::real(o.u_bar, 4),
            Cell::real(o.variance, 6),
            Cell::real(r.z, 2),
            r.significant.into(),
        ]);
    }
    Section::new(format!("Uncertainty comparison with {}", target.label))
        .with_table(table)
        .note("z = |Ū1 - Ū2| / sqrt(V1 ⊕ V2); significant when z > 1.96")
}

/// Ū and its variance for a representation histogram, optionally compared
/// with other languages.
pub fn uncertainty_report(
    histogram: &FrequencyTable,
    label: &str,
    others: &[UncertaintySummary],
    combination: VarianceCombination,
) -> Result<Report> {
    let stats = mean_uncertainty(histogram, label)?;
    let mut report = Report {
        sections: vec![uncertainty_section(&stats, histogram)],
    };
    if !others.is_empty() {
        let target = stats.summary();
        let rows = comparison_table(&target, others, combination)?;
        let mut section = comparison_section(&target, others, &rows);
        if combination == VarianceCombination::Difference {
            section = section.note("variance combination: V1 - V2");
        } else {
            section = section.note("variance combination: V1 + V2");
        }
        report.push(section);
    }
    Ok(report)
}

/// Per-letter mean distinctivities (row sum / (I - 1)) and their mean.
pub fn distinctivity_report(title: &str, matrix: &DistanceMatrix) -> Result<Report> {
    let stats = mean_distinctivities(matrix)?;
    let mut table = Table::new(["glyph", "mean"]);
    for &(g, m) in &stats.per_letter {
        table.push(vec![g.to_string().into(), Cell::real(m, 2)]);
    }
    let section = Section::new(title)
        .with_table(table)
        .field("letters", matrix.len())
        .field("D̄", Cell::real(stats.overall, 4));
    Ok(Report {
        sections: vec![section],
    })
}

/// Every analysis on a dataset bundle, followed by its errata.
pub fn bundle_report(bundle: &DatasetBundle) -> Result<Report> {
    let mut report = Report::new();
    let name = &bundle.name;

    let histogram = representation_histogram(&bundle.mapping)?;
    if let Some(model) = bundle.reference.representations {
        let fit = evaluate_fit(&histogram, model, DfMode::ClassesMinusOneMinusParams)?;
        report.extend(fit_report("Representations: reference parameters", &fit));
    }
    let fitted = fit_discrete(
        &histogram,
        ModelKind::SsGeometric,
        FitMethod::ChiSquareMin,
        DfMode::ClassesMinusOneMinusParams,
    )?;
    report.extend(fit_report("Representations: chi-square minimum", &fitted));

    report.extend(uncertainty_report(
        &histogram,
        name,
        &bundle.comparison,
        VarianceCombination::Sum,
    )?);
    if !bundle.comparison.is_empty() {
        if let Some(s) = report.sections.last_mut() {
            s.notes
                .push("comparison variances are back-solved inputs, so these z-values are a consistency check".into());
        }
    }

    report.extend(complexity_report(&bundle.alphabet)?);
    report.extend(runs_test_report(&bundle.alphabet)?);

    let connections = bundle.connection_histogram();
    if let Some(model) = bundle.reference.connections {
        let fit = evaluate_fit(&connections, model, DfMode::ClassesMinusOneMinusParams)?;
        report.extend(fit_report("Connections: reference parameters", &fit));
    }
    let fitted = fit_discrete(
        &connections,
        ModelKind::Poisson,
        FitMethod::ChiSquareMin,
        DfMode::ClassesMinusOneMinusParams,
    )?;
    report.extend(fit_report("Connections: chi-square minimum", &fitted));
    let moment = fit_discrete(
        &connections,
        ModelKind::Poisson,
        FitMethod::Moment,
        DfMode::ClassesMinusOneMinusParams,
    )?;
    report.extend(fit_report("Connections: moment estimate", &moment));

    report.extend(distinctivity_report(
        "Mean distinctivity",
        &bundle.distances,
    )?);
    if let Some(variant) = &bundle.distances_variant {
        report.extend(distinctivity_report(
            "Mean distinctivity: variant matrix",
            variant,
        )?);
    }

    if !bundle.errata.is_empty() {
        let mut section = Section::new("Errata");
        section.notes = bundle.errata.clone();
        report.push(section);
    }
    Ok(report)
}

/// Convenience for callers holding only a fitted model.
pub fn model_label(model: &Model) -> String {
    let params: Vec<String> = model
        .params()
        .iter()
        .map(|(n, v)| format!("{n}={}", format_real(*v, 4)))
        .collect();
    format!("{} ({})", model.kind(), params.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::SsGeometric;

    #[test]
    fn empty_report_is_empty_in_every_format() {
        for f in [
            ReportFormat::Text,
            ReportFormat::Csv,
            ReportFormat::Markdown,
        ] {
            assert_eq!(emit_report(&Report::new(), f), "");
        }
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(format_real(-0.0001, 2), "0.00");
        assert_eq!(format_real(-0.0, 0), "0");
        assert_eq!(format_real(-0.006, 2), "-0.01");
        assert_eq!(format_real(1.90118, 2), "1.90");
    }

    #[test]
    fn formulas() {
        assert_eq!(weight_formula([2, 2, 3]), "2×2+3");
        assert_eq!(weight_formula([2, 3, 2]), "2×2+3");
        assert_eq!(weight_formula([2, 2, 2]), "3×2");
        assert_eq!(weight_formula([2, 3, 3]), "2+2×3");
        assert_eq!(weight_formula([]), "—");
    }

    fn sample() -> Report {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["x,y".into(), Cell::real(1.5, 2)]);
        Report {
            sections: vec![
                Section::new("One").with_table(t).field("k", 3u32).note("n"),
                Section::new("Two").field("z", Cell::real(-0.0, 2)),
            ],
        }
    }

    #[test]
    fn text_layout() {
        assert_eq!(
            emit_report(&sample(), ReportFormat::Text),
            "== One ==\na    b\nx,y  1.50\nk=3\nnote: n\n\n== Two ==\nz=0.00\n"
        );
    }

    #[test]
    fn csv_has_tables_only() {
        assert_eq!(
            emit_report(&sample(), ReportFormat::Csv),
            "a,b\n\"x,y\",1.50\n"
        );
    }

    #[test]
    fn markdown_layout() {
        assert_eq!(
            emit_report(&sample(), ReportFormat::Markdown),
            "## One\n\n| a | b |\n| --- | --- |\n| x,y | 1.50 |\n\n- k=3\n\n> n\n\n## Two\n\n- z=0.00\n"
        );
    }

    #[test]
    fn fit_report_lists_both_dfs() {
        let t =
            FrequencyTable::from_pairs([(1, 10), (2, 12), (3, 9), (4, 2), (5, 2), (6, 3)]).unwrap();
        let model = Model::from(SsGeometric::new(0.5737, 0.7105).unwrap());
        let fit = evaluate_fit(&t, model, DfMode::ClassesMinusOneMinusParams).unwrap();
        let text = emit_report(&fit_report("fit", &fit), ReportFormat::Text);
        for line in [
            "chi_square=1.90",
            "P(df=3)=0.59",
            "P(df=5)=0.86",
            "x    f   NP",
            ">=6  3   2.44",
        ] {
            assert!(
                text.lines().any(|l| l == line),
                "missing {line:?} in\n{text}"
            );
        }
        assert!(text.contains("note: df conventions differ"));
    }

    #[test]
    fn format_names() {
        assert_eq!(
            "md".parse::<ReportFormat>().unwrap(),
            ReportFormat::Markdown
        );
        assert!("html".parse::<ReportFormat>().is_err());
    }

    #[test]
    fn labels() {
        let m = Model::from(SsGeometric::new(0.5, 0.25).unwrap());
        assert_eq!(model_label(&m), "ss-geometric (p=0.5000, a=0.2500)");
    }
}
