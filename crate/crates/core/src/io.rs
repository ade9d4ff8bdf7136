//! Text formats for alphabets, mapping tables, distance matrices, frequency
//! tables, comparison inputs and difference weights.
//!
//! Every `parse_*` function takes the text and an origin used in error
//! messages; the `*_file` variants read a path first. Serializers emit a
//! canonical form, so serialize, parse and serialize again is byte-identical.
//! Comments are not preserved.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::distinctivity::{DifferenceWeights, DistanceMatrix};
use crate::error::{Error, Result};
use crate::model::{
    validate_alphabet, Alphabet, Component, ComponentKind, ConnectionKind, FrequencyTable,
    GraphemeRepresentation, Letter, MappingTable, Orientation, Palatalization, Phoneme,
    PhonemeCategory, Violation,
};
use crate::uncertainty::UncertaintySummary;

pub const MAPPING_HEADER: [&str; 6] = [
    "phoneme",
    "category",
    "palatalization",
    "graphemes",
    "context",
    "example",
];
pub const FREQUENCY_HEADER: [&str; 2] = ["x", "f"];
pub const COMPARISON_HEADER: [&str; 3] = ["label", "U_bar", "V"];

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_with<T>(path: &Path, parse: impl FnOnce(&str, &str) -> Result<T>) -> Result<T> {
    let text = read_text(path)?;
    let origin = path.display().to_string();
    parse(&text, &origin).map_err(|e| Error::in_file(&origin, e))
}

// ---------------------------------------------------------------- alphabet

/// Parses the line-oriented alphabet format:
///
/// ```text
/// # comment
/// alphabet Ukrainian Cyrillic
/// letter А a
///   component L:NE
///   component A:W x2 "bowls"
///   connection C x3
/// ```
///
/// A line is a comment when its first non-blank character is `#`. The
/// result is checked with [`validate_alphabet`].
pub fn parse_alphabet(text: &str, origin: &str) -> Result<Alphabet> {
    let mut name: Option<String> = None;
    let mut letters: Vec<Letter> = Vec::new();
    let mut letter_lines: Vec<u64> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        let err = |msg: String| Error::syntax(origin, line_no, msg);
        match keyword {
            "alphabet" => {
                if name.is_some() {
                    return Err(err("second `alphabet` line".into()));
                }
                if !letters.is_empty() {
                    return Err(err("`alphabet` must come before the first letter".into()));
                }
                name = Some(rest.to_string());
            }
            "letter" => {
                let (glyph, translit) = match rest.split_once(char::is_whitespace) {
                    Some((g, t)) => (g, t.trim()),
                    None => (rest, ""),
                };
                let mut chars = glyph.chars();
                let glyph = match (chars.next(), chars.next()) {
                    (Some(c), None) => c,
                    (None, _) => return Err(err("`letter` needs a glyph".into())),
                    _ => return Err(err(format!("glyph {glyph:?} is not a single character"))),
                };
                letters.push(Letter::new(glyph, translit));
                letter_lines.push(line_no);
            }
            "component" => {
                let letter = letters
                    .last_mut()
                    .ok_or_else(|| err("`component` before any `letter`".into()))?;
                let (component, count) = parse_component(rest).map_err(err)?;
                letter
                    .components
                    .extend(std::iter::repeat_n(component, count));
            }
            "connection" => {
                let letter = letters
                    .last_mut()
                    .ok_or_else(|| err("`connection` before any `letter`".into()))?;
                let (code, count) = split_count(rest).map_err(err)?;
                let kind = ConnectionKind::from_code(code).ok_or_else(|| {
                    err(format!(
                        "unknown connection kind {code:?} (expected T, C or X)"
                    ))
                })?;
                letter.connections.extend(std::iter::repeat_n(kind, count));
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }

    if letters.is_empty() {
        return Err(Error::syntax(
            origin,
            text.lines().count() as u64,
            "no letters",
        ));
    }
    let alphabet = Alphabet::new(name.unwrap_or_default(), letters);
    let report = validate_alphabet(&alphabet);
    if !report.is_valid() {
        let line_of = |glyph: char| {
            alphabet
                .letters
                .iter()
                .position(|l| l.glyph == glyph)
                .map_or(0, |i| letter_lines[i])
        };
        let messages = report
            .violations
            .iter()
            .map(|v| {
                let line = match v {
                    Violation::DuplicateGlyph { second, .. } => letter_lines[*second],
                    Violation::EmptyComponents { glyph }
                    | Violation::PointWithOrientation { glyph, .. } => line_of(*glyph),
                };
                format!("{origin}:{line}: {v}")
            })
            .collect();
        return Err(Error::InvalidAlphabet(messages));
    }
    Ok(alphabet)
}

/// `<code>[:<orientation>] [xN] ["annotation"]`
fn parse_component(rest: &str) -> std::result::Result<(Component, usize), String> {
    let (head, annotation) = match rest.find('"') {
        Some(start) => {
            let quoted = &rest[start..];
            if quoted.len() < 2
                || !quoted.ends_with('"')
                || quoted[1..quoted.len() - 1].contains('"')
            {
                return Err(format!("malformed annotation {quoted}"));
            }
            (
                rest[..start].trim(),
                Some(quoted[1..quoted.len() - 1].to_string()),
            )
        }
        None => (rest, None),
    };
    let (spec, count) = split_count(head)?;
    let (code, orientation) = match spec.split_once(':') {
        Some((c, o)) => (
            c,
            Some(Orientation::parse(o).ok_or_else(|| format!("unknown orientation {o:?}"))?),
        ),
        None => (spec, None),
    };
    let kind = ComponentKind::from_code(code)
        .ok_or_else(|| format!("unknown component kind {code:?} (expected P, L or A)"))?;
    Ok((
        Component {
            kind,
            orientation,
            annotation,
        },
        count,
    ))
}

/// Splits `"<token> [xN]"` into the token and its multiplicity.
fn split_count(s: &str) -> std::result::Result<(&str, usize), String> {
    let mut parts = s.split_whitespace();
    let token = parts.next().ok_or("missing kind code")?;
    let count = match parts.next() {
        None => 1,
        Some(m) => {
            let n = m
                .strip_prefix('x')
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| format!("expected a multiplicity like x2, found {m:?}"))?;
            if n == 0 {
                return Err("multiplicity must be at least 1".into());
            }
            n
        }
    };
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected {extra:?}"));
    }
    Ok((token, count))
}

pub fn parse_alphabet_file(path: impl AsRef<Path>) -> Result<Alphabet> {
    read_with(path.as_ref(), parse_alphabet)
}

/// Canonical text form. Runs of identical components or connections are
/// written once with an `xN` multiplicity. Annotations must be single-line
/// and free of double quotes to survive a round trip.
pub fn serialize_alphabet(alphabet: &Alphabet) -> String {
    let mut out = String::new();
    if !alphabet.name.is_empty() {
        let _ = writeln!(out, "alphabet {}\n", alphabet.name);
    }
    for (i, letter) in alphabet.letters.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if letter.transliteration.is_empty() {
            let _ = writeln!(out, "letter {}", letter.glyph);
        } else {
            let _ = writeln!(out, "letter {} {}", letter.glyph, letter.transliteration);
        }
        for (c, n) in runs(&letter.components) {
            out.push_str("  component ");
            out.push(c.kind.code());
            if let Some(o) = c.orientation {
                let _ = write!(out, ":{}", o.as_str());
            }
            if n > 1 {
                let _ = write!(out, " x{n}");
            }
            if let Some(a) = &c.annotation {
                let _ = write!(out, " \"{a}\"");
            }
            out.push('\n');
        }
        for (k, n) in runs(&letter.connections) {
            let _ = write!(out, "  connection {}", k.code());
            if n > 1 {
                let _ = write!(out, " x{n}");
            }
            out.push('\n');
        }
    }
    out
}

fn runs<T: PartialEq>(items: &[T]) -> Vec<(&T, usize)> {
    let mut out: Vec<(&T, usize)> = Vec::new();
    for item in items {
        match out.last_mut() {
            Some((prev, n)) if *prev == item => *n += 1,
            _ => out.push((item, 1)),
        }
    }
    out
}

// ---------------------------------------------------------------- csv helpers

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes())
}

fn csv_error(origin: &str, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => e.to_string(),
    };
    Error::syntax(origin, line, message)
}

fn check_header(reader: &mut csv::Reader<&[u8]>, origin: &str, expected: &[&str]) -> Result<()> {
    let header = reader.headers().map_err(|e| csv_error(origin, e))?.clone();
    if header.is_empty() {
        return Err(Error::syntax(origin, 1, "missing header row"));
    }
    if !header.iter().eq(expected.iter().copied()) {
        let line = header.position().map_or(1, |p| p.line());
        return Err(Error::syntax(
            origin,
            line,
            format!(
                "expected header {}, found {}",
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    Ok(())
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// Quotes a CSV field when the reader would otherwise misread it.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) || s.starts_with('#') || s.trim() != s {
        quoted(s)
    } else {
        s.to_string()
    }
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

// ---------------------------------------------------------------- mapping

/// One row per graphemic representation, rows of a phoneme contiguous.
/// A single row with an empty `graphemes` field declares a phoneme without
/// representations, which the table then rejects.
pub fn parse_mapping(text: &str, origin: &str) -> Result<MappingTable> {
    let mut reader = csv_reader(text);
    check_header(&mut reader, origin, &MAPPING_HEADER)?;

    let mut entries: Vec<(Phoneme, Vec<GraphemeRepresentation>)> = Vec::new();
    let mut first_line: Vec<u64> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(origin, e))?;
        let line = record_line(&record);
        let err = |msg: String| Error::syntax(origin, line, msg);
        let field = |i: usize| record.get(i).unwrap_or("");
        let ipa = field(0);
        if ipa.is_empty() {
            return Err(err("empty phoneme".into()));
        }
        let category = PhonemeCategory::parse(field(1)).ok_or_else(|| {
            err(format!(
                "unknown category {:?} (expected vowel or consonant)",
                field(1)
            ))
        })?;
        let palatalization = Palatalization::parse(field(2)).ok_or_else(|| {
            err(format!(
                "unknown palatalization {:?} (expected hard, palatalized or semi-palatalized)",
                field(2)
            ))
        })?;
        let phoneme = Phoneme::new(ipa, category, palatalization);
        let rep = GraphemeRepresentation::new(field(3), field(4), field(5));

        match entries.last_mut() {
            Some((current, reps)) if current.ipa == ipa => {
                if *current != phoneme {
                    return Err(err(format!(
                        "/{ipa}/ changes category or palatalization between rows"
                    )));
                }
                if reps.is_empty() || rep.graphemes.is_empty() {
                    return Err(err(format!(
                        "/{ipa}/ mixes an empty grapheme row with other rows"
                    )));
                }
                if reps.iter().any(|r| r.graphemes == rep.graphemes) {
                    return Err(err(format!(
                        "duplicate representation {:?} for /{ipa}/",
                        rep.graphemes
                    )));
                }
                reps.push(rep);
            }
            _ => {
                if let Some(i) = entries.iter().position(|(p, _)| p.ipa == ipa) {
                    return Err(err(format!(
                        "duplicate phoneme /{ipa}/ (first block at line {})",
                        first_line[i]
                    )));
                }
                let reps = if rep.graphemes.is_empty() {
                    Vec::new()
                } else {
                    vec![rep]
                };
                entries.push((phoneme, reps));
                first_line.push(line);
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyMappingTable);
    }
    if let Some(i) = entries.iter().position(|(_, reps)| reps.is_empty()) {
        return Err(Error::syntax(
            origin,
            first_line[i],
            format!(
                "phoneme /{}/ has no graphemic representations",
                entries[i].0.ipa
            ),
        ));
    }
    MappingTable::new(entries)
}

pub fn parse_mapping_file(path: impl AsRef<Path>) -> Result<MappingTable> {
    read_with(path.as_ref(), parse_mapping)
}

/// Header plus one row per representation; the phoneme field is always quoted.
pub fn serialize_mapping(table: &MappingTable) -> String {
    let mut out = MAPPING_HEADER.join(",");
    out.push('\n');
    for (phoneme, reps) in table.entries() {
        for rep in reps {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                quoted(&phoneme.ipa),
                phoneme.category.as_str(),
                phoneme.palatalization.as_str(),
                csv_field(&rep.graphemes),
                csv_field(&rep.context),
                csv_field(&rep.example),
            );
        }
    }
    out
}

// ---------------------------------------------------------------- matrix

/// Header `glyph,<l1>,...,<ln>` followed by one row per label in the same
/// order. Symmetry and the zero diagonal are checked on load.
pub fn parse_matrix(text: &str, origin: &str) -> Result<DistanceMatrix> {
    // flexible: row lengths are checked below with a clearer message
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error(origin, e))?.clone();
    let header_line = header.position().map_or(1, |p| p.line());
    if header.get(0) != Some("glyph") {
        return Err(Error::syntax(
            origin,
            header_line,
            "header must start with `glyph`",
        ));
    }
    let labels = header
        .iter()
        .skip(1)
        .map(|l| {
            single_char(l).ok_or_else(|| {
                Error::syntax(
                    origin,
                    header_line,
                    format!("label {l:?} is not a single character"),
                )
            })
        })
        .collect::<Result<Vec<char>>>()?;
    if labels.is_empty() {
        return Err(Error::syntax(origin, header_line, "no labels"));
    }

    let mut values = Vec::with_capacity(labels.len());
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(origin, e))?;
        let line = record_line(&record);
        let err = |msg: String| Error::syntax(origin, line, msg);
        let row = values.len();
        let label = record.get(0).unwrap_or("");
        match labels.get(row) {
            None => return Err(err(format!("matrix is not square: extra row {label:?}"))),
            Some(&expected) if single_char(label) != Some(expected) => {
                return Err(err(format!(
                    "row label {label:?} does not match column label {expected}"
                )));
            }
            Some(_) => {}
        }
        if record.len() != labels.len() + 1 {
            return Err(err(format!(
                "matrix is not square: row {label} has {} entries, expected {}",
                record.len() - 1,
                labels.len()
            )));
        }
        let cells = record
            .iter()
            .skip(1)
            .map(|c| {
                c.trim().parse::<u32>().map_err(|_| {
                    err(format!(
                        "cell {c:?} in row {label} is not a non-negative integer"
                    ))
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        values.push(cells);
    }
    if values.len() != labels.len() {
        return Err(Error::InvalidMatrix(format!(
            "matrix is not square: {} columns but {} rows",
            labels.len(),
            values.len()
        )));
    }
    DistanceMatrix::new(labels, values)
}

fn single_char(s: &str) -> Option<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

pub fn parse_matrix_file(path: impl AsRef<Path>) -> Result<DistanceMatrix> {
    read_with(path.as_ref(), parse_matrix)
}

pub fn serialize_matrix(matrix: &DistanceMatrix) -> String {
    let mut out = String::from("glyph");
    for &l in matrix.labels() {
        out.push(',');
        out.push_str(&csv_field(&l.to_string()));
    }
    out.push('\n');
    for (&l, row) in matrix.labels().iter().zip(matrix.rows()) {
        out.push_str(&csv_field(&l.to_string()));
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- frequency tables

/// Header `x,f`, one row per support value.
pub fn parse_frequency_table(text: &str, origin: &str) -> Result<FrequencyTable> {
    let mut reader = csv_reader(text);
    check_header(&mut reader, origin, &FREQUENCY_HEADER)?;
    let mut pairs: Vec<(u32, u64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(origin, e))?;
        let line = record_line(&record);
        let err = |msg: String| Error::syntax(origin, line, msg);
        let x = record[0].trim().parse::<u32>().map_err(|_| {
            err(format!(
                "x value {:?} is not a non-negative integer",
                &record[0]
            ))
        })?;
        let f = record[1].trim().parse::<u64>().map_err(|_| {
            err(format!(
                "frequency {:?} is not a non-negative integer",
                &record[1]
            ))
        })?;
        if pairs.iter().any(|&(seen, _)| seen == x) {
            return Err(err(format!("support value {x} listed twice")));
        }
        pairs.push((x, f));
    }
    FrequencyTable::from_pairs(pairs)
}

pub fn parse_frequency_file(path: impl AsRef<Path>) -> Result<FrequencyTable> {
    read_with(path.as_ref(), parse_frequency_table)
}

pub fn serialize_frequency_table(table: &FrequencyTable) -> String {
    let mut out = FREQUENCY_HEADER.join(",");
    out.push('\n');
    for (x, f) in table.iter() {
        let _ = writeln!(out, "{x},{f}");
    }
    out
}

// ---------------------------------------------------------------- comparison inputs

/// Header `label,U_bar,V`.
pub fn parse_comparison(text: &str, origin: &str) -> Result<Vec<UncertaintySummary>> {
    let mut reader = csv_reader(text);
    check_header(&mut reader, origin, &COMPARISON_HEADER)?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(origin, e))?;
        let line = record_line(&record);
        let number = |i: usize, what: &str| {
            record[i]
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    Error::syntax(
                        origin,
                        line,
                        format!("{what} {:?} is not a finite number", &record[i]),
                    )
                })
        };
        let label = &record[0];
        if label.is_empty() {
            return Err(Error::syntax(origin, line, "empty label"));
        }
        out.push(UncertaintySummary::new(
            label,
            number(1, "U_bar")?,
            number(2, "V")?,
        ));
    }
    Ok(out)
}

pub fn parse_comparison_file(path: impl AsRef<Path>) -> Result<Vec<UncertaintySummary>> {
    read_with(path.as_ref(), parse_comparison)
}

pub fn serialize_comparison(rows: &[UncertaintySummary]) -> String {
    let mut out = COMPARISON_HEADER.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{}", csv_field(&r.label), r.u_bar, r.variance);
    }
    out
}

// ---------------------------------------------------------------- weights

/// TOML with optional keys `kind_mismatch`, `orientation_mismatch`,
/// `absence` (`"component-weight"` or `{ fixed = N }`) and `connection_weight`.
pub fn parse_weights(text: &str, origin: &str) -> Result<DifferenceWeights> {
    toml::from_str(text).map_err(|e: toml::de::Error| {
        let line = e.span().map_or(0, |s| {
            text[..s.start.min(text.len())].matches('\n').count() as u64 + 1
        });
        Error::syntax(origin, line, e.message().to_string())
    })
}

pub fn parse_weights_file(path: impl AsRef<Path>) -> Result<DifferenceWeights> {
    read_with(path.as_ref(), parse_weights)
}
