//! Domain types shared by every analysis: letters and their stroke
//! decompositions, phoneme-to-grapheme mappings and integer-support
//! frequency tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Drawing primitive of a letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    Point,
    Line,
    /// Curve not exceeding 180 degrees.
    Arc,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; 3] = [
        ComponentKind::Point,
        ComponentKind::Line,
        ComponentKind::Arc,
    ];

    pub fn weight(self) -> u32 {
        match self {
            ComponentKind::Point => 1,
            ComponentKind::Line => 2,
            ComponentKind::Arc => 3,
        }
    }

    pub fn code(self) -> char {
        match self {
            ComponentKind::Point => 'P',
            ComponentKind::Line => 'L',
            ComponentKind::Arc => 'A',
        }
    }

    pub fn from_code(c: &str) -> Option<Self> {
        match c {
            "P" => Some(ComponentKind::Point),
            "L" => Some(ComponentKind::Line),
            "A" => Some(ComponentKind::Arc),
            _ => None,
        }
    }
}

/// Junction type between two components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnectionKind {
    Continuous,
    Crisp,
    Crossing,
}

impl ConnectionKind {
    pub const ALL: [ConnectionKind; 3] = [
        ConnectionKind::Continuous,
        ConnectionKind::Crisp,
        ConnectionKind::Crossing,
    ];

    pub fn weight(self) -> u32 {
        match self {
            ConnectionKind::Continuous => 1,
            ConnectionKind::Crisp => 2,
            ConnectionKind::Crossing => 3,
        }
    }

    pub fn code(self) -> char {
        match self {
            ConnectionKind::Continuous => 'T',
            ConnectionKind::Crisp => 'C',
            ConnectionKind::Crossing => 'X',
        }
    }

    pub fn from_code(c: &str) -> Option<Self> {
        match c {
            "T" => Some(ConnectionKind::Continuous),
            "C" => Some(ConnectionKind::Crisp),
            "X" => Some(ConnectionKind::Crossing),
            _ => None,
        }
    }
}

/// Eight compass classes. Lines use their axis (N, NE, E, NW); arcs the
/// direction they open towards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Orientation {
    pub const ALL: [Orientation; 8] = [
        Orientation::N,
        Orientation::NE,
        Orientation::E,
        Orientation::SE,
        Orientation::S,
        Orientation::SW,
        Orientation::W,
        Orientation::NW,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::N => "N",
            Orientation::NE => "NE",
            Orientation::E => "E",
            Orientation::SE => "SE",
            Orientation::S => "S",
            Orientation::SW => "SW",
            Orientation::W => "W",
            Orientation::NW => "NW",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Orientation::ALL.into_iter().find(|o| o.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    pub kind: ComponentKind,
    pub orientation: Option<Orientation>,
    pub annotation: Option<String>,
}

impl Component {
    pub fn new(kind: ComponentKind) -> Self {
        Component {
            kind,
            orientation: None,
            annotation: None,
        }
    }

    pub fn oriented(kind: ComponentKind, orientation: Orientation) -> Self {
        Component {
            kind,
            orientation: Some(orientation),
            annotation: None,
        }
    }

    /// Identity for matching purposes: kind and orientation, not the annotation.
    pub fn same_shape(&self, other: &Component) -> bool {
        self.kind == other.kind && self.orientation == other.orientation
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub glyph: char,
    pub transliteration: String,
    pub components: Vec<Component>,
    pub connections: Vec<ConnectionKind>,
}

impl Letter {
    pub fn new(glyph: char, transliteration: impl Into<String>) -> Self {
        Letter {
            glyph: normalize_glyph(glyph),
            transliteration: transliteration.into(),
            components: Vec::new(),
            connections: Vec::new(),
        }
    }

    pub fn with_components(mut self, components: impl IntoIterator<Item = Component>) -> Self {
        self.components.extend(components);
        self
    }

    pub fn with_connections(
        mut self,
        connections: impl IntoIterator<Item = ConnectionKind>,
    ) -> Self {
        self.connections.extend(connections);
        self
    }
}

/// Glyphs are identified by the code point of their uppercase form.
pub fn normalize_glyph(c: char) -> char {
    let mut upper = c.to_uppercase();
    match (upper.next(), upper.next()) {
        (Some(u), None) => u,
        _ => c,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    pub name: String,
    pub letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, letters: Vec<Letter>) -> Self {
        Alphabet {
            name: name.into(),
            letters,
        }
    }

    /// Inventory size.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, glyph: char) -> Option<&Letter> {
        let glyph = normalize_glyph(glyph);
        self.letters.iter().find(|l| l.glyph == glyph)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateGlyph {
        glyph: char,
        first: usize,
        second: usize,
    },
    EmptyComponents {
        glyph: char,
    },
    PointWithOrientation {
        glyph: char,
        component: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateGlyph {
                glyph,
                first,
                second,
            } => write!(
                f,
                "duplicate glyph {glyph} (letters #{} and #{})",
                first + 1,
                second + 1
            ),
            Violation::EmptyComponents { glyph } => write!(f, "letter {glyph} has no components"),
            Violation::PointWithOrientation { glyph, component } => write!(
                f,
                "letter {glyph}: component #{} is a point but carries an orientation",
                component + 1
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidAlphabet(
                self.violations.iter().map(ToString::to_string).collect(),
            ))
        }
    }
}

/// Collects every structural problem in an alphabet. Never fails.
pub fn validate_alphabet(alphabet: &Alphabet) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen: HashMap<char, usize> = HashMap::new();
    for (i, letter) in alphabet.letters.iter().enumerate() {
        let glyph = normalize_glyph(letter.glyph);
        if let Some(&first) = seen.get(&glyph) {
            violations.push(Violation::DuplicateGlyph {
                glyph,
                first,
                second: i,
            });
        } else {
            seen.insert(glyph, i);
        }
        if letter.components.is_empty() {
            violations.push(Violation::EmptyComponents { glyph });
        }
        for (j, c) in letter.components.iter().enumerate() {
            if c.kind == ComponentKind::Point && c.orientation.is_some() {
                violations.push(Violation::PointWithOrientation {
                    glyph,
                    component: j,
                });
            }
        }
    }
    ValidationReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhonemeCategory {
    Vowel,
    Consonant,
}

impl PhonemeCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            PhonemeCategory::Vowel => "vowel",
            PhonemeCategory::Consonant => "consonant",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vowel" => Some(PhonemeCategory::Vowel),
            "consonant" => Some(PhonemeCategory::Consonant),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Palatalization {
    Hard,
    Palatalized,
    SemiPalatalized,
}

impl Palatalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Palatalization::Hard => "hard",
            Palatalization::Palatalized => "palatalized",
            Palatalization::SemiPalatalized => "semi-palatalized",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hard" => Some(Palatalization::Hard),
            "palatalized" => Some(Palatalization::Palatalized),
            "semi-palatalized" => Some(Palatalization::SemiPalatalized),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phoneme {
    pub ipa: String,
    pub category: PhonemeCategory,
    pub palatalization: Palatalization,
}

impl Phoneme {
    pub fn new(
        ipa: impl Into<String>,
        category: PhonemeCategory,
        palatalization: Palatalization,
    ) -> Self {
        Phoneme {
            ipa: ipa.into(),
            category,
            palatalization,
        }
    }
}

/// One way of writing a phoneme, possibly conditioned on context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphemeRepresentation {
    pub graphemes: String,
    pub context: String,
    pub example: String,
}

impl GraphemeRepresentation {
    pub fn new(
        graphemes: impl Into<String>,
        context: impl Into<String>,
        example: impl Into<String>,
    ) -> Self {
        GraphemeRepresentation {
            graphemes: graphemes.into(),
            context: context.into(),
            example: example.into(),
        }
    }
}

/// Phonemes with their graphemic representations, in inventory order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingTable {
    entries: Vec<(Phoneme, Vec<GraphemeRepresentation>)>,
}

impl MappingTable {
    pub fn new(entries: Vec<(Phoneme, Vec<GraphemeRepresentation>)>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, (phoneme, reps)) in entries.iter().enumerate() {
            if phoneme.ipa.is_empty() {
                return Err(Error::InvalidMapping(format!(
                    "phoneme #{} has an empty IPA string",
                    i + 1
                )));
            }
            if seen.insert(phoneme.ipa.as_str(), i).is_some() {
                return Err(Error::InvalidMapping(format!(
                    "duplicate phoneme /{}/",
                    phoneme.ipa
                )));
            }
            if reps.is_empty() {
                return Err(Error::InvalidMapping(format!(
                    "phoneme /{}/ has no graphemic representations",
                    phoneme.ipa
                )));
            }
            if let Some(r) = reps.iter().find(|r| r.graphemes.is_empty()) {
                return Err(Error::InvalidMapping(format!(
                    "phoneme /{}/ has an empty grapheme string (context {:?})",
                    phoneme.ipa, r.context
                )));
            }
        }
        Ok(MappingTable { entries })
    }

    pub fn entries(&self) -> &[(Phoneme, Vec<GraphemeRepresentation>)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn representations(&self, ipa: &str) -> Option<&[GraphemeRepresentation]> {
        self.entries
            .iter()
            .find(|(p, _)| p.ipa == ipa)
            .map(|(_, r)| r.as_slice())
    }
}

/// Histogram over integer support values. `N` is the sum of the counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    entries: BTreeMap<u32, u64>,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `(x, f(x))` pairs; repeated support values are rejected.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u64)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (x, f) in pairs {
            if entries.insert(x, f).is_some() {
                return Err(Error::InvalidTable(format!(
                    "support value {x} listed twice"
                )));
            }
        }
        Ok(FrequencyTable { entries })
    }

    /// Histogram of raw observations.
    pub fn from_observations(values: impl IntoIterator<Item = u32>) -> Self {
        let mut entries = BTreeMap::new();
        for v in values {
            *entries.entry(v).or_insert(0) += 1;
        }
        FrequencyTable { entries }
    }

    pub fn get(&self, x: u32) -> u64 {
        self.entries.get(&x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.entries.iter().map(|(&x, &f)| (x, f))
    }

    pub fn min_support(&self) -> Option<u32> {
        self.entries.keys().next().copied()
    }

    pub fn max_support(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    /// Smallest and largest support value carrying a non-zero count.
    pub fn observed_range(&self) -> Option<(u32, u32)> {
        let lo = self.entries.iter().find(|(_, &f)| f > 0)?.0;
        let hi = self.entries.iter().rev().find(|(_, &f)| f > 0)?.0;
        Some((*lo, *hi))
    }

    /// Same counts with explicit zero entries for every missing value
    /// between the smallest and largest listed support value.
    pub fn densified(&self) -> FrequencyTable {
        match (self.min_support(), self.max_support()) {
            (Some(lo), Some(hi)) => FrequencyTable {
                entries: (lo..=hi).map(|x| (x, self.get(x))).collect(),
            },
            _ => self.clone(),
        }
    }

    pub fn moments(&self, mode: VarianceMode) -> Result<Moments> {
        table_moments(self, mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceMode {
    /// Divide by N.
    Population,
    /// Divide by N - 1.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub sd: f64,
}

pub fn table_moments(table: &FrequencyTable, mode: VarianceMode) -> Result<Moments> {
    let n = table.total();
    if n == 0 {
        return Err(Error::EmptyTable);
    }
    if mode == VarianceMode::Sample && n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = table.iter().map(|(x, f)| x as f64 * f as f64).sum::<f64>() / nf;
    let ss: f64 = table
        .iter()
        .map(|(x, f)| {
            let d = x as f64 - mean;
            d * d * f as f64
        })
        .sum();
    let variance = match mode {
        VarianceMode::Population => ss / nf,
        VarianceMode::Sample => ss / (nf - 1.0),
    };
    Ok(Moments {
        mean,
        variance,
        sd: variance.sqrt(),
    })
}

/// Number of phonemes per count of graphemic representations.
pub fn representation_histogram(mapping: &MappingTable) -> Result<FrequencyTable> {
    if mapping.is_empty() {
        return Err(Error::EmptyMappingTable);
    }
    Ok(FrequencyTable::from_observations(
        mapping.entries().iter().map(|(_, reps)| reps.len() as u32),
    ))
}
