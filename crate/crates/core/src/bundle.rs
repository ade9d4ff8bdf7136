//! A directory of dataset files described by a `bundle.toml` manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::distinctivity::DistanceMatrix;
use crate::distributions::{Model, ModelKind, Poisson, SsGeometric};
use crate::error::{Error, Result};
use crate::io;
use crate::model::{Alphabet, FrequencyTable, MappingTable};
use crate::uncertainty::UncertaintySummary;

pub const MANIFEST: &str = "bundle.toml";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    name: String,
    alphabet: PathBuf,
    mapping: PathBuf,
    distances: PathBuf,
    distances_variant: Option<PathBuf>,
    comparison: Option<PathBuf>,
    connections: Option<PathBuf>,
    #[serde(default)]
    errata: Vec<String>,
    #[serde(default)]
    reference: BTreeMap<String, ReferenceSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceSpec {
    model: String,
    p: Option<f64>,
    a: Option<f64>,
    lambda: Option<f64>,
}

impl ReferenceSpec {
    fn to_model(&self, key: &str) -> Result<Model> {
        let kind: ModelKind = self.model.parse()?;
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidParams(format!("reference.{key}: {kind} needs `{name}`")))
        };
        Ok(match kind {
            ModelKind::SsGeometric => {
                SsGeometric::new(need(self.p, "p")?, need(self.a, "a")?)?.into()
            }
            ModelKind::Poisson => Poisson::new(need(self.lambda, "lambda")?)?.into(),
        })
    }
}

/// Published model parameters to evaluate next to the fitted ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceFits {
    pub representations: Option<Model>,
    pub connections: Option<Model>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub name: String,
    pub alphabet: Alphabet,
    pub mapping: MappingTable,
    pub distances: DistanceMatrix,
    pub distances_variant: Option<DistanceMatrix>,
    pub comparison: Vec<UncertaintySummary>,
    /// Connection counts per letter, when tabulated separately from the alphabet.
    pub connections: Option<FrequencyTable>,
    pub reference: ReferenceFits,
    pub errata: Vec<String>,
}

impl DatasetBundle {
    /// Connection-count histogram: the tabulated one if present, otherwise
    /// derived from the alphabet.
    pub fn connection_histogram(&self) -> FrequencyTable {
        self.connections.clone().unwrap_or_else(|| {
            FrequencyTable::from_observations(
                self.alphabet
                    .letters
                    .iter()
                    .map(|l| l.connections.len() as u32),
            )
        })
    }
}

/// Loads `<dir>/bundle.toml` and every file it names (paths relative to `dir`).
pub fn load_bundle(dir: impl AsRef<Path>) -> Result<DatasetBundle> {
    let dir = dir.as_ref();
    let manifest_path = dir.join(MANIFEST);
    let text = io::read_text(&manifest_path)?;
    let origin = manifest_path.display().to_string();
    build(&text, &origin, |file| {
        let path = dir.join(file);
        Ok((io::read_text(&path)?, path.display().to_string()))
    })
}

/// The bundled Ukrainian Cyrillic dataset, compiled into the library.
pub fn ukrainian() -> DatasetBundle {
    const FILES: [(&str, &str); 7] = [
        (
            "uk_cyrillic.alphabet",
            include_str!("../../../data/uk/uk_cyrillic.alphabet"),
        ),
        (
            "uk_mapping.csv",
            include_str!("../../../data/uk/uk_mapping.csv"),
        ),
        (
            "uk_distances.csv",
            include_str!("../../../data/uk/uk_distances.csv"),
        ),
        (
            "uk_distances_ya_variant.csv",
            include_str!("../../../data/uk/uk_distances_ya_variant.csv"),
        ),
        (
            "uk_comparison.csv",
            include_str!("../../../data/uk/uk_comparison.csv"),
        ),
        (
            "uk_connections.csv",
            include_str!("../../../data/uk/uk_connections.csv"),
        ),
        ("bundle.toml", include_str!("../../../data/uk/bundle.toml")),
    ];
    let lookup = |name: &Path| {
        FILES
            .iter()
            .find(|(n, _)| Path::new(n) == name)
            .map(|&(n, text)| (text.to_string(), format!("data/uk/{n}")))
            .ok_or_else(|| Error::InvalidParams(format!("{} is not embedded", name.display())))
    };
    let (manifest, origin) = lookup(Path::new(MANIFEST)).expect("embedded manifest");
    build(&manifest, &origin, lookup).expect("embedded dataset is valid")
}

fn build(
    manifest_text: &str,
    origin: &str,
    read: impl Fn(&Path) -> Result<(String, String)>,
) -> Result<DatasetBundle> {
    let manifest: Manifest = toml::from_str(manifest_text).map_err(|e| {
        let line = e.span().map_or(0, |s| {
            manifest_text[..s.start.min(manifest_text.len())]
                .matches('\n')
                .count() as u64
                + 1
        });
        Error::syntax(origin, line, e.message().to_string())
    })?;

    fn load<T>(
        read: &impl Fn(&Path) -> Result<(String, String)>,
        path: &Path,
        parse: impl FnOnce(&str, &str) -> Result<T>,
    ) -> Result<T> {
        let (text, origin) = read(path)?;
        parse(&text, &origin).map_err(|e| Error::in_file(&origin, e))
    }

    let mut reference = ReferenceFits::default();
    for (key, spec) in &manifest.reference {
        let model = spec.to_model(key).map_err(|e| Error::in_file(origin, e))?;
        match key.as_str() {
            "representations" => reference.representations = Some(model),
            "connections" => reference.connections = Some(model),
            other => {
                return Err(Error::in_file(
                    origin,
                    Error::InvalidParams(format!("unknown reference section {other:?}")),
                ))
            }
        }
    }

    Ok(DatasetBundle {
        name: manifest.name,
        alphabet: load(&read, &manifest.alphabet, io::parse_alphabet)?,
        mapping: load(&read, &manifest.mapping, io::parse_mapping)?,
        distances: load(&read, &manifest.distances, io::parse_matrix)?,
        distances_variant: manifest
            .distances_variant
            .as_deref()
            .map(|p| load(&read, p, io::parse_matrix))
            .transpose()?,
        comparison: manifest
            .comparison
            .as_deref()
            .map(|p| load(&read, p, io::parse_comparison))
            .transpose()?
            .unwrap_or_default(),
        connections: manifest
            .connections
            .as_deref()
            .map(|p| load(&read, p, io::parse_frequency_table))
            .transpose()?,
        reference,
        errata: manifest.errata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_bundle_loads() {
        let b = ukrainian();
        assert_eq!(b.name, "Ukrainian");
        assert_eq!(b.alphabet.len(), 33);
        assert_eq!(b.mapping.len(), 38);
        assert_eq!(b.distances.len(), 33);
        assert_eq!(b.comparison.len(), 5);
        assert_eq!(b.connection_histogram().total(), 33);
        assert!(matches!(
            b.reference.representations,
            Some(Model::SsGeometric(_))
        ));
        assert!(matches!(b.reference.connections, Some(Model::Poisson(_))));
        assert!(!b.errata.is_empty());
    }

    #[test]
    fn directory_matches_embedded() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/uk");
        assert_eq!(load_bundle(dir).unwrap(), ukrainian());
    }

    #[test]
    fn missing_manifest_names_the_path() {
        let err = load_bundle("/nonexistent/bundle-dir").unwrap_err();
        assert!(
            err.to_string()
                .contains("/nonexistent/bundle-dir/bundle.toml"),
            "{err}"
        );
    }

    #[test]
    fn bad_reference_is_rejected() {
        let read = |_: &Path| -> Result<(String, String)> { unreachable!() };
        let text = "name = \"x\"\nalphabet = \"a\"\nmapping = \"m\"\ndistances = \"d\"\n[reference.representations]\nmodel = \"poisson\"\n";
        let err = build(text, "bundle.toml", read).unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");
    }
}
