//! Design attributes of each product sample, reduced to a closed vocabulary
//! per feature so that values can be compared across samples.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}: bad header, expected `sample,feature,canonical,note`")]
    BadHeader { line: usize },
    #[error("line {line}: unknown design feature `{name}`")]
    UnknownFeature { line: usize, name: String },
    #[error("line {line}: `{value}` is not a canonical value of {feature}")]
    UnknownCanonicalValue {
        line: usize,
        feature: DesignFeature,
        value: String,
    },
    #[error("missing value for sample `{sample}`, feature {feature}")]
    MissingCell {
        sample: String,
        feature: DesignFeature,
    },
    #[error("catalog has no rows")]
    Empty,
    #[error("line {line}: duplicate value for sample `{sample}`, feature {feature}")]
    DuplicateCell {
        line: usize,
        sample: String,
        feature: DesignFeature,
    },
    #[error("line {line}: empty sample id")]
    EmptySample { line: usize },
    #[error("unknown sample `{0}`")]
    UnknownSample(String),
    #[error("feature {0} is not part of this catalog")]
    FeatureNotInCatalog(DesignFeature),
    #[error("malformed CSV: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DesignFeature {
    SaturationIntensity,
    DominantColor,
    ColorCount,
    LogoVisibility,
    FontSize,
    ImagePresence,
}

impl DesignFeature {
    pub const ALL: [DesignFeature; 6] = [
        DesignFeature::SaturationIntensity,
        DesignFeature::DominantColor,
        DesignFeature::ColorCount,
        DesignFeature::LogoVisibility,
        DesignFeature::FontSize,
        DesignFeature::ImagePresence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DesignFeature::SaturationIntensity => "SaturationIntensity",
            DesignFeature::DominantColor => "DominantColor",
            DesignFeature::ColorCount => "ColorCount",
            DesignFeature::LogoVisibility => "LogoVisibility",
            DesignFeature::FontSize => "FontSize",
            DesignFeature::ImagePresence => "ImagePresence",
        }
    }
}

impl fmt::Display for DesignFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DesignFeature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DesignFeature::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Vocabulary {
    Closed(Vec<String>),
    /// Any non-empty value.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub id: DesignFeature,
    pub vocabulary: Vocabulary,
}

impl FeatureSpec {
    fn closed(id: DesignFeature, values: &[&str]) -> Self {
        FeatureSpec {
            id,
            vocabulary: Vocabulary::Closed(values.iter().map(|v| v.to_string()).collect()),
        }
    }

    /// The six website features with their default vocabularies.
    pub fn standard() -> Vec<FeatureSpec> {
        use DesignFeature::*;
        vec![
            FeatureSpec::closed(SaturationIntensity, &["High", "ModerateHigh", "Moderate"]),
            FeatureSpec {
                id: DominantColor,
                vocabulary: Vocabulary::Open,
            },
            FeatureSpec::closed(ColorCount, &["High", "Moderate", "Limited"]),
            FeatureSpec::closed(LogoVisibility, &["InHeader", "TopLeft", "Top"]),
            FeatureSpec::closed(FontSize, &["Large", "VariedLarge", "Varied"]),
            FeatureSpec::closed(
                ImagePresence,
                &["Dominant", "Significant", "Substantial", "Major", "Minimal"],
            ),
        ]
    }

    /// The vocabulary spelling of `value`, matched case-insensitively.
    pub fn canonicalize(&self, value: &str) -> Option<String> {
        let value = value.trim();
        if value.is_empty() {
            return None;
        }
        match &self.vocabulary {
            Vocabulary::Open => Some(value.to_string()),
            Vocabulary::Closed(values) => values
                .iter()
                .find(|v| v.eq_ignore_ascii_case(value))
                .cloned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeValue {
    pub canonical: String,
    /// Original prose description, kept verbatim.
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeCatalog {
    samples: Vec<String>,
    features: Vec<DesignFeature>,
    /// `cells[s * features.len() + f]`
    cells: Vec<AttributeValue>,
}

impl AttributeCatalog {
    pub fn samples(&self) -> &[String] {
        &self.samples
    }

    pub fn features(&self) -> &[DesignFeature] {
        &self.features
    }

    pub fn sample_index(&self, sample: &str) -> Option<usize> {
        self.samples.iter().position(|s| s == sample)
    }

    pub fn cell(
        &self,
        sample: &str,
        feature: DesignFeature,
    ) -> Result<&AttributeValue, CatalogError> {
        let s = self
            .sample_index(sample)
            .ok_or_else(|| CatalogError::UnknownSample(sample.to_string()))?;
        let f = self
            .features
            .iter()
            .position(|x| *x == feature)
            .ok_or(CatalogError::FeatureNotInCatalog(feature))?;
        Ok(&self.cells[s * self.features.len() + f])
    }

    pub fn value_of(&self, sample: &str, feature: DesignFeature) -> Result<&str, CatalogError> {
        self.cell(sample, feature).map(|c| c.canonical.as_str())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(["sample", "feature", "canonical", "note"])
            .expect("in-memory write");
        for (s, sample) in self.samples.iter().enumerate() {
            for (f, feature) in self.features.iter().enumerate() {
                let cell = &self.cells[s * self.features.len() + f];
                w.write_record([sample, feature.name(), &cell.canonical, &cell.note])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }
}

/// Parses a catalog CSV, collecting every problem. Samples appear in order
/// of first mention and every sample must define every feature in
/// `features`.
pub fn parse_catalog_all(
    text: &str,
    features: &[FeatureSpec],
) -> Result<AttributeCatalog, Vec<CatalogError>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let mut errors = Vec::new();

    match records.next() {
        None => return Err(vec![CatalogError::Empty]),
        Some(Err(e)) => return Err(vec![CatalogError::Csv(e.to_string())]),
        Some(Ok(header)) => {
            let names: Vec<&str> = header.iter().map(str::trim).collect();
            if names != ["sample", "feature", "canonical", "note"] {
                return Err(vec![CatalogError::BadHeader { line: 1 }]);
            }
        }
    }

    let mut samples: Vec<String> = Vec::new();
    let mut entries: Vec<(usize, usize, AttributeValue)> = Vec::new();
    let mut rejected: Vec<(usize, usize)> = Vec::new();
    for record in records {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                errors.push(CatalogError::Csv(e.to_string()));
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line() as usize);
        let sample = record[0].trim();
        if sample.is_empty() {
            errors.push(CatalogError::EmptySample { line });
            continue;
        }
        let feature_name = record[1].trim();
        let Some(fi) = features
            .iter()
            .position(|f| f.id.name().eq_ignore_ascii_case(feature_name))
        else {
            errors.push(CatalogError::UnknownFeature {
                line,
                name: feature_name.to_string(),
            });
            continue;
        };
        let spec = &features[fi];
        let si = match samples.iter().position(|s| s == sample) {
            Some(i) => i,
            None => {
                samples.push(sample.to_string());
                samples.len() - 1
            }
        };
        let Some(canonical) = spec.canonicalize(&record[2]) else {
            errors.push(CatalogError::UnknownCanonicalValue {
                line,
                feature: spec.id,
                value: record[2].trim().to_string(),
            });
            // already reported; don't also call the cell missing
            rejected.push((si, fi));
            continue;
        };
        if entries.iter().any(|(s, f, _)| *s == si && *f == fi) {
            errors.push(CatalogError::DuplicateCell {
                line,
                sample: sample.to_string(),
                feature: spec.id,
            });
            continue;
        }
        entries.push((
            si,
            fi,
            AttributeValue {
                canonical,
                note: record[3].to_string(),
            },
        ));
    }

    if samples.is_empty() && errors.is_empty() {
        return Err(vec![CatalogError::MissingCell {
            sample: String::new(),
            feature: features
                .first()
                .map_or(DesignFeature::SaturationIntensity, |f| f.id),
        }]);
    }

    let nf = features.len();
    let mut cells: Vec<Option<AttributeValue>> = vec![None; samples.len() * nf];
    for (s, f, v) in entries {
        cells[s * nf + f] = Some(v);
    }
    for (i, cell) in cells.iter().enumerate() {
        if cell.is_none() && !rejected.contains(&(i / nf, i % nf)) {
            errors.push(CatalogError::MissingCell {
                sample: samples[i / nf].clone(),
                feature: features[i % nf].id,
            });
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(AttributeCatalog {
        samples,
        features: features.iter().map(|f| f.id).collect(),
        cells: cells.into_iter().flatten().collect(),
    })
}

pub fn parse_catalog(
    text: &str,
    features: &[FeatureSpec],
) -> Result<AttributeCatalog, CatalogError> {
    parse_catalog_all(text, features).map_err(|mut e| e.remove(0))
}
