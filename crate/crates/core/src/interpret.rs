//! Naming principal components by their dominant Kansei words, ranking
//! samples on those words and extracting the design attributes the leading
//! samples share.

use crate::catalog::{AttributeCatalog, CatalogError, DesignFeature};
use crate::pca::PcaResult;
use crate::survey::{MeanTable, VariableLabel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TOP_N: usize = 3;
pub const DEFAULT_TOP_SAMPLES: usize = 3;
pub const DEFAULT_MIN_SHARE: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InterpretError {
    #[error("component index {index} out of range for {count} components")]
    BadComponentIndex { index: usize, count: usize },
    #[error("column label `{0}` is not of the form `<sample>|<word>`")]
    BadLabel(String),
    #[error("component name is empty")]
    EmptyName,
    #[error("top_n must be at least 1")]
    InvalidTopN,
    #[error("no defining words given")]
    NoWords,
    #[error("unknown Kansei word `{0}`")]
    UnknownWord(String),
    #[error("unknown sample `{0}`")]
    UnknownSample(String),
    #[error("no samples selected")]
    NoSamples,
    #[error("min_share {0} is outside (0, 1]")]
    InvalidShare(f64),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordWeight {
    pub word: String,
    pub weight: f64,
}

/// Per-word contribution to one component, in declared word order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordWeights {
    pub pc_index: usize,
    pub weights: Vec<WordWeight>,
}

impl WordWeights {
    pub fn get(&self, word: &str) -> Option<f64> {
        self.weights
            .iter()
            .find(|w| w.word == word)
            .map(|w| w.weight)
    }
}

/// Mean absolute loading of each word's `(sample, word)` variables on
/// component `pc_index`.
pub fn word_weights(result: &PcaResult, pc_index: usize) -> Result<WordWeights, InterpretError> {
    if pc_index >= result.component_count() {
        return Err(InterpretError::BadComponentIndex {
            index: pc_index,
            count: result.component_count(),
        });
    }
    let mut sums: Vec<(String, f64, usize)> = Vec::new();
    for (v, label) in result.column_labels.iter().enumerate() {
        let parsed =
            VariableLabel::parse(label).ok_or_else(|| InterpretError::BadLabel(label.clone()))?;
        let magnitude = result.loading(v, pc_index).abs();
        match sums.iter_mut().find(|(w, _, _)| *w == parsed.word) {
            Some((_, sum, n)) => {
                *sum += magnitude;
                *n += 1;
            }
            None => sums.push((parsed.word, magnitude, 1)),
        }
    }
    Ok(WordWeights {
        pc_index,
        weights: sums
            .into_iter()
            .map(|(word, sum, n)| WordWeight {
                word,
                weight: sum / n as f64,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentProfile {
    pub pc_index: usize,
    pub name: String,
    pub defining_words: Vec<String>,
    #[serde(rename = "weights")]
    pub word_weights: Vec<WordWeight>,
}

/// Picks the `top_n` heaviest words; equal weights keep declared order.
pub fn define_component(
    weights: &WordWeights,
    top_n: usize,
    name: &str,
) -> Result<ComponentProfile, InterpretError> {
    let name = name.trim();
    if name.is_empty() {
        return Err(InterpretError::EmptyName);
    }
    if top_n == 0 {
        return Err(InterpretError::InvalidTopN);
    }
    let mut order: Vec<&WordWeight> = weights.weights.iter().collect();
    // stable sort keeps declared order among equal weights
    order.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    Ok(ComponentProfile {
        pc_index: weights.pc_index,
        name: name.to_string(),
        defining_words: order.iter().take(top_n).map(|w| w.word.clone()).collect(),
        word_weights: weights.weights.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedSample {
    pub sample: String,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRanking {
    pub pc_index: usize,
    pub defining_words: Vec<String>,
    pub rows: Vec<RankedSample>,
}

/// Mean rating of each sample over `words`, best first. Equal means are
/// ordered by sample id.
pub fn rank_samples<S: AsRef<str>>(
    table: &MeanTable,
    words: &[S],
) -> Result<Vec<RankedSample>, InterpretError> {
    if words.is_empty() {
        return Err(InterpretError::NoWords);
    }
    let columns = words
        .iter()
        .map(|w| {
            table
                .word_index(w.as_ref())
                .ok_or_else(|| InterpretError::UnknownWord(w.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<RankedSample> = table
        .samples
        .iter()
        .enumerate()
        .map(|(s, id)| RankedSample {
            sample: id.clone(),
            mean: columns.iter().map(|&w| table.get(s, w)).sum::<f64>() / columns.len() as f64,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.mean
            .total_cmp(&a.mean)
            .then_with(|| a.sample.cmp(&b.sample))
    });
    Ok(rows)
}

pub fn rank_component(
    table: &MeanTable,
    profile: &ComponentProfile,
) -> Result<SampleRanking, InterpretError> {
    Ok(SampleRanking {
        pc_index: profile.pc_index,
        defining_words: profile.defining_words.clone(),
        rows: rank_samples(table, &profile.defining_words)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedAttribute {
    pub feature: DesignFeature,
    pub value: String,
    pub support: usize,
}

/// Minimum number of `selected` samples that must agree for `min_share`.
pub fn support_threshold(selected: usize, min_share: f64) -> usize {
    // the epsilon keeps 2/3 × 3 from rounding up to 3
    (((min_share * selected as f64) - 1e-9).ceil() as usize).max(1)
}

/// Canonical `(feature, value)` pairs held by at least
/// `⌈min_share × |top_samples|⌉` of `top_samples`, by support then catalog
/// feature order.
pub fn common_attributes<S: AsRef<str>>(
    catalog: &AttributeCatalog,
    top_samples: &[S],
    min_share: f64,
) -> Result<Vec<SharedAttribute>, InterpretError> {
    if !(min_share > 0.0 && min_share <= 1.0) {
        return Err(InterpretError::InvalidShare(min_share));
    }
    if top_samples.is_empty() {
        return Err(InterpretError::NoSamples);
    }
    for s in top_samples {
        if catalog.sample_index(s.as_ref()).is_none() {
            return Err(InterpretError::UnknownSample(s.as_ref().to_string()));
        }
    }
    let threshold = support_threshold(top_samples.len(), min_share);
    let mut out = Vec::new();
    for feature in catalog.features() {
        let mut counts: Vec<(&str, usize)> = Vec::new();
        for s in top_samples {
            let value = catalog.value_of(s.as_ref(), *feature)?;
            match counts.iter_mut().find(|(v, _)| *v == value) {
                Some((_, n)) => *n += 1,
                None => counts.push((value, 1)),
            }
        }
        out.extend(
            counts
                .into_iter()
                .filter(|(_, n)| *n >= threshold)
                .map(|(value, support)| SharedAttribute {
                    feature: *feature,
                    value: value.to_string(),
                    support,
                }),
        );
    }
    out.sort_by_key(|a| std::cmp::Reverse(a.support));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub pc_index: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFeature {
    pub pc_index: usize,
    pub feature: DesignFeature,
    pub value: String,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpretSettings {
    pub top_n: usize,
    pub top_samples: usize,
    pub min_share: f64,
}

impl Default for InterpretSettings {
    fn default() -> Self {
        InterpretSettings {
            top_n: DEFAULT_TOP_N,
            top_samples: DEFAULT_TOP_SAMPLES,
            min_share: DEFAULT_MIN_SHARE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpretationReport {
    pub components: Vec<ComponentProfile>,
    pub rankings: Vec<SampleRanking>,
    pub features: Vec<ComponentFeature>,
}

impl InterpretationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Runs the whole interpretation step for each named component: word
/// weights, defining words, sample ranking and the attributes shared by the
/// `top_samples` best samples.
pub fn interpret(
    result: &PcaResult,
    table: &MeanTable,
    catalog: &AttributeCatalog,
    components: &[ComponentSpec],
    settings: InterpretSettings,
) -> Result<InterpretationReport, InterpretError> {
    let mut report = InterpretationReport {
        components: Vec::new(),
        rankings: Vec::new(),
        features: Vec::new(),
    };
    for spec in components {
        let weights = word_weights(result, spec.pc_index)?;
        let profile = define_component(&weights, settings.top_n, &spec.name)?;
        let ranking = rank_component(table, &profile)?;
        let leaders: Vec<&str> = ranking
            .rows
            .iter()
            .take(settings.top_samples.max(1))
            .map(|r| r.sample.as_str())
            .collect();
        for shared in common_attributes(catalog, &leaders, settings.min_share)? {
            report.features.push(ComponentFeature {
                pc_index: spec.pc_index,
                feature: shared.feature,
                value: shared.value,
                support: shared.support,
            });
        }
        report.components.push(profile);
        report.rankings.push(ranking);
    }
    Ok(report)
}
