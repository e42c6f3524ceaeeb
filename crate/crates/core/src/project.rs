//! Project file: input paths, sample declarations and analysis settings.

use crate::interpret::{ComponentSpec, DEFAULT_MIN_SHARE, DEFAULT_TOP_N, DEFAULT_TOP_SAMPLES};
use crate::pca::ArrowScale;
use crate::survey::ProductSample;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub top_n: usize,
    pub top_samples: usize,
    pub min_share: f64,
    pub arrow_scale: ArrowScale,
    pub impute_mean: bool,
    pub correlation: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            top_n: DEFAULT_TOP_N,
            top_samples: DEFAULT_TOP_SAMPLES,
            min_share: DEFAULT_MIN_SHARE,
            arrow_scale: ArrowScale::Loading,
            impute_mean: false,
            correlation: false,
        }
    }
}

impl Settings {
    /// Human-readable range violations.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.top_n == 0 {
            out.push("settings.top_n must be at least 1".to_string());
        }
        if self.top_samples == 0 {
            out.push("settings.top_samples must be at least 1".to_string());
        }
        if !(self.min_share > 0.0 && self.min_share <= 1.0) {
            out.push(format!(
                "settings.min_share {} is outside (0, 1]",
                self.min_share
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Project {
    pub lexicon: PathBuf,
    pub responses: PathBuf,
    pub catalog: PathBuf,
    pub colors: PathBuf,
    pub samples: Vec<ProductSample>,
    /// Names for the components to interpret. When empty the first two
    /// components are interpreted as `PC1` and `PC2`.
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub settings: Settings,
}

impl Project {
    pub fn from_json(text: &str) -> Result<Project, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Makes relative input paths relative to `base`, the directory holding
    /// the project file.
    pub fn resolve_paths(&mut self, base: &Path) {
        for p in [
            &mut self.lexicon,
            &mut self.responses,
            &mut self.catalog,
            &mut self.colors,
        ] {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    pub fn component_specs(&self, available: usize) -> Vec<ComponentSpec> {
        if !self.components.is_empty() {
            return self.components.clone();
        }
        (0..available.min(2))
            .map(|k| ComponentSpec {
                pc_index: k,
                name: format!("PC{}", k + 1),
            })
            .collect()
    }
}
