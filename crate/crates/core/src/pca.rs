//! Principal component analysis on a covariance matrix.
//!
//! The data matrix is centered column-wise, its sample covariance
//! `(X - X̄)ᵀ(X - X̄) / (n - 1)` is diagonalized with the Jacobi solver in
//! [`crate::linalg`], and the centered data is projected onto the
//! eigenvectors to give the scores.

use crate::linalg::{eig_sym, LinalgError, Matrix};
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcaError {
    #[error("covariance needs at least two observations, got {0}")]
    TooFewRows(usize),
    #[error("{labels} column labels for {cols} columns")]
    LabelMismatch { labels: usize, cols: usize },
    #[error("component index {index} out of range for {count} components")]
    BadComponentIndex { index: usize, count: usize },
    #[error("biplot axes must differ (both {0})")]
    SameAxes(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Subtracts the column means. Constant columns center to exact zeros.
pub fn center(x: &Matrix) -> (Matrix, Vec<f64>) {
    let n = x.rows();
    let means: Vec<f64> = (0..x.cols())
        .map(|c| {
            let col = x.column(c);
            if col.iter().all(|v| *v == col[0]) {
                col[0]
            } else {
                col.iter().sum::<f64>() / n as f64
            }
        })
        .collect();
    let mut centered = x.clone();
    for r in 0..n {
        for (c, m) in means.iter().enumerate() {
            centered.set(r, c, x.get(r, c) - m);
        }
    }
    (centered, means)
}

/// Sample covariance with the `n - 1` denominator.
pub fn covariance(x: &Matrix) -> Result<Matrix, PcaError> {
    let n = x.rows();
    if n < 2 {
        return Err(PcaError::TooFewRows(n));
    }
    let (xc, _) = center(x);
    Ok(gram_over(&xc, (n - 1) as f64))
}

/// `XᵀX / denom`, filled symmetrically.
fn gram_over(xc: &Matrix, denom: f64) -> Matrix {
    let p = xc.cols();
    let mut cov = Matrix::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let s: f64 = (0..xc.rows()).map(|k| xc.get(k, i) * xc.get(k, j)).sum();
            cov.set(i, j, s / denom);
            cov.set(j, i, s / denom);
        }
    }
    cov
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PcaOptions {
    /// Scale centered columns to unit variance before decomposing, which
    /// turns the covariance into a correlation matrix.
    pub correlation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaResult {
    pub eigenvalues: Vec<f64>,
    pub explained_ratio: Vec<f64>,
    pub cumulative: Vec<f64>,
    /// `loadings[k]` is the unit eigenvector of component `k`.
    pub loadings: Vec<Vec<f64>>,
    /// One row per observation.
    pub scores: Vec<Vec<f64>>,
    pub column_labels: Vec<String>,
    pub mean_vector: Vec<f64>,
    /// Column standard deviations, present when the analysis ran on the
    /// correlation matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_vector: Option<Vec<f64>>,
}

impl PcaResult {
    pub fn component_count(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Loading of variable `variable` on component `component`.
    pub fn loading(&self, variable: usize, component: usize) -> f64 {
        self.loadings[component][variable]
    }

    /// The eigenvector matrix with components as columns.
    pub fn loadings_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.loadings)
            .expect("loadings are square and finite")
            .transpose()
    }

    pub fn scores_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.scores).expect("scores are rectangular and finite")
    }

    pub fn total_variance(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    fn check_component(&self, index: usize) -> Result<(), PcaError> {
        if index < self.component_count() {
            Ok(())
        } else {
            Err(PcaError::BadComponentIndex {
                index,
                count: self.component_count(),
            })
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pca result serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn pca(
    x: &Matrix,
    column_labels: &[String],
    options: PcaOptions,
) -> Result<PcaResult, PcaError> {
    let (n, p) = (x.rows(), x.cols());
    if column_labels.len() != p {
        return Err(PcaError::LabelMismatch {
            labels: column_labels.len(),
            cols: p,
        });
    }
    if n < 2 {
        return Err(PcaError::TooFewRows(n));
    }
    let (mut xc, mean_vector) = center(x);
    let scale_vector = if options.correlation {
        let sd: Vec<f64> = (0..p)
            .map(|c| {
                let ss: f64 = xc.column(c).iter().map(|v| v * v).sum();
                (ss / (n - 1) as f64).sqrt()
            })
            .collect();
        for r in 0..n {
            for (c, s) in sd.iter().enumerate() {
                if *s > 0.0 {
                    xc.set(r, c, xc.get(r, c) / s);
                }
            }
        }
        Some(sd)
    } else {
        None
    };

    let cov = gram_over(&xc, (n - 1) as f64);
    let eig = eig_sym(&cov)?;
    log::debug!(
        "jacobi converged in {} sweeps for {p} variables",
        eig.sweeps
    );
    // rounding can leave eigenvalues of a PSD matrix a hair below zero
    let eigenvalues: Vec<f64> = eig.values.iter().map(|l| l.max(0.0)).collect();
    let total: f64 = eigenvalues.iter().sum();
    let explained_ratio: Vec<f64> = if total > 0.0 {
        eigenvalues.iter().map(|l| l / total).collect()
    } else {
        log::warn!("total variance is zero; reporting a uniform explained-variance ratio");
        vec![1.0 / p as f64; p]
    };
    let cumulative = explained_ratio
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r;
            Some(*acc)
        })
        .collect();

    let scores = xc.matmul(&eig.vectors);
    Ok(PcaResult {
        eigenvalues,
        explained_ratio,
        cumulative,
        loadings: eig.vectors.to_columns(),
        scores: scores.to_rows(),
        column_labels: column_labels.to_vec(),
        mean_vector,
        scale_vector,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowScale {
    /// Raw eigenvector coefficients.
    #[default]
    Loading,
    /// Coefficients multiplied by the component's standard deviation `√λ`.
    Correlation,
}

impl FromStr for ArrowScale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "loading" => Ok(ArrowScale::Loading),
            "correlation" => Ok(ArrowScale::Correlation),
            other => Err(format!("unknown arrow scale `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arrow {
    pub x: f64,
    pub y: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiplotData {
    pub x_component: usize,
    pub y_component: usize,
    /// Observation scores on the two components.
    pub points: Vec<(f64, f64)>,
    /// One arrow per original variable.
    pub arrows: Vec<Arrow>,
}

pub fn biplot_data(
    result: &PcaResult,
    i: usize,
    j: usize,
    scale: ArrowScale,
) -> Result<BiplotData, PcaError> {
    result.check_component(i)?;
    result.check_component(j)?;
    if i == j {
        return Err(PcaError::SameAxes(i));
    }
    let factor = |k: usize| match scale {
        ArrowScale::Loading => 1.0,
        ArrowScale::Correlation => result.eigenvalues[k].sqrt(),
    };
    let (fi, fj) = (factor(i), factor(j));
    let points = result.scores.iter().map(|row| (row[i], row[j])).collect();
    let arrows = result
        .column_labels
        .iter()
        .enumerate()
        .map(|(v, label)| Arrow {
            x: result.loading(v, i) * fi,
            y: result.loading(v, j) * fj,
            label: label.clone(),
        })
        .collect();
    Ok(BiplotData {
        x_component: i,
        y_component: j,
        points,
        arrows,
    })
}
