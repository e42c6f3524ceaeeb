//! Five-number summaries for box plots using Tukey hinges.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    /// Most extreme points still inside the 1.5×IQR fences.
    pub lower_whisker: f64,
    pub upper_whisker: f64,
    /// Points beyond the fences, ascending.
    pub outliers: Vec<f64>,
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

impl BoxStats {
    /// Summarizes `values`. The hinges are the medians of the lower and upper
    /// halves; for odd counts the middle point belongs to both halves.
    /// Returns `None` for an empty slice.
    pub fn from_values(values: &[f64]) -> Option<BoxStats> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = median_sorted(&sorted);
        let half = n.div_ceil(2);
        let q1 = median_sorted(&sorted[..half]);
        let q3 = median_sorted(&sorted[n - half..]);

        let iqr = q3 - q1;
        let low_fence = q1 - 1.5 * iqr;
        let high_fence = q3 + 1.5 * iqr;
        let inside = || {
            sorted
                .iter()
                .copied()
                .filter(|v| *v >= low_fence && *v <= high_fence)
        };
        // the hinges always sit inside the fences, so `inside` is never empty
        let lower_whisker = inside().next().unwrap_or(q1);
        let upper_whisker = inside().next_back().unwrap_or(q3);
        let outliers = sorted
            .iter()
            .copied()
            .filter(|v| *v < low_fence || *v > high_fence)
            .collect();

        Some(BoxStats {
            count: n,
            min: sorted[0],
            max: sorted[n - 1],
            median,
            q1,
            q3,
            lower_whisker,
            upper_whisker,
            outliers,
        })
    }
}
