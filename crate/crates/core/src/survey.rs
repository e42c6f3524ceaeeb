//! Semantic-differential survey responses: ingestion, per-cell means,
//! gender box summaries and flattening into an observation matrix.

use crate::lexicon::BipolarPair;
use crate::linalg::Matrix;
use crate::stats::BoxStats;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const MIN_RATING: u8 = 1;
pub const MAX_RATING: u8 = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurveyError {
    #[error("line {line}: bad header: {reason}")]
    BadHeader { line: usize, reason: String },
    #[error("line {line}: rating `{value}` in column `{column}` is not an integer in 1..=5")]
    OutOfRangeRating {
        line: usize,
        column: String,
        value: String,
    },
    #[error("line {line}: missing rating in column `{column}`")]
    MissingCell { line: usize, column: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: duplicate respondent `{id}`")]
    DuplicateRespondent { line: usize, id: String },
    #[error("line {line}: empty respondent id")]
    EmptyRespondent { line: usize },
    #[error("line {line}: unknown gender `{value}`")]
    BadGender { line: usize, value: String },
    #[error("duplicate product sample `{0}`")]
    DuplicateSample(String),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("rating matrix has no respondents")]
    EmptyMatrix,
    #[error("rating matrix has missing cells")]
    IncompleteMatrix,
    #[error("no respondents of gender {0}")]
    NoSuchGender(Gender),
    #[error("unknown Kansei word `{0}`")]
    UnknownWord(String),
    #[error("unknown product sample `{0}`")]
    UnknownSample(String),
    #[error("cell count {found} does not match {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSample {
    pub id: String,
    pub label: String,
}

impl ProductSample {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        ProductSample {
            id: id.into(),
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gender {
    Male,
    Female,
    Unspecified,
}

impl Gender {
    pub const ALL: [Gender; 3] = [Gender::Male, Gender::Female, Gender::Unspecified];
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::Male => "Male",
            Gender::Female => "Female",
            Gender::Unspecified => "Unspecified",
        })
    }
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m" | "male" => Ok(Gender::Male),
            "f" | "female" => Ok(Gender::Female),
            "" | "u" | "unspecified" => Ok(Gender::Unspecified),
            _ => Err(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Respondent {
    pub id: String,
    pub gender: Gender,
}

/// A `(sample, word)` survey variable, written `S3|Beautiful`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableLabel {
    pub sample: String,
    pub word: String,
}

impl VariableLabel {
    pub fn new(sample: impl Into<String>, word: impl Into<String>) -> Self {
        VariableLabel {
            sample: sample.into(),
            word: word.into(),
        }
    }

    pub fn parse(text: &str) -> Option<VariableLabel> {
        let (sample, word) = text.split_once('|')?;
        if sample.is_empty() || word.is_empty() {
            return None;
        }
        Some(VariableLabel::new(sample, word))
    }
}

impl fmt::Display for VariableLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.sample, self.word)
    }
}

/// Ratings indexed by `(respondent, sample, pair)`. A `None` cell is a
/// hole; complete matrices have none.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix {
    respondents: Vec<Respondent>,
    samples: Vec<ProductSample>,
    pairs: Vec<BipolarPair>,
    cells: Vec<Option<u8>>,
}

impl RatingMatrix {
    pub fn new(
        respondents: Vec<Respondent>,
        samples: Vec<ProductSample>,
        pairs: Vec<BipolarPair>,
        cells: Vec<Option<u8>>,
    ) -> Result<Self, SurveyError> {
        check_unique_samples(&samples)?;
        let expected = respondents.len() * samples.len() * pairs.len();
        if cells.len() != expected {
            return Err(SurveyError::DimensionMismatch {
                expected,
                found: cells.len(),
            });
        }
        for (i, r) in respondents.iter().enumerate() {
            if respondents[..i].iter().any(|o| o.id == r.id) {
                return Err(SurveyError::DuplicateRespondent {
                    line: i + 2,
                    id: r.id.clone(),
                });
            }
        }
        let m = RatingMatrix {
            respondents,
            samples,
            pairs,
            cells,
        };
        for (i, cell) in m.cells.iter().enumerate() {
            if let Some(v) = cell {
                if !(MIN_RATING..=MAX_RATING).contains(v) {
                    let per_row = m.variable_count();
                    return Err(SurveyError::OutOfRangeRating {
                        line: i / per_row + 2,
                        column: m.variable_label(i % per_row).to_string(),
                        value: v.to_string(),
                    });
                }
            }
        }
        Ok(m)
    }

    pub fn respondents(&self) -> &[Respondent] {
        &self.respondents
    }

    pub fn samples(&self) -> &[ProductSample] {
        &self.samples
    }

    pub fn pairs(&self) -> &[BipolarPair] {
        &self.pairs
    }

    pub fn variable_count(&self) -> usize {
        self.samples.len() * self.pairs.len()
    }

    pub fn get(&self, respondent: usize, sample: usize, pair: usize) -> Option<u8> {
        let idx = (respondent * self.samples.len() + sample) * self.pairs.len() + pair;
        self.cells[idx]
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    pub fn pair_index(&self, word: &str) -> Option<usize> {
        self.pairs
            .iter()
            .position(|p| p.word().eq_ignore_ascii_case(word.trim()))
    }

    pub fn sample_index(&self, id: &str) -> Option<usize> {
        self.samples.iter().position(|s| s.id == id)
    }

    /// Column `j` of the flattened matrix is sample `j / P`, pair `j % P`.
    pub fn variable_label(&self, column: usize) -> VariableLabel {
        let p = self.pairs.len();
        VariableLabel::new(&self.samples[column / p].id, self.pairs[column % p].word())
    }

    pub fn variable_labels(&self) -> Vec<VariableLabel> {
        (0..self.variable_count())
            .map(|j| self.variable_label(j))
            .collect()
    }

    /// Inverse of [`RatingMatrix::variable_label`].
    pub fn variable_index(&self, label: &VariableLabel) -> Option<usize> {
        let s = self.sample_index(&label.sample)?;
        let p = self.pair_index(&label.word)?;
        Some(s * self.pairs.len() + p)
    }

    fn column_values(&self, column: usize) -> impl Iterator<Item = (usize, u8)> + '_ {
        let per_row = self.variable_count();
        (0..self.respondents.len())
            .filter_map(move |r| self.cells[r * per_row + column].map(|v| (r, v)))
    }
}

fn check_unique_samples(samples: &[ProductSample]) -> Result<(), SurveyError> {
    for (i, s) in samples.iter().enumerate() {
        if samples[..i].iter().any(|o| o.id == s.id) {
            return Err(SurveyError::DuplicateSample(s.id.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Keep blank cells as holes instead of rejecting them.
    pub allow_missing: bool,
}

pub fn expected_header(samples: &[ProductSample], pairs: &[BipolarPair]) -> Vec<String> {
    let mut header = vec!["respondent".to_string(), "gender".to_string()];
    for s in samples {
        for p in pairs {
            header.push(VariableLabel::new(&s.id, p.word()).to_string());
        }
    }
    header
}

/// Parses a responses CSV, returning every problem found.
///
/// The header must be `respondent,gender` followed by one `<sample>|<word>`
/// column per variable, sample-major in declared order. A bad header stops
/// parsing; row-level problems are all collected.
pub fn parse_responses_all(
    text: &str,
    pairs: &[BipolarPair],
    samples: &[ProductSample],
    options: ParseOptions,
) -> Result<RatingMatrix, Vec<SurveyError>> {
    check_unique_samples(samples).map_err(|e| vec![e])?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let expected = expected_header(samples, pairs);
    let header = match records.next() {
        Some(Ok(rec)) => rec,
        Some(Err(e)) => return Err(vec![SurveyError::Csv(e.to_string())]),
        None => {
            return Err(vec![SurveyError::BadHeader {
                line: 1,
                reason: "input is empty".into(),
            }])
        }
    };
    let found: Vec<&str> = header.iter().map(str::trim).collect();
    if found.len() != expected.len() {
        return Err(vec![SurveyError::BadHeader {
            line: 1,
            reason: format!("expected {} columns, found {}", expected.len(), found.len()),
        }]);
    }
    if let Some((want, got)) = expected
        .iter()
        .zip(&found)
        .find(|(want, got)| !want.eq_ignore_ascii_case(got))
    {
        return Err(vec![SurveyError::BadHeader {
            line: 1,
            reason: format!("expected column `{want}`, found `{got}`"),
        }]);
    }

    let mut errors = Vec::new();
    let mut respondents: Vec<Respondent> = Vec::new();
    let mut cells = Vec::new();
    for record in records {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                errors.push(SurveyError::Csv(e.to_string()));
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != expected.len() {
            errors.push(SurveyError::RowLength {
                line,
                expected: expected.len(),
                found: record.len(),
            });
            continue;
        }
        let id = record[0].trim();
        if id.is_empty() {
            errors.push(SurveyError::EmptyRespondent { line });
        } else if respondents.iter().any(|r| r.id == id) {
            errors.push(SurveyError::DuplicateRespondent {
                line,
                id: id.to_string(),
            });
        }
        let gender = record[1].parse::<Gender>().unwrap_or_else(|value| {
            errors.push(SurveyError::BadGender { line, value });
            Gender::Unspecified
        });
        for (field, column) in record.iter().skip(2).zip(&expected[2..]) {
            let field = field.trim();
            if field.is_empty() {
                if !options.allow_missing {
                    errors.push(SurveyError::MissingCell {
                        line,
                        column: column.clone(),
                    });
                }
                cells.push(None);
                continue;
            }
            match field.parse::<u8>() {
                Ok(v) if (MIN_RATING..=MAX_RATING).contains(&v) => cells.push(Some(v)),
                _ => {
                    errors.push(SurveyError::OutOfRangeRating {
                        line,
                        column: column.clone(),
                        value: field.to_string(),
                    });
                    cells.push(None);
                }
            }
        }
        respondents.push(Respondent {
            id: id.to_string(),
            gender,
        });
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    RatingMatrix::new(respondents, samples.to_vec(), pairs.to_vec(), cells).map_err(|e| vec![e])
}

pub fn parse_responses(
    text: &str,
    pairs: &[BipolarPair],
    samples: &[ProductSample],
    options: ParseOptions,
) -> Result<RatingMatrix, SurveyError> {
    parse_responses_all(text, pairs, samples, options).map_err(|mut e| e.remove(0))
}

/// Mean rating per `(sample, word)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanTable {
    pub samples: Vec<String>,
    pub words: Vec<String>,
    /// Row-major: `values[s * words.len() + w]`.
    pub values: Vec<f64>,
}

impl MeanTable {
    pub fn get(&self, sample: usize, word: usize) -> f64 {
        self.values[sample * self.words.len() + word]
    }

    pub fn word_index(&self, word: &str) -> Option<usize> {
        self.words
            .iter()
            .position(|w| w.eq_ignore_ascii_case(word.trim()))
    }

    pub fn sample_index(&self, sample: &str) -> Option<usize> {
        self.samples.iter().position(|s| s == sample)
    }

    pub fn value(&self, sample: &str, word: &str) -> Option<f64> {
        Some(self.get(self.sample_index(sample)?, self.word_index(word)?))
    }

    /// `sample,<word>,...` with one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample");
        for w in &self.words {
            out.push(',');
            out.push_str(w);
        }
        out.push('\n');
        for (s, id) in self.samples.iter().enumerate() {
            out.push_str(id);
            for w in 0..self.words.len() {
                out.push(',');
                out.push_str(&self.get(s, w).to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<MeanTable, SurveyError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| SurveyError::Csv(e.to_string()))?
            .clone();
        if headers.len() < 2 || headers[0].trim() != "sample" {
            return Err(SurveyError::BadHeader {
                line: 1,
                reason: "expected `sample,<word>,...`".into(),
            });
        }
        let words: Vec<String> = headers
            .iter()
            .skip(1)
            .map(|w| w.trim().to_string())
            .collect();
        let mut samples = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| SurveyError::Csv(e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            samples.push(record[0].trim().to_string());
            for (field, word) in record.iter().skip(1).zip(&words) {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| SurveyError::OutOfRangeRating {
                        line,
                        column: word.clone(),
                        value: field.to_string(),
                    })?;
                if !(f64::from(MIN_RATING)..=f64::from(MAX_RATING)).contains(&v) {
                    return Err(SurveyError::OutOfRangeRating {
                        line,
                        column: word.clone(),
                        value: field.to_string(),
                    });
                }
                values.push(v);
            }
        }
        Ok(MeanTable {
            samples,
            words,
            values,
        })
    }
}

/// Arithmetic mean over respondents of every `(sample, word)` cell. Holes
/// are skipped; a column with no ratings at all is an error.
pub fn mean_ratings(matrix: &RatingMatrix) -> Result<MeanTable, SurveyError> {
    if matrix.respondents.is_empty() || matrix.variable_count() == 0 {
        return Err(SurveyError::EmptyMatrix);
    }
    let values = (0..matrix.variable_count())
        .map(|j| {
            let (sum, n) = matrix
                .column_values(j)
                .fold((0u64, 0u64), |(s, n), (_, v)| (s + u64::from(v), n + 1));
            if n == 0 {
                Err(SurveyError::IncompleteMatrix)
            } else {
                Ok(sum as f64 / n as f64)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MeanTable {
        samples: matrix.samples.iter().map(|s| s.id.clone()).collect(),
        words: matrix.pairs.iter().map(|p| p.word().to_string()).collect(),
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub sample: String,
    pub gender: Gender,
    pub stats: BoxStats,
}

/// Box summaries of one word's ratings for `gender`, one per sample.
pub fn gender_distribution(
    matrix: &RatingMatrix,
    word: &str,
    gender: Gender,
) -> Result<Vec<SampleBox>, SurveyError> {
    let pair = matrix
        .pair_index(word)
        .ok_or_else(|| SurveyError::UnknownWord(word.to_string()))?;
    if !matrix.respondents.iter().any(|r| r.gender == gender) {
        return Err(SurveyError::NoSuchGender(gender));
    }
    let p = matrix.pairs.len();
    Ok(matrix
        .samples
        .iter()
        .enumerate()
        .filter_map(|(s, sample)| {
            let values: Vec<f64> = matrix
                .column_values(s * p + pair)
                .filter(|(r, _)| matrix.respondents[*r].gender == gender)
                .map(|(_, v)| f64::from(v))
                .collect();
            BoxStats::from_values(&values).map(|stats| SampleBox {
                sample: sample.id.clone(),
                gender,
                stats,
            })
        })
        .collect())
}

/// Box summaries for every `(sample, gender)` combination present, grouped
/// by sample, genders in `Male, Female, Unspecified` order.
pub fn gender_boxes(matrix: &RatingMatrix, word: &str) -> Result<Vec<SampleBox>, SurveyError> {
    let mut per_gender = Vec::new();
    for gender in Gender::ALL {
        match gender_distribution(matrix, word, gender) {
            Ok(boxes) => per_gender.push(boxes),
            Err(SurveyError::NoSuchGender(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut out = Vec::new();
    for sample in &matrix.samples {
        for boxes in &per_gender {
            out.extend(boxes.iter().filter(|b| b.sample == sample.id).cloned());
        }
    }
    Ok(out)
}

/// Observation matrix with one row per respondent (CSV order) and one
/// column per variable. With `impute_mean`, holes take the column mean of
/// the ratings present.
pub fn flatten(
    matrix: &RatingMatrix,
    impute_mean: bool,
) -> Result<(Matrix, Vec<VariableLabel>), SurveyError> {
    let rows = matrix.respondents.len();
    let cols = matrix.variable_count();
    if rows == 0 || cols == 0 {
        return Err(SurveyError::EmptyMatrix);
    }
    if !impute_mean && !matrix.is_complete() {
        return Err(SurveyError::IncompleteMatrix);
    }
    let fill = if impute_mean {
        mean_ratings(matrix)?.values
    } else {
        vec![0.0; cols]
    };
    let data = matrix
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| c.map_or(fill[i % cols], f64::from))
        .collect();
    let x = Matrix::new(rows, cols, data).expect("dimensions checked above");
    Ok((x, matrix.variable_labels()))
}
