//! Tally of the follow-up color survey. Ballots arrive pre-aggregated as
//! vote counts per candidate color.

use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorError {
    #[error("no color ballots")]
    EmptyBallots,
    #[error("duplicate color name `{0}`")]
    DuplicateColorName(String),
    #[error("line {line}: bad header, expected `name,r,g,b,votes,source`")]
    BadHeader { line: usize },
    #[error("line {line}: {channel} value `{value}` is not an integer in 0..=255")]
    BadChannel {
        line: usize,
        channel: char,
        value: String,
    },
    #[error("line {line}: vote count `{value}` is not a non-negative integer")]
    BadVotes { line: usize, value: String },
    #[error("line {line}: unknown color source `{value}`")]
    UnknownSource { line: usize, value: String },
    #[error("line {line}: empty color name")]
    EmptyName { line: usize },
    #[error("malformed CSV: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColorSource {
    IdeasVisions,
    RelatedStudies,
    Survey,
}

impl FromStr for ColorSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "IdeasVisions" => Ok(ColorSource::IdeasVisions),
            "RelatedStudies" => Ok(ColorSource::RelatedStudies),
            "Survey" => Ok(ColorSource::Survey),
            other => Err(other.to_string()),
        }
    }
}

impl ColorSource {
    pub fn name(self) -> &'static str {
        match self {
            ColorSource::IdeasVisions => "IdeasVisions",
            ColorSource::RelatedStudies => "RelatedStudies",
            ColorSource::Survey => "Survey",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorBallot {
    pub name: String,
    pub rgb: [u8; 3],
    pub votes: u32,
    pub source: ColorSource,
}

impl ColorBallot {
    pub fn hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.rgb[0], self.rgb[1], self.rgb[2])
    }
}

pub fn parse_colors_all(text: &str) -> Result<Vec<ColorBallot>, Vec<ColorError>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    match records.next() {
        None => return Err(vec![ColorError::EmptyBallots]),
        Some(Err(e)) => return Err(vec![ColorError::Csv(e.to_string())]),
        Some(Ok(h)) => {
            let names: Vec<&str> = h.iter().map(str::trim).collect();
            if names != ["name", "r", "g", "b", "votes", "source"] {
                return Err(vec![ColorError::BadHeader { line: 1 }]);
            }
        }
    }

    let mut errors = Vec::new();
    let mut ballots: Vec<ColorBallot> = Vec::new();
    for record in records {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                errors.push(ColorError::Csv(e.to_string()));
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line() as usize);
        let before = errors.len();
        let name = record[0].trim();
        if name.is_empty() {
            errors.push(ColorError::EmptyName { line });
        }
        let mut rgb = [0u8; 3];
        for (i, channel) in ['r', 'g', 'b'].into_iter().enumerate() {
            let field = record[i + 1].trim();
            match field.parse::<u8>() {
                Ok(v) => rgb[i] = v,
                Err(_) => errors.push(ColorError::BadChannel {
                    line,
                    channel,
                    value: field.to_string(),
                }),
            }
        }
        let votes = record[4].trim().parse::<u32>().unwrap_or_else(|_| {
            errors.push(ColorError::BadVotes {
                line,
                value: record[4].trim().to_string(),
            });
            0
        });
        let source = record[5].parse::<ColorSource>().unwrap_or_else(|value| {
            errors.push(ColorError::UnknownSource { line, value });
            ColorSource::Survey
        });
        if errors.len() == before {
            ballots.push(ColorBallot {
                name: name.to_string(),
                rgb,
                votes,
                source,
            });
        }
    }
    if let Err(e) = check_names(&ballots) {
        errors.push(e);
    }
    if errors.is_empty() {
        Ok(ballots)
    } else {
        Err(errors)
    }
}

pub fn parse_colors(text: &str) -> Result<Vec<ColorBallot>, ColorError> {
    parse_colors_all(text).map_err(|mut e| e.remove(0))
}

pub fn colors_to_csv(ballots: &[ColorBallot]) -> String {
    let mut out = String::from("name,r,g,b,votes,source\n");
    for b in ballots {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            b.name,
            b.rgb[0],
            b.rgb[1],
            b.rgb[2],
            b.votes,
            b.source.name()
        ));
    }
    out
}

fn check_names(ballots: &[ColorBallot]) -> Result<(), ColorError> {
    for (i, b) in ballots.iter().enumerate() {
        if ballots[..i]
            .iter()
            .any(|o| o.name.eq_ignore_ascii_case(&b.name))
        {
            return Err(ColorError::DuplicateColorName(b.name.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedColor {
    pub rank: usize,
    pub ballot: ColorBallot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieGroup {
    pub rank: usize,
    pub votes: u32,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorRanking {
    pub entries: Vec<RankedColor>,
    /// Groups of two or more colors sharing a rank.
    pub tie_groups: Vec<TieGroup>,
}

impl ColorRanking {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ranking serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Orders ballots by votes with competition ranks (1, 2, 2, 4); tied
/// ballots keep their input order.
pub fn tally(ballots: &[ColorBallot]) -> Result<ColorRanking, ColorError> {
    if ballots.is_empty() {
        return Err(ColorError::EmptyBallots);
    }
    check_names(ballots)?;
    let mut sorted: Vec<&ColorBallot> = ballots.iter().collect();
    sorted.sort_by_key(|b| std::cmp::Reverse(b.votes));

    let mut entries = Vec::with_capacity(sorted.len());
    let mut tie_groups = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let votes = sorted[start].votes;
        let end = start
            + sorted[start..]
                .iter()
                .take_while(|b| b.votes == votes)
                .count();
        let rank = start + 1;
        if end - start > 1 {
            tie_groups.push(TieGroup {
                rank,
                votes,
                names: sorted[start..end].iter().map(|b| b.name.clone()).collect(),
            });
        }
        entries.extend(sorted[start..end].iter().map(|b| RankedColor {
            rank,
            ballot: (*b).clone(),
        }));
        start = end;
    }
    Ok(ColorRanking {
        entries,
        tie_groups,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopColors {
    pub ballots: Vec<ColorBallot>,
    /// Set when a tie group straddling the cutoff pushed the list past `n`.
    pub oversized: bool,
}

pub fn top_colors(ranking: &ColorRanking, n: usize) -> TopColors {
    if n == 0 {
        return TopColors {
            ballots: Vec::new(),
            oversized: false,
        };
    }
    let Some(cut) = ranking.entries.get(n - 1) else {
        return TopColors {
            ballots: ranking.entries.iter().map(|e| e.ballot.clone()).collect(),
            oversized: false,
        };
    };
    let ballots: Vec<ColorBallot> = ranking
        .entries
        .iter()
        .take_while(|e| e.rank <= cut.rank)
        .map(|e| e.ballot.clone())
        .collect();
    TopColors {
        oversized: ballots.len() > n,
        ballots,
    }
}
