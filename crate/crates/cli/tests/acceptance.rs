//! Acceptance criteria 1–10. Runs as a plain binary (no libtest harness) so
//! that every criterion prints its own PASS/FAIL line.

// the oracles index with explicit loops on purpose
#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use kansei_core::catalog::{parse_catalog, DesignFeature, FeatureSpec};
use kansei_core::colorvote::{parse_colors, tally};
use kansei_core::interpret::{common_attributes, rank_samples, DEFAULT_MIN_SHARE};
use kansei_core::linalg::Matrix;
use kansei_core::pca::{center, covariance, pca, PcaOptions, PcaResult};
use kansei_core::pipeline;
use kansei_core::survey::{
    gender_distribution, Gender, MeanTable, ProductSample, RatingMatrix, Respondent,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::fs;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Ranking<'a> = [(&'a str, f64); 3];
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- oracles

/// Definitional sample covariance with explicit loops.
fn oracle_covariance(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let p = rows[0].len();
    let mut mean = vec![0.0; p];
    for j in 0..p {
        for row in rows {
            mean[j] += row[j];
        }
        mean[j] /= n as f64;
    }
    let mut cov = vec![vec![0.0; p]; p];
    for a in 0..p {
        for b in 0..p {
            let mut s = 0.0;
            for row in rows {
                s += (row[a] - mean[a]) * (row[b] - mean[b]);
            }
            cov[a][b] = s / (n as f64 - 1.0);
        }
    }
    cov
}

/// Tukey's hinges by depth: median depth (n+1)/2, hinge depth
/// (floor(median depth)+1)/2, counted from either end.
fn oracle_hinges(values: &[f64]) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    let at_depth = |d: f64, from_top: bool| {
        let lo = d.floor() as usize;
        let hi = d.ceil() as usize;
        let pick = |k: usize| if from_top { v[n - k] } else { v[k - 1] };
        (pick(lo) + pick(hi)) / 2.0
    };
    let md = (n as f64 + 1.0) / 2.0;
    let hd = (md.floor() + 1.0) / 2.0;
    (at_depth(hd, false), at_depth(md, false), at_depth(hd, true))
}

fn random_corpus() -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..100)
        .map(|i| {
            let n = rng.random_range(2..=30);
            let p = rng.random_range(1..=30);
            (0..n)
                .map(|_| {
                    (0..p)
                        .map(|_| {
                            // half the corpus is integer ratings, half continuous
                            if i % 2 == 0 {
                                f64::from(rng.random_range(1u8..=5))
                            } else {
                                rng.random_range(1.0..=5.0)
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn labels(p: usize) -> Vec<String> {
    (0..p).map(|j| format!("v{j}")).collect()
}

fn run_pca(rows: &[Vec<f64>]) -> PcaResult {
    let x = Matrix::from_rows(rows).unwrap();
    pca(&x, &labels(x.cols()), PcaOptions::default()).unwrap()
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Outcome {
    let corpus = random_corpus();
    let start = Instant::now();
    let (mut worst_cov, mut worst_res, mut worst_orth, mut worst_trace) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for rows in &corpus {
        let x = Matrix::from_rows(rows).unwrap();
        let p = x.cols();
        let cov = covariance(&x).unwrap();
        let oracle = oracle_covariance(rows);
        for a in 0..p {
            for b in 0..p {
                worst_cov = worst_cov.max((cov.get(a, b) - oracle[a][b]).abs());
            }
        }
        let r = run_pca(rows);
        let norm = cov.frobenius_norm().max(f64::MIN_POSITIVE);
        for (k, v) in r.loadings.iter().enumerate() {
            let lambda = r.eigenvalues[k];
            let mut res = 0.0f64;
            for a in 0..p {
                let sv: f64 = (0..p).map(|b| oracle[a][b] * v[b]).sum();
                res = res.max((sv - lambda * v[a]).abs());
            }
            worst_res = worst_res.max(res / norm);
            for (l, w) in r.loadings.iter().enumerate() {
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                let want = if k == l { 1.0 } else { 0.0 };
                worst_orth = worst_orth.max((dot - want).abs());
            }
        }
        let trace: f64 = (0..p).map(|a| oracle[a][a]).sum();
        let sum: f64 = r.eigenvalues.iter().sum();
        worst_trace = worst_trace.max((sum - trace).abs());
    }
    let elapsed = start.elapsed();
    ensure(worst_cov <= 1e-12, || {
        format!("covariance off by {worst_cov:e}")
    })?;
    ensure(worst_res < 1e-8, || format!("residual/‖Σ‖F {worst_res:e}"))?;
    ensure(worst_orth <= 1e-8, || format!("VᵀV−I {worst_orth:e}"))?;
    ensure(worst_trace <= 1e-8, || format!("Σλ−trace {worst_trace:e}"))?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "100 matrices; cov {worst_cov:.1e}, residual {worst_res:.1e}, orth {worst_orth:.1e}, trace {worst_trace:.1e}, {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for rows in &random_corpus() {
        let x = Matrix::from_rows(rows).unwrap();
        let (xc, _) = center(&x);
        let r = run_pca(rows);
        let back = r.scores_matrix().matmul(&r.loadings_matrix().transpose());
        worst = worst.max(xc.max_abs_diff(&back));
    }
    ensure(worst < 1e-8, || format!("‖X_c − T·Vᵀ‖∞ = {worst:e}"))?;
    Ok(format!("‖X_c − T·Vᵀ‖∞ ≤ {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_end, mut worst_shift) = (0.0f64, 0.0f64);
    for rows in &random_corpus() {
        let r = run_pca(rows);
        if r.total_variance() == 0.0 {
            continue;
        }
        ensure(r.cumulative.windows(2).all(|w| w[1] >= w[0]), || {
            "cumulative ratio decreases".to_string()
        })?;
        worst_end = worst_end.max((r.cumulative.last().unwrap() - 1.0).abs());

        let shifts: Vec<f64> = (0..rows[0].len())
            .map(|_| rng.random_range(-100.0..100.0))
            .collect();
        let moved: Vec<Vec<f64>> = rows
            .iter()
            .map(|row| row.iter().zip(&shifts).map(|(v, s)| v + s).collect())
            .collect();
        let m = run_pca(&moved);
        for (a, b) in r.eigenvalues.iter().zip(&m.eigenvalues) {
            worst_shift = worst_shift.max((a - b).abs());
        }
    }
    ensure(worst_end <= 1e-9, || {
        format!("final cumulative off by {worst_end:e}")
    })?;
    ensure(worst_shift <= 1e-9, || {
        format!("shift moved an eigenvalue by {worst_shift:e}")
    })?;
    Ok(format!(
        "monotone; |final−1| ≤ {worst_end:.1e}; shift changes λ by ≤ {worst_shift:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let table =
        MeanTable::from_csv(&fs::read_to_string(fixtures().join("mean_table.csv")).unwrap())
            .map_err(|e| e.to_string())?;
    let cases: [(&[&str], Ranking); 2] = [
        (
            &["Beautiful", "Clear", "Innovative"],
            [("S5", 4.30), ("S4", 3.97), ("S3", 3.88)],
        ),
        (
            &["Comprehensive", "Reliable", "Bright"],
            [("S5", 4.12), ("S4", 3.84), ("S2", 3.79)],
        ),
    ];
    let mut shown = Vec::new();
    for (words, expected) in cases {
        let ranked = rank_samples(&table, words).map_err(|e| e.to_string())?;
        for (row, (sample, mean)) in ranked.iter().zip(expected) {
            ensure(
                row.sample == sample && (row.mean - mean).abs() <= 0.005,
                || {
                    format!(
                        "{words:?}: got {} {:.4}, want {sample} {mean}",
                        row.sample, row.mean
                    )
                },
            )?;
        }
        shown.push(
            ranked
                .iter()
                .take(3)
                .map(|r| format!("{} {:.2}", r.sample, r.mean))
                .collect::<Vec<_>>()
                .join(", "),
        );
    }
    Ok(shown.join(" | "))
}

fn criterion_5() -> Outcome {
    let catalog = parse_catalog(
        &fs::read_to_string(fixtures().join("catalog.csv")).unwrap(),
        &FeatureSpec::standard(),
    )
    .map_err(|e| e.to_string())?;
    let cases = [
        (
            ["S3", "S4", "S5"],
            [
                (DesignFeature::SaturationIntensity, "High"),
                (DesignFeature::LogoVisibility, "InHeader"),
            ],
        ),
        (
            ["S2", "S4", "S5"],
            [
                (DesignFeature::ColorCount, "High"),
                (DesignFeature::FontSize, "VariedLarge"),
            ],
        ),
    ];
    let mut shown = Vec::new();
    for (top, wanted) in cases {
        let shared =
            common_attributes(&catalog, &top, DEFAULT_MIN_SHARE).map_err(|e| e.to_string())?;
        for (feature, value) in wanted {
            ensure(
                shared
                    .iter()
                    .any(|s| s.feature == feature && s.value == value),
                || format!("{top:?}: missing ({feature}, {value}) in {shared:?}"),
            )?;
            shown.push(format!("({feature}, {value})"));
        }
    }
    Ok(format!("F1–F4 found: {}", shown.join(", ")))
}

fn criterion_6() -> Outcome {
    let ballots = parse_colors(&fs::read_to_string(fixtures().join("colors.csv")).unwrap())
        .map_err(|e| e.to_string())?;
    let ranking = tally(&ballots).map_err(|e| e.to_string())?;
    let e = &ranking.entries;
    ensure(
        e[0].ballot.name == "RoyalBlue" && e[0].rank == 1 && e[0].ballot.votes == 8,
        || format!("first is {:?}", e[0]),
    )?;
    ensure(
        e[1].ballot.name == "Grey" && e[1].rank == 2 && e[1].ballot.votes == 7,
        || format!("second is {:?}", e[1]),
    )?;
    let groups: Vec<Vec<&str>> = ranking
        .tie_groups
        .iter()
        .map(|g| g.names.iter().map(String::as_str).collect())
        .collect();
    ensure(
        groups
            == vec![
                vec!["DarkOliveGreen", "DuckYellow"],
                vec!["CadetGrey", "Maroon"],
            ],
        || format!("tie groups {groups:?}"),
    )?;
    Ok("RoyalBlue #1 (8), Grey #2 (7); ties {DarkOliveGreen, DuckYellow} at 4, {CadetGrey, Maroon} at 6".into())
}

/// 30 respondents × 30 variables with two planted factors carrying 32 % and
/// 16 % of the total variance and isotropic noise carrying the rest.
/// Also returns the planted variable directions.
fn planted_dataset(seed: u64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    const N: usize = 30;
    const P: usize = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut draw = |len: usize| -> Vec<f64> { (0..len).map(|_| normal.sample(&mut rng)).collect() };

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let centre = |v: &mut Vec<f64>| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter_mut().for_each(|x| *x -= m);
    };
    let remove = |v: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for b in basis {
            let c = dot(v, b) / dot(b, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    };
    let unit = |v: &mut Vec<f64>| {
        let n = dot(v, v).sqrt();
        v.iter_mut().for_each(|x| *x /= n);
    };

    // respondent scores: centred, mutually orthogonal, unit sample variance
    let mut scores: Vec<Vec<f64>> = Vec::new();
    for _ in 0..2 {
        let mut f = draw(N);
        centre(&mut f);
        remove(&mut f, &scores);
        let var = dot(&f, &f) / (N as f64 - 1.0);
        f.iter_mut().for_each(|x| *x /= var.sqrt());
        scores.push(f);
    }
    // variable directions: orthonormal
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for _ in 0..2 {
        let mut w = draw(P);
        remove(&mut w, &dirs);
        unit(&mut w);
        dirs.push(w);
    }

    // noise columns, centred and uncorrelated with the planted scores
    let mut noise: Vec<Vec<f64>> = (0..P)
        .map(|_| {
            let mut e = draw(N);
            centre(&mut e);
            remove(&mut e, &scores);
            e
        })
        .collect();
    let noise_var: f64 = noise.iter().map(|e| dot(e, e)).sum::<f64>() / (N as f64 - 1.0);

    let total: f64 = 10.0;
    let a = (0.32 * total).sqrt();
    let b = (0.16 * total).sqrt();
    let k = (0.52 * total / noise_var).sqrt();
    noise
        .iter_mut()
        .for_each(|e| e.iter_mut().for_each(|x| *x *= k));

    let rows = (0..N)
        .map(|i| {
            (0..P)
                .map(|j| {
                    3.0 + a * scores[0][i] * dirs[0][j]
                        + b * scores[1][i] * dirs[1][j]
                        + noise[j][i]
                })
                .collect()
        })
        .collect();
    (rows, dirs)
}

fn criterion_7() -> Outcome {
    let (rows, dirs) = planted_dataset(7);
    let r = run_pca(&rows);
    let two = r.cumulative[1];
    ensure((two - 0.48).abs() <= 0.05, || format!("PC1+PC2 = {two:.4}"))?;
    // the recovered axes should be the planted ones, not noise
    let cos: Vec<f64> = (0..2)
        .map(|k| {
            r.loadings[k]
                .iter()
                .zip(&dirs[k])
                .map(|(x, y)| x * y)
                .sum::<f64>()
                .abs()
        })
        .collect();
    ensure(cos.iter().all(|c| *c > 0.9), || {
        format!("|cos| to planted axes {cos:?}")
    })?;
    Ok(format!(
        "PC1 {:.3}, PC2 {:.3}, PC1+PC2 {two:.3} (target 0.48 ± 0.05); |cos| to planted axes {:.3}, {:.3}",
        r.explained_ratio[0], r.explained_ratio[1], cos[0], cos[1]
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pair = {
        let mut lex = kansei_core::lexicon::Lexicon::new();
        lex.add_word(
            "Beautiful",
            kansei_core::lexicon::WordSource::RelatedStudies,
        )
        .unwrap();
        lex.make_bipolar(
            "Beautiful",
            "Not Beautiful",
            kansei_core::lexicon::GoldmanCategory::BroadlyEvaluative,
        )
        .unwrap()
    };
    let mut checked = 0;
    for i in 0..1000 {
        let len = 1 + i % 30;
        let others = rng.random_range(0..=4);
        let gender_of = |k: usize| {
            if k < len {
                Gender::Female
            } else {
                Gender::Male
            }
        };
        let respondents: Vec<Respondent> = (0..len + others)
            .map(|k| Respondent {
                id: format!("R{k}"),
                gender: gender_of(k),
            })
            .collect();
        let cells: Vec<Option<u8>> = (0..len + others)
            .map(|_| Some(rng.random_range(1..=5)))
            .collect();
        let values: Vec<f64> = cells[..len].iter().map(|c| f64::from(c.unwrap())).collect();
        let matrix = RatingMatrix::new(
            respondents,
            vec![ProductSample::new("S1", "one")],
            vec![pair.clone()],
            cells,
        )
        .map_err(|e| e.to_string())?;
        let boxes =
            gender_distribution(&matrix, "Beautiful", Gender::Female).map_err(|e| e.to_string())?;
        let s = &boxes[0].stats;
        let (q1, med, q3) = oracle_hinges(&values);
        ensure(
            s.q1 == q1 && s.median == med && s.q3 == q3 && s.count == len,
            || {
                format!(
                    "{values:?}: got ({}, {}, {}), oracle ({q1}, {med}, {q3})",
                    s.q1, s.median, s.q3
                )
            },
        )?;
        let (lo, hi) = (q1 - 1.5 * (q3 - q1), q3 + 1.5 * (q3 - q1));
        let mut outliers: Vec<f64> = values
            .iter()
            .copied()
            .filter(|v| *v < lo || *v > hi)
            .collect();
        outliers.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let inside: Vec<f64> = values
            .iter()
            .copied()
            .filter(|v| *v >= lo && *v <= hi)
            .collect();
        let wl = inside.iter().copied().fold(f64::INFINITY, f64::min);
        let wh = inside.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ensure(
            s.outliers == outliers && s.lower_whisker == wl && s.upper_whisker == wh,
            || format!("{values:?}: whiskers/outliers differ"),
        )?;
        checked += 1;
    }
    Ok(format!(
        "{checked} vectors of length 1–30 match the depth-based hinge oracle"
    ))
}

fn run_analyze_and_plots(out: &std::path::Path) -> Result<(), String> {
    let p = project();
    let o = kansei(&["analyze", "--project", path_str(&p), "--out", path_str(out)]);
    ensure(o.status.success(), || stderr(&o))?;
    for kind in ["scree", "cumulative", "biplot", "heatmap", "box", "swatch"] {
        let o = kansei(&[
            "plot",
            "--project",
            path_str(&p),
            "--kind",
            kind,
            "--out",
            path_str(out),
        ]);
        ensure(o.status.success(), || stderr(&o))?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_analyze_and_plots(a.path())?;
    run_analyze_and_plots(b.path())?;
    let mut names: Vec<String> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    ensure(names.len() == 9, || format!("outputs {names:?}"))?;
    for name in &names {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure(x == y, || format!("{name} differs between runs"))?;
    }
    Ok(format!(
        "{} files byte-identical across two runs",
        names.len()
    ))
}

fn criterion_10() -> Outcome {
    let out = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let project_path = project();
    let project = pipeline::load_project(&project_path).map_err(|e| e.to_string())?;
    let inputs = pipeline::load_inputs(&project, &project_path).map_err(|e| e.to_string())?;
    let analysis = pipeline::analyze(&inputs).map_err(|e| e.to_string())?;
    let written =
        pipeline::write_report(&inputs, &analysis, out.path()).map_err(|e| e.to_string())?;
    let library = start.elapsed();

    let start = Instant::now();
    let o = kansei(&[
        "report",
        "--project",
        path_str(&project_path),
        "--out",
        path_str(out.path()),
    ]);
    let binary = start.elapsed();
    ensure(o.status.success(), || stderr(&o))?;
    ensure(library < Duration::from_secs(1), || {
        format!("library pipeline took {library:?}")
    })?;
    ensure(binary < Duration::from_secs(1), || {
        format!("`kansei report` took {binary:?}")
    })?;
    Ok(format!(
        "validate+analyze+{} outputs: {:.1} ms in-process, {:.1} ms via `kansei report`",
        written.len(),
        library.as_secs_f64() * 1e3,
        binary.as_secs_f64() * 1e3
    ))
}

fn main() {
    let criteria: &[Criterion] = &[
        ("PCA oracle equivalence", criterion_1),
        ("reconstruction", criterion_2),
        ("variance ratios", criterion_3),
        ("fixture sample rankings", criterion_4),
        ("feature extraction", criterion_5),
        ("color tally", criterion_6),
        ("planted-structure recovery", criterion_7),
        ("quartile oracle", criterion_8),
        ("determinism", criterion_9),
        ("end-to-end runtime", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
