//! End-to-end runner behind the `kansei` commands: load and validate a
//! project, run the analysis, emit JSON, SVG and a Markdown summary.
//!
//! Nothing here is random and every output is a pure function of the input
//! files and settings, so reruns are byte-identical.

use crate::catalog::{parse_catalog_all, AttributeCatalog, CatalogError, FeatureSpec};
use crate::colorvote::{
    parse_colors_all, tally, top_colors, ColorBallot, ColorError, ColorRanking,
};
use crate::interpret::{interpret, InterpretError, InterpretSettings, InterpretationReport};
use crate::lexicon::{LexiconError, LexiconFile, LoadedLexicon};
use crate::pca::{biplot_data, pca, PcaError, PcaOptions, PcaResult};
use crate::plot::{self, PlotKind};
use crate::project::Project;
use crate::survey::{
    flatten, gender_boxes, mean_ratings, parse_responses_all, MeanTable, ParseOptions,
    RatingMatrix, SurveyError,
};
use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

/// One schema or consistency problem, tied to the file it was found in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub file: PathBuf,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.file.display(), self.message)
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: invalid project file: {reason}", path.display())]
    Project { path: PathBuf, reason: String },
    #[error("{} validation issue(s)", .0.len())]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Survey(#[from] SurveyError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Pca(#[from] PcaError),
    #[error(transparent)]
    Interpret(#[from] InterpretError),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error("unknown plot kind `{0}`")]
    BadPlotKind(String),
    #[error("unknown Kansei word `{0}` for the box plot")]
    UnknownWord(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Io { .. } => EXIT_IO,
            _ => EXIT_INVALID,
        }
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), PipelineError> {
    fs::write(path, contents).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a project file and anchors its relative paths at its directory.
pub fn load_project(path: &Path) -> Result<Project, PipelineError> {
    let text = read(path)?;
    let mut project = Project::from_json(&text).map_err(|e| PipelineError::Project {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    project.resolve_paths(base);
    Ok(project)
}

/// Parsed inputs of a project that passed validation.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub project: Project,
    pub lexicon: LoadedLexicon,
    pub matrix: RatingMatrix,
    pub catalog: AttributeCatalog,
    pub ballots: Vec<ColorBallot>,
}

/// Everything `analyze` produces.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub means: MeanTable,
    pub pca: PcaResult,
    pub interpretation: InterpretationReport,
    pub colors: ColorRanking,
}

fn diag(file: &Path, message: impl ToString) -> Diagnostic {
    Diagnostic {
        file: file.to_path_buf(),
        message: message.to_string(),
    }
}

/// Parses every input and collects all problems. Only I/O failures abort;
/// everything else becomes a diagnostic.
pub fn check(
    project: &Project,
    project_path: &Path,
) -> Result<(Vec<Diagnostic>, Option<Inputs>), PipelineError> {
    let lexicon_text = read(&project.lexicon)?;
    let responses_text = read(&project.responses)?;
    let catalog_text = read(&project.catalog)?;
    let colors_text = read(&project.colors)?;

    let mut diags: Vec<Diagnostic> = project
        .settings
        .problems()
        .into_iter()
        .map(|m| diag(project_path, m))
        .collect();

    let mut seen = HashSet::new();
    for s in &project.samples {
        if s.id.trim().is_empty() {
            diags.push(diag(project_path, "empty sample id"));
        } else if !seen.insert(s.id.as_str()) {
            diags.push(diag(project_path, format!("duplicate sample `{}`", s.id)));
        }
    }
    if project.samples.is_empty() {
        diags.push(diag(project_path, "no product samples declared"));
    }

    let lexicon = match LexiconFile::from_json(&lexicon_text) {
        Err(e) => {
            diags.push(diag(&project.lexicon, e));
            None
        }
        Ok(file) => match file.resolve_all() {
            Ok(l) => Some(l),
            Err(errs) => {
                diags.extend(errs.into_iter().map(|e| diag(&project.lexicon, e)));
                None
            }
        },
    };
    if let Some(l) = &lexicon {
        if l.pairs.is_empty() {
            diags.push(diag(&project.lexicon, "lexicon defines no bipolar pairs"));
        }
    }

    let matrix = lexicon.as_ref().and_then(|l| {
        let options = ParseOptions {
            allow_missing: project.settings.impute_mean,
        };
        match parse_responses_all(&responses_text, &l.pairs, &project.samples, options) {
            Ok(m) => Some(m),
            Err(errs) => {
                diags.extend(errs.into_iter().map(|e| diag(&project.responses, e)));
                None
            }
        }
    });

    let catalog = match parse_catalog_all(&catalog_text, &FeatureSpec::standard()) {
        Ok(c) => {
            for s in &project.samples {
                if c.sample_index(&s.id).is_none() {
                    diags.push(diag(
                        &project.catalog,
                        format!("declared sample `{}` has no catalog entries", s.id),
                    ));
                }
            }
            for id in c.samples() {
                if !project.samples.iter().any(|s| &s.id == id) {
                    diags.push(diag(
                        &project.catalog,
                        format!("catalog sample `{id}` is not declared in the project"),
                    ));
                }
            }
            Some(c)
        }
        Err(errs) => {
            diags.extend(errs.into_iter().map(|e| diag(&project.catalog, e)));
            None
        }
    };

    let ballots = match parse_colors_all(&colors_text) {
        Ok(b) => Some(b),
        Err(errs) => {
            diags.extend(errs.into_iter().map(|e| diag(&project.colors, e)));
            None
        }
    };

    if let Some(m) = &matrix {
        let variables = m.variable_count();
        for spec in &project.components {
            if spec.pc_index >= variables {
                diags.push(diag(
                    project_path,
                    format!(
                        "component `{}` has pc_index {} but there are only {variables} components",
                        spec.name, spec.pc_index
                    ),
                ));
            }
            if spec.name.trim().is_empty() {
                diags.push(diag(project_path, "component name is empty"));
            }
        }
    }

    let inputs = match (lexicon, matrix, catalog, ballots) {
        (Some(lexicon), Some(matrix), Some(catalog), Some(ballots)) if diags.is_empty() => {
            Some(Inputs {
                project: project.clone(),
                lexicon,
                matrix,
                catalog,
                ballots,
            })
        }
        _ => None,
    };
    Ok((diags, inputs))
}

/// Like [`check`] but turns any diagnostic into an error.
pub fn load_inputs(project: &Project, project_path: &Path) -> Result<Inputs, PipelineError> {
    let (diags, inputs) = check(project, project_path)?;
    match inputs {
        Some(i) => Ok(i),
        None => Err(PipelineError::Invalid(diags)),
    }
}

pub fn analyze(inputs: &Inputs) -> Result<Analysis, PipelineError> {
    let settings = &inputs.project.settings;
    let means = mean_ratings(&inputs.matrix)?;
    let (x, labels) = flatten(&inputs.matrix, settings.impute_mean)?;
    let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    log::info!("PCA over {} respondents × {} variables", x.rows(), x.cols());
    let result = pca(
        &x,
        &labels,
        PcaOptions {
            correlation: settings.correlation,
        },
    )?;
    let components = inputs.project.component_specs(result.component_count());
    let interpretation = interpret(
        &result,
        &means,
        &inputs.catalog,
        &components,
        InterpretSettings {
            top_n: settings.top_n,
            top_samples: settings.top_samples,
            min_share: settings.min_share,
        },
    )?;
    let colors = tally(&inputs.ballots)?;
    Ok(Analysis {
        means,
        pca: result,
        interpretation,
        colors,
    })
}

/// Writes `pca.json`, `interpretation.json` and `colors.json` into `out`.
pub fn write_analysis(analysis: &Analysis, out: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    fs::create_dir_all(out).map_err(|source| PipelineError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let files = [
        ("pca.json", analysis.pca.to_json()),
        ("interpretation.json", analysis.interpretation.to_json()),
        ("colors.json", analysis.colors.to_json()),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = out.join(name);
        write(&path, &ensure_newline(body))?;
        written.push(path);
    }
    Ok(written)
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// Renders one chart. `word` picks the box-plot word and defaults to the
/// first pair.
pub fn render_plot(
    inputs: &Inputs,
    analysis: &Analysis,
    kind: PlotKind,
    word: Option<&str>,
) -> Result<String, PipelineError> {
    Ok(match kind {
        PlotKind::Scree => plot::scree_svg(&analysis.pca),
        PlotKind::Cumulative => plot::cumulative_svg(&analysis.pca),
        PlotKind::Biplot => {
            let data = biplot_data(&analysis.pca, 0, 1, inputs.project.settings.arrow_scale)?;
            let r = &analysis.pca.explained_ratio;
            plot::biplot_svg(&data, (r[0], r[1]))
        }
        PlotKind::Heatmap => plot::heatmap_svg(&analysis.means),
        PlotKind::Box => {
            let word = match word {
                Some(w) => inputs
                    .matrix
                    .pairs()
                    .iter()
                    .map(|p| p.word())
                    .find(|p| p.eq_ignore_ascii_case(w.trim()))
                    .ok_or_else(|| PipelineError::UnknownWord(w.to_string()))?,
                None => inputs.matrix.pairs()[0].word(),
            };
            plot::box_svg(word, &gender_boxes(&inputs.matrix, word)?)
        }
        PlotKind::Swatch => plot::swatch_svg(&analysis.colors),
    })
}

/// Writes one plot. `out` ending in `.svg` is the file itself; anything
/// else is a directory that receives `<kind>.svg`.
pub fn write_plot(
    inputs: &Inputs,
    analysis: &Analysis,
    kind: PlotKind,
    word: Option<&str>,
    out: &Path,
) -> Result<PathBuf, PipelineError> {
    let svg = render_plot(inputs, analysis, kind, word)?;
    let path = if out
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("svg"))
    {
        if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
            create_dir(parent)?;
        }
        out.to_path_buf()
    } else {
        create_dir(out)?;
        out.join(format!("{}.svg", kind.name()))
    };
    write(&path, &svg)?;
    Ok(path)
}

fn create_dir(dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(|source| PipelineError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn pct(x: f64) -> String {
    format!("{:.1}%", x * 100.0)
}

/// Markdown summary of an analysis.
pub fn report_markdown(inputs: &Inputs, analysis: &Analysis) -> String {
    use std::fmt::Write;
    let mut md = String::new();
    let m = &inputs.matrix;
    let _ = writeln!(md, "# Kansei analysis report\n");
    let _ = writeln!(
        md,
        "{} respondents, {} product samples, {} bipolar pairs ({} variables).\n",
        m.respondents().len(),
        m.samples().len(),
        m.pairs().len(),
        m.variable_count()
    );

    let _ = writeln!(md, "## Principal components\n");
    let _ = writeln!(md, "| Component | Eigenvalue | Explained | Cumulative |");
    let _ = writeln!(md, "|---|---|---|---|");
    let p = &analysis.pca;
    for k in 0..p.component_count().min(10) {
        let _ = writeln!(
            md,
            "| PC{} | {:.4} | {} | {} |",
            k + 1,
            p.eigenvalues[k],
            pct(p.explained_ratio[k]),
            pct(p.cumulative[k])
        );
    }
    md.push('\n');

    let _ = writeln!(md, "## Interpretation\n");
    for (profile, ranking) in analysis
        .interpretation
        .components
        .iter()
        .zip(&analysis.interpretation.rankings)
    {
        let _ = writeln!(
            md,
            "### {} (PC{})\n\nDefining words: {}\n",
            profile.name,
            profile.pc_index + 1,
            profile.defining_words.join(", ")
        );
        let _ = writeln!(md, "| Rank | Sample | Mean |");
        let _ = writeln!(md, "|---|---|---|");
        for (i, row) in ranking.rows.iter().enumerate() {
            let _ = writeln!(md, "| {} | {} | {:.2} |", i + 1, row.sample, row.mean);
        }
        md.push('\n');
        let features: Vec<_> = analysis
            .interpretation
            .features
            .iter()
            .filter(|f| f.pc_index == profile.pc_index)
            .collect();
        if features.is_empty() {
            let _ = writeln!(
                md,
                "No design attribute is shared by the leading samples.\n"
            );
        } else {
            let _ = writeln!(md, "Shared design attributes:\n");
            for f in features {
                let _ = writeln!(md, "- {}: {} (support {})", f.feature, f.value, f.support);
            }
            md.push('\n');
        }
    }

    let _ = writeln!(md, "## Colors\n");
    let _ = writeln!(md, "| Rank | Color | Hex | Votes |");
    let _ = writeln!(md, "|---|---|---|---|");
    for e in &analysis.colors.entries {
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} |",
            e.rank,
            e.ballot.name,
            e.ballot.hex(),
            e.ballot.votes
        );
    }
    md.push('\n');
    for g in &analysis.colors.tie_groups {
        let _ = writeln!(
            md,
            "- Tie at rank {} ({} votes): {}",
            g.rank,
            g.votes,
            g.names.join(", ")
        );
    }
    let top = top_colors(&analysis.colors, 3);
    let names: Vec<&str> = top.ballots.iter().map(|b| b.name.as_str()).collect();
    let _ = writeln!(
        md,
        "\nTop colors: {}{}",
        names.join(", "),
        if top.oversized {
            " (includes a tie at the cutoff)"
        } else {
            ""
        }
    );
    md
}

/// `analyze` + every plot + `report.md` into `out`.
pub fn write_report(
    inputs: &Inputs,
    analysis: &Analysis,
    out: &Path,
) -> Result<Vec<PathBuf>, PipelineError> {
    let mut written = write_analysis(analysis, out)?;
    for kind in PlotKind::ALL {
        written.push(write_plot(inputs, analysis, kind, None, out)?);
    }
    let path = out.join("report.md");
    write(&path, &report_markdown(inputs, analysis))?;
    written.push(path);
    Ok(written)
}

pub fn parse_plot_kind(name: &str) -> Result<PlotKind, PipelineError> {
    name.parse()
        .map_err(|_| PipelineError::BadPlotKind(name.to_string()))
}
