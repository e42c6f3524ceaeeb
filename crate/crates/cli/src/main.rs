//! `kansei` — run a Kansei survey study from a project file.
//!
//! Exit codes: 0 success, 2 validation or domain error, 3 I/O failure,
//! 4 usage error.

use clap::{Args, Parser, Subcommand};
use kansei_core::pca::ArrowScale;
use kansei_core::pipeline::{
    self, check, load_inputs, load_project, Inputs, PipelineError, EXIT_INVALID, EXIT_OK,
    EXIT_USAGE,
};
use kansei_core::plot::PlotKind;
use kansei_core::project::Project;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "kansei", version, about = "Kansei engineering survey analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every input file and list all problems found.
    Validate(Common),
    /// Write pca.json, interpretation.json and colors.json.
    Analyze(Common),
    /// Render one SVG chart.
    Plot {
        #[command(flatten)]
        common: Common,
        /// scree, cumulative, biplot, heatmap, box or swatch
        #[arg(long)]
        kind: String,
        /// Kansei word for the box plot (defaults to the first pair)
        #[arg(long)]
        word: Option<String>,
    },
    /// Analysis outputs, every chart and report.md.
    Report(Common),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    project: PathBuf,
    /// Output directory (or, for `plot`, an .svg file path)
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    top_n: Option<usize>,
    #[arg(long)]
    min_share: Option<f64>,
    /// Standardise variables before PCA
    #[arg(long)]
    correlation: bool,
    /// Fill missing ratings with the column mean
    #[arg(long)]
    impute_mean: bool,
    #[arg(long, value_parser = parse_arrow_scale)]
    arrow_scale: Option<ArrowScale>,
}

fn parse_arrow_scale(s: &str) -> Result<ArrowScale, String> {
    s.parse::<ArrowScale>()
        .map_err(|_| format!("expected `loading` or `correlation`, got `{s}`"))
}

impl Common {
    fn project(&self) -> Result<Project, PipelineError> {
        let mut project = load_project(&self.project)?;
        let s = &mut project.settings;
        if let Some(n) = self.top_n {
            s.top_n = n;
        }
        if let Some(f) = self.min_share {
            s.min_share = f;
        }
        if let Some(a) = self.arrow_scale {
            s.arrow_scale = a;
        }
        s.correlation |= self.correlation;
        s.impute_mean |= self.impute_mean;
        Ok(project)
    }

    fn inputs(&self) -> Result<Inputs, PipelineError> {
        load_inputs(&self.project()?, &self.project)
    }
}

fn validate(common: &Common) -> Result<i32, PipelineError> {
    let (diags, _) = check(&common.project()?, &common.project)?;
    for d in &diags {
        println!("{d}");
    }
    println!("{} issues", diags.len());
    Ok(if diags.is_empty() {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(command: &Command) -> Result<i32, PipelineError> {
    match command {
        Command::Validate(common) => validate(common),
        Command::Analyze(common) => {
            let inputs = common.inputs()?;
            let analysis = pipeline::analyze(&inputs)?;
            print_written(&pipeline::write_analysis(&analysis, &common.out)?);
            Ok(EXIT_OK)
        }
        Command::Plot { common, kind, word } => {
            let kind: PlotKind = pipeline::parse_plot_kind(kind)?;
            let inputs = common.inputs()?;
            let analysis = pipeline::analyze(&inputs)?;
            let path =
                pipeline::write_plot(&inputs, &analysis, kind, word.as_deref(), &common.out)?;
            print_written(&[path]);
            Ok(EXIT_OK)
        }
        Command::Report(common) => {
            let inputs = common.inputs()?;
            let analysis = pipeline::analyze(&inputs)?;
            print_written(&pipeline::write_report(&inputs, &analysis, &common.out)?);
            Ok(EXIT_OK)
        }
    }
}

fn report_error(err: &PipelineError, project: &Path) {
    match err {
        PipelineError::Invalid(diags) => {
            for d in diags {
                eprintln!("{d}");
            }
            eprintln!("{} issues", diags.len());
        }
        _ => eprintln!("error ({}): {err}", project.display()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("KANSEI_LOG", "error")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let project = match &cli.command {
        Command::Validate(c) | Command::Analyze(c) | Command::Report(c) => &c.project,
        Command::Plot { common, .. } => &common.project,
    };
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            report_error(&err, project);
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
