//! Command-line front end: parses graph files, runs the decomposition
//! pipelines, verifies the property suites, and emits DOT or structured
//! text.
//!
//! Exit codes: 0 success, 2 input error, 3 invariant violation,
//! 4 wrong pipeline for the input (a graph with cut points given to
//! `jsj-tree`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cuttrees::actions::{classify_tree_map, is_non_nesting_tree, TreeMap, Verdict};
use cuttrees::combined::{build_combined_tree, induced_combined_images};
use cuttrees::continuum::GraphContinuum;
use cuttrees::corpus;
use cuttrees::cutpair::{build_jsj_tree, build_r};
use cuttrees::cutpoint::{
    build_cutpoint_tree, build_p, induced_node_images, metrize, Automorphism, MetricMode,
};
use cuttrees::emit;
use cuttrees::error::Error;
use cuttrees::pretree::StructuralTree;
use cuttrees::verify::{self, VerifyLevel};

#[derive(Parser)]
#[command(
    name = "cuttrees",
    version,
    about = "Decomposition trees of graph continua"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Canonical,
    Geometric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verify {
    Off,
    Lemmas,
    Full,
}

#[derive(Args)]
struct RunConfig {
    /// Graph file in the edge-list format.
    input: PathBuf,
    /// Interior samples per edge.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    grid: u32,
    /// Length assignment for the emitted tree.
    #[arg(long, value_enum, default_value_t = Metric::Canonical)]
    metric: Metric,
    /// Base node id for the canonical length schedule.
    #[arg(long)]
    seed: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run the property suite before emitting.
    #[arg(long, value_enum, default_value_t = Verify::Off)]
    verify: Verify,
    /// Write the artifact here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Cut-point tree of the graph.
    CutpointTree(RunConfig),
    /// Cut-pair tree; requires a graph without cut points.
    JsjTree(RunConfig),
    /// Cut-point tree with per-block cut-pair trees spliced in.
    Combined(RunConfig),
    /// Classify the tree maps induced by a graph automorphism.
    Action {
        #[command(flatten)]
        config: RunConfig,
        /// Automorphism file: `pv <from> <to>` and `pe <from> <to>` lines.
        #[arg(long = "map")]
        map_file: PathBuf,
    },
    /// Run the full property suite; with no file, over the bundled corpus.
    Verify {
        /// Graph file; omit to verify the bundled corpus.
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::Input(_)) | Some(Error::Precondition(_)) => 2,
                Some(Error::NotPretree(_)) | Some(Error::Internal(_)) => 3,
                None => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::CutpointTree(cfg) => {
            let g = load_graph(&cfg.input)?;
            if let Some(code) = run_verify_gate(&g, &cfg)? {
                return Ok(code);
            }
            let p = build_p(&g, cfg.grid)?;
            let tree = build_cutpoint_tree(&g, &p)?;
            let tree = apply_metric(&tree, &cfg)?;
            let mut artifact = String::new();
            if cfg.format == Format::Text {
                artifact.push_str(&emit::cutpoints_to_text(&p.analysis));
            }
            artifact.push_str(&render(&tree, cfg.format));
            write_artifact(&cfg.output, &artifact)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::JsjTree(cfg) => {
            let g = load_graph(&cfg.input)?;
            let cuts = cuttrees::cutpoint::cut_points(&g);
            if !cuts.vertex_cut_points.is_empty() || !cuts.bridge_edges.is_empty() {
                eprintln!(
                    "error: the graph has cut points (vertices {:?}, bridges {:?}); \
                     use `combined` for the per-block decomposition",
                    cuts.vertex_cut_points, cuts.bridge_edges
                );
                return Ok(ExitCode::from(4));
            }
            if let Some(code) = run_verify_gate(&g, &cfg)? {
                return Ok(code);
            }
            let r = build_r(&g, cfg.grid)?;
            let tree = build_jsj_tree(&r)?;
            let tree = apply_metric(&tree, &cfg)?;
            let mut artifact = String::new();
            if cfg.format == Format::Text {
                artifact.push_str(&emit::collection_to_text(&r));
            }
            artifact.push_str(&render(&tree, cfg.format));
            write_artifact(&cfg.output, &artifact)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Combined(cfg) => {
            let g = load_graph(&cfg.input)?;
            if let Some(code) = run_verify_gate(&g, &cfg)? {
                return Ok(code);
            }
            let combined = build_combined_tree(&g, cfg.grid)?;
            let tree = apply_metric(&combined.tree, &cfg)?;
            let mut artifact = String::new();
            if cfg.format == Format::Text {
                for (cut, attach) in &combined.attachments {
                    artifact.push_str(&format!("attach {cut} at {attach}\n"));
                }
            }
            artifact.push_str(&render(&tree, cfg.format));
            write_artifact(&cfg.output, &artifact)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Action {
            config: cfg,
            map_file,
        } => {
            let g = load_graph(&cfg.input)?;
            let text = std::fs::read_to_string(&map_file)
                .map_err(|e| Error::input(format!("{}: {e}", map_file.display())))?;
            let auto = Automorphism::parse(&g, &text)?;
            let p = build_p(&g, cfg.grid)?;
            let cut_tree = build_cutpoint_tree(&g, &p)?;
            let combined = build_combined_tree(&g, cfg.grid)?;
            let mut artifact = String::new();
            let targets = [
                (
                    "cutpoint",
                    &cut_tree,
                    induced_node_images(&p, &cut_tree, &auto)?,
                ),
                (
                    "combined",
                    &combined.tree,
                    induced_combined_images(&g, &combined, &p, &auto)?,
                ),
            ];
            for (label, tree, images) in targets {
                let m = TreeMap::from_node_images(tree, &images)?;
                let nn = is_non_nesting_tree(tree, &m);
                match &nn {
                    Verdict::Pass => {
                        let c = classify_tree_map(tree, &m)?;
                        let fixed = c
                            .fixed
                            .least_point(tree)
                            .unwrap_or_else(|| "(none)".to_string());
                        artifact.push_str(&format!(
                            "action tree={label} nonnesting=PASS type=elliptic fixed={fixed} connected={}\n",
                            c.fixed.is_connected(tree)
                        ));
                    }
                    Verdict::Fail { witness } => {
                        artifact.push_str(&format!(
                            "action tree={label} nonnesting=FAIL witness={witness}\n"
                        ));
                    }
                }
            }
            write_artifact(&cfg.output, &artifact)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, grid } => {
            let mut failures = 0;
            match input {
                Some(path) => {
                    let g = load_graph(&path)?;
                    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
                    failures += run_full_verify(&g, name, grid, &[])?;
                }
                None => {
                    for (name, _) in corpus::all() {
                        let g = corpus::load(name);
                        let autos = corpus::automorphism_maps(name, &g);
                        failures += run_full_verify(&g, name, grid, &autos)?;
                    }
                }
            }
            if failures > 0 {
                eprintln!("{failures} check(s) failed");
                Ok(ExitCode::from(3))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn load_graph(path: &PathBuf) -> anyhow::Result<GraphContinuum> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    Ok(GraphContinuum::parse(&text)?)
}

fn apply_metric(tree: &StructuralTree, cfg: &RunConfig) -> anyhow::Result<StructuralTree> {
    let mode = match cfg.metric {
        Metric::Canonical => MetricMode::Canonical,
        Metric::Geometric => MetricMode::Geometric,
    };
    Ok(metrize(tree, mode, cfg.seed.as_deref())?)
}

fn render(tree: &StructuralTree, format: Format) -> String {
    match format {
        Format::Dot => emit::tree_to_dot(tree),
        Format::Text => emit::tree_to_text(tree),
    }
}

fn write_artifact(out: &Option<PathBuf>, artifact: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, artifact)
            .map_err(|e| Error::input(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(artifact.as_bytes()) {
                // A closed pipe downstream is not our error.
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                return Err(e.into());
            }
        }
    }
    Ok(())
}

/// Runs the requested verification level; prints the report and returns a
/// failing exit code when a check fails.
fn run_verify_gate(g: &GraphContinuum, cfg: &RunConfig) -> anyhow::Result<Option<ExitCode>> {
    let level = match cfg.verify {
        Verify::Off => return Ok(None),
        Verify::Lemmas => VerifyLevel::Lemmas,
        Verify::Full => VerifyLevel::Full,
    };
    let name = cfg
        .input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("graph");
    let report = verify::verify_graph(g, name, cfg.grid, level, &[])?;
    eprint!("{}", report.render());
    if report.all_passed() {
        Ok(None)
    } else {
        Ok(Some(ExitCode::from(3)))
    }
}

fn run_full_verify(
    g: &GraphContinuum,
    name: &str,
    grid: u32,
    autos: &[Automorphism],
) -> anyhow::Result<usize> {
    let report = verify::verify_graph(g, name, grid, VerifyLevel::Full, autos)?;
    print!("{}", report.render());
    let mut failures = report.outcomes.iter().filter(|o| !o.passed).count();
    let stability = verify::grid_stability(g, name, 3, 5)?;
    println!(
        "{:<44} {}  {}",
        stability.name,
        if stability.passed { "PASS" } else { "FAIL" },
        stability.detail
    );
    if !stability.passed {
        failures += 1;
    }
    Ok(failures)
}
