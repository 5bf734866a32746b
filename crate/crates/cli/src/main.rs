//! Command-line front end: run constructions, verify propositions on seeded
//! random scenes, analyze dependency graphs, and emit SVG figures.
//!
//! Exit codes follow one contract across subcommands: 0 for success, 1 for a
//! failed assertion/proposition/violation, 2 for file or parse problems.

mod render;

use clap::{Parser, Subcommand, ValueEnum};
use postulatum_core::construction::{
    parse_scene, prog_bolyai, prog_copy_angle, prog_parallel_i31, ConstructionProgram, Engine,
};
use postulatum_core::kcheck::{analyze, parse_graph};
use postulatum_core::verify::{run_trials, Proposition, TrialConfig};
use render::{render_trace_svg, RenderStyle};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "postulatum", version, about = "Geometric construction engine, proposition verifier, and dependency-graph checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProgramName {
    #[value(name = "parallel_i31")]
    ParallelI31,
    #[value(name = "bolyai")]
    Bolyai,
    #[value(name = "copy_angle")]
    CopyAngle,
}

impl ProgramName {
    fn program(&self) -> ConstructionProgram {
        match self {
            ProgramName::ParallelI31 => prog_parallel_i31(),
            ProgramName::Bolyai => prog_bolyai(),
            ProgramName::CopyAngle => prog_copy_angle(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a construction program against a scene file
    Construct {
        /// Which shipped program to run
        #[arg(long, value_enum)]
        program: ProgramName,
        /// Scene file supplying the program's givens
        #[arg(long)]
        scene: PathBuf,
        /// Write an SVG figure of the executed construction
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the trace text to a file (it always goes to stdout)
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Canvas edge for the SVG figure, in pixels
        #[arg(long, default_value_t = 512)]
        canvas: u32,
    },
    /// Run seeded verification trials for one proposition
    Verify {
        /// One of: i27_i29, fp, i30, 4.1, 4.2, 4.3, bolyai
        #[arg(long)]
        prop: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Trial stream seed
        #[arg(long, env = "POSTULATUM_SEED", default_value_t = 42)]
        seed: u64,
        /// Override the proposition's headline tolerance
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Analyze a dependency graph file
    Analyze {
        /// Path to a .kg graph file
        #[arg(long)]
        graph: PathBuf,
        /// Additionally fail on unused property declarations
        #[arg(long)]
        strict: bool,
    },
}

fn cmd_construct(
    program: ProgramName,
    scene_path: &PathBuf,
    svg: Option<&PathBuf>,
    trace_path: Option<&PathBuf>,
    canvas: u32,
) -> ExitCode {
    let text = match std::fs::read_to_string(scene_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", scene_path.display());
            return ExitCode::from(2);
        }
    };
    let scene = match parse_scene(&text) {
        Ok(scene) => scene,
        Err(e) => {
            eprintln!("error: {}: {e}", scene_path.display());
            return ExitCode::from(2);
        }
    };
    let engine = Engine::default();
    let trace = match engine.run_program(&program.program(), &scene) {
        Ok(trace) => trace,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = trace.render();
    print!("{rendered}");
    if let Some(path) = trace_path {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Some(path) = svg {
        let style = RenderStyle {
            canvas,
            ..RenderStyle::default()
        };
        match render_trace_svg(&trace, &style) {
            Ok(document) => {
                if let Err(e) = std::fs::write(path, document) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if trace.succeeded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_verify(prop: &str, trials: u64, seed: u64, tol: Option<f64>) -> ExitCode {
    let proposition: Proposition = match prop.parse() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cfg = TrialConfig {
        proposition,
        trials,
        seed,
        tolerance: tol,
    };
    match run_trials(&cfg) {
        Ok(report) => {
            print!("{}", report.render());
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_analyze(graph_path: &PathBuf, strict: bool) -> ExitCode {
    let text = match std::fs::read_to_string(graph_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", graph_path.display());
            return ExitCode::from(2);
        }
    };
    let graph = match parse_graph(&text) {
        Ok(graph) => graph,
        Err(e) => {
            eprintln!("error: {}: {e}", graph_path.display());
            return ExitCode::from(2);
        }
    };
    let report = analyze(&graph);
    print!("{}", report.render(&graph));
    let mut failing = report.has_violations();
    if strict {
        let unused = graph.unused_properties();
        println!("unused properties: {}", unused.len());
        for p in &unused {
            println!("unused property: {p}");
        }
        failing = failing || !unused.is_empty();
    }
    if failing {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Construct {
            program,
            scene,
            svg,
            trace,
            canvas,
        } => cmd_construct(program, &scene, svg.as_ref(), trace.as_ref(), canvas),
        Command::Verify {
            prop,
            trials,
            seed,
            tol,
        } => cmd_verify(&prop, trials, seed, tol),
        Command::Analyze { graph, strict } => cmd_analyze(&graph, strict),
    }
}
