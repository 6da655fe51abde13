//! Command-line front end. `run` is the whole program minus process exit,
//! so tests can drive it with in-memory streams.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use raagdyn::automorphism::Automorphism;
use raagdyn::diagram::{AutomorphismDiagram, CycleKind, InvariantKind};
use raagdyn::dynamics::{
    self, Classification, GeneratorGrowth, DEFAULT_K_MAX, DEFAULT_LENGTH_CAP,
};
use raagdyn::io::{export_dot, AnalysisReport, GeneratorRow, GrowthSection, InvariantSection, SpecFile};
use raagdyn::{Error, SimplicialGraph, VertexSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Exponent search limit for `--pure-power`.
pub const PURE_POWER_LIMIT: u64 = 1 << 20;

pub const THREADS_VAR: &str = "RAAGDYN_THREADS";

#[derive(Parser, Debug)]
#[command(name = "raagdyn", version, about = "Growth of right-angled Artin group automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the automorphism and print its flags.
    Check { file: PathBuf },
    /// Reduce a word over the file's graph.
    Reduce {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Print the automorphism diagram.
    Diagram {
        file: PathBuf,
        /// Also write the diagram as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Full analysis: flags, diagram, growth, invariant subgraph.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K_MAX, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(3..))]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_LENGTH_CAP, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        cap: usize,
        /// Replace φ by its least power acting trivially mod 2.
        #[arg(long)]
        pure_power: bool,
    },
    /// Per-generator orbit lengths and dilatation estimates.
    Dilatation {
        file: PathBuf,
        #[arg(long, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(3..))]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_LENGTH_CAP, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        cap: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e.root(), Error::Violation { .. }) {
            EXIT_VIOLATION
        } else {
            EXIT_INVALID
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let threads = match std::env::var(THREADS_VAR) {
        Ok(value) => match value.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                let _ = writeln!(err, "error: {THREADS_VAR} must be a positive integer, got {value:?}");
                return EXIT_USAGE;
            }
        },
        Err(_) => None,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return EXIT_USAGE;
        }
    };
    let mut buffer = Vec::new();
    let outcome = pool.install(|| dispatch(cli.command, &mut buffer));
    if let Err(e) = out.write_all(&buffer) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn load(path: &Path) -> std::result::Result<(SpecFile, Automorphism), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    let spec = SpecFile::parse(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let phi = spec
        .automorphism()
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    Ok((spec, phi))
}

fn emit(out: &mut Vec<u8>, text: &str) -> Outcome {
    out.extend_from_slice(text.as_bytes());
    Ok(EXIT_OK)
}

fn report_block(text: &mut String, json: &str) {
    text.push_str("#BEGIN-REPORT\n");
    text.push_str(json);
    text.push_str("\n#END-REPORT\n");
}

fn set_text(graph: &SimplicialGraph, set: &VertexSet) -> String {
    format!("{{{}}}", graph.set_names(set).join(", "))
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> Outcome {
    match command {
        Command::Check { file } => check(&file, out),
        Command::Reduce { file, word } => reduce(&file, &word, out),
        Command::Diagram { file, dot } => diagram(&file, dot.as_deref(), out),
        Command::Analyze {
            file,
            kmax,
            cap,
            pure_power,
        } => analyze(&file, kmax, cap, pure_power, out),
        Command::Dilatation { file, kmax, cap } => dilatation(&file, kmax, cap, out),
    }
}

fn failing(map: &serde_json::Map<String, serde_json::Value>) -> Vec<&str> {
    map.iter()
        .filter(|(_, v)| v.as_bool() == Some(false))
        .map(|(k, _)| k.as_str())
        .collect()
}

fn flag_lines(text: &mut String, report: &AnalysisReport) {
    let flags = &report.flags;
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(text, "relations preserved: yes");
    let _ = writeln!(text, "verification: {:?}", flags.verification);
    let _ = writeln!(text, "positive: {}", yes_no(flags.positive));
    let _ = writeln!(text, "square: {}", yes_no(flags.square));
    if let Some(w) = &flags.square_witness {
        let _ = writeln!(
            text,
            "  witness: edge ({0}, {1}), yet {2} in supp phi({0}) and {3} in supp phi({1}) do not commute",
            w.edge[0], w.edge[1], w.pair[0], w.pair[1]
        );
    }
    let _ = writeln!(text, "pure: {}", yes_no(flags.purity.pure));
    let support = failing(&flags.purity.support_ok);
    let cyclic = failing(&flags.purity.cyclically_reduced_ok);
    if !support.is_empty() {
        let _ = writeln!(text, "  support clause fails at: {}", support.join(", "));
    }
    if !cyclic.is_empty() {
        let _ = writeln!(text, "  image not cyclically reduced at: {}", cyclic.join(", "));
    }
}

fn check(file: &Path, out: &mut Vec<u8>) -> Outcome {
    let (_, phi) = load(file)?;
    let report = AnalysisReport::check(&phi);
    let mut text = String::new();
    flag_lines(&mut text, &report);
    report_block(&mut text, &report.to_json());
    emit(out, &text)
}

fn reduce(file: &Path, word: &str, out: &mut Vec<u8>) -> Outcome {
    let (spec, _) = load(file)?;
    let graph = &spec.graph;
    let w = graph.parse_word(word).map_err(|e| Failure::invalid(format!("--word: {e}")))?;
    let reduced = graph.reduce(&w)?;
    let normal = graph.normal_form(&w)?;
    let cyclic = graph.cyclically_reduce(&w)?;
    let mut text = String::new();
    let _ = writeln!(text, "reduced: {}", graph.format_word(&reduced));
    let _ = writeln!(text, "length: {}", reduced.len());
    let _ = writeln!(text, "normal form: {}", graph.format_word(&normal));
    let _ = writeln!(text, "cyclically reduced: {}", graph.format_word(&cyclic.core));
    let _ = writeln!(text, "conjugator: {}", graph.format_word(&cyclic.conjugator));
    emit(out, &text)
}

fn diagram_lines(text: &mut String, diagram: &AutomorphismDiagram, cycles: &raagdyn::CycleClassification) {
    let graph = diagram.graph();
    let _ = writeln!(text, "arcs:");
    for (u, v) in diagram.arc_names() {
        let _ = writeln!(text, "  {u} -> {v}");
    }
    let components: Vec<String> = diagram.components().iter().map(|c| set_text(graph, c)).collect();
    let _ = writeln!(text, "components: {}", components.join(" "));
    match diagram.terminal_partition() {
        Ok(partition) => {
            let layers: Vec<String> = partition.layers().iter().map(|l| set_text(graph, l)).collect();
            let _ = writeln!(text, "acyclic; terminal partition: {}", layers.join(" "));
            let _ = writeln!(text, "height: {}", partition.height());
        }
        Err(_) => {
            let _ = writeln!(text, "cycles:");
            for c in &cycles.sccs {
                let kind = match &c.kind {
                    CycleKind::Complete => "complete".to_string(),
                    CycleKind::Empty => "empty".to_string(),
                    CycleKind::Violation {
                        commuting,
                        noncommuting,
                    } => format!(
                        "VIOLATION ({} and {} commute, {} and {} do not)",
                        graph.name(commuting.0),
                        graph.name(commuting.1),
                        graph.name(noncommuting.0),
                        graph.name(noncommuting.1)
                    ),
                };
                let _ = writeln!(text, "  {} {kind}", set_text(graph, &c.vertices));
            }
        }
    }
}

fn diagram(file: &Path, dot: Option<&Path>, out: &mut Vec<u8>) -> Outcome {
    let (_, phi) = load(file)?;
    let diagram = AutomorphismDiagram::build(&phi);
    let cycles = diagram.cycle_analysis();
    if let Some(path) = dot {
        std::fs::write(path, export_dot(&diagram, &cycles))
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut text = String::new();
    diagram_lines(&mut text, &diagram, &cycles);
    let report = AnalysisReport::check(&phi).with_diagram(&diagram, &cycles);
    report_block(&mut text, &report.to_json());
    emit(out, &text)?;
    Ok(if cycles.violation().is_some() { EXIT_VIOLATION } else { EXIT_OK })
}

fn analyze(file: &Path, k_max: usize, cap: usize, pure_power: bool, out: &mut Vec<u8>) -> Outcome {
    let (_, original) = load(file)?;
    let mut text = String::new();
    let (phi, exponent) = if pure_power {
        let pp = original
            .pure_power_capped(PURE_POWER_LIMIT, cap)
            .map_err(|e| Failure::invalid(format!("--pure-power: {e}")))?;
        let _ = writeln!(text, "pure power: N = {}", pp.exponent);
        (pp.power, Some(pp.exponent))
    } else {
        (original, None)
    };
    let graph = phi.graph();
    let diagram = AutomorphismDiagram::build(&phi);
    let cycles = diagram.cycle_analysis();
    let mut report = AnalysisReport::check(&phi).with_diagram(&diagram, &cycles);
    report.pure_power = exponent;
    flag_lines(&mut text, &report);
    diagram_lines(&mut text, &diagram, &cycles);

    let mut code = if cycles.violation().is_some() { EXIT_VIOLATION } else { EXIT_OK };
    match dynamics::classify_growth(&phi, k_max, cap) {
        Ok(growth) => {
            let section = GrowthSection::of(graph, &growth, k_max, cap);
            let _ = match &growth.classification {
                Classification::PolynomialByTheorem { degree_bound } => {
                    writeln!(text, "classification: polynomial by theorem, degree at most {degree_bound}")
                }
                Classification::PerGeneratorMixed(per) => {
                    let _ = writeln!(text, "classification: per generator");
                    for (v, g) in graph.vertices().zip(per) {
                        let _ = match g {
                            GeneratorGrowth::PolynomialByTheorem { degree_bound } => {
                                writeln!(text, "  {}: polynomial, degree at most {degree_bound}", graph.name(v))
                            }
                            GeneratorGrowth::ExponentialEstimate { lambda_hat } => {
                                writeln!(text, "  {}: exponential estimate, lambda_hat = {lambda_hat:.4}", graph.name(v))
                            }
                        };
                    }
                    Ok(())
                }
                Classification::Inconclusive => writeln!(text, "classification: inconclusive"),
            };
            let _ = writeln!(
                text,
                "lambda_hat(phi) = {:.4} at {}",
                growth.estimates.lambda_phi_hat,
                graph.name(growth.estimates.argmax_generator)
            );
            if let Some(result) = &growth.invariant_subgraph {
                let section = InvariantSection::of(graph, result);
                let kind = match &result.kind {
                    InvariantKind::CompleteCase => "complete".to_string(),
                    InvariantKind::EmptyCoreCase { core } => format!("empty core {}", set_text(graph, core)),
                    InvariantKind::AcyclicCase => "acyclic".to_string(),
                };
                let _ = writeln!(
                    text,
                    "invariant subgraph from {}: {} ({kind})",
                    section.starting_generator,
                    set_text(graph, result.delta())
                );
                report.invariant_subgraph = Some(section);
            }
            for w in &section.warnings {
                let _ = writeln!(text, "warning: {w}");
            }
            report.growth = Some(section);
        }
        Err(e) if matches!(e.root(), Error::Violation { .. }) => {
            let _ = writeln!(text, "VIOLATION: {e}");
            report.violation = Some(e.to_string());
            code = EXIT_VIOLATION;
        }
        Err(e) => return Err(e.into()),
    }
    report_block(&mut text, &report.to_json());
    emit(out, &text)?;
    Ok(code)
}

fn dilatation(file: &Path, k_max: usize, cap: usize, out: &mut Vec<u8>) -> Outcome {
    let (_, phi) = load(file)?;
    let graph = phi.graph();
    let orbits = dynamics::iterate_lengths(&phi, k_max, cap);
    let estimates = dynamics::estimate_dilatation(&orbits)?;
    let rows: Vec<GeneratorRow> = orbits
        .iter()
        .zip(&estimates.per_generator)
        .map(|(orbit, estimate)| {
            let fit = dynamics::fit_polynomial_degree(orbit).ok();
            GeneratorRow {
                generator: graph.name(orbit.generator).to_string(),
                lengths: orbit.lengths.clone(),
                truncated: orbit.truncated,
                lambda_hat: estimate.lambda_hat,
                window: [estimate.window.start, estimate.window.end],
                degree_hat: fit.map(|f| f.degree_hat),
                degree_residual: fit.map(|f| f.residual),
                growth: None,
            }
        })
        .collect();
    let mut text = String::new();
    let _ = writeln!(text, "{:<12} {:>10} {:>6}  lengths", "generator", "lambda_hat", "steps");
    for row in &rows {
        let lengths: Vec<String> = row.lengths.iter().map(u64::to_string).collect();
        let _ = writeln!(
            text,
            "{:<12} {:>10.4} {:>6}  {}{}",
            row.generator,
            row.lambda_hat,
            row.lengths.len() - 1,
            lengths.join(" "),
            if row.truncated { " (truncated)" } else { "" }
        );
    }
    let _ = writeln!(
        text,
        "lambda_hat(phi) = {:.4} at {}",
        estimates.lambda_phi_hat,
        graph.name(estimates.argmax_generator)
    );
    let json = serde_json::json!({
        "k_max": k_max,
        "length_cap": cap,
        "lambda_phi_hat": estimates.lambda_phi_hat,
        "argmax_generator": graph.name(estimates.argmax_generator),
        "generators": rows,
    });
    report_block(&mut text, &serde_json::to_string_pretty(&json).expect("report serializes"));
    emit(out, &text)
}
