//! Spec-file parsing, report serialization, and DOT export.
//!
//! Input is JSON:
//!
//! ```json
//! {"graph": {"vertices": ["a", "b", "c"], "edges": [["a", "c"], ["b", "c"]]},
//!  "automorphism": {"images": {"a": "a b a^-1", "b": "b a^-1", "c": "c"}}}
//! ```
//!
//! or with `"automorphism": {"generators": [{"type": "transvection", "v": "a", "w": "b"}, …]}`.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::automorphism::{Automorphism, LsGenerator, PurityReport, Verification};
use crate::diagram::{AutomorphismDiagram, CycleClassification, CycleKind, InvariantKind, InvariantSubgraphResult};
use crate::dynamics::{Classification, GeneratorGrowth, GrowthReport, Warning};
use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, Vertex, VertexSet};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismSource {
    RawImages {
        images: Vec<Word>,
        inverse_images: Option<Vec<Word>>,
    },
    GeneratorList(Vec<LsGenerator>),
}

/// A parsed input document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub graph: Arc<SimplicialGraph>,
    pub source: AutomorphismSource,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    graph: RawGraph,
    automorphism: RawAutomorphism,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAutomorphism {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    images: Option<Map<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse_images: Option<Map<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<RawGenerator>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RawGenerator {
    Inversion { v: String },
    GraphSymmetry { perm: Map<String, Value> },
    Transvection { v: String, w: String },
    PartialConjugation { component: Vec<String>, w: String },
}

fn image_table(graph: &SimplicialGraph, table: &Map<String, Value>, field: &str) -> Result<Vec<Word>> {
    let mut images: Vec<Option<Word>> = vec![None; graph.len()];
    for (name, value) in table {
        let context = format!("automorphism.{field}.{name}");
        let v = graph.vertex(name).map_err(|e| e.in_field(&context))?;
        let text = value
            .as_str()
            .ok_or_else(|| Error::Spec(format!("{context}: expected a word string")))?;
        images[v.0] = Some(graph.parse_word(text).map_err(|e| e.in_field(&context))?);
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or_else(|| {
                Error::MissingImage(graph.name(Vertex(i)).to_string()).in_field(format!("automorphism.{field}"))
            })
        })
        .collect()
}

fn vertex_in(graph: &SimplicialGraph, name: &str, context: &str) -> Result<Vertex> {
    graph.vertex(name).map_err(|e| e.in_field(context))
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| {
            Error::Spec(format!(
                "malformed spec at line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        let mut edges = Vec::with_capacity(raw.graph.edges.len());
        for (i, edge) in raw.graph.edges.iter().enumerate() {
            match edge.as_slice() {
                [u, v] => edges.push((u.clone(), v.clone())),
                _ => {
                    return Err(Error::Spec(format!(
                        "graph.edges[{i}]: an edge lists exactly two vertices"
                    )))
                }
            }
        }
        let graph = Arc::new(SimplicialGraph::new(raw.graph.vertices, edges).map_err(|e| e.in_field("graph"))?);

        let auto = raw.automorphism;
        let source = match (auto.images, auto.generators) {
            (Some(images), None) => AutomorphismSource::RawImages {
                images: image_table(&graph, &images, "images")?,
                inverse_images: auto
                    .inverse_images
                    .map(|t| image_table(&graph, &t, "inverse_images"))
                    .transpose()?,
            },
            (None, Some(generators)) if auto.inverse_images.is_none() => {
                let list = generators
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let context = format!("automorphism.generators[{i}]");
                        Ok(match g {
                            RawGenerator::Inversion { v } => LsGenerator::Inversion(vertex_in(&graph, v, &context)?),
                            RawGenerator::Transvection { v, w } => LsGenerator::Transvection {
                                v: vertex_in(&graph, v, &context)?,
                                w: vertex_in(&graph, w, &context)?,
                            },
                            RawGenerator::PartialConjugation { component, w } => LsGenerator::PartialConjugation {
                                component: graph.vertex_set(component).map_err(|e| e.in_field(&context))?,
                                w: vertex_in(&graph, w, &context)?,
                            },
                            RawGenerator::GraphSymmetry { perm } => {
                                let mut images: Vec<Option<Vertex>> = vec![None; graph.len()];
                                for (from, to) in perm {
                                    let to = to.as_str().ok_or_else(|| {
                                        Error::Spec(format!("{context}.perm.{from}: expected a vertex name"))
                                    })?;
                                    images[vertex_in(&graph, from, &context)?.0] = Some(vertex_in(&graph, to, &context)?);
                                }
                                LsGenerator::GraphSymmetry(
                                    images
                                        .into_iter()
                                        .enumerate()
                                        .map(|(i, v)| {
                                            v.ok_or_else(|| {
                                                Error::Spec(format!(
                                                    "{context}.perm: no image for {}",
                                                    graph.name(Vertex(i))
                                                ))
                                            })
                                        })
                                        .collect::<Result<_>>()?,
                                )
                            }
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                AutomorphismSource::GeneratorList(list)
            }
            _ => {
                return Err(Error::Spec(
                    "automorphism: give either \"images\" (optionally with \"inverse_images\") or \"generators\"".into(),
                ))
            }
        };
        Ok(SpecFile { graph, source })
    }

    /// Validates the source into an [`Automorphism`].
    pub fn automorphism(&self) -> Result<Automorphism> {
        match &self.source {
            AutomorphismSource::RawImages {
                images,
                inverse_images,
            } => Automorphism::from_images(self.graph.clone(), images.clone(), inverse_images.clone()),
            AutomorphismSource::GeneratorList(list) => Automorphism::from_generators(self.graph.clone(), list.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        let g = &self.graph;
        let table = |words: &[Word]| -> Map<String, Value> {
            g.vertices()
                .map(|v| (g.name(v).to_string(), Value::String(g.format_word(&words[v.0]))))
                .collect()
        };
        let automorphism = match &self.source {
            AutomorphismSource::RawImages {
                images,
                inverse_images,
            } => RawAutomorphism {
                images: Some(table(images)),
                inverse_images: inverse_images.as_deref().map(table),
                generators: None,
            },
            AutomorphismSource::GeneratorList(list) => RawAutomorphism {
                images: None,
                inverse_images: None,
                generators: Some(
                    list.iter()
                        .map(|gen| match gen {
                            LsGenerator::Inversion(v) => RawGenerator::Inversion { v: g.name(*v).into() },
                            LsGenerator::Transvection { v, w } => RawGenerator::Transvection {
                                v: g.name(*v).into(),
                                w: g.name(*w).into(),
                            },
                            LsGenerator::PartialConjugation { component, w } => RawGenerator::PartialConjugation {
                                component: g.set_names(component),
                                w: g.name(*w).into(),
                            },
                            LsGenerator::GraphSymmetry(perm) => RawGenerator::GraphSymmetry {
                                perm: g
                                    .vertices()
                                    .map(|v| (g.name(v).to_string(), Value::String(g.name(perm[v.0]).into())))
                                    .collect(),
                            },
                        })
                        .collect(),
                ),
            },
        };
        let raw = RawSpec {
            graph: RawGraph {
                vertices: g.names().to_vec(),
                edges: g.edge_names().into_iter().map(|(u, v)| vec![u, v]).collect(),
            },
            automorphism,
        };
        serde_json::to_string_pretty(&raw).expect("spec serializes")
    }
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    SpecFile::parse(text)
}

/// DOT rendering of the diagram. Complete cyclic components are boxes,
/// edgeless ones double ellipses.
pub fn export_dot(diagram: &AutomorphismDiagram, cycles: &CycleClassification) -> String {
    let graph = diagram.graph();
    let mut out = String::from("digraph automorphism_diagram {\n");
    for v in graph.vertices() {
        let attrs = match cycles.kind_of(v) {
            Some(CycleKind::Complete) => " [shape=box]",
            Some(CycleKind::Empty) => " [shape=ellipse,peripheries=2]",
            _ => "",
        };
        let _ = writeln!(out, "  \"{}\"{attrs};", graph.name(v));
    }
    for (u, v) in diagram.arcs() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", graph.name(u), graph.name(v));
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub images: Map<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityFlags {
    pub pure: bool,
    pub support_ok: Map<String, Value>,
    pub cyclically_reduced_ok: Map<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareWitnessNames {
    pub edge: [String; 2],
    pub pair: [String; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct Flags {
    pub relations: bool,
    pub verification: Verification,
    pub purity: PurityFlags,
    pub square: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_witness: Option<SquareWitnessNames>,
    pub positive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleEntry {
    pub vertices: Vec<String>,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[[String; 2]; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionSection {
    pub layers: Vec<Vec<String>>,
    pub height: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramSection {
    pub arcs: Vec<[String; 2]>,
    pub components: Vec<Vec<String>>,
    pub terminal_partition: Option<PartitionSection>,
    pub cycles: Vec<CycleEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorRow {
    pub generator: String,
    pub lengths: Vec<u64>,
    pub truncated: bool,
    pub lambda_hat: f64,
    pub window: [usize; 2],
    pub degree_hat: Option<f64>,
    pub degree_residual: Option<f64>,
    pub growth: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthSection {
    pub k_max: usize,
    pub length_cap: usize,
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    pub lambda_phi_hat: f64,
    pub argmax_generator: String,
    pub generators: Vec<GeneratorRow>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantSection {
    pub starting_generator: String,
    pub down_set: Vec<String>,
    pub trimmed: Vec<String>,
    pub delta: Vec<String>,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<Vec<String>>,
}

/// Everything the CLI prints, in machine-readable form.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    pub flags: Flags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure_power: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_subgraph: Option<InvariantSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

fn names(graph: &SimplicialGraph, set: &VertexSet) -> Vec<String> {
    graph.set_names(set)
}

fn pair(graph: &SimplicialGraph, (u, v): (Vertex, Vertex)) -> [String; 2] {
    [graph.name(u).to_string(), graph.name(v).to_string()]
}

fn bool_map(graph: &SimplicialGraph, values: &[bool]) -> Map<String, Value> {
    graph
        .vertices()
        .map(|v| (graph.name(v).to_string(), Value::Bool(values[v.0])))
        .collect()
}

pub fn warning_text(graph: &SimplicialGraph, warning: &Warning) -> String {
    match warning {
        Warning::Truncated(v) => format!("truncated:{}", graph.name(*v)),
        other => other.to_string(),
    }
}

impl Flags {
    pub fn of(phi: &Automorphism) -> Flags {
        let graph = phi.graph();
        let purity: PurityReport = phi.purity();
        let square = phi.square_check();
        Flags {
            relations: true,
            verification: phi.verification(),
            purity: PurityFlags {
                pure: purity.is_pure(),
                support_ok: bool_map(graph, &purity.support_ok),
                cyclically_reduced_ok: bool_map(graph, &purity.cyclically_reduced_ok),
            },
            square: square.is_square(),
            square_witness: square.witness.map(|w| SquareWitnessNames {
                edge: pair(graph, w.edge),
                pair: pair(graph, w.pair),
            }),
            positive: phi.is_positive(),
        }
    }
}

impl DiagramSection {
    pub fn of(diagram: &AutomorphismDiagram, cycles: &CycleClassification) -> DiagramSection {
        let graph = diagram.graph();
        DiagramSection {
            arcs: diagram.arcs().into_iter().map(|a| pair(graph, a)).collect(),
            components: diagram.components().iter().map(|c| names(graph, c)).collect(),
            terminal_partition: diagram.terminal_partition().ok().map(|t| PartitionSection {
                layers: t.layers().iter().map(|l| names(graph, l)).collect(),
                height: t.height(),
            }),
            cycles: cycles
                .sccs
                .iter()
                .map(|c| {
                    let (kind, witness) = match &c.kind {
                        CycleKind::Complete => ("complete", None),
                        CycleKind::Empty => ("empty", None),
                        CycleKind::Violation {
                            commuting,
                            noncommuting,
                        } => (
                            "violation",
                            Some([pair(graph, *commuting), pair(graph, *noncommuting)]),
                        ),
                    };
                    CycleEntry {
                        vertices: names(graph, &c.vertices),
                        kind: kind.into(),
                        witness,
                    }
                })
                .collect(),
        }
    }
}

impl InvariantSection {
    pub fn of(graph: &SimplicialGraph, result: &InvariantSubgraphResult) -> InvariantSection {
        let (kind, core) = match &result.kind {
            InvariantKind::CompleteCase => ("complete_case", None),
            InvariantKind::EmptyCoreCase { core } => ("empty_core_case", Some(names(graph, core))),
            InvariantKind::AcyclicCase => ("acyclic_case", None),
        };
        InvariantSection {
            starting_generator: graph.name(result.starting_generator).to_string(),
            down_set: names(graph, &result.down_set),
            trimmed: names(graph, &result.trimmed),
            delta: names(graph, result.delta()),
            kind: kind.into(),
            core,
        }
    }
}

impl GrowthSection {
    pub fn of(graph: &SimplicialGraph, report: &GrowthReport, k_max: usize, length_cap: usize) -> GrowthSection {
        let (classification, degree_bound, per) = match &report.classification {
            Classification::PolynomialByTheorem { degree_bound } => {
                ("polynomial_by_theorem", Some(*degree_bound), None)
            }
            Classification::PerGeneratorMixed(per) => ("per_generator_mixed", None, Some(per)),
            Classification::Inconclusive => ("inconclusive", None, None),
        };
        let generators = report
            .orbits
            .iter()
            .zip(&report.estimates.per_generator)
            .zip(&report.degree_fits)
            .map(|((orbit, estimate), fit)| GeneratorRow {
                generator: graph.name(orbit.generator).to_string(),
                lengths: orbit.lengths.clone(),
                truncated: orbit.truncated,
                lambda_hat: estimate.lambda_hat,
                window: [estimate.window.start, estimate.window.end],
                degree_hat: fit.map(|f| f.degree_hat),
                degree_residual: fit.map(|f| f.residual),
                growth: per.map(|per| match &per[orbit.generator.0] {
                    GeneratorGrowth::PolynomialByTheorem { degree_bound } => {
                        format!("polynomial_by_theorem({degree_bound})")
                    }
                    GeneratorGrowth::ExponentialEstimate { lambda_hat } => {
                        format!("exponential_estimate({lambda_hat:.4})")
                    }
                }),
            })
            .collect();
        GrowthSection {
            k_max,
            length_cap,
            classification: classification.into(),
            degree_bound,
            lambda_phi_hat: report.estimates.lambda_phi_hat,
            argmax_generator: graph.name(report.estimates.argmax_generator).to_string(),
            generators,
            warnings: report.warnings.iter().map(|w| warning_text(graph, w)).collect(),
        }
    }
}

impl AnalysisReport {
    /// Input echo and verification flags only.
    pub fn check(phi: &Automorphism) -> AnalysisReport {
        let graph = phi.graph();
        AnalysisReport {
            input: InputEcho {
                vertices: graph.names().to_vec(),
                edges: graph.edges().into_iter().map(|e| pair(graph, e)).collect(),
                images: graph
                    .vertices()
                    .map(|v| (graph.name(v).to_string(), Value::String(graph.format_word(phi.image(v)))))
                    .collect(),
            },
            flags: Flags::of(phi),
            pure_power: None,
            diagram: None,
            growth: None,
            invariant_subgraph: None,
            violation: None,
        }
    }

    pub fn with_diagram(mut self, diagram: &AutomorphismDiagram, cycles: &CycleClassification) -> Self {
        self.diagram = Some(DiagramSection::of(diagram, cycles));
        if let Some(c) = cycles.violation() {
            self.violation = Some(format!(
                "cyclic component {{{}}} is neither complete nor edgeless",
                diagram.graph().set_names(&c.vertices).join(", ")
            ));
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
