//! The automorphism diagram D_φ: an arc `s → t` whenever `t ≠ s` occurs in
//! the reduced image `φ(s)`.
//!
//! Cycles may revisit vertices, so every cycle-level statement is made on
//! strongly connected components with at least one internal arc. A vertex
//! lies on some cycle iff it lies in such a component.

use std::sync::Arc;

use crate::automorphism::Automorphism;
use crate::digraph::DirectedGraph;
use crate::error::{Error, Result};
use crate::graph::{InducedKind, SimplicialGraph, Vertex, VertexSet};
use crate::word::Word;

#[derive(Clone, Debug)]
pub struct AutomorphismDiagram {
    graph: Arc<SimplicialGraph>,
    underlying: DirectedGraph,
}

/// Layers `T₀, …, T_h` of an acyclic diagram, peeled from the sinks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalPartition {
    layers: Vec<VertexSet>,
}

impl TerminalPartition {
    pub fn layers(&self) -> &[VertexSet] {
        &self.layers
    }

    pub fn height(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn layer_of(&self, v: Vertex) -> Option<usize> {
        self.layers.iter().position(|layer| layer.contains(v))
    }

    /// `W_i = T₀ ∪ … ∪ T_i`; empty for `i < 0`.
    pub fn lower_union(&self, i: isize) -> VertexSet {
        if i < 0 {
            return VertexSet::new();
        }
        self.layers
            .iter()
            .take(i as usize + 1)
            .fold(VertexSet::new(), |acc, layer| acc.union(layer))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleKind {
    Complete,
    Empty,
    /// Both a commuting and a non-commuting pair inside one cyclic component.
    Violation {
        commuting: (Vertex, Vertex),
        noncommuting: (Vertex, Vertex),
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicComponent {
    pub vertices: VertexSet,
    pub kind: CycleKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleClassification {
    pub sccs: Vec<CyclicComponent>,
}

impl CycleClassification {
    pub fn violation(&self) -> Option<&CyclicComponent> {
        self.sccs
            .iter()
            .find(|c| matches!(c.kind, CycleKind::Violation { .. }))
    }

    pub fn kind_of(&self, v: Vertex) -> Option<&CycleKind> {
        self.sccs
            .iter()
            .find(|c| c.vertices.contains(v))
            .map(|c| &c.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// `φ(s) = t₀ · s^ε · t₁`.
    Simple {
        t0: Word,
        epsilon: i8,
        t1: Word,
        /// Whether `supp(t₀) ∪ supp(t₁) ⊆ W_{i-1}`.
        within_lower_layers: bool,
    },
    /// The reduced image holds `occurrences ≠ 1` letters of `s`.
    NotSimple { occurrences: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantKind {
    /// The invariant subgraph Δ is complete.
    CompleteCase,
    /// Every cycle inside Δ lives on the edgeless vertex set `core`.
    EmptyCoreCase { core: VertexSet },
    /// The down-set of the starting generator carries no cycle.
    AcyclicCase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSubgraphResult {
    pub starting_generator: Vertex,
    pub down_set: VertexSet,
    pub trimmed: VertexSet,
    pub component_used: VertexSet,
    pub kind: InvariantKind,
}

impl InvariantSubgraphResult {
    /// The invariant subgraph Δ (empty in the acyclic case).
    pub fn delta(&self) -> &VertexSet {
        &self.component_used
    }
}

fn induced_witnesses(graph: &SimplicialGraph, set: &VertexSet) -> (Option<(Vertex, Vertex)>, Option<(Vertex, Vertex)>) {
    let members: Vec<Vertex> = set.iter().collect();
    let pairs = || {
        members
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| members[i + 1..].iter().map(move |&v| (u, v)))
    };
    (
        pairs().find(|&(u, v)| graph.adjacent(u, v)),
        pairs().find(|&(u, v)| !graph.adjacent(u, v)),
    )
}

impl AutomorphismDiagram {
    pub fn build(phi: &Automorphism) -> Self {
        let graph = phi.graph_arc().clone();
        let arcs = graph.vertices().flat_map(|s| {
            phi.image(s)
                .letter_support()
                .iter()
                .filter(move |&t| t != s)
                .map(move |t| (s, t))
                .collect::<Vec<_>>()
        });
        let underlying = DirectedGraph::new(graph.len(), arcs).expect("arcs avoid self-loops");
        Self { graph, underlying }
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn digraph(&self) -> &DirectedGraph {
        &self.underlying
    }

    /// Arcs in declaration order.
    pub fn arcs(&self) -> Vec<(Vertex, Vertex)> {
        self.underlying.arcs().collect()
    }

    pub fn arc_names(&self) -> Vec<(String, String)> {
        self.underlying
            .arcs()
            .map(|(u, v)| (self.graph.name(u).to_string(), self.graph.name(v).to_string()))
            .collect()
    }

    /// `d(s)`: everything reachable from `s`, `s` included.
    pub fn down_set(&self, s: Vertex) -> Result<VertexSet> {
        self.graph.check_vertex(s)?;
        Ok(self.underlying.reachable(s))
    }

    /// Deletes sources until none remain. Empty iff `set` induces an acyclic diagram.
    pub fn trim(&self, set: &VertexSet) -> VertexSet {
        self.underlying.trim_sources(set)
    }

    pub fn is_acyclic(&self) -> bool {
        self.trim(&self.graph.all()).is_empty()
    }

    pub fn terminal_partition(&self) -> Result<TerminalPartition> {
        self.terminal_partition_within(&self.graph.all())
    }

    /// Terminal partition of the sub-diagram induced on `set`.
    pub fn terminal_partition_within(&self, set: &VertexSet) -> Result<TerminalPartition> {
        self.underlying
            .sink_layers(set)
            .map(|layers| TerminalPartition { layers })
            .ok_or(Error::CyclePresent)
    }

    /// Classifies every cycle-carrying strongly connected component as a
    /// complete or edgeless subgraph of Γ.
    pub fn cycle_analysis(&self) -> CycleClassification {
        let sccs = self
            .underlying
            .strongly_connected_components()
            .into_iter()
            .filter(|c| self.underlying.has_internal_arc(c))
            .map(|vertices| {
                let kind = match self.graph.classify_induced(&vertices).expect("nonempty") {
                    InducedKind::Complete => CycleKind::Complete,
                    InducedKind::Empty => CycleKind::Empty,
                    InducedKind::Mixed => {
                        let (commuting, noncommuting) = induced_witnesses(&self.graph, &vertices);
                        CycleKind::Violation {
                            commuting: commuting.expect("mixed has an edge"),
                            noncommuting: noncommuting.expect("mixed has a non-edge"),
                        }
                    }
                };
                CyclicComponent { vertices, kind }
            })
            .collect();
        CycleClassification { sccs }
    }

    /// Union of the cycle-carrying components that lie inside `set`.
    pub fn cyclic_core(&self, set: &VertexSet) -> VertexSet {
        self.underlying
            .strongly_connected_components()
            .into_iter()
            .filter(|c| c.is_subset(set) && self.underlying.has_internal_arc(c))
            .fold(VertexSet::new(), |acc, c| acc.union(&c))
    }

    /// Connected components of the underlying undirected graph.
    pub fn components(&self) -> Vec<VertexSet> {
        self.underlying.weak_components()
    }

    /// Extracts the invariant subgraph Δ reached from `start`.
    ///
    /// `dilatation`, when given, holds one estimate per generator and picks
    /// the component of the trimmed down-set with the largest estimate.
    /// Otherwise the component holding the least vertex is used.
    pub fn invariant_subgraph(
        &self,
        start: Vertex,
        dilatation: Option<&[f64]>,
    ) -> Result<InvariantSubgraphResult> {
        let down_set = self.down_set(start)?;
        let trimmed = self.trim(&down_set);
        if trimmed.is_empty() {
            return Ok(InvariantSubgraphResult {
                starting_generator: start,
                down_set,
                trimmed,
                component_used: VertexSet::new(),
                kind: InvariantKind::AcyclicCase,
            });
        }
        let components = self.underlying.weak_components_within(&trimmed);
        let component_used = match dilatation {
            Some(lambda) => {
                let best = |c: &VertexSet| c.iter().map(|v| lambda[v.0]).fold(f64::NEG_INFINITY, f64::max);
                let mut chosen = &components[0];
                for c in &components[1..] {
                    if best(c) > best(chosen) {
                        chosen = c;
                    }
                }
                chosen.clone()
            }
            None => components[0].clone(),
        };
        let core = self.cyclic_core(&component_used);
        let violation = |set: &VertexSet| {
            let (commuting, noncommuting) = induced_witnesses(&self.graph, set);
            let name = |(u, v): (Vertex, Vertex)| {
                (self.graph.name(u).to_string(), self.graph.name(v).to_string())
            };
            Error::Violation {
                vertices: self.graph.set_names(set),
                commuting: name(commuting.expect("mixed has an edge")),
                noncommuting: name(noncommuting.expect("mixed has a non-edge")),
            }
        };
        let kind = match self.graph.classify_induced(&core)? {
            InducedKind::Mixed => return Err(violation(&core)),
            InducedKind::Empty => InvariantKind::EmptyCoreCase { core },
            InducedKind::Complete => match self.graph.classify_induced(&component_used)? {
                InducedKind::Complete => InvariantKind::CompleteCase,
                _ => return Err(violation(&component_used)),
            },
        };
        Ok(InvariantSubgraphResult {
            starting_generator: start,
            down_set,
            trimmed,
            component_used,
            kind,
        })
    }
}

/// Splits `φ(s)` around its unique `s`-letter.
pub fn decompose_image(
    phi: &Automorphism,
    partition: &TerminalPartition,
    s: Vertex,
) -> Result<Decomposition> {
    phi.graph().check_vertex(s)?;
    let layer = partition.layer_of(s).ok_or(Error::CyclePresent)?;
    let image = phi.image(s);
    let occurrences = image.occurrences(s);
    if occurrences != 1 {
        return Ok(Decomposition::NotSimple { occurrences });
    }
    let letters = image.letters();
    let at = letters
        .iter()
        .position(|l| l.generator() == s)
        .expect("one occurrence");
    let t0 = Word::from(letters[..at].to_vec());
    let t1 = Word::from(letters[at + 1..].to_vec());
    let lower = partition.lower_union(layer as isize - 1);
    let within_lower_layers =
        t0.letter_support().is_subset(&lower) && t1.letter_support().is_subset(&lower);
    Ok(Decomposition::Simple {
        t0,
        epsilon: letters[at].sign() as i8,
        t1,
        within_lower_layers,
    })
}
