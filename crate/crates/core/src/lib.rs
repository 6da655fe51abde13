//! Growth dynamics of automorphisms of right-angled Artin groups.
//!
//! The crate validates automorphisms given by generator images or by
//! Laurence–Servatius generators, builds the automorphism diagram, classifies
//! growth (polynomial when the diagram is acyclic, exponential by empirical
//! dilatation otherwise), and extracts an invariant subgraph that is either
//! complete or carries an edgeless cycle core.

pub mod automorphism;
pub mod diagram;
pub mod digraph;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod io;
pub mod word;

pub use automorphism::{Automorphism, LsGenerator, Mod2Matrix, PurityReport, SquareReport, Verification};
pub use diagram::{AutomorphismDiagram, CycleClassification, InvariantSubgraphResult, TerminalPartition};
pub use digraph::DirectedGraph;
pub use dynamics::{DilatationEstimate, GrowthReport, OrbitLengths};
pub use error::{Error, Result};
pub use graph::{InducedKind, SimplicialGraph, Vertex, VertexSet};
pub use word::{CyclicForm, Letter, Reducer, Word};
