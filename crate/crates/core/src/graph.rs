//! Finite simplicial graphs: the commutation law of a right-angled Artin group.
//!
//! Vertices are addressed by [`Vertex`] indices in declaration order. Every
//! iteration in this crate walks vertices in that order, which is what makes
//! tie-breaking deterministic downstream.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Index of a vertex in its ambient graph's declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub usize);

impl Vertex {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of an ambient vertex set, iterated in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(BTreeSet<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Vertex) -> Self {
        Self(BTreeSet::from([v]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        self.0.remove(&v)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        Self(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        Self(self.0.difference(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        Self(self.0.intersection(&other.0).copied().collect())
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl Extend<Vertex> for VertexSet {
    fn extend<I: IntoIterator<Item = Vertex>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, Vertex>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// How an induced subgraph looks with respect to commutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InducedKind {
    Complete,
    Empty,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub link: VertexSet,
    pub star: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementAnalysis {
    pub complement: SimplicialGraph,
    /// One complement component against everything else, when the graph is a join.
    pub join_parts: Option<(VertexSet, VertexSet)>,
}

impl ComplementAnalysis {
    pub fn is_join(&self) -> bool {
        self.join_parts.is_some()
    }
}

/// A finite simple graph Γ = (V, E).
#[derive(Clone)]
pub struct SimplicialGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    adjacency: Vec<bool>,
    // For each x: the vertices that do not commute with x, x itself included.
    blockers: Vec<Vec<Vertex>>,
}

impl PartialEq for SimplicialGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.adjacency == other.adjacency
    }
}

impl Eq for SimplicialGraph {}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialGraph")
            .field("vertices", &self.names)
            .field("edges", &self.edge_names())
            .finish()
    }
}

pub fn validate_vertex_name(name: &str) -> Result<()> {
    let bad = name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '^' | '-' | '#'))
        || name == "1";
    if bad {
        return Err(Error::InvalidVertexName(name.to_string()));
    }
    Ok(())
}

impl SimplicialGraph {
    /// Builds a graph from vertex names and undirected edges given by name.
    ///
    /// Repeated edges are merged; loops and undeclared endpoints are errors.
    pub fn new<V, S, E, T>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (T, T)>,
        T: AsRef<str>,
    {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        for name in vertices {
            let name: String = name.into();
            validate_vertex_name(&name)?;
            if index.insert(name.clone(), Vertex(names.len())).is_some() {
                return Err(Error::DuplicateVertex(name));
            }
            names.push(name);
        }
        let n = names.len();
        let mut graph = Self {
            names,
            index,
            adjacency: vec![false; n * n],
            blockers: Vec::new(),
        };
        for (u, v) in edges {
            let (u, v) = (graph.vertex(u.as_ref())?, graph.vertex(v.as_ref())?);
            if u == v {
                return Err(Error::NonSimpleEdge(graph.names[u.0].clone()));
            }
            graph.adjacency[u.0 * n + v.0] = true;
            graph.adjacency[v.0 * n + u.0] = true;
        }
        graph.rebuild_blockers();
        Ok(graph)
    }

    fn from_parts(names: Vec<String>, adjacency: Vec<bool>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), Vertex(i)))
            .collect();
        let mut graph = Self {
            names,
            index,
            adjacency,
            blockers: Vec::new(),
        };
        graph.rebuild_blockers();
        graph
    }

    fn rebuild_blockers(&mut self) {
        let n = self.len();
        self.blockers = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| !self.adjacency[x * n + y])
                    .map(Vertex)
                    .collect()
            })
            .collect();
    }

    /// Complete graph on the given names.
    pub fn complete<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let edges: Vec<(String, String)> = names
            .iter()
            .enumerate()
            .flat_map(|(i, u)| names[i + 1..].iter().map(move |v| (u.clone(), v.clone())))
            .collect();
        Self::new(names.clone(), edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = Vertex> + ExactSizeIterator {
        (0..self.len()).map(Vertex)
    }

    pub fn all(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<VertexSet> {
        names.into_iter().map(|s| self.vertex(s.as_ref())).collect()
    }

    pub fn set_names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.names[v.0].clone()).collect()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.0 < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(v.0))
        }
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<()> {
        set.iter().try_for_each(|v| self.check_vertex(v))
    }

    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u.0 * self.len() + v.0]
    }

    /// Generators commute when they are equal or joined by an edge.
    #[inline]
    pub fn commute(&self, u: Vertex, v: Vertex) -> bool {
        u == v || self.adjacent(u, v)
    }

    /// Vertices outside the link of `x`, including `x` itself.
    #[inline]
    pub fn blockers(&self, x: Vertex) -> &[Vertex] {
        &self.blockers[x.0]
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let n = self.len();
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.adjacency[u * n + v])
            .map(|(u, v)| (Vertex(u), Vertex(v)))
            .collect()
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(u, v)| (self.names[u.0].clone(), self.names[v.0].clone()))
            .collect()
    }

    /// Subgraph on `set` keeping every edge of `self` between its members.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<SimplicialGraph> {
        self.check_set(set)?;
        let kept: Vec<Vertex> = set.iter().collect();
        let m = kept.len();
        let mut adjacency = vec![false; m * m];
        for (i, &u) in kept.iter().enumerate() {
            for (j, &v) in kept.iter().enumerate() {
                adjacency[i * m + j] = self.adjacent(u, v);
            }
        }
        let names = kept.iter().map(|v| self.names[v.0].clone()).collect();
        Ok(Self::from_parts(names, adjacency))
    }

    pub fn neighborhood(&self, v: Vertex) -> Result<Neighborhood> {
        self.check_vertex(v)?;
        let link: VertexSet = self.vertices().filter(|&u| self.adjacent(u, v)).collect();
        let mut star = link.clone();
        star.insert(v);
        Ok(Neighborhood { link, star })
    }

    pub fn complement(&self) -> SimplicialGraph {
        let n = self.len();
        let mut adjacency = vec![false; n * n];
        for u in 0..n {
            for v in 0..n {
                adjacency[u * n + v] = u != v && !self.adjacency[u * n + v];
            }
        }
        Self::from_parts(self.names.clone(), adjacency)
    }

    /// Connected components of the subgraph induced on `within`, each listed
    /// in order of its least vertex.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut components = Vec::new();
        for start in within.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut component = VertexSet::singleton(start);
            seen.insert(start);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in within.iter() {
                    if !seen.contains(v) && self.adjacent(u, v) {
                        seen.insert(v);
                        component.insert(v);
                        queue.push_back(v);
                    }
                }
            }
            components.push(component);
        }
        components
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(&self.all())
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Complement and join detection: Γ is a join exactly when its
    /// complement is disconnected.
    pub fn complement_analysis(&self) -> ComplementAnalysis {
        let complement = self.complement();
        let components = complement.connected_components();
        let join_parts = (components.len() > 1).then(|| {
            // Smallest complement component (earliest on ties) against the rest.
            let part = components
                .iter()
                .min_by_key(|c| c.len())
                .cloned()
                .unwrap_or_default();
            let rest = self.all().difference(&part);
            (part, rest)
        });
        ComplementAnalysis {
            complement,
            join_parts,
        }
    }

    pub fn classify_induced(&self, set: &VertexSet) -> Result<InducedKind> {
        self.check_set(set)?;
        if set.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let members: Vec<Vertex> = set.iter().collect();
        let (mut edges, mut non_edges) = (false, false);
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if self.adjacent(u, v) {
                    edges = true;
                } else {
                    non_edges = true;
                }
            }
        }
        Ok(match (edges, non_edges) {
            (_, false) => InducedKind::Complete,
            (false, true) => InducedKind::Empty,
            (true, true) => InducedKind::Mixed,
        })
    }

    /// True iff every `u ∈ a` commutes with every `v ∈ b`.
    pub fn supports_commute(&self, a: &VertexSet, b: &VertexSet) -> bool {
        self.non_commuting_pair(a, b).is_none()
    }

    pub fn non_commuting_pair(&self, a: &VertexSet, b: &VertexSet) -> Option<(Vertex, Vertex)> {
        a.iter()
            .flat_map(|u| b.iter().map(move |v| (u, v)))
            .find(|&(u, v)| !self.commute(u, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_p() -> SimplicialGraph {
        SimplicialGraph::new(["a", "b", "c"], [("a", "c"), ("b", "c")]).unwrap()
    }

    fn set(g: &SimplicialGraph, names: &[&str]) -> VertexSet {
        g.vertex_set(names).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            SimplicialGraph::new(["a", "a"], Vec::<(&str, &str)>::new()),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            SimplicialGraph::new(["a"], [("a", "a")]),
            Err(Error::NonSimpleEdge(_))
        ));
        assert!(matches!(
            SimplicialGraph::new(["a"], [("a", "z")]),
            Err(Error::UnknownVertex(_))
        ));
        for bad in ["", "a b", "x^", "y-1", "#", "1"] {
            assert!(SimplicialGraph::new([bad], Vec::<(&str, &str)>::new()).is_err(), "{bad}");
        }
    }

    #[test]
    fn edge_membership_is_symmetric() {
        let g = gamma_p();
        let (a, c) = (g.vertex("a").unwrap(), g.vertex("c").unwrap());
        assert!(g.adjacent(a, c) && g.adjacent(c, a));
        assert_eq!(g.edges().len(), 2);
    }

    #[test]
    fn induced_subgraphs() {
        let g = gamma_p();
        let ab = g.induced_subgraph(&set(&g, &["a", "b"])).unwrap();
        assert_eq!(ab.names(), ["a", "b"]);
        assert!(ab.edges().is_empty());
        assert_eq!(g.induced_subgraph(&g.all()).unwrap(), g);
        let ac = g.induced_subgraph(&set(&g, &["a", "c"])).unwrap();
        assert_eq!(ac.edge_names(), vec![("a".to_string(), "c".to_string())]);
        assert!(g.induced_subgraph(&VertexSet::singleton(Vertex(7))).is_err());
    }

    #[test]
    fn links_and_stars() {
        let g = gamma_p();
        let nb = g.neighborhood(g.vertex("c").unwrap()).unwrap();
        assert_eq!(nb.link, set(&g, &["a", "b"]));
        assert_eq!(nb.star, g.all());

        let e3 = SimplicialGraph::new(["a", "b", "c"], Vec::<(&str, &str)>::new()).unwrap();
        let nb = e3.neighborhood(Vertex(0)).unwrap();
        assert!(nb.link.is_empty());
        assert_eq!(nb.star, VertexSet::singleton(Vertex(0)));

        let z2 = SimplicialGraph::complete(["a", "b"]).unwrap();
        let nb = z2.neighborhood(Vertex(0)).unwrap();
        assert_eq!(nb.link, VertexSet::singleton(Vertex(1)));
        assert_eq!(nb.star, z2.all());
        assert!(z2.neighborhood(Vertex(2)).is_err());
    }

    #[test]
    fn joins() {
        let z2 = SimplicialGraph::complete(["a", "b"]).unwrap();
        let analysis = z2.complement_analysis();
        assert!(analysis.complement.edges().is_empty());
        let (p, q) = analysis.join_parts.unwrap();
        assert_eq!(p, VertexSet::singleton(Vertex(0)));
        assert_eq!(q, VertexSet::singleton(Vertex(1)));

        let f2 = SimplicialGraph::new(["a", "b"], Vec::<(&str, &str)>::new()).unwrap();
        let analysis = f2.complement_analysis();
        assert_eq!(analysis.complement, z2);
        assert!(!analysis.is_join());

        let g = gamma_p();
        let analysis = g.complement_analysis();
        assert_eq!(
            analysis.complement.edge_names(),
            vec![("a".to_string(), "b".to_string())]
        );
        let (p, q) = analysis.join_parts.unwrap();
        assert_eq!(p, set(&g, &["c"]));
        assert_eq!(q, set(&g, &["a", "b"]));
    }

    #[test]
    fn induced_classification() {
        let g = gamma_p();
        assert_eq!(g.classify_induced(&set(&g, &["a", "b"])).unwrap(), InducedKind::Empty);
        assert_eq!(g.classify_induced(&g.all()).unwrap(), InducedKind::Mixed);
        assert_eq!(g.classify_induced(&set(&g, &["b"])).unwrap(), InducedKind::Complete);
        let z2 = SimplicialGraph::complete(["a", "b"]).unwrap();
        assert_eq!(z2.classify_induced(&z2.all()).unwrap(), InducedKind::Complete);
        assert_eq!(g.classify_induced(&VertexSet::new()), Err(Error::EmptyVertexSet));
    }

    #[test]
    fn commuting_supports() {
        let g = gamma_p();
        assert!(g.supports_commute(&set(&g, &["a", "b"]), &set(&g, &["c"])));
        assert!(g.supports_commute(&set(&g, &["a"]), &VertexSet::new()));
        let ns = SimplicialGraph::new(["a", "b", "c"], [("a", "b")]).unwrap();
        assert!(!ns.supports_commute(&set(&ns, &["a", "c"]), &set(&ns, &["b", "c"])));
    }
}
