//! Directed graphs on an indexed vertex set, without self-arcs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    order: usize,
    arcs: BTreeSet<(Vertex, Vertex)>,
    out: Vec<Vec<Vertex>>,
    inn: Vec<Vec<Vertex>>,
}

impl DirectedGraph {
    /// Both `(u, v)` and `(v, u)` may be present; `(v, v)` may not.
    pub fn new(order: usize, arcs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let arcs: BTreeSet<(Vertex, Vertex)> = arcs.into_iter().collect();
        let mut out = vec![Vec::new(); order];
        let mut inn = vec![Vec::new(); order];
        for &(u, v) in &arcs {
            if u.0 >= order || v.0 >= order {
                return Err(Error::UnknownGenerator(u.0.max(v.0)));
            }
            if u == v {
                return Err(Error::NonSimpleEdge(u.to_string()));
            }
            out[u.0].push(v);
            inn[v.0].push(u);
        }
        Ok(Self {
            order,
            arcs,
            out,
            inn,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.order).map(Vertex)
    }

    /// Arcs in lexicographic (declaration) order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v.0]
    }

    pub fn predecessors(&self, v: Vertex) -> &[Vertex] {
        &self.inn[v.0]
    }

    /// Everything reachable from `start` by a directed path, `start` included.
    pub fn reachable(&self, start: Vertex) -> VertexSet {
        let mut seen = vec![false; self.order];
        let mut stack = vec![start];
        seen[start.0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.out[u.0] {
                if !seen[v.0] {
                    seen[v.0] = true;
                    stack.push(v);
                }
            }
        }
        self.vertices().filter(|v| seen[v.0]).collect()
    }

    /// Strongly connected components (Tarjan, iterative), ordered by their
    /// least vertex.
    pub fn strongly_connected_components(&self) -> Vec<VertexSet> {
        const UNVISITED: usize = usize::MAX;
        let n = self.order;
        let mut index = vec![UNVISITED; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut components = Vec::new();
        let mut counter = 0;
        // (vertex, next successor to visit)
        let mut call: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            call.push((root, 0));
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut next)) = call.last_mut() {
                if let Some(&w) = self.out[v].get(*next) {
                    *next += 1;
                    let w = w.0;
                    if index[w] == UNVISITED {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = VertexSet::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component.insert(Vertex(w));
                        if w == v {
                            break;
                        }
                    }
                    components.push(component);
                }
            }
        }
        components.sort_by_key(|c| c.first());
        components
    }

    /// Whether the sub-digraph induced on `set` has at least one arc.
    pub fn has_internal_arc(&self, set: &VertexSet) -> bool {
        set.iter()
            .any(|u| self.out[u.0].iter().any(|&v| set.contains(v)))
    }

    /// Components of the underlying undirected graph restricted to `within`,
    /// ordered by least vertex.
    pub fn weak_components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut components = Vec::new();
        for start in within.iter() {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut component = VertexSet::singleton(start);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in self.out[u.0].iter().chain(&self.inn[u.0]) {
                    if within.contains(v) && seen.insert(v) {
                        component.insert(v);
                        stack.push(v);
                    }
                }
            }
            components.push(component);
        }
        components
    }

    pub fn weak_components(&self) -> Vec<VertexSet> {
        self.weak_components_within(&self.vertices().collect())
    }

    /// Repeatedly deletes vertices with no incoming arc from inside the
    /// current set. The survivor is empty iff the induced sub-digraph is
    /// acyclic.
    pub fn trim_sources(&self, set: &VertexSet) -> VertexSet {
        let mut current = set.clone();
        loop {
            let sources: Vec<Vertex> = current
                .iter()
                .filter(|&v| !self.inn[v.0].iter().any(|&u| current.contains(u)))
                .collect();
            if sources.is_empty() {
                return current;
            }
            for v in sources {
                current.remove(v);
            }
        }
    }

    /// Repeatedly peels vertices with no outgoing arc into the remainder.
    /// Returns `None` when a cycle blocks the peeling.
    pub fn sink_layers(&self, set: &VertexSet) -> Option<Vec<VertexSet>> {
        let mut remaining = set.clone();
        let mut layers = Vec::new();
        while !remaining.is_empty() {
            let layer: VertexSet = remaining
                .iter()
                .filter(|&v| !self.out[v.0].iter().any(|&w| remaining.contains(w)))
                .collect();
            if layer.is_empty() {
                return None;
            }
            remaining = remaining.difference(&layer);
            layers.push(layer);
        }
        Some(layers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg(order: usize, arcs: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::new(order, arcs.iter().map(|&(u, v)| (Vertex(u), Vertex(v)))).unwrap()
    }

    fn vs(items: &[usize]) -> VertexSet {
        items.iter().map(|&i| Vertex(i)).collect()
    }

    #[test]
    fn rejects_self_arcs() {
        assert!(DirectedGraph::new(2, [(Vertex(1), Vertex(1))]).is_err());
        assert!(DirectedGraph::new(2, [(Vertex(0), Vertex(2))]).is_err());
        let both = dg(2, &[(0, 1), (1, 0)]);
        assert_eq!(both.arc_count(), 2);
    }

    #[test]
    fn scc_of_chain_and_cycle() {
        let g = dg(5, &[(0, 1), (1, 2), (2, 1), (3, 4)]);
        let sccs = g.strongly_connected_components();
        assert_eq!(sccs, vec![vs(&[0]), vs(&[1, 2]), vs(&[3]), vs(&[4])]);
        assert!(g.has_internal_arc(&vs(&[1, 2])));
        assert!(!g.has_internal_arc(&vs(&[0])));
    }

    #[test]
    fn deep_chain_does_not_recurse() {
        let n = 200_000;
        let arcs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).chain([(n - 1, 0)]).collect();
        let g = dg(n, &arcs);
        assert_eq!(g.strongly_connected_components().len(), 1);
    }

    #[test]
    fn trimming_and_layers() {
        let g = dg(3, &[(0, 1), (1, 2), (2, 1)]);
        assert_eq!(g.trim_sources(&g.vertices().collect()), vs(&[1, 2]));
        assert!(g.sink_layers(&g.vertices().collect()).is_none());

        let chain = dg(3, &[(0, 1), (1, 2)]);
        assert!(chain.trim_sources(&chain.vertices().collect()).is_empty());
        assert_eq!(
            chain.sink_layers(&chain.vertices().collect()).unwrap(),
            vec![vs(&[2]), vs(&[1]), vs(&[0])]
        );
    }

    #[test]
    fn reachability_and_weak_components() {
        let g = dg(4, &[(0, 1), (2, 1)]);
        assert_eq!(g.reachable(Vertex(0)), vs(&[0, 1]));
        assert_eq!(g.reachable(Vertex(3)), vs(&[3]));
        assert_eq!(g.weak_components(), vec![vs(&[0, 1, 2]), vs(&[3])]);
    }
}
