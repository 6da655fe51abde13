//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use raagdyn::{Automorphism, Letter, SimplicialGraph, Vertex, Word};

pub fn map(vertices: &[&str], edges: &[(&str, &str)], images: &[&str]) -> Automorphism {
    let g = Arc::new(SimplicialGraph::new(vertices.iter().copied(), edges.iter().copied()).unwrap());
    let images = images.iter().map(|t| g.parse_word(t).unwrap()).collect();
    Automorphism::from_images(g, images, None).unwrap()
}

/// Square of the Fibonacci map on F2.
pub fn psi() -> Automorphism {
    map(&["a", "b"], &[], &["a b a", "a b"])
}

/// The map with matrix [[1,1],[1,2]] on Z².
pub fn tau() -> Automorphism {
    map(&["a", "b"], &[("a", "b")], &["a b", "a b^2"])
}

/// The path graph on `n` vertices.
pub fn path_graph(n: usize) -> SimplicialGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String)> = names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    SimplicialGraph::new(names, edges).unwrap()
}

/// Deterministic pseudo-random word of `len` letters over `n` generators.
pub fn scrambled_word(n: usize, len: usize, seed: u64) -> Word {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let letters = (0..len)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let x = (state >> 33) as usize;
            Letter::new(Vertex(x % n), (x / n) % 2 == 1)
        })
        .collect::<Vec<_>>();
    Word::from(letters)
}
