//! Endomorphisms of A(Γ) given by generator images.
//!
//! An [`Automorphism`] always satisfies the commutation relations of Γ. When
//! an inverse table is known and checked (always the case for maps built from
//! Laurence–Servatius generators) it is a verified automorphism; otherwise it
//! is carried as a homomorphism and reports flag it.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, Vertex, VertexSet};
use crate::word::{Letter, Reducer, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    /// Relations checked, no verified inverse.
    Homomorphism,
    /// Relations checked and a two-sided inverse verified.
    Automorphism,
}

/// One Laurence–Servatius generator of Aut(A(Γ)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LsGenerator {
    /// `v ↦ v⁻¹`.
    Inversion(Vertex),
    /// Relabels generators by a graph automorphism; `perm[v]` is the image of `v`.
    GraphSymmetry(Vec<Vertex>),
    /// `v ↦ w v`, allowed when `lk(v) ⊆ st(w)`.
    Transvection { v: Vertex, w: Vertex },
    /// `u ↦ w u w⁻¹` for `u ∈ C`, where `C` is a component of `Γ ∖ st(w)`.
    PartialConjugation { component: VertexSet, w: Vertex },
}

impl LsGenerator {
    pub fn validate(&self, graph: &SimplicialGraph) -> std::result::Result<(), String> {
        let known = |v: Vertex| {
            graph
                .check_vertex(v)
                .map_err(|_| format!("vertex index {} is out of range", v.0))
        };
        match self {
            LsGenerator::Inversion(v) => known(*v),
            LsGenerator::GraphSymmetry(perm) => {
                if perm.len() != graph.len() {
                    return Err(format!(
                        "permutation has {} entries for {} vertices",
                        perm.len(),
                        graph.len()
                    ));
                }
                let mut hit = vec![false; graph.len()];
                for &image in perm {
                    known(image)?;
                    if std::mem::replace(&mut hit[image.0], true) {
                        return Err(format!("{} is hit twice", graph.name(image)));
                    }
                }
                for u in graph.vertices() {
                    for v in graph.vertices() {
                        if graph.adjacent(u, v) != graph.adjacent(perm[u.0], perm[v.0]) {
                            return Err(format!(
                                "permutation does not preserve adjacency of {} and {}",
                                graph.name(u),
                                graph.name(v)
                            ));
                        }
                    }
                }
                Ok(())
            }
            LsGenerator::Transvection { v, w } => {
                known(*v)?;
                known(*w)?;
                if v == w {
                    return Err("transvection needs distinct vertices".into());
                }
                let link = graph.neighborhood(*v).map_err(|e| e.to_string())?.link;
                let star = graph.neighborhood(*w).map_err(|e| e.to_string())?.star;
                if !link.is_subset(&star) {
                    return Err(format!(
                        "lk({}) is not contained in st({})",
                        graph.name(*v),
                        graph.name(*w)
                    ));
                }
                Ok(())
            }
            LsGenerator::PartialConjugation { component, w } => {
                known(*w)?;
                graph.check_set(component).map_err(|e| e.to_string())?;
                let star = graph.neighborhood(*w).map_err(|e| e.to_string())?.star;
                let outside = graph.all().difference(&star);
                if component.is_empty() || !graph.components_within(&outside).contains(component) {
                    return Err(format!(
                        "{{{}}} is not a component of Γ ∖ st({})",
                        graph.set_names(component).join(", "),
                        graph.name(*w)
                    ));
                }
                Ok(())
            }
        }
    }

    /// Image and inverse-image tables of this generator.
    fn tables(&self, graph: &SimplicialGraph) -> (Vec<Word>, Vec<Word>) {
        let identity: Vec<Word> = graph.vertices().map(Word::generator).collect();
        let (mut forward, mut backward) = (identity.clone(), identity);
        match self {
            LsGenerator::Inversion(v) => {
                forward[v.0] = Word::from(vec![Letter::neg(*v)]);
                backward[v.0] = forward[v.0].clone();
            }
            LsGenerator::GraphSymmetry(perm) => {
                for v in graph.vertices() {
                    forward[v.0] = Word::generator(perm[v.0]);
                    backward[perm[v.0].0] = Word::generator(v);
                }
            }
            LsGenerator::Transvection { v, w } => {
                forward[v.0] = Word::from(vec![Letter::pos(*w), Letter::pos(*v)]);
                backward[v.0] = Word::from(vec![Letter::neg(*w), Letter::pos(*v)]);
            }
            LsGenerator::PartialConjugation { component, w } => {
                for u in component {
                    forward[u.0] = Word::from(vec![Letter::pos(*w), Letter::pos(u), Letter::neg(*w)]);
                    backward[u.0] = Word::from(vec![Letter::neg(*w), Letter::pos(u), Letter::pos(*w)]);
                }
            }
        }
        (forward, backward)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    RawImages,
    /// Generators in application order: the first entry acts first.
    GeneratorComposite(Vec<LsGenerator>),
}

#[derive(Clone)]
pub struct Automorphism {
    graph: Arc<SimplicialGraph>,
    images: Vec<Word>,
    inverse_images: Option<Vec<Word>>,
    provenance: Provenance,
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for v in self.graph.vertices() {
            map.entry(
                &self.graph.name(v),
                &self.images[v.0].display(&self.graph).to_string(),
            );
        }
        map.finish()
    }
}

/// Two-part purity: `s ∈ supp(φ(s))`, and `φ(s)` cyclically reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityReport {
    pub support_ok: Vec<bool>,
    pub cyclically_reduced_ok: Vec<bool>,
}

impl PurityReport {
    pub fn support_clause(&self) -> bool {
        self.support_ok.iter().all(|&ok| ok)
    }

    pub fn cyclic_clause(&self) -> bool {
        self.cyclically_reduced_ok.iter().all(|&ok| ok)
    }

    pub fn is_pure(&self) -> bool {
        self.support_clause() && self.cyclic_clause()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareWitness {
    pub edge: (Vertex, Vertex),
    pub pair: (Vertex, Vertex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareReport {
    pub witness: Option<SquareWitness>,
}

impl SquareReport {
    pub fn is_square(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct PurePower {
    pub exponent: u64,
    pub power: Automorphism,
    pub purity: PurityReport,
}

fn substitute(
    graph: &SimplicialGraph,
    table: &[Word],
    word: &Word,
    cap: usize,
) -> Option<Word> {
    let mut remaining: usize = word
        .letters()
        .iter()
        .map(|l| table[l.generator().0].len())
        .sum();
    let mut reducer = Reducer::with_capacity(graph, remaining.min(cap.saturating_add(1)));
    for &letter in word.letters() {
        let image = table[letter.generator().0].letters();
        remaining -= image.len();
        if letter.is_inverse() {
            reducer.extend(image.iter().rev().map(|l| l.inverse()));
        } else {
            reducer.extend(image.iter().copied());
        }
        // Each pending letter cancels at most one live letter.
        if reducer.len() > cap.saturating_add(remaining) {
            return None;
        }
    }
    (reducer.len() <= cap).then(|| reducer.finish())
}

fn same_graph(a: &Arc<SimplicialGraph>, b: &Arc<SimplicialGraph>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::AmbientMismatch)
    }
}

impl Automorphism {
    pub fn identity(graph: Arc<SimplicialGraph>) -> Self {
        let images: Vec<Word> = graph.vertices().map(Word::generator).collect();
        Self {
            inverse_images: Some(images.clone()),
            images,
            graph,
            provenance: Provenance::GeneratorComposite(Vec::new()),
        }
    }

    /// Validates raw images (and an optional inverse) against Γ.
    ///
    /// Without an inverse the result is a [`Verification::Homomorphism`].
    pub fn from_images(
        graph: Arc<SimplicialGraph>,
        images: Vec<Word>,
        inverse_images: Option<Vec<Word>>,
    ) -> Result<Self> {
        let reduce_all = |table: Vec<Word>| -> Result<Vec<Word>> {
            if table.len() != graph.len() {
                let missing = graph.name(Vertex(table.len().min(graph.len().saturating_sub(1))));
                return Err(Error::MissingImage(missing.to_string()));
            }
            table.into_iter().map(|w| graph.reduce_owned(w)).collect()
        };
        let images = reduce_all(images)?;
        let inverse_images = inverse_images.map(reduce_all).transpose()?;
        let map = Self {
            graph,
            images,
            inverse_images: None,
            provenance: Provenance::RawImages,
        };
        map.check_relations()?;
        let Some(inverse) = inverse_images else {
            return Ok(map);
        };
        let candidate = Self {
            inverse_images: Some(inverse),
            ..map
        };
        candidate.check_inverse()?;
        Ok(candidate)
    }

    /// Composite of Laurence–Servatius generators applied in sequence order
    /// (the first generator acts first).
    pub fn from_generators(graph: Arc<SimplicialGraph>, sequence: Vec<LsGenerator>) -> Result<Self> {
        for (index, generator) in sequence.iter().enumerate() {
            generator
                .validate(&graph)
                .map_err(|reason| Error::InvalidGenerator { index, reason })?;
        }
        let mut images: Vec<Word> = graph.vertices().map(Word::generator).collect();
        let mut inverse = images.clone();
        for generator in &sequence {
            let (forward, backward) = generator.tables(&graph);
            images = images
                .iter()
                .map(|w| substitute(&graph, &forward, w, usize::MAX).expect("uncapped"))
                .collect();
            inverse = backward
                .iter()
                .map(|w| substitute(&graph, &inverse, w, usize::MAX).expect("uncapped"))
                .collect();
        }
        Ok(Self {
            graph,
            images,
            inverse_images: Some(inverse),
            provenance: Provenance::GeneratorComposite(sequence),
        })
    }

    fn check_relations(&self) -> Result<()> {
        for (u, v) in self.graph.edges() {
            let (fu, fv) = (&self.images[u.0], &self.images[v.0]);
            if !self.graph.words_equal(&fu.concat(fv), &fv.concat(fu))? {
                return Err(Error::RelationViolated {
                    u: self.graph.name(u).to_string(),
                    v: self.graph.name(v).to_string(),
                });
            }
        }
        Ok(())
    }

    fn check_inverse(&self) -> Result<()> {
        let inverse = self.inverse_images.as_ref().expect("inverse present");
        for v in self.graph.vertices() {
            let there_and_back = substitute(&self.graph, &self.images, &inverse[v.0], usize::MAX);
            let back_and_there = substitute(&self.graph, inverse, &self.images[v.0], usize::MAX);
            let fixed = |w: Option<Word>| w.is_some_and(|w| w == Word::generator(v));
            if !fixed(there_and_back) || !fixed(back_and_there) {
                return Err(Error::InverseMismatch(self.graph.name(v).to_string()));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<SimplicialGraph> {
        &self.graph
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, v: Vertex) -> &Word {
        &self.images[v.0]
    }

    pub fn inverse_images(&self) -> Option<&[Word]> {
        self.inverse_images.as_deref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn verification(&self) -> Verification {
        if self.inverse_images.is_some() {
            Verification::Automorphism
        } else {
            Verification::Homomorphism
        }
    }

    /// The inverse map, when known.
    pub fn inverse(&self) -> Option<Automorphism> {
        let inverse = self.inverse_images.clone()?;
        Some(Self {
            graph: self.graph.clone(),
            images: inverse,
            inverse_images: Some(self.images.clone()),
            provenance: Provenance::RawImages,
        })
    }

    /// `φ(w)`, reduced.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.check(&self.graph)?;
        Ok(substitute(&self.graph, &self.images, w, usize::MAX).expect("uncapped"))
    }

    /// `φ(w)`, or `None` once the reduced image is certain to exceed `cap`.
    pub fn apply_capped(&self, w: &Word, cap: usize) -> Result<Option<Word>> {
        w.check(&self.graph)?;
        Ok(substitute(&self.graph, &self.images, w, cap))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        self.compose_capped(other, usize::MAX)
    }

    pub fn compose_capped(&self, other: &Automorphism, cap: usize) -> Result<Automorphism> {
        same_graph(&self.graph, &other.graph)?;
        let graph = &self.graph;
        let images = other
            .images
            .iter()
            .map(|w| substitute(graph, &self.images, w, cap).ok_or(Error::LengthCapExceeded(cap)))
            .collect::<Result<Vec<_>>>()?;
        let inverse_images = match (&self.inverse_images, &other.inverse_images) {
            (Some(mine), Some(theirs)) => Some(
                mine.iter()
                    .map(|w| substitute(graph, theirs, w, cap).ok_or(Error::LengthCapExceeded(cap)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            _ => None,
        };
        let provenance = match (&self.provenance, &other.provenance) {
            (Provenance::GeneratorComposite(mine), Provenance::GeneratorComposite(theirs))
                if inverse_images.is_some() =>
            {
                Provenance::GeneratorComposite(theirs.iter().chain(mine).cloned().collect())
            }
            _ => Provenance::RawImages,
        };
        Ok(Self {
            graph: graph.clone(),
            images,
            inverse_images,
            provenance,
        })
    }

    /// `φ^k` for `k ≥ 0`.
    pub fn power(&self, k: u64) -> Result<Automorphism> {
        self.power_capped(k, usize::MAX)
    }

    pub fn power_capped(&self, k: u64, cap: usize) -> Result<Automorphism> {
        let mut result = Automorphism::identity(self.graph.clone());
        if self.inverse_images.is_none() {
            result.inverse_images = None;
            result.provenance = Provenance::RawImages;
        }
        for _ in 0..k {
            result = self.compose_capped(&result, cap)?;
        }
        Ok(result)
    }

    /// `φ^g = c_g ∘ φ`, i.e. `v ↦ g φ(v) g⁻¹`.
    pub fn conjugate_by(&self, g: &Word) -> Result<Automorphism> {
        let graph = &self.graph;
        let g = graph.reduce(g)?;
        let g_inv = g.inverse();
        let images = self
            .images
            .iter()
            .map(|img| graph.reduce(&g.concat(img).concat(&g_inv)))
            .collect::<Result<Vec<_>>>()?;
        // (c_g ∘ φ)⁻¹(v) = φ⁻¹(g⁻¹ v g)
        let inverse_images = self.inverse_images.as_ref().map(|inverse| {
            graph
                .vertices()
                .map(|v| {
                    let conjugated = g_inv.concat(&Word::generator(v)).concat(&g);
                    substitute(graph, inverse, &conjugated, usize::MAX).expect("uncapped")
                })
                .collect()
        });
        Ok(Self {
            graph: graph.clone(),
            images,
            inverse_images,
            provenance: Provenance::RawImages,
        })
    }

    /// Restriction to an invariant vertex set, as a map of A(Δ).
    pub fn restrict_to(&self, set: &VertexSet) -> Result<Automorphism> {
        self.graph.check_set(set)?;
        let kept: Vec<Vertex> = set.iter().collect();
        let mut relabel = vec![None; self.graph.len()];
        for (i, v) in kept.iter().enumerate() {
            relabel[v.0] = Some(Vertex(i));
        }
        let translate = |w: &Word| -> Option<Word> {
            w.letters()
                .iter()
                .map(|l| relabel[l.generator().0].map(|v| Letter::new(v, l.is_inverse())))
                .collect::<Option<Vec<_>>>()
                .map(Word::from)
        };
        let images = kept
            .iter()
            .map(|v| translate(&self.images[v.0]))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotInvariant(self.graph.set_names(set)))?;
        let inverse = self.inverse_images.as_ref().and_then(|inverse| {
            kept.iter()
                .map(|v| translate(&inverse[v.0]))
                .collect::<Option<Vec<_>>>()
        });
        let sub = Arc::new(self.graph.induced_subgraph(set)?);
        match Automorphism::from_images(sub.clone(), images.clone(), inverse) {
            Ok(map) => Ok(map),
            Err(Error::InverseMismatch(_)) => Automorphism::from_images(sub, images, None),
            Err(e) => Err(e),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.images.iter().all(Word::is_positive)
    }

    pub fn supports(&self) -> Vec<VertexSet> {
        self.images.iter().map(Word::letter_support).collect()
    }

    pub fn purity(&self) -> PurityReport {
        let support_ok = self
            .graph
            .vertices()
            .map(|s| self.images[s.0].letter_support().contains(s))
            .collect();
        let cyclically_reduced_ok = self
            .images
            .iter()
            .map(|w| self.graph.is_cyclically_reduced(w).expect("images are over Γ"))
            .collect();
        PurityReport {
            support_ok,
            cyclically_reduced_ok,
        }
    }

    /// Square test: commuting generators must have pairwise commuting image supports.
    pub fn square_check(&self) -> SquareReport {
        let supports = self.supports();
        let witness = self.graph.edges().into_iter().find_map(|(u, v)| {
            self.graph
                .non_commuting_pair(&supports[u.0], &supports[v.0])
                .map(|pair| SquareWitness { edge: (u, v), pair })
        });
        SquareReport { witness }
    }

    pub fn is_square(&self) -> bool {
        self.square_check().is_square()
    }

    /// Abelianization mod 2: entry `(v, s)` is the exponent sum of `v` in `φ(s)`.
    pub fn mod2_matrix(&self) -> Mod2Matrix {
        let n = self.graph.len();
        let mut matrix = Mod2Matrix::zero(n);
        for s in self.graph.vertices() {
            for letter in self.images[s.0].letters() {
                matrix.toggle(letter.generator().0, s.0);
            }
        }
        matrix
    }

    /// The least `N ≥ 1` with `A_φ^N = I` over Z/2, together with `φ^N`.
    pub fn pure_power(&self, max_exponent: u64) -> Result<PurePower> {
        self.pure_power_capped(max_exponent, usize::MAX)
    }

    pub fn pure_power_capped(&self, max_exponent: u64, cap: usize) -> Result<PurePower> {
        let exponent = self.mod2_matrix().order(max_exponent)?;
        let power = self.power_capped(exponent, cap)?;
        let purity = power.purity();
        Ok(PurePower {
            exponent,
            power,
            purity,
        })
    }
}

/// Square matrix over Z/2 with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mod2Matrix {
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl fmt::Debug for Mod2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Mod2Matrix {
    fn words(n: usize) -> usize {
        n.div_ceil(64).max(1)
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            rows: vec![vec![0; Self::words(n)]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let mut m = Self::zero(rows.len());
        for (i, row) in rows.iter().enumerate() {
            for (j, &bit) in row.iter().enumerate() {
                m.set(i, j, bit & 1 == 1);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let mask = 1u64 << (j % 64);
        if value {
            self.rows[i][j / 64] |= mask;
        } else {
            self.rows[i][j / 64] &= !mask;
        }
    }

    fn toggle(&mut self, i: usize, j: usize) {
        self.rows[i][j / 64] ^= 1u64 << (j % 64);
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    pub fn mul(&self, other: &Mod2Matrix) -> Mod2Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = Mod2Matrix::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    for (acc, &word) in out.rows[i].iter_mut().zip(&other.rows[k]) {
                        *acc ^= word;
                    }
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Mod2Matrix::identity(self.n)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let bit = |row: &Vec<u64>| row[col / 64] >> (col % 64) & 1 == 1;
            let Some(pivot) = (rank..self.n).find(|&r| bit(&rows[r])) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && bit(row) {
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Multiplicative order, searched up to `max_exponent`.
    pub fn order(&self, max_exponent: u64) -> Result<u64> {
        if !self.is_invertible() {
            return Err(Error::SingularMod2);
        }
        let mut power = self.clone();
        for k in 1..=max_exponent {
            if power.is_identity() {
                return Ok(k);
            }
            power = power.mul(self);
        }
        Err(Error::OrderExceeded(max_exponent))
    }
}
