//! Words in A(Γ): reduction, cyclic reduction, support, and equality.
//!
//! Reduction is a left-to-right stack procedure. Appending `x^ε` to a reduced
//! word cancels exactly when the last `x`-letter is `x^-ε` and no letter after
//! it fails to commute with `x`. Instead of scanning backward, the reducer
//! keeps one position stack per generator, so the test costs one comparison
//! per non-commuting generator.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, Vertex, VertexSet};

/// A generator or its inverse, packed as `2 * generator + (inverse as u32)`.
///
/// The packed order (`a < a⁻¹ < b < b⁻¹ < …`) is the letter order used by
/// the canonical normal form.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    const TOMBSTONE: Letter = Letter(u32::MAX);

    #[inline]
    pub fn new(generator: Vertex, inverse: bool) -> Self {
        Letter(((generator.0 as u32) << 1) | inverse as u32)
    }

    #[inline]
    pub fn pos(generator: Vertex) -> Self {
        Self::new(generator, false)
    }

    #[inline]
    pub fn neg(generator: Vertex) -> Self {
        Self::new(generator, true)
    }

    #[inline]
    pub fn generator(self) -> Vertex {
        Vertex((self.0 >> 1) as usize)
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// +1 or -1.
    #[inline]
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_inverse() { "⁻¹" } else { "" };
        write!(f, "{}{sign}", self.generator())
    }
}

/// A finite sequence of letters. `reduced` records that the spelling is
/// known to be shortest; equality ignores it.
#[derive(Clone, Default)]
pub struct Word {
    letters: Vec<Letter>,
    reduced: bool,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.letters).finish()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        let reduced = letters.is_empty();
        Word { letters, reduced }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
            reduced: true,
        }
    }

    pub fn generator(v: Vertex) -> Self {
        Word {
            letters: vec![Letter::pos(v)],
            reduced: true,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_known_reduced(&self) -> bool {
        self.reduced
    }

    /// Formal inverse; reducedness is preserved.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            reduced: self.reduced,
        }
    }

    /// Formal concatenation, not reduced.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word::from(letters)
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| !l.is_inverse())
    }

    /// Exponent sum of `v`.
    pub fn exponent_sum(&self, v: Vertex) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator() == v)
            .map(|l| l.sign())
            .sum()
    }

    /// Occurrences of `v` or `v⁻¹`.
    pub fn occurrences(&self, v: Vertex) -> usize {
        self.letters.iter().filter(|l| l.generator() == v).count()
    }

    /// Generators occurring in this spelling; reduce first for `supp`.
    pub fn letter_support(&self) -> VertexSet {
        self.letters.iter().map(|l| l.generator()).collect()
    }

    pub fn check(&self, graph: &SimplicialGraph) -> Result<()> {
        match self.letters.iter().find(|l| l.generator().0 >= graph.len()) {
            Some(l) => Err(Error::UnknownGenerator(l.generator().0)),
            None => Ok(()),
        }
    }

    /// Parses the token grammar: whitespace-separated `NAME` or `NAME^INT`
    /// tokens, with `1` for the empty word.
    pub fn parse(graph: &SimplicialGraph, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::BadToken {
                token: text.to_string(),
                reason: "empty input; spell the empty word as 1".into(),
            });
        }
        for token in tokens {
            if token == "1" {
                continue;
            }
            let (name, power) = match token.split_once('^') {
                None => (token, 1i64),
                Some((name, exp)) => {
                    let power: i64 = exp.parse().map_err(|_| Error::BadToken {
                        token: token.to_string(),
                        reason: format!("exponent {exp:?} is not an integer"),
                    })?;
                    if power == 0 {
                        return Err(Error::BadToken {
                            token: token.to_string(),
                            reason: "exponent must be nonzero".into(),
                        });
                    }
                    (name, power)
                }
            };
            if name.is_empty() {
                return Err(Error::BadToken {
                    token: token.to_string(),
                    reason: "missing generator name".into(),
                });
            }
            let letter = Letter::new(graph.vertex(name)?, power < 0);
            letters.extend(std::iter::repeat_n(letter, power.unsigned_abs() as usize));
        }
        Ok(Word::from(letters))
    }

    /// Renders with runs collapsed to `NAME^k`; the empty word prints as `1`.
    pub fn display<'a>(&'a self, graph: &'a SimplicialGraph) -> WordDisplay<'a> {
        WordDisplay { word: self, graph }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    graph: &'a SimplicialGraph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let letters = self.word.letters();
        let mut i = 0;
        while i < letters.len() {
            let run = letters[i..].iter().take_while(|&&l| l == letters[i]).count();
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = self.graph.name(letters[i].generator());
            let power = run as i64 * letters[i].sign();
            if power == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{power}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Streaming reducer: pushing letters one at a time keeps the content a
/// reduced word.
pub struct Reducer<'g> {
    graph: &'g SimplicialGraph,
    slots: Vec<Letter>,
    // Live positions of each generator, increasing.
    stacks: Vec<Vec<u32>>,
    live: usize,
}

impl<'g> Reducer<'g> {
    pub fn new(graph: &'g SimplicialGraph) -> Self {
        Self::with_capacity(graph, 0)
    }

    pub fn with_capacity(graph: &'g SimplicialGraph, capacity: usize) -> Self {
        Reducer {
            graph,
            slots: Vec::with_capacity(capacity),
            stacks: vec![Vec::new(); graph.len()],
            live: 0,
        }
    }

    /// Current reduced length.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Appends one letter. The generator must be a vertex of the graph.
    #[inline]
    pub fn push(&mut self, letter: Letter) {
        let x = letter.generator();
        if let Some(&p) = self.stacks[x.0].last() {
            if self.slots[p as usize] == letter.inverse() {
                let stacks = &self.stacks;
                let blocked = self
                    .graph
                    .blockers(x)
                    .iter()
                    .any(|&y| y != x && stacks[y.0].last().is_some_and(|&q| q > p));
                if !blocked {
                    self.slots[p as usize] = Letter::TOMBSTONE;
                    self.stacks[x.0].pop();
                    self.live -= 1;
                    return;
                }
            }
        }
        self.stacks[x.0].push(self.slots.len() as u32);
        self.slots.push(letter);
        self.live += 1;
    }

    pub fn extend<I: IntoIterator<Item = Letter>>(&mut self, letters: I) {
        for letter in letters {
            self.push(letter);
        }
    }

    pub fn finish(self) -> Word {
        Word {
            letters: self
                .slots
                .into_iter()
                .filter(|&l| l != Letter::TOMBSTONE)
                .collect(),
            reduced: true,
        }
    }
}

/// A cyclically reduced core with `conjugator · core · conjugator⁻¹ = w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicForm {
    pub core: Word,
    pub conjugator: Word,
}

impl SimplicialGraph {
    /// Shortest spelling of `w`.
    pub fn reduce(&self, w: &Word) -> Result<Word> {
        w.check(self)?;
        if w.reduced {
            return Ok(w.clone());
        }
        let mut reducer = Reducer::with_capacity(self, w.len());
        reducer.extend(w.letters.iter().copied());
        Ok(reducer.finish())
    }

    pub fn reduce_owned(&self, w: Word) -> Result<Word> {
        if w.reduced {
            w.check(self)?;
            Ok(w)
        } else {
            self.reduce(&w)
        }
    }

    /// Canonical spelling: reduce, then repeatedly bring the least available
    /// letter to the front. Two words are equal in A(Γ) iff their normal
    /// forms coincide letter for letter.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        let w = self.reduce(w)?;
        let n = w.len();
        if n < 2 {
            return Ok(w);
        }
        // Dependency DAG: each letter waits on the latest earlier letter of
        // every generator it does not commute with (its own generator included).
        let mut latest: Vec<Option<u32>> = vec![None; self.len()];
        let mut indegree = vec![0u32; n];
        let mut successors: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, &letter) in w.letters.iter().enumerate() {
            for &y in self.blockers(letter.generator()) {
                if let Some(p) = latest[y.0] {
                    successors[p as usize].push(i as u32);
                    indegree[i] += 1;
                }
            }
            latest[letter.generator().0] = Some(i as u32);
        }
        let mut ready: BinaryHeap<Reverse<(Letter, u32)>> = (0..n)
            .filter(|&i| indegree[i] == 0)
            .map(|i| Reverse((w.letters[i], i as u32)))
            .collect();
        let mut out = Vec::with_capacity(n);
        while let Some(Reverse((letter, i))) = ready.pop() {
            out.push(letter);
            for &j in &successors[i as usize] {
                indegree[j as usize] -= 1;
                if indegree[j as usize] == 0 {
                    ready.push(Reverse((w.letters[j as usize], j)));
                }
            }
        }
        Ok(Word {
            letters: out,
            reduced: true,
        })
    }

    pub fn words_equal(&self, a: &Word, b: &Word) -> Result<bool> {
        let (a, b) = (self.reduce(a)?, self.reduce(b)?);
        if a.len() != b.len() || a.letter_support() != b.letter_support() {
            return Ok(false);
        }
        Ok(a == b || self.normal_form(&a)? == self.normal_form(&b)?)
    }

    /// Support and length of the element `w` represents.
    pub fn support_and_length(&self, w: &Word) -> Result<(VertexSet, usize)> {
        let w = self.reduce(w)?;
        Ok((w.letter_support(), w.len()))
    }

    pub fn support(&self, w: &Word) -> Result<VertexSet> {
        Ok(self.support_and_length(w)?.0)
    }

    /// Strips conjugating letters until the core is cyclically reduced.
    ///
    /// Each round looks, in declaration order, for a generator `x` whose
    /// first letter `x^ε` can shuffle to the front while its last letter
    /// `x^-ε` can shuffle to the back.
    pub fn cyclically_reduce(&self, w: &Word) -> Result<CyclicForm> {
        let w = self.reduce(w)?;
        let letters = w.letters;
        let mut alive = vec![true; letters.len()];
        let mut positions: Vec<VecDeque<usize>> = vec![VecDeque::new(); self.len()];
        for (i, l) in letters.iter().enumerate() {
            positions[l.generator().0].push_back(i);
        }
        let mut conjugator = Vec::new();
        loop {
            let found = self.vertices().find(|&x| {
                let (Some(&first), Some(&last)) =
                    (positions[x.0].front(), positions[x.0].back())
                else {
                    return false;
                };
                first != last
                    && letters[first] == letters[last].inverse()
                    && self.blockers(x).iter().all(|&y| {
                        y == x
                            || positions[y.0]
                                .front()
                                .is_none_or(|&q| q > first && *positions[y.0].back().unwrap() < last)
                    })
            });
            let Some(x) = found else { break };
            let first = positions[x.0].pop_front().unwrap();
            let last = positions[x.0].pop_back().unwrap();
            alive[first] = false;
            alive[last] = false;
            conjugator.push(letters[first]);
        }
        let core = letters
            .iter()
            .zip(&alive)
            .filter_map(|(&l, &keep)| keep.then_some(l))
            .collect::<Vec<_>>();
        Ok(CyclicForm {
            core: Word {
                letters: core,
                reduced: true,
            },
            conjugator: self.reduce(&Word::from(conjugator))?,
        })
    }

    pub fn is_cyclically_reduced(&self, w: &Word) -> Result<bool> {
        Ok(self.cyclically_reduce(w)?.conjugator.is_empty())
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(self, text)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.display(self).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_p() -> SimplicialGraph {
        SimplicialGraph::new(["a", "b", "c"], [("a", "c"), ("b", "c")]).unwrap()
    }

    fn free(names: &[&str]) -> SimplicialGraph {
        SimplicialGraph::new(names.iter().copied(), Vec::<(&str, &str)>::new()).unwrap()
    }

    fn w(g: &SimplicialGraph, text: &str) -> Word {
        g.parse_word(text).unwrap()
    }

    fn show(g: &SimplicialGraph, word: &Word) -> String {
        g.format_word(word)
    }

    #[test]
    fn reduce_examples() {
        let g = gamma_p();
        assert_eq!(show(&g, &g.reduce(&w(&g, "a c a^-1")).unwrap()), "c");
        assert!(g.reduce(&w(&g, "a a^-1")).unwrap().is_empty());
        let f2 = free(&["a", "b"]);
        let r = f2.reduce(&w(&f2, "a b a^-1")).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.is_known_reduced());
    }

    #[test]
    fn reduce_cancels_across_commuting_letters_only() {
        let g = gamma_p();
        // c commutes with a; b does not.
        assert_eq!(show(&g, &g.reduce(&w(&g, "a c c a^-1 c^-1")).unwrap()), "c");
        assert_eq!(g.reduce(&w(&g, "a b a^-1")).unwrap().len(), 3);
    }

    #[test]
    fn cyclic_reduction_examples() {
        let f2 = free(&["a", "b"]);
        let form = f2.cyclically_reduce(&w(&f2, "a b a^-1")).unwrap();
        assert_eq!(show(&f2, &form.core), "b");
        assert_eq!(show(&f2, &form.conjugator), "a");

        let form = f2.cyclically_reduce(&w(&f2, "a b")).unwrap();
        assert_eq!(show(&f2, &form.core), "a b");
        assert!(form.conjugator.is_empty());

        let g = gamma_p();
        let original = w(&g, "c a b c^-1 a^-1");
        let form = g.cyclically_reduce(&original).unwrap();
        assert_eq!(show(&g, &form.core), "b");
        assert_eq!(form.conjugator.len(), 1);
        let rebuilt = form
            .conjugator
            .concat(&form.core)
            .concat(&form.conjugator.inverse());
        assert!(g.words_equal(&rebuilt, &original).unwrap());
    }

    #[test]
    fn support_is_taken_after_reduction() {
        let g = gamma_p();
        let (supp, len) = g.support_and_length(&w(&g, "a b a^-1")).unwrap();
        assert_eq!(supp, g.vertex_set(["a", "b"]).unwrap());
        assert_eq!(len, 3);
        assert_eq!(g.support_and_length(&Word::empty()).unwrap(), (VertexSet::new(), 0));
        let (supp, len) = g.support_and_length(&w(&g, "a c a^-1")).unwrap();
        assert_eq!(supp, g.vertex_set(["c"]).unwrap());
        assert_eq!(len, 1);
    }

    #[test]
    fn equality_examples() {
        let g = gamma_p();
        assert!(g.words_equal(&w(&g, "a c"), &w(&g, "c a")).unwrap());
        assert!(g.words_equal(&w(&g, "a b c"), &w(&g, "c a b")).unwrap());
        assert!(g.words_equal(&w(&g, "a b c"), &w(&g, "a c b")).unwrap());
        assert!(!g.words_equal(&w(&g, "a b c"), &w(&g, "b a c")).unwrap());
        let f2 = free(&["a", "b"]);
        assert!(!f2.words_equal(&w(&f2, "a b"), &w(&f2, "b a")).unwrap());
    }

    #[test]
    fn grammar() {
        let f2 = free(&["a", "b"]);
        let word = w(&f2, "a^2 b^-1");
        assert_eq!(word.len(), 3);
        assert_eq!(word.letters()[1], Letter::pos(Vertex(0)));
        assert_eq!(word.letters()[2], Letter::neg(Vertex(1)));
        assert!(w(&f2, "1").is_empty());
        assert_eq!(show(&f2, &Word::empty()), "1");
        assert_eq!(show(&f2, &w(&f2, "a a b^-1 b^-1 a")), "a^2 b^-2 a");
        for bad in ["a^0", "a^x", "^2", "z", ""] {
            assert!(f2.parse_word(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let f2 = free(&["a", "b"]);
        let word = Word::from(vec![Letter::pos(Vertex(5))]);
        assert_eq!(f2.reduce(&word), Err(Error::UnknownGenerator(5)));
    }

    #[test]
    fn normal_form_is_lexicographic_on_commuting_letters() {
        let g = gamma_p();
        assert_eq!(show(&g, &g.normal_form(&w(&g, "c b a")).unwrap()), "b a c");
        let z3 = SimplicialGraph::complete(["a", "b", "c"]).unwrap();
        assert_eq!(
            show(&z3, &z3.normal_form(&w(&z3, "c b^-1 a c b^-1")).unwrap()),
            "a b^-2 c^2"
        );
    }
}
