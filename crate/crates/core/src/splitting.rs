//! Elementary splittings of `F(X)` over the trivial or an infinite cyclic
//! group, ellipticity, and the automorphisms that witness a non-cyclic
//! stabilizer.
//!
//! Vertex groups take one of three shapes, for a partition of the standard
//! basis:
//!
//! * free: `⟨A⟩` and `⟨B⟩`;
//! * segment: `⟨A, b⟩` and `⟨B⟩` with `#B ≥ 2` and `b ∈ ⟨B⟩`;
//! * loop: `⟨U, v⁻¹uv⟩` with `u ∈ ⟨U⟩`.
//!
//! A word elliptic in any of these is not filling. The search here is
//! bounded by the length of the edge word, so failing to find a witness says
//! nothing about the word.

use std::fmt;

use itertools::Itertools;

use crate::automorphism::EndoByImages;
use crate::error::{Error, Result};
use crate::stallings::StallingsGraph;
use crate::word::{Alphabet, CyclicWord, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SplittingSpec {
    /// Trivial edge group; `A ⊔ B` partitions the basis.
    Free { a: Vec<usize>, b: Vec<usize> },
    /// Segment of groups with vertex groups `⟨A, edge⟩` and `⟨B⟩`.
    Segment { a: Vec<usize>, b: Vec<usize>, edge: Word },
    /// Loop of groups with vertex group `⟨U, v⁻¹·edge·v⟩`.
    Loop { u: Vec<usize>, v: usize, edge: Word },
}

fn generator_words(gens: &[usize]) -> Vec<Word> {
    gens.iter().map(|&g| Word::letter(Letter::new(g, false))).collect()
}

fn uses_only(w: &Word, gens: &[usize]) -> bool {
    w.letters().iter().all(|l| gens.contains(&l.generator()))
}

fn is_partition(rank: usize, parts: &[&[usize]]) -> bool {
    let mut seen = vec![false; rank];
    for part in parts {
        for &g in *part {
            if g >= rank || std::mem::replace(&mut seen[g], true) {
                return false;
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn check_edge(edge: &Word, gens: &[usize]) -> Result<()> {
    if edge.is_empty() {
        return Err(Error::InvalidSplitting("edge word must be nontrivial".into()));
    }
    if !uses_only(edge, gens) {
        return Err(Error::InvalidSplitting(format!(
            "edge word {edge} is not in the required free factor"
        )));
    }
    if edge.root()?.1 > 1 {
        return Err(Error::InvalidSplitting(format!(
            "edge word {edge} is a proper power"
        )));
    }
    Ok(())
}

impl SplittingSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SplittingSpec::Free { .. } => "free",
            SplittingSpec::Segment { .. } => "segment",
            SplittingSpec::Loop { .. } => "loop",
        }
    }

    pub fn edge(&self) -> Option<&Word> {
        match self {
            SplittingSpec::Free { .. } => None,
            SplittingSpec::Segment { edge, .. } | SplittingSpec::Loop { edge, .. } => Some(edge),
        }
    }

    pub fn validate(&self, alphabet: &Alphabet) -> Result<()> {
        let rank = alphabet.rank();
        match self {
            SplittingSpec::Free { a, b } => {
                if a.is_empty() || b.is_empty() || !is_partition(rank, &[a, b]) {
                    return Err(Error::InvalidSplitting(
                        "free splitting needs a partition into two nonempty parts".into(),
                    ));
                }
            }
            SplittingSpec::Segment { a, b, edge } => {
                if a.is_empty() || b.len() < 2 || !is_partition(rank, &[a, b]) {
                    return Err(Error::InvalidSplitting(
                        "segment needs a partition with #A >= 1 and #B >= 2".into(),
                    ));
                }
                check_edge(edge, b)?;
            }
            SplittingSpec::Loop { u, v, edge } => {
                if u.is_empty() || !is_partition(rank, &[u, &[*v]]) {
                    return Err(Error::InvalidSplitting(
                        "loop needs U together with v to be a basis".into(),
                    ));
                }
                check_edge(edge, u)?;
            }
        }
        Ok(())
    }

    /// Generators of each vertex group.
    pub fn vertex_groups(&self) -> Vec<Vec<Word>> {
        match self {
            SplittingSpec::Free { a, b } => vec![generator_words(a), generator_words(b)],
            SplittingSpec::Segment { a, b, edge } => {
                let mut first = generator_words(a);
                first.push(edge.clone());
                vec![first, generator_words(b)]
            }
            SplittingSpec::Loop { u, v, edge } => {
                let mut gens = generator_words(u);
                gens.push(edge.conjugate(&Word::letter(Letter::new(*v, false))));
                vec![gens]
            }
        }
    }

    pub fn vertex_name(&self, vertex: usize) -> &'static str {
        match (self, vertex) {
            (SplittingSpec::Free { .. }, 0) => "<A>",
            (SplittingSpec::Free { .. }, _) => "<B>",
            (SplittingSpec::Segment { .. }, 0) => "<A,b>",
            (SplittingSpec::Segment { .. }, _) => "<B>",
            (SplittingSpec::Loop { .. }, _) => "<U,u^v>",
        }
    }

    pub fn vertex_graphs(&self, alphabet: &Alphabet) -> Vec<StallingsGraph> {
        self.vertex_groups()
            .iter()
            .map(|gens| StallingsGraph::new(alphabet, gens))
            .collect()
    }

    /// Whether `w` is conjugate into some vertex group.
    pub fn is_elliptic(&self, alphabet: &Alphabet, w: &Word) -> Result<bool> {
        self.validate(alphabet)?;
        alphabet.check_word(w.letters())?;
        Ok(self
            .vertex_graphs(alphabet)
            .iter()
            .any(|g| g.conjugate_into(w)))
    }

    /// Right-conjugation by `w` together with the partial conjugation or
    /// transvection that fixes the vertex group containing `w` pointwise.
    /// Both maps fix `w`.
    ///
    /// `w` must lie in a vertex group as written; conjugate it there first.
    pub fn stabilizer_witnesses(
        &self,
        alphabet: &Alphabet,
        w: &Word,
    ) -> Result<(EndoByImages, EndoByImages)> {
        self.validate(alphabet)?;
        alphabet.check_word(w.letters())?;
        let rank = alphabet.rank();
        let vertex = self
            .vertex_graphs(alphabet)
            .iter()
            .position(|g| g.contains(w))
            .ok_or(Error::NotInVertexGroup)?;
        let sigma = EndoByImages::conjugation(rank, w);
        let mut images = EndoByImages::identity(rank).images;
        let conjugate_part = |images: &mut Vec<Word>, gens: &[usize], by: &Word| {
            for &g in gens {
                images[g] = images[g].conjugate(by);
            }
        };
        match (self, vertex) {
            (SplittingSpec::Free { a, .. }, 0) => conjugate_part(&mut images, a, w),
            (SplittingSpec::Free { b, .. }, _) => conjugate_part(&mut images, b, w),
            (SplittingSpec::Segment { b, edge, .. }, 0) => conjugate_part(&mut images, b, edge),
            // ⟨B⟩ is a proper free factor
            (SplittingSpec::Segment { b, .. }, _) => conjugate_part(&mut images, b, w),
            (SplittingSpec::Loop { v, edge, .. }, _) => {
                images[*v] = edge.concat(&images[*v]);
            }
        }
        Ok((sigma, EndoByImages::new(images)))
    }
}

fn set_text(gens: &[usize]) -> String {
    format!(
        "{{{}}}",
        gens.iter().map(|&g| Letter::new(g, false)).format(",")
    )
}

impl fmt::Display for SplittingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplittingSpec::Free { a, b } => {
                write!(f, "kind=free A={} B={} edge=", set_text(a), set_text(b))
            }
            SplittingSpec::Segment { a, b, edge } => write!(
                f,
                "kind=segment A={} B={} edge={}",
                set_text(a),
                set_text(b),
                edge
            ),
            SplittingSpec::Loop { u, v, edge } => write!(
                f,
                "kind=loop U={} v={} edge={}",
                set_text(u),
                Letter::new(*v, false),
                edge
            ),
        }
    }
}

/// Nonempty reduced words of length `n` over `letters`.
fn reduced_words_over(letters: &[Letter], n: usize) -> Vec<Word> {
    fn extend(letters: &[Letter], n: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if cur.len() == n {
            out.push(Word::free_reduce(cur.iter().copied()));
            return;
        }
        for &l in letters {
            if cur.last() == Some(&l.inverse()) {
                continue;
            }
            cur.push(l);
            extend(letters, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(letters, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Cyclically reduced, non-power words in `⟨gens⟩` of length `1..=bound`,
/// one per class under rotation and inversion.
fn edge_words(gens: &[usize], bound: usize) -> Vec<Word> {
    let letters: Vec<Letter> = gens
        .iter()
        .flat_map(|&g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out = Vec::new();
    for n in 1..=bound {
        for w in reduced_words_over(&letters, n) {
            let Ok(c) = CyclicWord::try_from(w.clone()) else {
                continue;
            };
            if c.power_decomposition().map(|p| p.is_proper_power()).unwrap_or(true) {
                continue;
            }
            if c.canonical_up_to_inversion() == w.letters() {
                out.push(w);
            }
        }
    }
    out
}

/// Free splittings, then loops, then segments, over all partitions of the
/// standard basis and edge words up to length `bound`.
pub fn enumerate_small_splittings(alphabet: &Alphabet, bound: usize) -> Vec<SplittingSpec> {
    let rank = alphabet.rank();
    let all: Vec<usize> = (0..rank).collect();
    let mut out = Vec::new();
    // free: generator 0 always on the A side
    for mask in 0u32..(1 << rank) {
        if mask & 1 == 0 || mask == (1 << rank) - 1 {
            continue;
        }
        let (a, b): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&g| mask >> g & 1 == 1);
        out.push(SplittingSpec::Free { a, b });
    }
    for v in 0..rank {
        let u: Vec<usize> = all.iter().copied().filter(|&g| g != v).collect();
        for edge in edge_words(&u, bound) {
            out.push(SplittingSpec::Loop {
                u: u.clone(),
                v,
                edge,
            });
        }
    }
    for mask in 0u32..(1 << rank) {
        let (b, a): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&g| mask >> g & 1 == 1);
        if a.is_empty() || b.len() < 2 {
            continue;
        }
        for edge in edge_words(&b, bound) {
            out.push(SplittingSpec::Segment {
                a: a.clone(),
                b: b.clone(),
                edge,
            });
        }
    }
    out
}

/// A splitting in which a word is elliptic, with the conjugator `c` such
/// that `c⁻¹ w c` lies in the named vertex group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub spec: SplittingSpec,
    pub vertex: usize,
    pub conjugator: Word,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertex={} conjugator={}",
            self.spec,
            self.spec.vertex_name(self.vertex),
            self.conjugator
        )
    }
}

/// Outcome of a bounded witness search. `NoneFound` records the bound and
/// is not a proof that the word is filling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(Witness),
    NoneFound { bound: usize },
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            WitnessSearch::NoneFound { .. } => None,
        }
    }
}

impl fmt::Display for WitnessSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSearch::Found(w) => w.fmt(f),
            WitnessSearch::NoneFound { bound } => write!(f, "none bound={bound}"),
        }
    }
}

/// Enumerated splittings with their vertex graphs folded once, for
/// repeated witness searches.
#[derive(Debug, Clone)]
pub struct SplittingOracle {
    alphabet: Alphabet,
    bound: usize,
    specs: Vec<(SplittingSpec, Vec<StallingsGraph>)>,
}

impl SplittingOracle {
    pub fn new(alphabet: &Alphabet, bound: usize) -> Self {
        let specs = enumerate_small_splittings(alphabet, bound)
            .into_iter()
            .map(|s| {
                let graphs = s.vertex_graphs(alphabet);
                (s, graphs)
            })
            .collect();
        SplittingOracle {
            alphabet: *alphabet,
            bound,
            specs,
        }
    }

    pub fn specs(&self) -> impl Iterator<Item = &SplittingSpec> {
        self.specs.iter().map(|(s, _)| s)
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn find(&self, w: &Word) -> Result<WitnessSearch> {
        self.alphabet.check_word(w.letters())?;
        for (spec, graphs) in &self.specs {
            for (vertex, g) in graphs.iter().enumerate() {
                if let Some(conjugator) = g.conjugator_into(w) {
                    return Ok(WitnessSearch::Found(Witness {
                        spec: spec.clone(),
                        vertex,
                        conjugator,
                    }));
                }
            }
        }
        Ok(WitnessSearch::NoneFound { bound: self.bound })
    }
}

pub fn find_nonfilling_witness(
    alphabet: &Alphabet,
    w: &Word,
    bound: usize,
) -> Result<WitnessSearch> {
    SplittingOracle::new(alphabet, bound).find(w)
}
