//! Cyclic-length change under type II automorphisms, Whitehead
//! minimization and the Whitehead graph.

use crate::automorphism::{enumerate_type2, Endomorphism, TypeIIAut};
use crate::error::{Error, Result};
use crate::genericity::SubwordStats;
use crate::word::{Alphabet, CyclicWord, Letter, Word};

/// Change in cyclic length, computed by applying `t` and cyclically reducing.
pub fn cyclic_delta_direct(t: &TypeIIAut, w: &CyclicWord) -> Result<i64> {
    let image = t.apply(&w.as_word())?;
    Ok(image.cyclic_len() as i64 - w.len() as i64)
}

/// Change in cyclic length, from the letter and digram counts alone.
///
/// Between two consecutive letters outside `⟨a⟩` the image carries a run
/// `a^s · a^(±k) · a^(-p)`, where `s = [u ∈ A]` for the letter `u` before the
/// run, `p = [v⁻¹ ∈ A]` for the letter `v` after it, and `k` is the length of
/// the run of `a^(±1)` in `w`. Nothing cancels across those letters, so
/// each run changes length by `|s − p|` when `k = 0`, `s − p` for a run of `a`
/// and `p − s` for a run of `a⁻¹`. Every run is entered and left by exactly
/// one digram, which turns the sum into digram counts.
pub fn cyclic_delta_counts(t: &TypeIIAut, stats: &SubwordStats) -> i64 {
    let a = t.multiplier();
    let ai = a.inverse();
    let size = stats.alphabet_size();
    let hard = |u: Letter| u.generator() != a.generator();
    let mut delta = 0i64;
    for uc in 0..size {
        let u = Letter::from_code(uc);
        if !hard(u) {
            continue;
        }
        let u_in = t.contains(u);
        let v_in_inv = t.contains(u.inverse());
        for vc in 0..size {
            let v = Letter::from_code(vc);
            if !hard(v) || v == u.inverse() {
                continue;
            }
            if u_in != t.contains(v.inverse()) {
                delta += stats.digram(u, v) as i64;
            }
        }
        if u_in {
            delta += stats.digram(u, a) as i64 - stats.digram(u, ai) as i64;
        }
        // u in the role of the letter after a run
        if v_in_inv {
            delta += stats.digram(ai, u) as i64 - stats.digram(a, u) as i64;
        }
    }
    delta
}

/// Outcome of [`whitehead_minimize`].
#[derive(Debug, Clone)]
pub struct Minimization {
    pub minimal: CyclicWord,
    pub applied: Vec<TypeIIAut>,
}

/// Repeatedly applies the type II automorphism with the largest decrease in
/// cyclic length (first in enumeration order on ties) until none decreases.
pub fn whitehead_minimize(alphabet: &Alphabet, w: &CyclicWord) -> Result<Minimization> {
    alphabet.check_word(w.letters())?;
    let autos = enumerate_type2(alphabet.rank(), false);
    let mut current = w.clone();
    let mut applied = Vec::new();
    while !current.is_empty() {
        let stats = SubwordStats::of(alphabet, &current)?;
        let best = autos
            .iter()
            .map(|t| (cyclic_delta_counts(t, &stats), t))
            .filter(|(d, _)| *d < 0)
            .min_by_key(|(d, _)| *d);
        let Some((_, t)) = best else {
            break;
        };
        current = t.apply(&current.as_word())?.cyclic_reduce().0;
        applied.push(*t);
    }
    Ok(Minimization {
        minimal: current,
        applied,
    })
}

/// Convenience wrapper: cyclically reduces first.
pub fn whitehead_minimize_word(alphabet: &Alphabet, w: &Word) -> Result<Minimization> {
    whitehead_minimize(alphabet, &w.cyclic_reduce().0)
}

/// Undirected multigraph on `X±` with an edge `{x, y⁻¹}` for every cyclic
/// occurrence of `xy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhiteheadGraph {
    size: usize,
    /// Symmetric multiplicity matrix indexed by letter code.
    edges: Vec<u64>,
}

impl WhiteheadGraph {
    pub fn of(alphabet: &Alphabet, w: &CyclicWord) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        alphabet.check_word(w.letters())?;
        let size = alphabet.size();
        let mut edges = vec![0u64; size * size];
        let s = w.letters();
        for i in 0..s.len() {
            let x = s[i].code();
            let y = s[(i + 1) % s.len()].inverse().code();
            edges[x * size + y] += 1;
            if x != y {
                edges[y * size + x] += 1;
            }
        }
        Ok(WhiteheadGraph { size, edges })
    }

    pub fn multiplicity(&self, x: Letter, y: Letter) -> u64 {
        self.edges[x.code() * self.size + y.code()]
    }

    pub fn edge_count(&self) -> u64 {
        let mut total = 0;
        for i in 0..self.size {
            for j in i..self.size {
                total += self.edges[i * self.size + j];
            }
        }
        total
    }

    fn connected_without(&self, removed: Option<usize>) -> bool {
        let start = (0..self.size).find(|&v| Some(v) != removed);
        let Some(start) = start else {
            return true;
        };
        let mut seen = vec![false; self.size];
        if let Some(r) = removed {
            seen[r] = true;
        }
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in 0..self.size {
                if !seen[u] && self.edges[v * self.size + u] > 0 {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(None)
    }

    /// True when the graph on all of `X±` is disconnected or has a cut
    /// vertex. When false, the word lies in no proper free factor.
    pub fn has_cut_vertex_or_disconnected(&self) -> bool {
        !self.is_connected() || (0..self.size).any(|v| !self.connected_without(Some(v)))
    }
}
