//! Folded subgroup graphs.
//!
//! A finitely generated subgroup `H ≤ F(X)` is represented by the folded
//! core graph obtained from a wedge of loops spelling its generators. A
//! reduced word lies in `H` exactly when it labels a closed path at the base
//! vertex.

use std::collections::VecDeque;

use crate::automorphism::{EndoByImages, Endomorphism};
use crate::word::{Alphabet, CyclicWord, Letter, Word};

const NONE: u32 = u32::MAX;

/// Folded, core-trimmed subgroup graph in canonical vertex numbering.
///
/// Vertices are numbered breadth-first from the base (vertex 0), scanning
/// letters in code order, so two graphs are isomorphic exactly when they are
/// equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StallingsGraph {
    size: usize,
    vertices: usize,
    /// `trans[v * size + l]` is the target of the edge leaving `v` labelled `l`.
    trans: Vec<u32>,
}

struct Folder {
    size: usize,
    parent: Vec<usize>,
    adj: Vec<Vec<u32>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new(size: usize) -> Self {
        Folder {
            size,
            parent: vec![0],
            adj: vec![vec![NONE; size]],
            pending: Vec::new(),
        }
    }

    fn add_vertex(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.adj.push(vec![NONE; self.size]);
        v
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn set_half(&mut self, u: usize, l: Letter, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        match self.adj[u][l.code()] {
            NONE => self.adj[u][l.code()] = v as u32,
            t => {
                if self.find(t as usize) != v {
                    self.pending.push((t as usize, v));
                }
            }
        }
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        self.set_half(u, l, v);
        self.set_half(v, l.inverse(), u);
        self.fold();
    }

    fn fold(&mut self) {
        while let Some((p, q)) = self.pending.pop() {
            let (p, q) = (self.find(p), self.find(q));
            if p == q {
                continue;
            }
            self.parent[q] = p;
            let moved = std::mem::take(&mut self.adj[q]);
            for (code, t) in moved.into_iter().enumerate() {
                if t == NONE {
                    continue;
                }
                match self.adj[p][code] {
                    NONE => self.adj[p][code] = t,
                    t2 => {
                        if self.find(t2 as usize) != self.find(t as usize) {
                            self.pending.push((t2 as usize, t as usize));
                        }
                    }
                }
            }
        }
    }

    fn add_petal(&mut self, w: &Word) {
        let letters = w.letters();
        let mut cur = 0;
        for (i, &l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                self.add_vertex()
            };
            self.add_edge(cur, l, next);
            cur = next;
        }
    }

    fn finish(mut self) -> StallingsGraph {
        let size = self.size;
        let n = self.parent.len();
        // resolve every target to its representative
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for v in 0..n {
            if self.find(v) != v {
                continue;
            }
            let row = std::mem::take(&mut self.adj[v]);
            adj[v] = row
                .into_iter()
                .map(|t| if t == NONE { NONE } else { self.find(t as usize) as u32 })
                .collect();
        }
        let base = self.find(0);
        // trim hanging trees away from the base
        let degree = |row: &Vec<u32>| row.iter().filter(|&&t| t != NONE).count();
        let mut alive: Vec<bool> = (0..n).map(|v| !adj[v].is_empty()).collect();
        let mut queue: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && v != base && degree(&adj[v]) <= 1)
            .collect();
        while let Some(v) = queue.pop() {
            if !alive[v] || degree(&adj[v]) > 1 {
                continue;
            }
            alive[v] = false;
            for code in 0..size {
                let t = adj[v][code];
                if t == NONE {
                    continue;
                }
                let t = t as usize;
                adj[t][code ^ 1] = NONE;
                if t != base && degree(&adj[t]) <= 1 {
                    queue.push(t);
                }
            }
            adj[v].iter_mut().for_each(|t| *t = NONE);
        }
        // canonical breadth-first numbering
        let mut index = vec![NONE; n];
        let mut order = vec![base];
        index[base] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for code in 0..size {
                let t = adj[v][code];
                if t != NONE && index[t as usize] == NONE {
                    index[t as usize] = order.len() as u32;
                    order.push(t as usize);
                }
            }
        }
        let mut trans = vec![NONE; order.len() * size];
        for (i, &v) in order.iter().enumerate() {
            for code in 0..size {
                let t = adj[v][code];
                if t != NONE {
                    trans[i * size + code] = index[t as usize];
                }
            }
        }
        StallingsGraph {
            size,
            vertices: order.len(),
            trans,
        }
    }
}

impl StallingsGraph {
    /// Folds the wedge of loops spelling `generators`. Letters beyond the
    /// alphabet's rank are not checked here.
    pub fn new(alphabet: &Alphabet, generators: &[Word]) -> Self {
        let mut folder = Folder::new(alphabet.size());
        for g in generators.iter().filter(|g| !g.is_empty()) {
            folder.add_petal(g);
        }
        folder.finish()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Number of (undirected) edges.
    pub fn edge_count(&self) -> usize {
        self.trans
            .iter()
            .enumerate()
            .filter(|(i, &t)| t != NONE && i % 2 == 0)
            .count()
    }

    /// Rank of the subgroup, `E − V + 1`.
    pub fn subgroup_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertices
    }

    pub fn degree(&self, v: usize) -> usize {
        self.trans[v * self.size..(v + 1) * self.size]
            .iter()
            .filter(|&&t| t != NONE)
            .count()
    }

    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        match self.trans.get(v * self.size + l.code()) {
            Some(&t) if t != NONE => Some(t as usize),
            _ => None,
        }
    }

    /// Follows `letters` from `start`.
    pub fn read_from(&self, start: usize, letters: &[Letter]) -> Option<usize> {
        letters.iter().try_fold(start, |v, &l| self.target(v, l))
    }

    /// Membership: `w` labels a closed path at the base.
    pub fn contains(&self, w: &Word) -> bool {
        self.read_from(0, w.letters()) == Some(0)
    }

    /// True when the subgroup is all of `F(X)`.
    pub fn is_whole_group(&self) -> bool {
        self.vertices == 1 && self.trans.iter().all(|&t| t == 0)
    }

    /// Label of a shortest path from the base to every vertex.
    pub fn base_paths(&self) -> Vec<Word> {
        let mut paths: Vec<Option<Vec<Letter>>> = vec![None; self.vertices];
        paths[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for code in 0..self.size {
                let l = Letter::from_code(code);
                if let Some(t) = self.target(v, l) {
                    if paths[t].is_none() {
                        let mut p = paths[v].clone().unwrap();
                        p.push(l);
                        paths[t] = Some(p);
                        queue.push_back(t);
                    }
                }
            }
        }
        paths
            .into_iter()
            .map(|p| Word::free_reduce(p.expect("graph is connected")))
            .collect()
    }

    /// Finds `c` with `c⁻¹ w c ∈ H`, if `w` is conjugate into the subgroup.
    ///
    /// The cyclic reduction of `w` must label a closed loop at some vertex;
    /// the path from the base to that vertex supplies the conjugator.
    pub fn conjugator_into(&self, w: &Word) -> Option<Word> {
        let (core, d) = w.cyclic_reduce();
        if core.is_empty() {
            return Some(Word::identity());
        }
        let v = self.closed_loop_vertex(&core)?;
        let t = &self.base_paths()[v];
        // w = d⁻¹ core d and t core t⁻¹ ∈ H, so c = d⁻¹ t⁻¹
        Some(d.inverse().concat(&t.inverse()))
    }

    fn closed_loop_vertex(&self, core: &CyclicWord) -> Option<usize> {
        (0..self.vertices).find(|&v| self.read_from(v, core.letters()) == Some(v))
    }

    pub fn conjugate_into(&self, w: &Word) -> bool {
        let core = w.cyclic_reduce().0;
        core.is_empty() || self.closed_loop_vertex(&core).is_some()
    }
}

/// Whether `words` generate the whole free group.
pub fn generates_whole_group(alphabet: &Alphabet, words: &[Word]) -> bool {
    StallingsGraph::new(alphabet, words).is_whole_group()
}

/// Fold check: an endomorphism of a free group is an automorphism exactly
/// when the images of the generators generate the group.
pub fn is_automorphism(alphabet: &Alphabet, phi: &EndoByImages) -> bool {
    phi.rank() == alphabet.rank() && generates_whole_group(alphabet, &phi.images)
}
