//! Endomorphisms given by generator images and the two families of
//! Whitehead automorphisms.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// Something that sends letters to words and extends multiplicatively.
pub trait Endomorphism {
    fn rank(&self) -> usize;

    /// Image of a single letter (not necessarily reduced against neighbours).
    fn image_of(&self, letter: Letter) -> Word;

    /// Substitutes images and freely reduces.
    fn apply(&self, w: &Word) -> Result<Word> {
        check_rank(self.rank(), w)?;
        let images: Vec<Word> = (0..2 * self.rank())
            .map(|c| self.image_of(Letter::from_code(c)))
            .collect();
        Ok(Word::free_reduce(
            w.letters()
                .iter()
                .flat_map(|l| images[l.code()].letters().iter().copied()),
        ))
    }

    fn to_images(&self) -> EndoByImages {
        EndoByImages {
            images: (0..self.rank())
                .map(|g| self.image_of(Letter::new(g, false)))
                .collect(),
        }
    }
}

fn check_rank(rank: usize, w: &Word) -> Result<()> {
    match w.letters().iter().find(|l| l.generator() >= rank) {
        Some(l) => Err(Error::RankMismatch {
            map: rank,
            generator: l.generator(),
        }),
        None => Ok(()),
    }
}

/// An endomorphism given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoByImages {
    pub images: Vec<Word>,
}

impl EndoByImages {
    pub fn new(images: Vec<Word>) -> Self {
        EndoByImages { images }
    }

    pub fn identity(rank: usize) -> Self {
        EndoByImages {
            images: (0..rank).map(|g| Word::letter(Letter::new(g, false))).collect(),
        }
    }

    /// `x ↦ g⁻¹ x g` for every generator.
    pub fn conjugation(rank: usize, g: &Word) -> Self {
        EndoByImages {
            images: (0..rank)
                .map(|i| Word::letter(Letter::new(i, false)).conjugate(g))
                .collect(),
        }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after<E: Endomorphism + ?Sized>(&self, first: &E) -> Result<EndoByImages> {
        let images = first
            .to_images()
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(EndoByImages { images })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(g, w)| w.letters() == [Letter::new(g, false)])
    }

    /// Parses `a->ab, b->B`. Generators that are not mentioned map to
    /// themselves.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut images = EndoByImages::identity(alphabet.rank()).images;
        let mut seen = vec![false; alphabet.rank()];
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) = part
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected `x->word`, got `{part}`")))?;
            let lhs = lhs.trim();
            let mut chars = lhs.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::Parse(format!("expected a single generator, got `{lhs}`")));
            };
            let g = Letter::from_char(c)?;
            if g.is_inverse() || !alphabet.contains(g) {
                return Err(Error::Parse(format!("`{c}` is not a generator")));
            }
            if std::mem::replace(&mut seen[g.generator()], true) {
                return Err(Error::Parse(format!("generator `{c}` given twice")));
            }
            images[g.generator()] = Word::parse(rhs, alphabet)?;
        }
        Ok(EndoByImages { images })
    }
}

impl Endomorphism for EndoByImages {
    fn rank(&self) -> usize {
        self.images.len()
    }

    fn image_of(&self, letter: Letter) -> Word {
        let w = &self.images[letter.generator()];
        if letter.is_inverse() {
            w.inverse()
        } else {
            w.clone()
        }
    }
}

impl fmt::Display for EndoByImages {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .images
            .iter()
            .enumerate()
            .map(|(g, w)| format!("{}->{}", Letter::new(g, false), w));
        write!(f, "{}", parts.format(", "))
    }
}

/// A relabeling automorphism: a permutation of `X±` commuting with inversion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeIAut {
    /// Image of each generator, by index.
    images: Vec<Letter>,
}

impl TypeIAut {
    pub fn new(images: Vec<Letter>) -> Result<Self> {
        let rank = images.len();
        let mut hit = vec![false; rank];
        for l in &images {
            if l.generator() >= rank || std::mem::replace(&mut hit[l.generator()], true) {
                return Err(Error::InvalidAutomorphism(
                    "type I images must be a signed permutation of the generators".into(),
                ));
            }
        }
        Ok(TypeIAut { images })
    }

    pub fn identity(rank: usize) -> Self {
        TypeIAut {
            images: (0..rank).map(|g| Letter::new(g, false)).collect(),
        }
    }

    pub fn images(&self) -> &[Letter] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(g, l)| *l == Letter::new(g, false))
    }

    #[inline]
    pub fn map_letter(&self, l: Letter) -> Letter {
        let img = self.images[l.generator()];
        if l.is_inverse() {
            img.inverse()
        } else {
            img
        }
    }

    /// Letter-by-letter relabeling; no reduction is needed.
    pub fn apply_letters(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter().map(|&l| self.map_letter(l)).collect()
    }

    pub fn inverse(&self) -> TypeIAut {
        let mut inv = vec![Letter::new(0, false); self.images.len()];
        for (g, l) in self.images.iter().enumerate() {
            inv[l.generator()] = Letter::new(g, l.is_inverse());
        }
        TypeIAut { images: inv }
    }

    /// Permutation table on letter codes.
    pub fn letter_table(&self) -> Vec<Letter> {
        (0..2 * self.images.len())
            .map(|c| self.map_letter(Letter::from_code(c)))
            .collect()
    }
}

impl Endomorphism for TypeIAut {
    fn rank(&self) -> usize {
        self.images.len()
    }

    fn image_of(&self, letter: Letter) -> Word {
        Word::letter(self.map_letter(letter))
    }

    fn apply(&self, w: &Word) -> Result<Word> {
        check_rank(self.rank(), w)?;
        Word::from_reduced(self.apply_letters(w.letters()))
    }
}

impl fmt::Display for TypeIAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .images
            .iter()
            .enumerate()
            .map(|(g, l)| format!("{}->{}", Letter::new(g, false), l));
        write!(f, "{}", parts.format(", "))
    }
}

/// All `2^N · N!` relabelings; the identity comes first.
pub fn enumerate_type1(rank: usize) -> Vec<TypeIAut> {
    let mut out = Vec::with_capacity((1 << rank) * (1..=rank).product::<usize>());
    for perm in (0..rank).permutations(rank) {
        for signs in 0u32..(1 << rank) {
            let images = perm
                .iter()
                .enumerate()
                .map(|(i, &g)| Letter::new(g, signs >> i & 1 == 1))
                .collect();
            out.push(TypeIAut { images });
        }
    }
    out
}

/// A type II Whitehead automorphism `(A, a)`.
///
/// Letters are sent to `u`, `u a`, `a⁻¹ u` or `a⁻¹ u a` according to whether
/// `u` and `u⁻¹` lie in `A`; the multiplier's own generator is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TypeIIAut {
    rank: usize,
    multiplier: Letter,
    /// Bitmask over letter codes.
    set: u64,
}

impl TypeIIAut {
    pub fn new(rank: usize, multiplier: Letter, set: &[Letter]) -> Result<Self> {
        let mut mask = 0u64;
        for l in set {
            if l.generator() >= rank {
                return Err(Error::InvalidAutomorphism(format!(
                    "letter {l} outside rank {rank}"
                )));
            }
            mask |= 1 << l.code();
        }
        Self::from_mask(rank, multiplier, mask)
    }

    pub fn from_mask(rank: usize, multiplier: Letter, set: u64) -> Result<Self> {
        if multiplier.generator() >= rank {
            return Err(Error::InvalidAutomorphism(format!(
                "multiplier {multiplier} outside rank {rank}"
            )));
        }
        if set >> multiplier.code() & 1 == 0 || set >> multiplier.inverse().code() & 1 == 1 {
            return Err(Error::InvalidAutomorphism(
                "the set must contain the multiplier and not its inverse".into(),
            ));
        }
        if 2 * rank < 64 && set >> (2 * rank) != 0 {
            return Err(Error::InvalidAutomorphism("set has letters outside the rank".into()));
        }
        Ok(TypeIIAut {
            rank,
            multiplier,
            set,
        })
    }

    pub fn multiplier(&self) -> Letter {
        self.multiplier
    }

    pub fn mask(&self) -> u64 {
        self.set
    }

    #[inline]
    pub fn contains(&self, l: Letter) -> bool {
        self.set >> l.code() & 1 == 1
    }

    pub fn set_letters(&self) -> Vec<Letter> {
        (0..2 * self.rank)
            .map(Letter::from_code)
            .filter(|&l| self.contains(l))
            .collect()
    }

    fn full_mask(&self) -> u64 {
        (1u64 << (2 * self.rank)) - 1
    }

    /// `A = {a}`.
    pub fn is_identity(&self) -> bool {
        self.set == 1 << self.multiplier.code()
    }

    /// `A = X± ∖ {a⁻¹}`, which is conjugation by `a`.
    pub fn is_inner(&self) -> bool {
        self.set == self.full_mask() & !(1 << self.multiplier.inverse().code())
    }

    /// `(A − a + a⁻¹, a⁻¹)`.
    pub fn inverse(&self) -> TypeIIAut {
        let a = self.multiplier;
        TypeIIAut {
            rank: self.rank,
            multiplier: a.inverse(),
            set: (self.set & !(1 << a.code())) | 1 << a.inverse().code(),
        }
    }
}

impl Endomorphism for TypeIIAut {
    fn rank(&self) -> usize {
        self.rank
    }

    fn image_of(&self, u: Letter) -> Word {
        let a = self.multiplier;
        if u.generator() == a.generator() {
            return Word::letter(u);
        }
        let mut v = Vec::with_capacity(3);
        if self.contains(u.inverse()) {
            v.push(a.inverse());
        }
        v.push(u);
        if self.contains(u) {
            v.push(a);
        }
        Word::from_reduced(v).expect("a and u are distinct generators")
    }
}

impl fmt::Display for TypeIIAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {{{}}})",
            self.multiplier,
            self.set_letters().iter().format(",")
        )
    }
}

/// All type II automorphisms, ordered by multiplier code and then by subset
/// mask. With `include_inner = false` the identity `A = {a}` and the inner
/// `A = X± ∖ {a⁻¹}` are skipped.
pub fn enumerate_type2(rank: usize, include_inner: bool) -> Vec<TypeIIAut> {
    let size = 2 * rank;
    let mut out = Vec::new();
    for code in 0..size {
        let a = Letter::from_code(code);
        let others: Vec<usize> = (0..size)
            .filter(|&c| c != a.code() && c != a.inverse().code())
            .collect();
        for sub in 0u64..(1 << others.len()) {
            let mut set = 1u64 << a.code();
            for (bit, &c) in others.iter().enumerate() {
                if sub >> bit & 1 == 1 {
                    set |= 1 << c;
                }
            }
            let t = TypeIIAut {
                rank,
                multiplier: a,
                set,
            };
            if include_inner || !(t.is_identity() || t.is_inner()) {
                out.push(t);
            }
        }
    }
    out
}

/// Either family of Whitehead automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WhiteheadAut {
    TypeI(TypeIAut),
    TypeII(TypeIIAut),
}

impl WhiteheadAut {
    pub fn inverse(&self) -> WhiteheadAut {
        match self {
            WhiteheadAut::TypeI(s) => WhiteheadAut::TypeI(s.inverse()),
            WhiteheadAut::TypeII(t) => WhiteheadAut::TypeII(t.inverse()),
        }
    }

    /// Parses `(a; {a,b})` as type II and `a->b, b->A` as type I.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('(') {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse("missing `)`".into()))?;
            let (mult, set) = inner
                .split_once(';')
                .ok_or_else(|| Error::Parse("expected `(a; {..})`".into()))?;
            let mult = Word::parse(mult, alphabet)?;
            let [a] = mult.letters() else {
                return Err(Error::Parse("multiplier must be a single letter".into()));
            };
            let set = set
                .trim()
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| Error::Parse("expected `{..}`".into()))?;
            let mut letters = Vec::new();
            for item in set.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let mut chars = item.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(Error::Parse(format!("`{item}` is not a letter")));
                };
                let l = Letter::from_char(c)?;
                if !alphabet.contains(l) {
                    return Err(Error::LetterOutOfRange {
                        letter: c,
                        rank: alphabet.rank(),
                    });
                }
                letters.push(l);
            }
            return Ok(WhiteheadAut::TypeII(TypeIIAut::new(
                alphabet.rank(),
                *a,
                &letters,
            )?));
        }
        let endo = EndoByImages::parse(text, alphabet)?;
        let images = endo
            .images
            .iter()
            .map(|w| match w.letters() {
                [l] => Ok(*l),
                _ => Err(Error::Parse("type I images must be single letters".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WhiteheadAut::TypeI(TypeIAut::new(images)?))
    }
}

impl Endomorphism for WhiteheadAut {
    fn rank(&self) -> usize {
        match self {
            WhiteheadAut::TypeI(s) => s.rank(),
            WhiteheadAut::TypeII(t) => t.rank(),
        }
    }

    fn image_of(&self, letter: Letter) -> Word {
        match self {
            WhiteheadAut::TypeI(s) => s.image_of(letter),
            WhiteheadAut::TypeII(t) => t.image_of(letter),
        }
    }
}

impl fmt::Display for WhiteheadAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhiteheadAut::TypeI(s) => s.fmt(f),
            WhiteheadAut::TypeII(t) => t.fmt(f),
        }
    }
}
