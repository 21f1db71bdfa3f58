//! Letters, freely reduced words and cyclic words over a finite alphabet.
//!
//! Letters are encoded as `2 * generator + inverted`, so the natural order on
//! codes is `a < A < b < B < ...`. That order is used for canonical rotations
//! and for every enumeration in the crate.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest supported rank; the text format has 26 letters.
pub const MAX_RANK: usize = 26;

/// The alphabet `X±` of a free group of rank `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if !(2..=MAX_RANK).contains(&rank) {
            return Err(Error::InvalidRank {
                rank,
                max: MAX_RANK,
            });
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters, `2N`.
    pub fn size(&self) -> usize {
        2 * self.rank
    }

    /// All letters in code order `a, A, b, B, ...`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.size() as u8).map(Letter)
    }

    pub fn generators(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.rank).map(|g| Letter::new(g, false))
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.generator() < self.rank
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::LetterOutOfRange {
                letter: l.to_char(),
                rank: self.rank,
            }),
            None => Ok(()),
        }
    }

    /// Size of the sphere of radius `n` in the Cayley graph: `2N(2N-1)^(n-1)`.
    pub fn sphere_size(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        let base = BigUint::from(2 * self.rank - 1);
        BigUint::from(2 * self.rank) * base.pow((n - 1) as u32)
    }

    pub fn ball_size(&self, n: usize) -> BigUint {
        (0..=n).fold(BigUint::zero(), |acc, k| acc + self.sphere_size(k))
    }

    /// Draws a uniformly random freely reduced word of length exactly `n`.
    pub fn random_word<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Word {
        let size = self.size() as u8;
        let mut letters: Vec<Letter> = Vec::with_capacity(n);
        for i in 0..n {
            let next = if i == 0 {
                Letter(rng.gen_range(0..size))
            } else {
                // skip the one letter that would cancel
                let forbidden = letters[i - 1].inverse().0;
                let mut code = rng.gen_range(0..size - 1);
                if code >= forbidden {
                    code += 1;
                }
                Letter(code)
            };
            letters.push(next);
        }
        Word(letters)
    }

    /// Iterates over every freely reduced word of length exactly `n`, in
    /// lexicographic order of letter codes.
    pub fn sphere(&self, n: usize) -> Sphere {
        Sphere::new(*self, n)
    }
}

/// Seeded form of [`Alphabet::random_word`].
pub fn random_reduced_word(alphabet: &Alphabet, n: usize, seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    alphabet.random_word(n, &mut rng)
}

/// A letter of `X±`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverted: bool) -> Self {
        debug_assert!(generator < 128);
        Letter((2 * generator + inverted as usize) as u8)
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u8)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// Zero-based generator index.
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.generator() as u8) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        if c.is_ascii_lowercase() {
            Ok(Letter::new((c as u8 - b'a') as usize, false))
        } else if c.is_ascii_uppercase() {
            Ok(Letter::new((c as u8 - b'A') as usize, true))
        } else {
            Err(Error::InvalidCharacter(c))
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    for l in letters {
        write!(f, "{}", l.to_char())?;
    }
    Ok(())
}

/// Pushes `letter` onto a reduced stack, cancelling against the top.
#[inline]
fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last() == Some(&letter.inverse()) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let iter = raw.into_iter();
        let mut stack = Vec::with_capacity(iter.size_hint().0);
        for l in iter {
            push_reduced(&mut stack, l);
        }
        Word(stack)
    }

    /// Wraps letters that are already known to be freely reduced.
    pub fn from_reduced(letters: Vec<Letter>) -> Result<Self> {
        if letters.windows(2).any(|p| p[0] == p[1].inverse()) {
            return Err(Error::Parse("word is not freely reduced".into()));
        }
        Ok(Word(letters))
    }

    /// Parses the text form (`a`..`z` generators, `A`..`Z` inverses) and
    /// freely reduces the result.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.trim().chars() {
            let l = Letter::from_char(c)?;
            if !alphabet.contains(l) {
                return Err(Error::LetterOutOfRange {
                    letter: c,
                    rank: alphabet.rank(),
                });
            }
            letters.push(l);
        }
        Ok(Word::free_reduce(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Largest generator index used, plus one.
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Product `self · other`, freely reduced.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.reserve(other.len());
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        g.inverse().concat(self).concat(g)
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self` as `conjugator⁻¹ · core · conjugator` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (CyclicWord, Word) {
        let w = &self.0;
        let n = w.len();
        let mut k = 0;
        while 2 * k + 1 < n && w[k] == w[n - 1 - k].inverse() {
            k += 1;
        }
        let core = CyclicWord(w[k..n - k].to_vec());
        let conjugator = Word(w[n - k..].to_vec());
        (core, conjugator)
    }

    /// Cyclic length: the length of the cyclic reduction.
    pub fn cyclic_len(&self) -> usize {
        let w = &self.0;
        let n = w.len();
        let mut k = 0;
        while 2 * k + 1 < n && w[k] == w[n - 1 - k].inverse() {
            k += 1;
        }
        n - 2 * k
    }

    /// Root and exponent of `self` as a group element: `self = root^exponent`
    /// with `root` not a proper power.
    pub fn root(&self) -> Result<(Word, usize)> {
        let (core, conj) = self.cyclic_reduce();
        let p = core.power_decomposition()?;
        Ok((p.root.into_word().conjugate(&conj), p.exponent))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"")?;
        write_letters(f, &self.0)?;
        write!(f, "\")")
    }
}

/// Result of [`CyclicWord::power_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerDecomposition {
    pub root: CyclicWord,
    pub exponent: usize,
}

impl PowerDecomposition {
    pub fn is_proper_power(&self) -> bool {
        self.exponent > 1
    }
}

/// A cyclically reduced word, compared up to rotation.
///
/// The letters keep the rotation they were built with; equality and hashing
/// go through the least rotation.
#[derive(Clone, Default)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let w = Word::from_reduced(letters).map_err(|_| Error::NotCyclicallyReduced)?;
        CyclicWord::try_from(w)
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let w = Word::parse(text, alphabet)?;
        CyclicWord::try_from(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn into_word(self) -> Word {
        Word(self.0)
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Rotation starting at position `k`.
    pub fn rotate(&self, k: usize) -> CyclicWord {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        CyclicWord(v)
    }

    /// Start index of the lexicographically least rotation (Booth).
    pub fn least_rotation_index(&self) -> usize {
        least_rotation(&self.0)
    }

    pub fn canonical_rotation(&self) -> Vec<Letter> {
        let k = self.least_rotation_index();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        v
    }

    /// Least rotation of `self` and of its inverse.
    pub fn canonical_up_to_inversion(&self) -> Vec<Letter> {
        let a = self.canonical_rotation();
        let b = self.inverse().canonical_rotation();
        a.min(b)
    }

    /// Smallest root and largest exponent with `self = root^exponent` as a
    /// letter sequence. Linear time via the prefix function.
    pub fn power_decomposition(&self) -> Result<PowerDecomposition> {
        let n = self.0.len();
        if n == 0 {
            return Err(Error::EmptyWord);
        }
        let period = smallest_period(&self.0);
        let (root_len, exponent) = if n.is_multiple_of(period) {
            (period, n / period)
        } else {
            (n, 1)
        };
        Ok(PowerDecomposition {
            root: CyclicWord(self.0[..root_len].to_vec()),
            exponent,
        })
    }

    pub fn is_proper_power(&self) -> Result<bool> {
        Ok(self.power_decomposition()?.is_proper_power())
    }
}

impl TryFrom<Word> for CyclicWord {
    type Error = Error;

    fn try_from(w: Word) -> Result<Self> {
        if !w.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced);
        }
        Ok(CyclicWord(w.0))
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.canonical_rotation() == other.canonical_rotation()
    }
}

impl Eq for CyclicWord {}

impl Hash for CyclicWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_rotation().hash(state);
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord(\"")?;
        write_letters(f, &self.0)?;
        write!(f, "\")")
    }
}

/// Start of the lexicographically least rotation, by the two-pointer
/// minimum-expression scan.
pub(crate) fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j).min(n.saturating_sub(1))
}

/// Smallest `p` with `s[i] = s[i + p]` for all valid `i`.
fn smallest_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    let mut pi = vec![0u32; n];
    for i in 1..n {
        let mut k = pi[i - 1] as usize;
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1] as usize;
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k as u32;
    }
    n - pi[n - 1] as usize
}

/// Odometer over the reduced words of a fixed length.
pub struct Sphere {
    size: u8,
    current: Option<Vec<Letter>>,
}

impl Sphere {
    fn new(alphabet: Alphabet, n: usize) -> Self {
        let size = alphabet.size() as u8;
        let first = vec![Letter(0); n];
        Sphere {
            size,
            current: Some(first),
        }
    }

    fn advance(&mut self) {
        let Some(cur) = self.current.as_mut() else {
            return;
        };
        let n = cur.len();
        let mut i = n;
        loop {
            if i == 0 {
                self.current = None;
                return;
            }
            i -= 1;
            // next admissible letter at position i
            let mut code = cur[i].0 + 1;
            if i > 0 && code == cur[i - 1].inverse().0 {
                code += 1;
            }
            if code < self.size {
                cur[i] = Letter(code);
                for j in i + 1..n {
                    let mut c = 0;
                    if c == cur[j - 1].inverse().0 {
                        c += 1;
                    }
                    cur[j] = Letter(c);
                }
                return;
            }
        }
    }
}

impl Iterator for Sphere {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let out = Word(self.current.clone()?);
        self.advance();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ab() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, &Alphabet::new(3).unwrap()).unwrap()
    }

    fn letters(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::from_char(c).unwrap()).collect()
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(Word::free_reduce(letters("aAb")).to_string(), "b");
        assert_eq!(Word::free_reduce(letters("")), Word::identity());
        assert_eq!(Word::free_reduce(letters("abBA")), Word::identity());
    }

    #[test]
    fn inverse_and_concat() {
        assert_eq!(w("ab").inverse().to_string(), "BA");
        assert_eq!(Word::identity().inverse(), Word::identity());
        assert_eq!(w("a").concat(&w("A")), Word::identity());
        assert_eq!(w("a").concat(&w("b")).to_string(), "ab");
        assert_eq!(w("ab").concat(&w("Ba")).to_string(), "aa");
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(w("b").conjugate(&w("a")).to_string(), "Aba");
        assert_eq!(w("abAc").conjugate(&Word::identity()), w("abAc"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, c) = w("abA").cyclic_reduce();
        assert_eq!(core.to_string(), "b");
        assert_eq!(core.as_word().conjugate(&c), w("abA"));

        let (core, c) = w("abAB").cyclic_reduce();
        assert_eq!(core.to_string(), "abAB");
        assert!(c.is_empty());

        let (core, c) = Word::free_reduce(letters("abBA")).cyclic_reduce();
        assert!(core.is_empty() && c.is_empty());

        // odd length with a single letter left in the middle
        let (core, c) = w("abcBA").cyclic_reduce();
        assert_eq!(core.to_string(), "c");
        assert_eq!(c.to_string(), "BA");
        assert_eq!(core.as_word().conjugate(&c), w("abcBA"));
    }

    #[test]
    fn power_examples() {
        let ab = ab();
        let p = CyclicWord::parse("abab", &ab).unwrap().power_decomposition().unwrap();
        assert_eq!((p.exponent, p.root.to_string()), (2, "ab".to_string()));
        let p = CyclicWord::parse("ab", &ab).unwrap().power_decomposition().unwrap();
        assert_eq!((p.exponent, p.root.to_string()), (1, "ab".to_string()));
        let p = CyclicWord::parse("abAB", &ab).unwrap().power_decomposition().unwrap();
        assert_eq!(p.exponent, 1);
        assert_eq!(
            CyclicWord::default().power_decomposition(),
            Err(Error::EmptyWord)
        );
    }

    /// Divisor-scan oracle for the root exponent.
    fn brute_exponent(s: &[Letter]) -> usize {
        let n = s.len();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| s[i] == s[i % p]))
            .map(|p| n / p)
            .unwrap()
    }

    #[test]
    fn power_matches_divisor_scan_exhaustively() {
        let ab = ab();
        for n in 1..=8 {
            for word in ab.sphere(n) {
                let Ok(c) = CyclicWord::try_from(word.clone()) else {
                    continue;
                };
                let p = c.power_decomposition().unwrap();
                assert_eq!(p.exponent, brute_exponent(word.letters()), "{word}");
                assert_eq!(p.root.as_word().pow(p.exponent as i64), word);
            }
        }
    }

    #[test]
    fn sphere_and_ball_sizes() {
        let two = Alphabet::new(2).unwrap();
        let three = Alphabet::new(3).unwrap();
        assert_eq!(two.ball_size(1), BigUint::from(5u32));
        assert_eq!(two.ball_size(2), BigUint::from(17u32));
        assert_eq!(three.sphere_size(3), BigUint::from(150u32));
        assert_eq!(two.sphere_size(0), BigUint::one());
        // past 64 bits without wrapping
        assert!(two.sphere_size(60) > BigUint::from(u64::MAX));
    }

    #[test]
    fn sphere_enumeration_is_complete_and_distinct() {
        for rank in [2, 3] {
            let alpha = Alphabet::new(rank).unwrap();
            for n in 0..=5 {
                let words: Vec<Word> = alpha.sphere(n).collect();
                let distinct: HashSet<_> = words.iter().cloned().collect();
                assert_eq!(BigUint::from(words.len()), alpha.sphere_size(n));
                assert_eq!(distinct.len(), words.len());
                assert!(words.iter().all(|x| x.len() == n
                    && Word::free_reduce(x.letters().to_vec()) == *x));
            }
        }
    }

    #[test]
    fn random_word_small_sphere_coverage() {
        let ab = ab();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let seen: HashSet<Word> = (0..2000).map(|_| ab.random_word(2, &mut rng)).collect();
        assert_eq!(seen.len(), 12);
        assert!(random_reduced_word(&ab, 0, 3).is_empty());
        assert_eq!(random_reduced_word(&ab, 40, 9), random_reduced_word(&ab, 40, 9));
    }

    #[test]
    fn random_word_first_letter_is_uniform() {
        let ab = ab();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            counts[ab.random_word(5, &mut rng).letters()[0].code()] += 1;
        }
        let p: f64 = 0.25;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - draws as f64 * p).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn cyclic_word_equality_is_rotation_invariant() {
        let ab = ab();
        let x = CyclicWord::parse("aabAB", &ab).unwrap();
        for k in 0..5 {
            assert_eq!(x.rotate(k), x);
        }
        assert_ne!(x, CyclicWord::parse("aaBAb", &ab).unwrap());
        assert!(CyclicWord::parse("abA", &ab).is_err());
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        let ab = ab();
        for n in 1..=7 {
            for word in ab.sphere(n) {
                let s = word.letters();
                let brute = (0..n)
                    .map(|k| [&s[k..], &s[..k]].concat())
                    .min()
                    .unwrap();
                let k = least_rotation(s);
                assert_eq!([&s[k..], &s[..k]].concat(), brute);
            }
        }
    }

    #[test]
    fn parse_rejects_letters_beyond_rank() {
        let ab = ab();
        assert!(matches!(
            Word::parse("abc", &ab),
            Err(Error::LetterOutOfRange { letter: 'c', .. })
        ));
        assert!(matches!(Word::parse("a1", &ab), Err(Error::InvalidCharacter('1'))));
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(27).is_err());
    }
}
