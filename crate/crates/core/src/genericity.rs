//! Subword statistics, the frequency window `L(ε)` and the set `TS`.
//!
//! `TS` is the set of nonempty cyclically reduced words that are not proper
//! powers, whose cyclic length strictly grows under every non-inner type II
//! Whitehead automorphism, and whose conjugacy class is moved by every
//! non-identity relabeling. `TS′` is everything whose cyclic reduction lies
//! in `TS`. Membership is linear in the word length for a fixed rank.

use std::fmt;

use num_rational::Ratio;

use crate::automorphism::{enumerate_type1, enumerate_type2, TypeIAut, TypeIIAut};
use crate::error::{Error, Result};
use crate::whitehead::cyclic_delta_counts;
use crate::word::{least_rotation, Alphabet, CyclicWord, Letter, Word};

/// Cyclic letter counts `w_x` and digram counts `w_xy` of a cyclic word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubwordStats {
    size: usize,
    n: u64,
    singles: Vec<u64>,
    digrams: Vec<u64>,
}

impl SubwordStats {
    pub fn of(alphabet: &Alphabet, w: &CyclicWord) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        alphabet.check_word(w.letters())?;
        Ok(Self::of_letters(alphabet.size(), w.letters()))
    }

    fn of_letters(size: usize, s: &[Letter]) -> Self {
        let mut singles = vec![0u64; size];
        let mut digrams = vec![0u64; size * size];
        let mut prev = s[s.len() - 1].code();
        for l in s {
            let c = l.code();
            singles[c] += 1;
            digrams[prev * size + c] += 1;
            prev = c;
        }
        SubwordStats {
            size,
            n: s.len() as u64,
            singles,
            digrams,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.size
    }

    /// Cyclic length.
    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn single(&self, x: Letter) -> u64 {
        self.singles[x.code()]
    }

    #[inline]
    pub fn digram(&self, x: Letter, y: Letter) -> u64 {
        self.digrams[x.code() * self.size + y.code()]
    }

    /// Whether relabeling by `s` leaves every count unchanged; a necessary
    /// condition for `s` to fix the conjugacy class.
    fn invariant_under(&self, s: &TypeIAut) -> bool {
        let table = s.letter_table();
        (0..self.size).all(|x| self.singles[x] == self.singles[table[x].code()])
            && (0..self.size).all(|x| {
                (0..self.size).all(|y| {
                    self.digrams[x * self.size + y]
                        == self.digrams[table[x].code() * self.size + table[y].code()]
                })
            })
    }
}

/// `(2N − 3) / (N (2N − 1) (4N − 3))`.
pub fn epsilon_bound(rank: usize) -> Result<Ratio<i64>> {
    if rank < 2 {
        return Err(Error::InvalidRank {
            rank,
            max: crate::word::MAX_RANK,
        });
    }
    let n = rank as i64;
    Ok(Ratio::new(2 * n - 3, n * (2 * n - 1) * (4 * n - 3)))
}

/// Result of a frequency-window check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrequencyVerdict {
    Inside,
    /// The first subword (one or two letters) whose frequency leaves the window.
    Outside { subword: Vec<Letter>, count: u64, n: u64 },
}

impl FrequencyVerdict {
    pub fn is_inside(&self) -> bool {
        matches!(self, FrequencyVerdict::Inside)
    }
}

impl fmt::Display for FrequencyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencyVerdict::Inside => write!(f, "inside"),
            FrequencyVerdict::Outside { subword, count, n } => {
                let s: String = subword.iter().map(|l| l.to_char()).collect();
                write!(f, "frequency of {s} is {count}/{n}")
            }
        }
    }
}

/// The open window of half-width `ε` around the uniform letter and digram
/// frequencies `1/2N` and `1/(2N(2N−1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyWindow {
    alphabet: Alphabet,
    epsilon: Ratio<i64>,
}

impl FrequencyWindow {
    pub fn new(alphabet: Alphabet, epsilon: Ratio<i64>) -> Result<Self> {
        if epsilon <= Ratio::from_integer(0) {
            return Err(Error::Parse(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(FrequencyWindow { alphabet, epsilon })
    }

    pub fn epsilon(&self) -> Ratio<i64> {
        self.epsilon
    }

    /// Whether `ε` is below the bound under which the window forces every
    /// non-inner type II automorphism to lengthen the word.
    pub fn below_bound(&self) -> bool {
        self.epsilon < epsilon_bound(self.alphabet.rank()).expect("rank >= 2")
    }

    /// `|count/n − 1/d| < ε`, in exact integer arithmetic.
    fn within(&self, count: u64, n: u64, d: i128) -> bool {
        let p = *self.epsilon.numer() as i128;
        let q = *self.epsilon.denom() as i128;
        let (count, n) = (count as i128, n as i128);
        (d * count - n).abs() * q < p * d * n
    }

    pub fn check_stats(&self, stats: &SubwordStats) -> FrequencyVerdict {
        let size = self.alphabet.size();
        let n = stats.len();
        let d1 = size as i128;
        let d2 = (size * (size - 1)) as i128;
        for x in self.alphabet.letters() {
            let c = stats.single(x);
            if !self.within(c, n, d1) {
                return FrequencyVerdict::Outside {
                    subword: vec![x],
                    count: c,
                    n,
                };
            }
        }
        for x in self.alphabet.letters() {
            for y in self.alphabet.letters().filter(|y| *y != x.inverse()) {
                let c = stats.digram(x, y);
                if !self.within(c, n, d2) {
                    return FrequencyVerdict::Outside {
                        subword: vec![x, y],
                        count: c,
                        n,
                    };
                }
            }
        }
        FrequencyVerdict::Inside
    }

    /// Membership in `L(ε)`.
    pub fn check(&self, w: &CyclicWord) -> Result<FrequencyVerdict> {
        Ok(self.check_stats(&SubwordStats::of(&self.alphabet, w)?))
    }

    pub fn contains(&self, w: &CyclicWord) -> Result<bool> {
        Ok(self.check(w)?.is_inside())
    }

    /// Membership in `L′(ε)`: the cyclic reduction lies in `L(ε)`. The
    /// identity is not a member.
    pub fn contains_word(&self, w: &Word) -> Result<bool> {
        let core = w.cyclic_reduce().0;
        if core.is_empty() {
            return Ok(false);
        }
        self.contains(&core)
    }
}

/// Why a word is or is not in `TS`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TsVerdict {
    Member,
    Empty,
    ProperPower { root: CyclicWord, exponent: usize },
    /// A non-inner type II automorphism that does not increase cyclic length.
    TypeIINonIncrease { aut: TypeIIAut, delta: i64 },
    /// A non-identity relabeling that fixes the conjugacy class.
    TypeIFixer { aut: TypeIAut },
}

impl TsVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, TsVerdict::Member)
    }
}

impl fmt::Display for TsVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TsVerdict::Member => write!(f, "member"),
            TsVerdict::Empty => write!(f, "identity"),
            TsVerdict::ProperPower { root, exponent } => {
                write!(f, "proper power: ({root})^{exponent}")
            }
            TsVerdict::TypeIINonIncrease { aut, delta } => {
                write!(f, "type II delta {delta} at {aut}")
            }
            TsVerdict::TypeIFixer { aut } => write!(f, "type I fixer {aut}"),
        }
    }
}

/// Membership tester for `TS` and `TS′` at a fixed rank. Holds the
/// enumerated Whitehead automorphisms so repeated checks do not rebuild them.
#[derive(Debug, Clone)]
pub struct TsChecker {
    alphabet: Alphabet,
    type1: Vec<TypeIAut>,
    type2: Vec<TypeIIAut>,
}

impl TsChecker {
    pub fn new(alphabet: Alphabet) -> Self {
        let rank = alphabet.rank();
        TsChecker {
            alphabet,
            type1: enumerate_type1(rank)
                .into_iter()
                .filter(|s| !s.is_identity())
                .collect(),
            type2: enumerate_type2(rank, false),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn in_ts(&self, w: &CyclicWord) -> Result<TsVerdict> {
        if w.is_empty() {
            return Ok(TsVerdict::Empty);
        }
        let stats = SubwordStats::of(&self.alphabet, w)?;
        let power = w.power_decomposition()?;
        if power.is_proper_power() {
            return Ok(TsVerdict::ProperPower {
                root: power.root,
                exponent: power.exponent,
            });
        }
        for t in &self.type2 {
            let delta = cyclic_delta_counts(t, &stats);
            if delta <= 0 {
                return Ok(TsVerdict::TypeIINonIncrease { aut: *t, delta });
            }
        }
        let mut canonical: Option<Vec<Letter>> = None;
        for s in &self.type1 {
            if !stats.invariant_under(s) {
                continue;
            }
            let canon = canonical.get_or_insert_with(|| w.canonical_rotation());
            let image = s.apply_letters(w.letters());
            let k = least_rotation(&image);
            if image[k..].iter().chain(&image[..k]).eq(canon.iter()) {
                return Ok(TsVerdict::TypeIFixer { aut: s.clone() });
            }
        }
        Ok(TsVerdict::Member)
    }

    pub fn in_ts_prime(&self, w: &Word) -> Result<TsVerdict> {
        self.in_ts(&w.cyclic_reduce().0)
    }

    pub fn is_ts_prime(&self, w: &Word) -> bool {
        self.in_ts_prime(w).map(|v| v.is_member()).unwrap_or(false)
    }
}

pub fn in_ts(alphabet: &Alphabet, w: &CyclicWord) -> Result<TsVerdict> {
    TsChecker::new(*alphabet).in_ts(w)
}

pub fn in_ts_prime(alphabet: &Alphabet, w: &Word) -> Result<TsVerdict> {
    TsChecker::new(*alphabet).in_ts_prime(w)
}
