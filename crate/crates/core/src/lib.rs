//! Free groups of finite rank: reduced and cyclic words, Whitehead
//! automorphisms, the generic set `TS′` of words with cyclic automorphism
//! stabilizers, and a bounded search for elementary cyclic splittings in
//! which a word is elliptic.
//!
//! Words in `TS′` are filling. A word that is elliptic in some elementary
//! cyclic splitting is not. [`splitting`] produces such witnesses and
//! [`experiments`] measures how large `TS′` is on spheres of the free group.

pub mod automorphism;
pub mod error;
pub mod experiments;
pub mod genericity;
pub mod splitting;
pub mod stallings;
pub mod whitehead;
pub mod word;

pub use automorphism::{
    enumerate_type1, enumerate_type2, EndoByImages, Endomorphism, TypeIAut, TypeIIAut,
    WhiteheadAut,
};
pub use error::{Error, Result};
pub use genericity::{
    epsilon_bound, FrequencyVerdict, FrequencyWindow, SubwordStats, TsChecker, TsVerdict,
};
pub use splitting::{SplittingSpec, WitnessSearch};
pub use stallings::StallingsGraph;
pub use whitehead::{
    cyclic_delta_counts, cyclic_delta_direct, whitehead_minimize, Minimization, WhiteheadGraph,
};
pub use word::{random_reduced_word, Alphabet, CyclicWord, Letter, Word};
