//! Sampling experiments: densities of `TS′`, `L(ε)` and `L′(ε)` on spheres,
//! exponential-decay fits, the membership timing benchmark and a
//! consistency check between `TS′` and elliptic words.
//!
//! Every sample draws from its own generator seeded by mixing the master
//! seed with the row and sample index, so results do not depend on how the
//! work is split across threads.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::automorphism::{enumerate_type1, enumerate_type2, Endomorphism, WhiteheadAut};
use crate::error::{Error, Result};
use crate::genericity::{FrequencyWindow, TsChecker};
use crate::splitting::{enumerate_small_splittings, SplittingOracle};
use crate::stallings::StallingsGraph;
use crate::whitehead::whitehead_minimize_word;
use crate::word::{Alphabet, Letter, Word};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for sample `sample` of row `row`.
pub fn derive_seed(seed: u64, row: u64, sample: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(row)).wrapping_add(sample))
}

fn sample_rng(seed: u64, row: u64, sample: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, row, sample))
}

/// Wilson score interval.
pub fn wilson_interval(hits: u64, samples: u64, z: f64) -> (f64, f64) {
    if samples == 0 {
        return (0.0, 1.0);
    }
    let n = samples as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if hits == samples { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetId {
    TsPrime,
    LEpsilon,
    LEpsilonPrime,
}

impl SetId {
    pub fn name(self) -> &'static str {
        match self {
            SetId::TsPrime => "TS'",
            SetId::LEpsilon => "L(eps)",
            SetId::LEpsilonPrime => "L'(eps)",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "TS'" | "TS′" | "ts-prime" => Ok(SetId::TsPrime),
            "L" | "L(eps)" | "L(ε)" => Ok(SetId::LEpsilon),
            "L'" | "L'(eps)" | "L′(ε)" => Ok(SetId::LEpsilonPrime),
            other => Err(Error::Parse(format!("unknown set `{other}`"))),
        }
    }
}

/// Membership predicate for one of the sampled sets.
#[derive(Debug, Clone)]
pub struct SetMembership {
    set: SetId,
    ts: TsChecker,
    window: Option<FrequencyWindow>,
}

impl SetMembership {
    pub fn new(alphabet: Alphabet, set: SetId, epsilon: Option<Ratio<i64>>) -> Result<Self> {
        let window = match (set, epsilon) {
            (SetId::TsPrime, _) => None,
            (_, Some(eps)) => Some(FrequencyWindow::new(alphabet, eps)?),
            (_, None) => {
                return Err(Error::Parse(format!("{} needs an epsilon", set.name())));
            }
        };
        Ok(SetMembership {
            set,
            ts: TsChecker::new(alphabet),
            window,
        })
    }

    pub fn contains(&self, w: &Word) -> bool {
        match (self.set, &self.window) {
            (SetId::TsPrime, _) => self.ts.is_ts_prime(w),
            // L(ε) sits inside the cyclically reduced words
            (SetId::LEpsilon, Some(win)) => {
                !w.is_empty()
                    && w.is_cyclically_reduced()
                    && win.contains_word(w).unwrap_or(false)
            }
            (SetId::LEpsilonPrime, Some(win)) => win.contains_word(w).unwrap_or(false),
            _ => unreachable!("window is set for frequency sets"),
        }
    }
}

/// One sphere's worth of samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    pub set_id: String,
    #[serde(rename = "N")]
    pub rank: usize,
    pub n: usize,
    pub samples: u64,
    pub hits: u64,
    pub density: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl DensityRow {
    pub fn new(set: SetId, rank: usize, n: usize, hits: u64, samples: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(hits, samples, Z95);
        DensityRow {
            set_id: set.name().to_string(),
            rank,
            n,
            samples,
            hits,
            density: hits as f64 / samples as f64,
            ci_low,
            ci_high,
            seed,
        }
    }

    pub fn ci_width(&self) -> f64 {
        self.ci_high - self.ci_low
    }
}

/// Uniform sampling on each sphere `|w| = n`.
pub fn estimate_density(
    alphabet: &Alphabet,
    set: SetId,
    lengths: &[usize],
    samples_per_length: u64,
    epsilon: Option<Ratio<i64>>,
    seed: u64,
) -> Result<Vec<DensityRow>> {
    if lengths.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::Parse("lengths must be sorted ascending".into()));
    }
    if samples_per_length == 0 {
        return Err(Error::Parse("need at least one sample per length".into()));
    }
    let member = SetMembership::new(*alphabet, set, epsilon)?;
    Ok(lengths
        .iter()
        .enumerate()
        .map(|(row, &n)| {
            let hits = (0..samples_per_length)
                .into_par_iter()
                .filter(|&i| {
                    let mut rng = sample_rng(seed, row as u64, i);
                    member.contains(&alphabet.random_word(n, &mut rng))
                })
                .count() as u64;
            DensityRow::new(set, alphabet.rank(), n, hits, samples_per_length, seed)
        })
        .collect())
}

/// Exact member count on the sphere of radius `n`, by enumeration.
pub fn census(alphabet: &Alphabet, set: SetId, n: usize, epsilon: Option<Ratio<i64>>) -> Result<(u64, u64)> {
    let member = SetMembership::new(*alphabet, set, epsilon)?;
    let mut hits = 0;
    let mut total = 0;
    for w in alphabet.sphere(n) {
        total += 1;
        if member.contains(&w) {
            hits += 1;
        }
    }
    Ok((hits, total))
}

pub fn write_csv<W: Write>(rows: &[DensityRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    }
    writer.flush().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(())
}

/// Least-squares fit of `ln(1 − density) ≈ alpha − beta·n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub alpha: f64,
    pub beta: f64,
    pub r_squared: f64,
    pub rows_used: usize,
}

impl fmt::Display for DecayFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={:.6} beta={:.6} r_squared={:.6} rows_used={}",
            self.alpha, self.beta, self.r_squared, self.rows_used
        )
    }
}

/// Fits over rows with `0 < density < 1`; saturated rows are dropped.
pub fn fit_decay(rows: &[DensityRow]) -> Result<DecayFit> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.density > 0.0 && r.density < 1.0)
        .map(|r| (r.n as f64, (1.0 - r.density).ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFewRows {
            needed: 3,
            got: points.len(),
        });
    }
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(DecayFit {
        alpha: intercept,
        beta: -slope,
        r_squared,
        rows_used: points.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub median_ns: u128,
    pub ns_per_letter: f64,
    /// Median at length `2n`.
    pub doubled_median_ns: u128,
    /// `median(2n) / median(n)`; absent when the base timing is zero.
    pub doubling_ratio: Option<f64>,
}

fn median(mut v: Vec<u128>) -> u128 {
    v.sort_unstable();
    v[v.len() / 2]
}

fn time_membership(checker: &TsChecker, words: &[Word]) -> u128 {
    let times = words
        .iter()
        .map(|w| {
            let start = Instant::now();
            let verdict = checker.in_ts_prime(w);
            let elapsed = start.elapsed().as_nanos();
            std::hint::black_box(verdict.ok());
            elapsed
        })
        .collect();
    median(times)
}

/// Median wall-clock time of `TS′` membership on random words of each
/// length and of twice that length. Runs on the calling thread only.
pub fn bench_linear_membership(
    alphabet: &Alphabet,
    lengths: &[usize],
    reps: usize,
    seed: u64,
) -> Vec<BenchRow> {
    let checker = TsChecker::new(*alphabet);
    let reps = reps.max(1);
    lengths
        .iter()
        .enumerate()
        .map(|(row, &n)| {
            let make = |len: usize, salt: u64| -> Vec<Word> {
                (0..reps as u64)
                    .map(|i| {
                        let mut rng = sample_rng(seed, 2 * row as u64 + salt, i);
                        alphabet.random_word(len, &mut rng)
                    })
                    .collect()
            };
            let base = make(n, 0);
            let doubled = make(2 * n, 1);
            // warm-up pass
            time_membership(&checker, &base[..1]);
            let median_ns = time_membership(&checker, &base);
            let doubled_median_ns = time_membership(&checker, &doubled);
            BenchRow {
                n,
                median_ns,
                ns_per_letter: if n == 0 { 0.0 } else { median_ns as f64 / n as f64 },
                doubled_median_ns,
                doubling_ratio: (median_ns > 0)
                    .then(|| doubled_median_ns as f64 / median_ns as f64),
            }
        })
        .collect()
}

/// Random element of the vertex group spanned by `gens`, nontrivial and of
/// length at most `max_len`.
pub fn random_subgroup_element<R: Rng + ?Sized>(
    gens: &[Word],
    max_len: usize,
    rng: &mut R,
) -> Option<Word> {
    for _ in 0..100 {
        let factors = rng.gen_range(1..=6);
        let mut w = Word::identity();
        for _ in 0..factors {
            let g = gens.choose(rng)?;
            let g = if rng.gen_bool(0.5) { g.clone() } else { g.inverse() };
            w = w.concat(&g);
        }
        if !w.is_empty() && w.len() <= max_len {
            return Some(w);
        }
    }
    None
}

/// Image of a random generator under a random product of at most `steps`
/// Whitehead automorphisms.
pub fn random_primitive<R: Rng + ?Sized>(alphabet: &Alphabet, steps: usize, rng: &mut R) -> Word {
    let autos: Vec<WhiteheadAut> = enumerate_type1(alphabet.rank())
        .into_iter()
        .map(WhiteheadAut::TypeI)
        .chain(
            enumerate_type2(alphabet.rank(), true)
                .into_iter()
                .map(WhiteheadAut::TypeII),
        )
        .collect();
    let g = rng.gen_range(0..alphabet.rank());
    let mut w = Word::letter(Letter::new(g, rng.gen_bool(0.5)));
    let count = rng.gen_range(1..=steps.max(1));
    for _ in 0..count {
        let next = autos
            .choose(rng)
            .expect("nonempty")
            .apply(&w)
            .expect("same rank");
        // keep words manageable; a skipped step is still a valid product
        if next.len() <= 4096 {
            w = next;
        }
    }
    w
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossValidationReport {
    pub ts_samples: u64,
    /// `TS′` words elliptic in some enumerated splitting.
    pub ts_elliptic: u64,
    pub vertex_samples: u64,
    /// Vertex-group words admitted to `TS′`.
    pub vertex_admitted: u64,
    pub primitive_samples: u64,
    /// Primitive words admitted to `TS′` or not minimizing to length one.
    pub primitive_failures: u64,
    pub examples: Vec<String>,
}

impl CrossValidationReport {
    pub fn violations(&self) -> u64 {
        self.ts_elliptic + self.vertex_admitted + self.primitive_failures
    }
}

impl fmt::Display for CrossValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ts_samples={} ts_elliptic={}", self.ts_samples, self.ts_elliptic)?;
        writeln!(
            f,
            "vertex_samples={} vertex_admitted={}",
            self.vertex_samples, self.vertex_admitted
        )?;
        writeln!(
            f,
            "primitive_samples={} primitive_failures={}",
            self.primitive_samples, self.primitive_failures
        )?;
        write!(f, "violations={}", self.violations())?;
        for e in &self.examples {
            write!(f, "\nviolation: {e}")?;
        }
        Ok(())
    }
}

/// Checks that sampled `TS′` words are elliptic in no enumerated splitting,
/// and that sampled vertex-group elements and primitive elements are never
/// admitted to `TS′`.
pub fn cross_validate_filling(
    alphabet: &Alphabet,
    sample_count: u64,
    length: usize,
    bound: usize,
    seed: u64,
) -> CrossValidationReport {
    let checker = TsChecker::new(*alphabet);
    let oracle = SplittingOracle::new(alphabet, bound);
    let mut report = CrossValidationReport::default();

    // TS′ samples, by rejection; sample i retries on its own stream
    let ts: Vec<Option<String>> = (0..sample_count)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = sample_rng(seed, 0, i);
            (0..10_000).find_map(|_| {
                let w = alphabet.random_word(length, &mut rng);
                checker.is_ts_prime(&w).then_some(w)
            })
        })
        .map(|w| match oracle.find(&w) {
            Ok(found) => found.witness().map(|wit| format!("TS' word {w} elliptic: {wit}")),
            Err(e) => Some(format!("{w}: {e}")),
        })
        .collect();
    report.ts_samples = ts.len() as u64;
    report.ts_elliptic = ts.iter().filter(|v| v.is_some()).count() as u64;
    report.examples.extend(ts.into_iter().flatten().take(5));

    let specs = enumerate_small_splittings(alphabet, bound);
    let vertex: Vec<Option<String>> = (0..sample_count)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = sample_rng(seed, 1, i);
            let spec = specs.choose(&mut rng)?;
            let groups = spec.vertex_groups();
            let gens = groups.choose(&mut rng)?;
            let h = random_subgroup_element(gens, 40, &mut rng)?;
            debug_assert!(StallingsGraph::new(alphabet, gens).contains(&h));
            let c = alphabet.random_word(rng.gen_range(0..=4), &mut rng);
            let w = h.conjugate(&c);
            Some(
                checker
                    .is_ts_prime(&w)
                    .then(|| format!("vertex-group word {w} admitted ({spec})")),
            )
        })
        .collect();
    report.vertex_samples = vertex.len() as u64;
    report.vertex_admitted = vertex.iter().filter(|v| v.is_some()).count() as u64;
    report.examples.extend(vertex.into_iter().flatten().take(5));

    let prim: Vec<Option<String>> = (0..sample_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, 2, i);
            let w = random_primitive(alphabet, 20, &mut rng);
            let minimal = whitehead_minimize_word(alphabet, &w)
                .map(|m| m.minimal.len())
                .unwrap_or(0);
            (checker.is_ts_prime(&w) || minimal != 1)
                .then(|| format!("primitive {w} (minimized length {minimal})"))
        })
        .collect();
    report.primitive_samples = prim.len() as u64;
    report.primitive_failures = prim.iter().filter(|v| v.is_some()).count() as u64;
    report.examples.extend(prim.into_iter().flatten().take(5));
    report
}
