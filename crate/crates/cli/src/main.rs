use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use filling_core::experiments::{
    bench_linear_membership, cross_validate_filling, estimate_density, fit_decay, write_csv, SetId,
};
use filling_core::splitting::find_nonfilling_witness;
use filling_core::whitehead::whitehead_minimize_word;
use filling_core::{
    Alphabet, EndoByImages, Endomorphism, Error, FrequencyWindow, TsChecker, TsVerdict,
    WhiteheadAut, Word, WitnessSearch,
};
use num_rational::Ratio;

/// Free-group words, Whitehead automorphisms and filling certificates.
///
/// Words use one letter per generator: `a`, `b`, ... for generators and
/// `A`, `B`, ... for their inverses. The empty string is the identity.
#[derive(Parser, Debug)]
#[command(name = "filling", version)]
struct Cli {
    /// Rank of the free group (2 to 26).
    #[arg(long, short = 'N', global = true, default_value_t = 2)]
    rank: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the freely reduced word.
    Reduce { word: String },
    /// Print the cyclic core and the conjugator `c` with `w = c⁻¹·core·c`.
    CyclicReduce { word: String },
    /// Print the root and exponent.
    Power { word: String },
    /// Apply an automorphism given as `(a; {a,b})` or `a->ab, b->B`.
    Apply {
        #[arg(long)]
        auto: String,
        word: String,
    },
    /// Whitehead minimization with the automorphisms applied.
    Minimize { word: String },
    /// Membership in TS′. Exit 0 member, 1 non-member, 2 bad input.
    TsCheck { word: String },
    /// Frequency window test for the cyclic reduction of a word.
    LEpsCheck {
        #[arg(long)]
        epsilon: String,
        word: String,
    },
    /// Three-valued filling certificate.
    FillCert {
        word: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Sampled densities on spheres, as CSV, plus an exponential decay fit.
    Genericity {
        #[arg(long, default_value = "TS'")]
        set: String,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long)]
        lengths: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Median membership timings at n and 2n.
    BenchMembership {
        #[arg(long, default_value = "1e3,1e4,1e5,1e6")]
        lengths: String,
        #[arg(long, default_value_t = 15)]
        reps: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Consistency check between TS′ and elliptic words.
    CrossValidate {
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 60)]
        length: usize,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn parse_count(s: &str) -> Result<usize, Error> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: usize = m.parse().map_err(|_| Error::Parse(format!("bad length `{s}`")))?;
        let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad length `{s}`")))?;
        return 10usize
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(|| Error::Parse(format!("length `{s}` too large")));
    }
    s.parse().map_err(|_| Error::Parse(format!("bad length `{s}`")))
}

fn parse_lengths(s: &str) -> Result<Vec<usize>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (parse_count(start)?, parse_count(stop)?, parse_count(step)?);
            if step == 0 || start > stop {
                return Err(Error::Parse(format!("empty range `{s}`")));
            }
            Ok((start..=stop).step_by(step).collect())
        }
        [_] => s.split(',').map(parse_count).collect(),
        _ => Err(Error::Parse(format!("expected start:stop:step, got `{s}`"))),
    }
}

fn parse_epsilon(s: &str) -> Result<Ratio<i64>, Error> {
    s.trim()
        .parse::<Ratio<i64>>()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

fn show(w: &Word) -> String {
    w.to_string()
}

enum Outcome {
    Ok,
    No,
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let alphabet = Alphabet::new(cli.rank)?;
    let word = |s: &str| Word::parse(s, &alphabet);
    let mut out = io::stdout().lock();
    let io_err = |e: io::Error| Error::Parse(format!("output: {e}"));
    match cli.command {
        Command::Reduce { word: w } => {
            writeln!(out, "{}", show(&word(&w)?)).map_err(io_err)?;
        }
        Command::CyclicReduce { word: w } => {
            let (core, c) = word(&w)?.cyclic_reduce();
            writeln!(out, "core={} conjugator={}", core, show(&c)).map_err(io_err)?;
        }
        Command::Power { word: w } => {
            let (root, e) = word(&w)?.root()?;
            writeln!(out, "root={} exponent={e}", show(&root)).map_err(io_err)?;
        }
        Command::Apply { auto, word: w } => {
            let w = word(&w)?;
            let image = if auto.trim_start().starts_with('(') {
                WhiteheadAut::parse(&auto, &alphabet)?.apply(&w)?
            } else {
                EndoByImages::parse(&auto, &alphabet)?.apply(&w)?
            };
            writeln!(out, "{}", show(&image)).map_err(io_err)?;
        }
        Command::Minimize { word: w } => {
            let w = word(&w)?;
            let m = whitehead_minimize_word(&alphabet, &w)?;
            let mut current = w.cyclic_reduce().0;
            writeln!(out, "start {} (length {})", current, current.len()).map_err(io_err)?;
            for t in &m.applied {
                current = t.apply(&current.as_word())?.cyclic_reduce().0;
                writeln!(out, "{t} -> {} (length {})", current, current.len()).map_err(io_err)?;
            }
            writeln!(out, "minimal {} (length {})", m.minimal, m.minimal.len()).map_err(io_err)?;
        }
        Command::TsCheck { word: w } => {
            let verdict = TsChecker::new(alphabet).in_ts_prime(&word(&w)?)?;
            if verdict == TsVerdict::Member {
                writeln!(out, "in TS'").map_err(io_err)?;
            } else {
                writeln!(out, "not in TS': {verdict}").map_err(io_err)?;
                return Ok(Outcome::No);
            }
        }
        Command::LEpsCheck { epsilon, word: w } => {
            let window = FrequencyWindow::new(alphabet, parse_epsilon(&epsilon)?)?;
            let core = word(&w)?.cyclic_reduce().0;
            if core.is_empty() {
                writeln!(out, "outside: identity").map_err(io_err)?;
                return Ok(Outcome::No);
            }
            let verdict = window.check(&core)?;
            if verdict.is_inside() {
                writeln!(out, "inside").map_err(io_err)?;
            } else {
                writeln!(out, "outside: {verdict}").map_err(io_err)?;
                return Ok(Outcome::No);
            }
        }
        Command::FillCert { word: w, bound } => {
            let w = word(&w)?;
            if TsChecker::new(alphabet).is_ts_prime(&w) {
                writeln!(out, "FILLING (TS')").map_err(io_err)?;
            } else {
                match find_nonfilling_witness(&alphabet, &w, bound)? {
                    WitnessSearch::Found(found) => {
                        writeln!(out, "NON-FILLING (witness: {found})").map_err(io_err)?
                    }
                    WitnessSearch::NoneFound { bound } => {
                        writeln!(out, "UNKNOWN (no witness <= {bound})").map_err(io_err)?
                    }
                }
            }
        }
        Command::Genericity {
            set,
            lengths,
            samples,
            seed,
            epsilon,
            output,
            format,
        } => {
            let set = SetId::parse(&set)?;
            let epsilon = epsilon.as_deref().map(parse_epsilon).transpose()?;
            let lengths = parse_lengths(&lengths)?;
            let rows = estimate_density(&alphabet, set, &lengths, samples, epsilon, seed)?;
            let fit = match fit_decay(&rows) {
                Ok(fit) => format!("fit {fit}"),
                Err(e) => format!("fit unavailable: {e}"),
            };
            let mut sink: Box<dyn Write> = match &output {
                Some(path) => Box::new(File::create(path).map_err(io_err)?),
                None => Box::new(io::stdout()),
            };
            match format {
                Format::Csv => write_csv(&rows, &mut sink)?,
                Format::Text => {
                    for r in &rows {
                        writeln!(
                            sink,
                            "set={} N={} n={} samples={} hits={} density={:.6} ci=[{:.6}, {:.6}] seed={}",
                            r.set_id, r.rank, r.n, r.samples, r.hits, r.density, r.ci_low, r.ci_high, r.seed
                        )
                        .map_err(io_err)?;
                    }
                }
            }
            sink.flush().map_err(io_err)?;
            drop(sink);
            // keep CSV on stdout machine-readable
            if output.is_some() || matches!(format, Format::Text) {
                writeln!(out, "{fit}").map_err(io_err)?;
            } else {
                eprintln!("{fit}");
            }
        }
        Command::BenchMembership { lengths, reps, seed } => {
            let lengths = parse_lengths(&lengths)?;
            for r in bench_linear_membership(&alphabet, &lengths, reps, seed) {
                let ratio = r
                    .doubling_ratio
                    .map_or_else(|| "n/a".to_string(), |x| format!("{x:.3}"));
                writeln!(
                    out,
                    "n={} median_ns={} ns_per_letter={:.3} median_2n_ns={} ratio={ratio}",
                    r.n, r.median_ns, r.ns_per_letter, r.doubled_median_ns
                )
                .map_err(io_err)?;
            }
        }
        Command::CrossValidate {
            samples,
            length,
            bound,
            seed,
        } => {
            let report = cross_validate_filling(&alphabet, samples, length, bound, seed);
            writeln!(out, "{report}").map_err(io_err)?;
            if report.violations() > 0 {
                return Ok(Outcome::No);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
