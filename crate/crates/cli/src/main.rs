use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use sumsetkit::convolution::{cyclic_bool_conv, CountMode};
use sumsetkit::counting::count_sums;
use sumsetkit::cyclic::{cover_zm, mod_subset_sums};
use sumsetkit::graph::{bottleneck_partition, parse_graph};
use sumsetkit::instance::{checksum, random_multiset, Lcg};
use sumsetkit::integer::{all_subset_sums, Strategy};
use sumsetkit::multiset::{parse_multiset, Multiset};
use sumsetkit::sumset::SumSet;
use sumsetkit::witness::canonical_subset;
use sumsetkit::{card::card_sums, Error};

const THREADS_VAR: &str = "SUMSETKIT_THREADS";

/// Subset-sum toolkit: decide, enumerate, count and recover subset sums.
///
/// Input files hold whitespace-separated positive integers; `-` reads
/// standard input.
#[derive(Parser)]
#[command(name = "sumsetkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether some subset sums to the target.
    Solve {
        file: PathBuf,
        #[arg(long)]
        target: u64,
        #[arg(long, default_value = "auto")]
        algo: Strategy,
    },
    /// Every subset sum up to the bound, ascending.
    All {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value = "auto")]
        algo: Strategy,
    },
    /// Every subset sum modulo m, ascending.
    Mod {
        file: PathBuf,
        #[arg(long)]
        modulus: u64,
    },
    /// Number of subsets reaching each sum up to the bound (nonzero only).
    Count {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
        /// Arbitrary-precision counts instead of counts modulo a prime.
        #[arg(long)]
        exact: bool,
    },
    /// Every (sum, cardinality) pair up to the bound.
    Card {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
    },
    /// Lexicographically smallest subset summing to the target.
    Witness {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        target: u64,
    },
    /// Balanced bisection minimizing the heaviest cut edge.
    Bottleneck { graphfile: PathBuf },
    /// Segments of the given length covering Z_m.
    Cover {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        length: u64,
    },
    /// Time several algorithms on seeded random instances.
    Bench {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_value: u64,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "dp,main")]
        algo: Vec<Strategy>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Out<'a> = io::BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) if msg.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_VAR} must be a non-negative integer, got {raw:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    if path == Path::new("-") {
        io::stdin().read_to_end(&mut buf)?;
    } else {
        buf = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(buf)
}

fn read_multiset(path: &Path) -> Result<Multiset, Failure> {
    Ok(parse_multiset(&read_input(path)?)?)
}

fn read_set(path: &Path) -> Result<Vec<u64>, Failure> {
    let s = read_multiset(path)?;
    if !s.is_set() {
        return Err(Error::InvalidInput("input must not repeat values".into()).into());
    }
    Ok(s.values())
}

fn print_sums(out: &mut Out, sums: &SumSet) -> Result<(), Failure> {
    for x in sums.members() {
        writeln!(out, "{x}")?;
    }
    Ok(())
}

fn run(command: Command, out: &mut Out) -> Result<(), Failure> {
    match command {
        Command::Solve { file, target, algo } => {
            let s = read_multiset(&file)?;
            let yes = all_subset_sums(&s, target, algo)?.contains(target);
            writeln!(out, "{}", if yes { "yes" } else { "no" })?;
        }
        Command::All { file, bound, algo } => {
            let s = read_multiset(&file)?;
            print_sums(out, &all_subset_sums(&s, bound, algo)?)?;
        }
        Command::Mod { file, modulus } => {
            let s = read_multiset(&file)?;
            print_sums(out, &multiset_mod_sums(&s, modulus)?)?;
        }
        Command::Count { file, bound, exact } => {
            let s = read_set(&file)?;
            let mode = if exact {
                CountMode::Exact
            } else {
                CountMode::Modular
            };
            let counts = count_sums(&s, bound, mode)?;
            for x in counts.support().members() {
                writeln!(out, "{x} {}", counts.get(x))?;
            }
        }
        Command::Card { file, bound } => {
            let s = read_set(&file)?;
            for (x, j) in card_sums(&s, bound)?.sorted_pairs() {
                writeln!(out, "{x} {j}")?;
            }
        }
        Command::Witness {
            file,
            bound,
            target,
        } => {
            let s = read_multiset(&file)?;
            if target > bound {
                return Err(
                    Error::InvalidInput(format!("target {target} exceeds bound {bound}")).into(),
                );
            }
            let subset = canonical_subset(&s, target)?;
            let line: Vec<String> = subset.iter().map(u64::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Command::Bottleneck { graphfile } => {
            let g = parse_graph(&read_input(&graphfile)?)?;
            let r = bottleneck_partition(&g)?;
            writeln!(out, "{}", r.bottleneck)?;
            let line: Vec<String> = r.side_one().iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Command::Cover { modulus, length } => {
            for seg in cover_zm(modulus, length)? {
                writeln!(out, "{} {}", seg.generator, seg.length)?;
            }
        }
        Command::Bench {
            n,
            max_value,
            bound,
            seed,
            algo,
            trials,
        } => bench(out, n, max_value, bound, seed, &algo, trials)?,
    }
    Ok(())
}

/// Subset sums modulo `m` of a multiset: residues are reduced, zeros
/// dropped, and repeated residues split into layers of distinct residues
/// whose sumsets are combined cyclically.
fn multiset_mod_sums(s: &Multiset, m: u64) -> Result<SumSet, Failure> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be at least 1".into()).into());
    }
    let mut residues = std::collections::BTreeMap::<u64, u64>::new();
    for &(v, mult) in s.entries() {
        if v % m != 0 {
            *residues.entry(v % m).or_insert(0) += mult;
        }
    }
    let mut acc = SumSet::zero_cyclic(m)?;
    let mut depth = 0;
    loop {
        let layer: Vec<u64> = residues
            .iter()
            .filter(|&(_, &c)| c > depth)
            .map(|(&r, _)| r)
            .collect();
        if layer.is_empty() || acc.is_full() {
            return Ok(acc);
        }
        acc = cyclic_bool_conv(&acc, &mod_subset_sums(&layer, m)?);
        depth += 1;
    }
}

fn bench(
    out: &mut Out,
    n: usize,
    max_value: u64,
    bound: u64,
    seed: u64,
    algos: &[Strategy],
    trials: usize,
) -> Result<(), Failure> {
    if max_value == 0 {
        return Err(Error::InvalidInput("max-value must be at least 1".into()).into());
    }
    writeln!(
        out,
        "{:>5}  {:<13} {:>12}  checksum",
        "trial", "algo", "millis"
    )?;
    let mut rng = Lcg::new(seed);
    for trial in 0..trials {
        let s = random_multiset(&mut rng, n, max_value);
        let mut first: Option<(Strategy, u64)> = None;
        for &a in algos {
            let start = Instant::now();
            let sums = all_subset_sums(&s, bound, a)?;
            let millis = start.elapsed().as_secs_f64() * 1e3;
            let sum = checksum(&sums);
            writeln!(
                out,
                "{trial:>5}  {:<13} {millis:>12.3}  {sum:016x}",
                a.name()
            )?;
            match first {
                None => first = Some((a, sum)),
                Some((b, expected)) if expected != sum => {
                    return Err(Failure::Mismatch(format!(
                        "trial {trial}: checksum of {} differs from {}",
                        a.name(),
                        b.name()
                    )));
                }
                Some(_) => {}
            }
        }
    }
    Ok(())
}
