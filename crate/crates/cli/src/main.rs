//! `palstruct`: compute, compress, index and reconstruct palindrome arrays.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use palstruct::codec::decode_compact_traced;
use palstruct::corpus::{self, DEFAULT_SEED};
use palstruct::reconstruct::zimin_letters;
use palstruct::*;

/// Magic of the binary palindrome array format: u64 count, then u32 lengths,
/// all little-endian.
const ARRAY_MAGIC: &[u8; 4] = b"PARR";

#[derive(Parser)]
#[command(name = "palstruct", version, about = "Palindromic structure of texts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the palindrome array of a text file.
    Pals {
        file: PathBuf,
        /// Write the binary array format to this path instead of printing.
        #[arg(long, value_name = "OUT")]
        binary: Option<PathBuf>,
    },
    /// Compress the palindrome array of a text file.
    Encode { file: PathBuf, out: PathBuf },
    /// Expand a compressed array into the binary array format.
    Decode {
        input: PathBuf,
        out: PathBuf,
        /// Write whitespace-separated lengths instead of the binary format.
        #[arg(long)]
        text: bool,
    },
    /// Build the index of a text file.
    Build { file: PathBuf, out: PathBuf },
    /// Query an index.
    Query {
        index: PathBuf,
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        center: Option<usize>,
        /// Print the length at every center.
        #[arg(long)]
        all: bool,
    },
    /// Emit a generated text.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Print the lexicographically least preimage of an array file and its
    /// alphabet size.
    Reconstruct { array: PathBuf },
    /// Check every component against the brute-force oracle.
    Verify {
        /// Text files; without any, a generated corpus is checked.
        files: Vec<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the space report of an index as a JSON line.
    Stats { index: PathBuf },
    /// Print bits per character and hop histograms over generated corpora
    /// as CSV.
    Bench {
        #[arg(long)]
        seed: Option<u64>,
        /// Smallest size exponent.
        #[arg(long, default_value_t = 10)]
        min_log: u32,
        /// Largest size exponent.
        #[arg(long, default_value_t = 16)]
        max_log: u32,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Palindromic Zimin word of degree K.
    Zimin {
        #[arg(long)]
        k: usize,
    },
    /// `(q0 q1)^reps q0`.
    Periodic {
        #[arg(long)]
        q0: String,
        #[arg(long, default_value = "")]
        q1: String,
        #[arg(long)]
        reps: usize,
    },
    /// Uniform random text over the first SIGMA letters.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Prefix of the Fibonacci word.
    Fibonacci {
        #[arg(long)]
        n: usize,
    },
    /// Seeded Sturmian word.
    Sturmian {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// `a^n`.
    Unary {
        #[arg(long)]
        n: usize,
    },
    /// `(ab)^k`.
    Ab {
        #[arg(long)]
        k: usize,
    },
}

/// Why a command stopped early.
enum Failure {
    /// Usage, input or format problem: exit code 2.
    Input(String),
    /// A verification reported a mismatch: exit code 1.
    Verification,
}

type Outcome = std::result::Result<(), Failure>;

fn input<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn read(path: &Path) -> std::result::Result<Vec<u8>, Failure> {
    fs::read(path).map_err(input(format!("cannot read {}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(input(format!("cannot write {}", path.display())))
}

/// Text file contents without one trailing line break.
fn read_text(path: &Path) -> std::result::Result<Vec<u8>, Failure> {
    let mut bytes = read(path)?;
    if bytes.last() == Some(&b'\n') {
        bytes.pop();
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
    }
    Ok(bytes)
}

fn read_index(path: &Path) -> std::result::Result<PalIndex, Failure> {
    PalIndex::from_bytes(&read(path)?).map_err(input(format!("malformed index {}", path.display())))
}

fn array_to_bytes(pals: &PalArray) -> std::result::Result<Vec<u8>, Failure> {
    let mut out = Vec::with_capacity(12 + 4 * pals.len());
    out.extend_from_slice(ARRAY_MAGIC);
    out.extend_from_slice(&(pals.len() as u64).to_le_bytes());
    for &len in pals.as_slice() {
        let len = u32::try_from(len)
            .map_err(|_| Failure::Input(format!("length {len} does not fit the binary array format")))?;
        out.extend_from_slice(&len.to_le_bytes());
    }
    Ok(out)
}

fn array_to_text(pals: &PalArray) -> String {
    let parts: Vec<String> = pals.as_slice().iter().map(usize::to_string).collect();
    parts.join(" ") + "\n"
}

/// Reads the binary array format, or whitespace-separated lengths.
fn read_array(path: &Path) -> std::result::Result<PalArray, Failure> {
    let bytes = read(path)?;
    let lengths: Vec<usize> = if bytes.starts_with(ARRAY_MAGIC) {
        let bad = || Failure::Input(format!("malformed array file {}", path.display()));
        let count = bytes.get(4..12).ok_or_else(bad)?;
        let count = u64::from_le_bytes(count.try_into().unwrap());
        let body = &bytes[12..];
        if Some(body.len() as u64) != count.checked_mul(4) {
            return Err(bad());
        }
        body.chunks_exact(4)
            .map(|w| u32::from_le_bytes(w.try_into().unwrap()) as usize)
            .collect()
    } else {
        let text = std::str::from_utf8(&bytes)
            .map_err(input(format!("malformed array file {}", path.display())))?;
        text.split_whitespace()
            .map(|w| w.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(input(format!("malformed array file {}", path.display())))?
    };
    PalArray::from_lengths(lengths).map_err(input(format!("invalid array in {}", path.display())))
}

/// `--seed`, else `PALSTRUCT_SEED`, else the built-in default.
fn resolve_seed(flag: Option<u64>) -> std::result::Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("PALSTRUCT_SEED") {
        Ok(v) => parse_seed(&v).ok_or_else(|| Failure::Input(format!("PALSTRUCT_SEED is not a 64-bit integer: {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn parse_seed(v: &str) -> Option<u64> {
    let v = v.trim();
    match v.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => v.parse().ok(),
    }
}

fn out(text: &str) -> Outcome {
    let mut stdout = io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(input("cannot write to stdout"))
}

fn generate(kind: GenKind) -> std::result::Result<Vec<u8>, Failure> {
    let arg = input("invalid argument");
    Ok(match kind {
        GenKind::Zimin { k } => zimin_letters(k).map_err(arg)?,
        GenKind::Periodic { q0, q1, reps } => {
            if q0.is_empty() {
                return Err(Failure::Input("--q0 must not be empty".into()));
            }
            corpus::periodic(q0.as_bytes(), q1.as_bytes(), reps)
        }
        GenKind::Random { n, sigma, seed } => corpus::random_text(n, sigma, resolve_seed(seed)?).map_err(arg)?,
        GenKind::Fibonacci { n } => corpus::fibonacci(n),
        GenKind::Sturmian { n, seed } => corpus::sturmian(n, resolve_seed(seed)?),
        GenKind::Unary { n } => corpus::unary(n),
        GenKind::Ab { k } => corpus::ab_power(k),
    })
}

/// One named check of `verify`.
struct Check {
    name: &'static str,
    pass: bool,
}

fn verify_text(text: &[u8]) -> Vec<Check> {
    let oracle = brute_force_pals(text);
    let pals = manacher(text);
    let mut checks = vec![Check {
        name: "manacher",
        pass: pals == oracle,
    }];
    let changes_ok = mps_change_list(text)
        .windows(2)
        .all(|w| w[0].pos < w[1].pos && w[0].center < w[1].center);
    checks.push(Check {
        name: "suffix-changes",
        pass: changes_ok,
    });
    let codec = encode_compact(&oracle)
        .and_then(|c| CompactPal::from_bytes(&c.to_bytes()))
        .and_then(|c| decode_compact_traced(&c))
        .is_ok_and(|(d, stats)| d == oracle && stats.writes == oracle.len());
    checks.push(Check { name: "codec", pass: codec });
    let index = build_index(text);
    checks.push(Check {
        name: "index",
        pass: index.to_lengths().is_ok_and(|l| l == oracle.as_slice()),
    });
    checks.push(Check {
        name: "index-file",
        pass: PalIndex::from_bytes(&index.to_bytes()).is_ok_and(|i| i == index),
    });
    let descriptors = detect_ppds(text, &oracle).iter().all(|d| {
        centric_centers(d)
            .into_iter()
            .all(|c| ppd_radius(d, c).is_ok_and(|r| r == oracle[c]))
    });
    checks.push(Check {
        name: "descriptors",
        pass: descriptors,
    });
    let reconstruction = reconstruct_min(&oracle).is_ok_and(|pre| {
        verify_pal_match(&pre.text, &oracle).unwrap_or(false)
            && (text.is_empty() || pre.sigma <= text.len().ilog2() as usize + 2)
    });
    checks.push(Check {
        name: "reconstruct",
        pass: reconstruction,
    });
    checks
}

fn default_verify_corpus(seed: u64) -> Vec<(String, Vec<u8>)> {
    let mut cases = Vec::new();
    for (i, sigma) in [1usize, 2, 3, 4, 26].into_iter().enumerate() {
        for (j, n) in [0usize, 1, 7, 64, 1000, 5000].into_iter().enumerate() {
            let s = seed ^ ((i * 16 + j) as u64);
            let text = corpus::random_text(n, sigma, s).expect("alphabet in range");
            cases.push((format!("random n={n} sigma={sigma}"), text));
        }
    }
    for k in 1..=12 {
        cases.push((format!("zimin k={k}"), zimin_letters(k).expect("small degree")));
    }
    for n in [10usize, 1000, 5000] {
        cases.push((format!("unary n={n}"), corpus::unary(n)));
        cases.push((format!("ab k={}", n / 2), corpus::ab_power(n / 2)));
        cases.push((format!("fibonacci n={n}"), corpus::fibonacci(n)));
        cases.push((format!("sturmian n={n}"), corpus::sturmian(n, seed)));
    }
    cases.push(("periodic aba/c x50".into(), corpus::periodic(b"aba", b"c", 50)));
    cases
}

fn verify(files: Vec<PathBuf>, seed: Option<u64>) -> Outcome {
    let cases = if files.is_empty() {
        default_verify_corpus(resolve_seed(seed)?)
    } else {
        files
            .iter()
            .map(|f| Ok((f.display().to_string(), read_text(f)?)))
            .collect::<std::result::Result<_, Failure>>()?
    };
    // par_iter keeps the case order when collecting
    let results: Vec<Vec<Check>> = cases.par_iter().map(|(_, t)| verify_text(t)).collect();
    let mut report = String::new();
    let mut failed = false;
    for ((name, _), checks) in cases.iter().zip(&results) {
        for c in checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            report.push_str(&format!("{verdict} {} {name}\n", c.name));
            failed |= !c.pass;
        }
    }
    report.push_str(if failed { "FAIL overall\n" } else { "PASS overall\n" });
    out(&report)?;
    if failed {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn stats_json(r: &SpaceReport) -> serde_json::Value {
    json!({
        "n": r.n,
        "centers": r.centers,
        "cf_plain_bits": r.cf_plain_bits,
        "cf_period_bits": r.cf_period_bits,
        "centric_bits": r.centric_bits,
        "class_vector_bits": r.class_vector_bits,
        "ppd_table_bits": r.ppd_table_bits,
        "exception_bits": r.exception_bits,
        "total_bits": r.total_bits,
        "bits_per_char": r.bits_per_char,
        "centric_centers": r.centric_centers,
        "ppds": r.ppds,
        "exceptions": r.exceptions,
        "hop_histogram": r.hop_histogram,
        "max_hops": r.max_hops,
    })
}

fn bench(seed: Option<u64>, min_log: u32, max_log: u32) -> Outcome {
    if min_log > max_log || max_log > 24 {
        return Err(Failure::Input(format!(
            "size exponents must satisfy min-log <= max-log <= 24, got {min_log} and {max_log}"
        )));
    }
    let seed = resolve_seed(seed)?;
    let mut cases: Vec<(String, usize, Vec<u8>)> = Vec::new();
    for k in min_log..=max_log {
        let n = 1usize << k;
        for sigma in [1usize, 2, 3, 4, 26] {
            let text = corpus::random_text(n, sigma, seed ^ u64::from(k)).expect("alphabet in range");
            cases.push((format!("random{sigma}"), sigma, text));
        }
        cases.push(("fibonacci".into(), 2, corpus::fibonacci(n)));
        cases.push(("sturmian".into(), 2, corpus::sturmian(n, seed)));
    }
    let rows: Vec<std::result::Result<String, String>> = cases
        .par_iter()
        .map(|(name, sigma, text)| {
            let n = text.len();
            let pals = manacher(text);
            let codec = encode_compact(&pals).map_err(|e| e.to_string())?;
            let report = build_index(text).stats().map_err(|e| e.to_string())?;
            let hist: Vec<String> = report.hop_histogram.iter().map(usize::to_string).collect();
            Ok(format!(
                "{name},{sigma},{n},{:.4},{:.4},{},{},{}",
                codec.bit_len() as f64 / n as f64,
                report.bits_per_char,
                report.exceptions,
                report.max_hops,
                hist.join(";")
            ))
        })
        .collect();
    let mut csv = String::from("corpus,sigma,n,codec_bits_per_char,index_bits_per_char,exceptions,max_hops,hop_histogram\n");
    for row in rows {
        csv.push_str(&row.map_err(|e| Failure::Input(format!("benchmark failed: {e}")))?);
        csv.push('\n');
    }
    out(&csv)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Pals { file, binary } => {
            let pals = manacher(&read_text(&file)?);
            match binary {
                Some(path) => write(&path, &array_to_bytes(&pals)?),
                None => out(&array_to_text(&pals)),
            }
        }
        Command::Encode { file, out: dest } => {
            let pals = manacher(&read_text(&file)?);
            let compact = encode_compact(&pals).map_err(input("encoding failed"))?;
            write(&dest, &compact.to_bytes())
        }
        Command::Decode { input: src, out: dest, text } => {
            let compact = CompactPal::from_bytes(&read(&src)?)
                .map_err(input(format!("malformed compressed array {}", src.display())))?;
            let pals = decode_compact(&compact)
                .map_err(input(format!("malformed compressed array {}", src.display())))?;
            if text {
                write(&dest, array_to_text(&pals).as_bytes())
            } else {
                write(&dest, &array_to_bytes(&pals)?)
            }
        }
        Command::Build { file, out: dest } => write(&dest, &build_index(&read_text(&file)?).to_bytes()),
        Command::Query { index, center, all } => {
            let index = read_index(&index)?;
            if all {
                let lengths = index.to_lengths().map_err(input("corrupt index"))?;
                let pals = PalArray::from_lengths(lengths).map_err(input("corrupt index"))?;
                return out(&array_to_text(&pals));
            }
            let c = center.expect("clap requires --center without --all");
            if c >= index.centers() {
                return Err(Failure::Input(format!(
                    "center {c} out of range: the index has {} centers",
                    index.centers()
                )));
            }
            let len = index.access(c).map_err(input("corrupt index"))?;
            out(&format!("{len}\n"))
        }
        Command::Gen { kind } => {
            let mut text = generate(kind)?;
            text.push(b'\n');
            io::stdout().lock().write_all(&text).map_err(input("cannot write to stdout"))
        }
        Command::Reconstruct { array } => {
            let pals = read_array(&array)?;
            let pre = reconstruct_min(&pals).map_err(input("no preimage"))?;
            out(&format!("{}\nsigma {}\n", pre.render(), pre.sigma))
        }
        Command::Verify { files, seed } => verify(files, seed),
        Command::Stats { index } => {
            let report = read_index(&index)?.stats().map_err(input("corrupt index"))?;
            out(&format!("{}\n", stats_json(&report)))
        }
        Command::Bench { seed, min_log, max_log } => bench(seed, min_log, max_log),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("palstruct: {msg}");
            ExitCode::from(2)
        }
    }
}
