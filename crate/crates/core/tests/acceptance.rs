//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! 1. index access equals the brute-force array at every center;
//! 2. codec round trip, payload rate bounded and flat;
//! 3. CF-Array store/find, hop bound, space bounded and flat;
//! 4. descriptor lengths, periodic palindrome audits, exception rate;
//! 5. reconstruction: uniqueness for three symbols, alphabet growth,
//!    Zimin precedence, bridging palindromes, IPF;
//! 6. serialized index size bounded and flat, hop bound per query.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use palstruct::cfarray::split_dense;
use palstruct::codec::decode_compact_traced;
use palstruct::corpus::{self, XorShift64, DEFAULT_SEED};
use palstruct::palindex::build_index_report;
use palstruct::reconstruct::{ipf, shortest_bridging_pals, zp_prefix_degree};
use palstruct::*;

const ALPHABETS: [usize; 5] = [1, 2, 3, 4, 26];
const RANDOM_PER_ALPHABET: usize = 500;
const MAX_RANDOM_N: f64 = 1e5;
const EXHAUSTIVE_N: usize = 12;

const CODEC_BITS_PER_CHAR: f64 = 16.0;
const CF_BITS_PER_POSITION: f64 = 136.0;
const INDEX_BITS_PER_CHAR: f64 = 540.0;
const FLAT_TOLERANCE: f64 = 0.05;
const CF_MAX_HOPS: usize = 5;
const ACCESS_MAX_HOPS: usize = 10;
const EXCEPTION_RATE: f64 = 0.01;

/// Counters for criteria 1, 2, 4 and the per-output parts of 5.
#[derive(Default, Clone)]
struct Tally {
    texts: usize,
    centers: usize,
    access_mismatches: usize,
    access_max_hops: usize,
    codec_failures: usize,
    radius_checks: usize,
    radius_mismatches: usize,
    noncentric_violations: usize,
    threshold_violations: usize,
    separation_pairs: usize,
    separation_demotions: usize,
    exceptions: usize,
    worst_exception_rate: f64,
    preimage_failures: usize,
    sigma_violations: usize,
    zp_checks: usize,
    zp_violations: usize,
    doubling_checks: usize,
    doubling_violations: usize,
    examples: Vec<String>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.texts += other.texts;
        self.centers += other.centers;
        self.access_mismatches += other.access_mismatches;
        self.access_max_hops = self.access_max_hops.max(other.access_max_hops);
        self.codec_failures += other.codec_failures;
        self.radius_checks += other.radius_checks;
        self.radius_mismatches += other.radius_mismatches;
        self.noncentric_violations += other.noncentric_violations;
        self.threshold_violations += other.threshold_violations;
        self.separation_pairs += other.separation_pairs;
        self.separation_demotions += other.separation_demotions;
        self.exceptions += other.exceptions;
        self.worst_exception_rate = self.worst_exception_rate.max(other.worst_exception_rate);
        self.preimage_failures += other.preimage_failures;
        self.sigma_violations += other.sigma_violations;
        self.zp_checks += other.zp_checks;
        self.zp_violations += other.zp_violations;
        self.doubling_checks += other.doubling_checks;
        self.doubling_violations += other.doubling_violations;
        self.examples.extend(other.examples);
        self.examples.truncate(5);
        self
    }

    fn note(&mut self, what: &str, text: &[u8]) {
        if self.examples.len() < 5 {
            let shown: String = text.iter().take(40).map(|&b| b as char).collect();
            self.examples.push(format!("{what} on {shown:?} (n={})", text.len()));
        }
    }
}

fn check_text(text: &[u8]) -> Tally {
    let mut t = Tally {
        texts: 1,
        ..Tally::default()
    };
    let oracle = brute_force_pals(text);
    let m = oracle.len();
    t.centers = m;

    // criterion 1
    let (index, report) = build_index_report(text);
    for c in 0..m {
        match index.access_traced(c) {
            Ok(a) if a.length == oracle[c] => t.access_max_hops = t.access_max_hops.max(a.hops),
            _ => {
                t.access_mismatches += 1;
            }
        }
    }
    if t.access_mismatches > 0 {
        t.note("access mismatch", text);
    }

    // criterion 2
    let round_trip = encode_compact(&oracle)
        .and_then(|c| CompactPal::from_bytes(&c.to_bytes()))
        .and_then(|c| decode_compact_traced(&c));
    match round_trip {
        Ok((decoded, stats)) if decoded == oracle && stats.writes == m => {}
        _ => {
            t.codec_failures += 1;
            t.note("codec round trip", text);
        }
    }

    // criterion 4
    t.exceptions = index.exceptions().len();
    if m >= 100 {
        t.worst_exception_rate = t.exceptions as f64 / m as f64;
    }
    t.separation_demotions = report.separation_violations;
    let ppds = detect_ppds(text, &oracle);
    let mut last_start: HashMap<u32, usize> = HashMap::new();
    for d in &ppds {
        let p = d.period();
        let class = usize::BITS - 1 - p.leading_zeros();
        if let Some(prev) = last_start.insert(class, d.start) {
            // starts are augmented, so half a class width is 2^class apart
            if d.start - prev < 1 << class {
                t.separation_pairs += 1;
            }
        }
        for c in centric_centers(d) {
            t.radius_checks += 1;
            if ppd_radius(d, c).ok() != Some(oracle[c]) {
                t.radius_mismatches += 1;
                t.note("descriptor length", text);
            }
        }
        let (lo, hi) = (d.start, d.run_end());
        for c in lo..=hi {
            let len = oracle[c];
            if len == 0 {
                continue;
            }
            let contained = c + 1 >= lo + len && c + len <= hi + 1;
            if !contained {
                continue;
            }
            let centric = d.is_centric(c);
            if !centric && len >= p {
                t.noncentric_violations += 1;
                t.note("long non-centric palindrome", text);
            }
            if len >= 2 * p && !centric {
                t.threshold_violations += 1;
            }
        }
    }

    // criterion 5, per output
    match reconstruct_min(&oracle) {
        Ok(pre) if verify_pal_match(&pre.text, &oracle).unwrap_or(false) => {
            let n = text.len();
            if n > 0 && pre.sigma > n.ilog2() as usize + 2 {
                t.sigma_violations += 1;
                t.note("alphabet bound", text);
            }
            let mut first = vec![usize::MAX; pre.sigma];
            for (i, &s) in pre.text.iter().enumerate() {
                if first[s as usize] == usize::MAX {
                    first[s as usize] = i;
                }
            }
            for (s, &pos) in first.iter().enumerate() {
                // symbol s + 1 in 1-based numbering
                if s >= 2 {
                    t.zp_checks += 1;
                    if zp_prefix_degree(&pre.text, pos).unwrap_or(0) < s - 1 {
                        t.zp_violations += 1;
                        t.note("Zimin precedence", text);
                    }
                }
                if s >= 1 {
                    t.doubling_checks += 1;
                    let ok = shortest_bridging_pals(&pre.text, pos).is_ok_and(|bridges| {
                        bridges.windows(2).all(|w| 2 * w[0].1 < w[1].1)
                    });
                    if !ok {
                        t.doubling_violations += 1;
                        t.note("bridging doubling", text);
                    }
                }
            }
        }
        _ => {
            t.preimage_failures += 1;
            t.note("reconstruction", text);
        }
    }
    t
}

fn check_all(texts: &[Vec<u8>]) -> Tally {
    texts
        .par_iter()
        .map(|t| check_text(t))
        .reduce(Tally::default, Tally::merge)
}

fn random_corpus() -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for &sigma in &ALPHABETS {
        for i in 0..RANDOM_PER_ALPHABET {
            let exponent = i as f64 / (RANDOM_PER_ALPHABET - 1) as f64;
            let n = MAX_RANDOM_N.powf(exponent).round() as usize;
            let seed = DEFAULT_SEED ^ ((sigma as u64) << 40) ^ i as u64;
            out.push(corpus::random_text(n, sigma, seed).unwrap());
        }
    }
    out
}

fn adversarial_corpus() -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let sizes: Vec<usize> = (0..=64).chain([1000, 10_000, 100_000]).collect();
    for &n in &sizes {
        out.push(corpus::unary(n));
        out.push(corpus::fibonacci(n));
        out.push(corpus::ab_power(n / 2));
    }
    for k in 1..=16 {
        out.push(corpus::zimin(k).unwrap());
    }
    for seed in 0..24u64 {
        let n = 10usize.pow(1 + (seed % 5) as u32);
        out.push(corpus::sturmian(n, seed));
    }
    let mut rng = XorShift64::new(DEFAULT_SEED);
    for _ in 0..40 {
        let q0 = corpus::random_text(1 + rng.below(4) as usize, 2, rng.next_u64()).unwrap();
        let q1 = corpus::random_text(rng.below(4) as usize, 3, rng.next_u64()).unwrap();
        let pal = |s: &[u8]| {
            let back: Vec<u8> = s.iter().rev().skip(1).copied().collect();
            [s, back.as_slice()].concat()
        };
        let reps = 2 + rng.below(200) as usize;
        let mut t = corpus::periodic(&pal(&q0), &pal(&q1), reps);
        let tail = corpus::random_text(rng.below(20) as usize, 3, rng.next_u64()).unwrap();
        t.extend(tail);
        out.push(t);
    }
    out
}

fn exhaustive_corpus() -> impl Iterator<Item = Vec<u8>> {
    (0..=EXHAUSTIVE_N).flat_map(|n| corpus::all_strings(n, 3))
}

fn check_exhaustive() -> Tally {
    let mut total = Tally::default();
    let mut batch = Vec::with_capacity(1 << 16);
    for t in exhaustive_corpus() {
        batch.push(t);
        if batch.len() == batch.capacity() {
            total = total.merge(check_all(&batch));
            batch.clear();
        }
    }
    total.merge(check_all(&batch))
}

struct Line {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn flat(values: &[f64]) -> bool {
    values.windows(2).all(|w| (w[1] / w[0] - 1.0).abs() <= FLAT_TOLERANCE)
}

fn fmt_series(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>().join(" ")
}

fn criterion_2_rates() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &sigma in &ALPHABETS {
        let rates: Vec<f64> = (10..=17)
            .into_par_iter()
            .map(|k| {
                let n = 1usize << k;
                let t = corpus::random_text(n, sigma, DEFAULT_SEED + k as u64).unwrap();
                encode_compact(&manacher(&t)).unwrap().bit_len() as f64 / n as f64
            })
            .collect();
        let max = rates.iter().cloned().fold(0.0, f64::max);
        ok &= max <= CODEC_BITS_PER_CHAR && flat(&rates);
        parts.push(format!("sigma {sigma}: [{}]", fmt_series(&rates)));
    }
    (ok, parts.join("; "))
}

fn criterion_3() -> Line {
    const SETS: usize = 10_000;
    let results: Vec<(bool, usize, usize)> = (0..SETS)
        .into_par_iter()
        .map(|i| {
            let mut rng = XorShift64::new(DEFAULT_SEED ^ (i as u64).wrapping_mul(0x9e37_79b9));
            let n = (2f64.powf(20.0 * rng.unit()) as usize).max(1);
            let count = rng.below(n.min(3000) as u64 + 1) as usize;
            let mut idx: Vec<usize> = (0..count).map(|_| rng.below(n as u64) as usize).collect();
            idx.sort_unstable();
            idx.dedup();
            let dense = i % 2 == 0;
            let entries: Vec<CfEntry> = idx
                .iter()
                .enumerate()
                .map(|(j, &ix)| {
                    let value = if dense {
                        // at most 8 times the nearer gap, so the set is valid
                        let left = if j > 0 { ix - idx[j - 1] } else { n };
                        let right = idx.get(j + 1).map_or(n, |&r| r - ix);
                        rng.below(8 * left.min(right) as u64 + 8)
                    } else {
                        let bits = rng.below(65) as u32;
                        if bits == 0 { 0 } else { rng.next_u64() >> (64 - bits) }
                    };
                    CfEntry::new(ix, value)
                })
                .collect();
            let (kept, _) = split_dense(&entries).unwrap();
            if !cf_check_constraint(&kept).unwrap() || (dense && kept.len() != entries.len()) {
                return (false, 0, kept.len());
            }
            let array = match cf_build(&kept, n) {
                Ok(a) => a,
                Err(_) => return (false, 0, kept.len()),
            };
            let mut ok = true;
            let mut max_hops = 0;
            for e in &kept {
                let hit = array.find_traced(e.index).unwrap();
                ok &= hit.value == Some(e.value);
                max_hops = max_hops.max(hit.hops);
            }
            for _ in 0..64 {
                let probe = rng.below(n as u64) as usize;
                let hit = array.find_traced(probe).unwrap();
                let want = kept
                    .binary_search_by_key(&probe, |e| e.index)
                    .ok()
                    .map(|k| kept[k].value);
                ok &= hit.value == want;
                max_hops = max_hops.max(hit.hops);
            }
            (ok, max_hops, kept.len())
        })
        .collect();
    let failures = results.iter().filter(|r| !r.0).count();
    let max_hops = results.iter().map(|r| r.1).max().unwrap_or(0);
    let stored: usize = results.iter().map(|r| r.2).sum();

    let rates: Vec<f64> = (10..=20)
        .map(|k| {
            let n = 1usize << k;
            CfArray::with_value_bits(&[], n, 64).unwrap().total_bits() as f64 / n as f64
        })
        .collect();
    let max_rate = rates.iter().cloned().fold(0.0, f64::max);
    let pass = failures == 0
        && max_hops <= CF_MAX_HOPS
        && max_rate <= CF_BITS_PER_POSITION
        && flat(&rates);
    Line {
        id: 3,
        title: "CF-Array store/find, hops, space",
        pass,
        detail: format!(
            "{SETS} sets, {stored} entries, {failures} failures, max hops {max_hops} (limit {CF_MAX_HOPS}), \
             bits/position for n=2^10..2^20 [{}] (limit {CF_BITS_PER_POSITION})",
            fmt_series(&rates)
        ),
    }
}

fn uniqueness_for_three_symbols() -> (bool, String) {
    fn canonical(n: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|s: Vec<u8>| {
                    let used = s.iter().max().map_or(0, |&m| m + 1);
                    (0..(used + 1).min(3)).map(move |c| [s.as_slice(), &[c]].concat())
                })
                .collect();
        }
        out
    }
    let mut strings = 0;
    let mut collisions = 0;
    let mut mismatches = 0;
    for n in 1..=EXHAUSTIVE_N {
        let all = canonical(n);
        strings += all.len();
        let keyed: Vec<(Vec<usize>, bool)> = all
            .par_iter()
            .map(|s| {
                let pals = manacher(s);
                let pre = reconstruct_min(&pals).unwrap();
                let same = pre.text.iter().map(|&x| x as u8).eq(s.iter().copied());
                (pals.into_vec(), same)
            })
            .collect();
        mismatches += keyed.iter().filter(|k| !k.1).count();
        let mut seen: HashMap<&[usize], ()> = HashMap::with_capacity(keyed.len());
        for (key, _) in &keyed {
            if seen.insert(key, ()).is_some() {
                collisions += 1;
            }
        }
    }
    (
        collisions == 0 && mismatches == 0,
        format!(
            "{strings} strings over <=3 symbols up to renaming, n<=12: {collisions} shared arrays, \
             {mismatches} preimages differing from the source"
        ),
    )
}

fn ipf_check() -> (bool, String) {
    fn canonical(n: usize, max_sigma: u8) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|s: Vec<u8>| {
                    let used = s.iter().max().map_or(0, |&m| m + 1);
                    (0..(used + 1).min(max_sigma)).map(move |c| [s.as_slice(), &[c]].concat())
                })
                .collect();
        }
        out
    }
    // forced[n]: the largest alphabet some length-n array requires
    let mut forced = [0usize; 7];
    for (n, slot) in forced.iter_mut().enumerate().skip(1) {
        let mut fewest: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in canonical(n, 5) {
            let distinct = *s.iter().max().unwrap() as usize + 1;
            let e = fewest.entry(manacher(&s).into_vec()).or_insert(distinct);
            *e = (*e).min(distinct);
        }
        *slot = fewest.values().copied().max().unwrap();
    }
    let observed: Vec<usize> = (1..=4)
        .map(|k| (1..forced.len()).find(|&n| forced[n] >= k).unwrap_or(0))
        .collect();
    let formula: Vec<usize> = (1..=4).map(|k| ipf(k).unwrap() as usize).collect();
    (
        observed == formula && formula == [1, 2, 3, 5],
        format!("shortest text length forcing k=1..4 symbols {observed:?}, formula {formula:?}"),
    )
}

fn criterion_6() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut worst_hops = 0;
    for &sigma in &ALPHABETS {
        let measured: Vec<(f64, usize)> = (12..=18)
            .into_par_iter()
            .map(|k| {
                let n = 1usize << k;
                let t = corpus::random_text(n, sigma, DEFAULT_SEED ^ k as u64).unwrap();
                let index = build_index(&t);
                let report = index.stats().unwrap();
                (report.total_bits as f64 / n as f64, report.max_hops)
            })
            .collect();
        let rates: Vec<f64> = measured.iter().map(|m| m.0).collect();
        let hops = measured.iter().map(|m| m.1).max().unwrap();
        worst_hops = worst_hops.max(hops);
        let max = rates.iter().cloned().fold(0.0, f64::max);
        let min = rates.iter().cloned().fold(f64::MAX, f64::min);
        ok &= max <= INDEX_BITS_PER_CHAR && max / min - 1.0 <= FLAT_TOLERANCE;
        parts.push(format!("sigma {sigma}: [{}]", fmt_series(&rates)));
    }
    ok &= worst_hops <= ACCESS_MAX_HOPS;
    Line {
        id: 6,
        title: "index space and query hops",
        pass: ok,
        detail: format!(
            "bits/char for n=2^12..2^18 {} (limit {INDEX_BITS_PER_CHAR}, spread {}%), max hops {worst_hops} (limit {ACCESS_MAX_HOPS})",
            parts.join("; "),
            FLAT_TOLERANCE * 100.0
        ),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut lines = Vec::new();

    let exhaustive = check_exhaustive();
    eprintln!("exhaustive pass done in {:.1?}", started.elapsed());
    let random = check_all(&random_corpus());
    eprintln!("random pass done in {:.1?}", started.elapsed());
    let adversarial = check_all(&adversarial_corpus());
    let all = exhaustive.clone().merge(random.clone()).merge(adversarial.clone());
    eprintln!("corpus pass done in {:.1?}", started.elapsed());
    for e in &all.examples {
        eprintln!("  failure: {e}");
    }

    lines.push(Line {
        id: 1,
        title: "index access equals brute force",
        pass: all.access_mismatches == 0 && all.access_max_hops <= ACCESS_MAX_HOPS,
        detail: format!(
            "{} exhaustive + {} random + {} adversarial texts, {} centers, {} mismatches, max hops {}",
            exhaustive.texts, random.texts, adversarial.texts, all.centers, all.access_mismatches,
            all.access_max_hops
        ),
    });

    let (rates_ok, rates) = criterion_2_rates();
    lines.push(Line {
        id: 2,
        title: "codec round trip and rate",
        pass: all.codec_failures == 0 && rates_ok,
        detail: format!(
            "{} texts, {} round-trip failures; bits/char for n=2^10..2^17 {rates} (limit {CODEC_BITS_PER_CHAR}, step {}%)",
            all.texts,
            all.codec_failures,
            FLAT_TOLERANCE * 100.0
        ),
    });

    lines.push(criterion_3());

    let exception_rate = all.exceptions as f64 / all.centers.max(1) as f64;
    lines.push(Line {
        id: 4,
        title: "periodic descriptors and audits",
        pass: all.radius_mismatches == 0
            && all.noncentric_violations == 0
            && all.threshold_violations == 0
            && exception_rate <= EXCEPTION_RATE
            && all.worst_exception_rate <= EXCEPTION_RATE,
        detail: format!(
            "{} centric lengths checked, {} mismatches; non-centric bound {} / centric threshold {} violations; \
             same-class pairs closer than half a class {} ({} runs demoted); exceptions {} ({:.4}% overall, worst text {:.4}%)",
            all.radius_checks,
            all.radius_mismatches,
            all.noncentric_violations,
            all.threshold_violations,
            all.separation_pairs,
            all.separation_demotions,
            all.exceptions,
            exception_rate * 100.0,
            all.worst_exception_rate * 100.0
        ),
    });

    let (unique_ok, unique) = uniqueness_for_three_symbols();
    let (ipf_ok, ipf_detail) = ipf_check();
    lines.push(Line {
        id: 5,
        title: "reconstruction suite",
        pass: unique_ok
            && ipf_ok
            && all.preimage_failures == 0
            && all.sigma_violations == 0
            && all.zp_violations == 0
            && all.doubling_violations == 0,
        detail: format!(
            "{unique}; {} preimage failures; alphabet bound violations {}; Zimin precedence {}/{} ok; \
             bridging doubling {}/{} ok; {ipf_detail}",
            all.preimage_failures,
            all.sigma_violations,
            all.zp_checks - all.zp_violations,
            all.zp_checks,
            all.doubling_checks - all.doubling_violations,
            all.doubling_checks
        ),
    });

    lines.push(criterion_6());

    lines.sort_by_key(|l| l.id);
    let mut failed = false;
    for l in &lines {
        println!(
            "criterion {} {}: {} | {}",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.title,
            l.detail
        );
        failed |= !l.pass;
    }
    println!("acceptance finished in {:.1?}", started.elapsed());
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
