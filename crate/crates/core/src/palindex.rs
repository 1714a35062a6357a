//! Exact random access to the palindrome array in a linear number of bits.
//!
//! Every center is answered by exactly one path, tried in this order:
//!
//! 1. `exceptions`, a sorted `(center, length)` list for plain entries that
//!    break the density constraint;
//! 2. centric centers, marked in `centric`: `cf_period` gives the period,
//!    its class `t = floor(log2 p)` selects a bit-vector over blocks of
//!    `2^t` centers marking run starts, and rank over that vector addresses
//!    the run's descriptor in `ppd_tables[t]`;
//! 3. `cf_plain`, holding the length directly.
//!
//! A center is routed through a run only when that run is the last kept
//! run of its class starting at or before the center, which is exactly what
//! the rank lookup returns.

use std::collections::BTreeMap;

use crate::bits::{bit_width, ByteReader, PackedInts};
use crate::cfarray::{split_dense, CfArray, CfEntry};
use crate::error::{Error, Result};
use crate::pals::manacher;
use crate::periodic::{centric_centers, detect_ppds, radius_unchecked, Ppd};
use crate::succinct::RsBitVector;

pub const INDEX_MAGIC: &[u8; 4] = b"PALZ";
pub const INDEX_VERSION: u8 = 1;

const TAG_CF_PLAIN: u32 = 1;
const TAG_CF_PERIOD: u32 = 2;
const TAG_CENTRIC: u32 = 3;
const TAG_CLASS_VECTORS: u32 = 4;
const TAG_PPD_TABLES: u32 = 5;
const TAG_EXCEPTIONS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalIndex {
    n: usize,
    cf_plain: CfArray,
    cf_period: CfArray,
    centric: RsBitVector,
    class_vectors: Vec<RsBitVector>,
    ppd_tables: Vec<Vec<Ppd>>,
    exceptions: Vec<(usize, usize)>,
}

/// Counters gathered while building an index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub runs: usize,
    /// Runs sharing a class block with an earlier run of the same class.
    pub separation_violations: usize,
    /// Centric centers moved to the plain path because their periods broke
    /// the density constraint.
    pub period_demotions: usize,
    /// Centric centers whose run is not the one the lookup reaches.
    pub shadowed_centers: usize,
    /// Centric centers whose descriptor disagreed with the array.
    pub radius_mismatches: usize,
}

/// One traced access.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Access {
    pub length: usize,
    /// CF-Array slots read.
    pub hops: usize,
    pub path: AccessPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessPath {
    Exception,
    Centric,
    Plain,
}

/// Sizes and counts of a built index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpaceReport {
    pub n: usize,
    pub centers: usize,
    pub cf_plain_bits: usize,
    pub cf_period_bits: usize,
    pub centric_bits: usize,
    pub class_vector_bits: usize,
    pub ppd_table_bits: usize,
    pub exception_bits: usize,
    /// Size of the serialized file.
    pub total_bits: usize,
    pub bits_per_char: f64,
    pub centric_centers: usize,
    pub ppds: usize,
    pub exceptions: usize,
    /// `hop_histogram[h]` counts centers answered with `h` slot reads.
    pub hop_histogram: Vec<usize>,
    pub max_hops: usize,
}

fn class_of(period: usize) -> usize {
    (usize::BITS - 1 - period.leading_zeros()) as usize
}

fn centers_of(n: usize) -> usize {
    (2 * n).saturating_sub(1)
}

/// Builds the index of `text`.
pub fn build_index<T: PartialEq>(text: &[T]) -> PalIndex {
    build_index_report(text).0
}

pub fn build_index_report<T: PartialEq>(text: &[T]) -> (PalIndex, BuildReport) {
    let pals = manacher(text);
    let m = pals.len();
    let ppds = detect_ppds(text, &pals);
    let mut report = BuildReport {
        runs: ppds.len(),
        ..BuildReport::default()
    };

    // kept runs per class, in start order, at most one per block
    let mut by_class: BTreeMap<usize, Vec<Ppd>> = BTreeMap::new();
    for ppd in &ppds {
        let t = class_of(ppd.period());
        let kept = by_class.entry(t).or_default();
        if kept.last().is_some_and(|last| last.start >> t == ppd.start >> t) {
            report.separation_violations += 1;
        } else {
            kept.push(*ppd);
        }
    }
    let classes = by_class.keys().next_back().map_or(0, |&t| t + 1);
    let mut ppd_tables: Vec<Vec<Ppd>> = vec![Vec::new(); classes];
    for (t, runs) in by_class {
        ppd_tables[t] = runs;
    }

    // period assigned to each centric center: the smallest among runs the
    // lookup resolves to
    let mut period_at: Vec<usize> = vec![0; m];
    for table in &ppd_tables {
        for (i, ppd) in table.iter().enumerate() {
            let next_start = table.get(i + 1).map_or(usize::MAX, |r| r.start);
            for c in centric_centers(ppd) {
                if c >= next_start {
                    report.shadowed_centers += 1;
                    continue;
                }
                if radius_unchecked(ppd, c) != pals[c] {
                    report.radius_mismatches += 1;
                    continue;
                }
                let p = ppd.period();
                if period_at[c] == 0 || p < period_at[c] {
                    period_at[c] = p;
                }
            }
        }
    }

    let period_entries: Vec<CfEntry> = (0..m)
        .filter(|&c| period_at[c] != 0)
        .map(|c| CfEntry::new(c, period_at[c] as u64))
        .collect();
    let (period_kept, period_dropped) =
        split_dense(&period_entries).expect("entries are sorted and distinct");
    report.period_demotions = period_dropped.len();
    let mut is_centric = vec![false; m];
    for e in &period_kept {
        is_centric[e.index] = true;
    }

    let plain_entries: Vec<CfEntry> = (0..m)
        .filter(|&c| !is_centric[c])
        .map(|c| CfEntry::new(c, pals[c] as u64))
        .collect();
    let (plain_kept, plain_dropped) =
        split_dense(&plain_entries).expect("entries are sorted and distinct");

    // lengths and periods never exceed n, so the level layout depends on n only
    let value_bits = bit_width(text.len() as u64).max(1);
    let cf_plain = CfArray::with_value_bits(&plain_kept, m, value_bits)
        .expect("split output satisfies the constraint");
    let cf_period = CfArray::with_value_bits(&period_kept, m, value_bits)
        .expect("split output satisfies the constraint");
    let centric = RsBitVector::from_bits(is_centric.iter().copied());
    let class_vectors = ppd_tables
        .iter()
        .enumerate()
        .map(|(t, table)| {
            RsBitVector::from_positions(m.div_ceil(1 << t), table.iter().map(|r| r.start >> t))
        })
        .collect();
    let exceptions = plain_dropped
        .iter()
        .map(|e| (e.index, e.value as usize))
        .collect();
    let index = PalIndex {
        n: text.len(),
        cf_plain,
        cf_period,
        centric,
        class_vectors,
        ppd_tables,
        exceptions,
    };
    (index, report)
}

impl PalIndex {
    /// Text length.
    pub fn text_len(&self) -> usize {
        self.n
    }

    /// Number of centers, `2n - 1`.
    pub fn centers(&self) -> usize {
        centers_of(self.n)
    }

    pub fn exceptions(&self) -> &[(usize, usize)] {
        &self.exceptions
    }

    pub fn ppd_tables(&self) -> &[Vec<Ppd>] {
        &self.ppd_tables
    }

    pub fn centric(&self) -> &RsBitVector {
        &self.centric
    }

    pub fn cf_plain(&self) -> &CfArray {
        &self.cf_plain
    }

    pub fn cf_period(&self) -> &CfArray {
        &self.cf_period
    }

    pub fn class_vectors(&self) -> &[RsBitVector] {
        &self.class_vectors
    }

    /// Length of the maximal palindrome at augmented center `c`.
    pub fn access(&self, c: usize) -> Result<usize> {
        self.access_traced(c).map(|a| a.length)
    }

    pub fn access_traced(&self, c: usize) -> Result<Access> {
        if c >= self.centers() {
            return Err(Error::OutOfBounds {
                what: "center",
                index: c,
                limit: self.centers(),
            });
        }
        if let Ok(i) = self.exceptions.binary_search_by_key(&c, |&(center, _)| center) {
            return Ok(Access {
                length: self.exceptions[i].1,
                hops: 0,
                path: AccessPath::Exception,
            });
        }
        if self.centric.bit(c) {
            let found = self.cf_period.find_traced(c)?;
            let period = found.value.filter(|&p| p > 0).ok_or_else(|| {
                Error::CorruptInput(format!("centric center {c} has no period"))
            })? as usize;
            let ppd = self.run_for(c, class_of(period))?;
            if !ppd.is_centric(c) {
                return Err(Error::CorruptInput(format!(
                    "center {c} is not centric in its run"
                )));
            }
            return Ok(Access {
                length: radius_unchecked(ppd, c),
                hops: found.hops,
                path: AccessPath::Centric,
            });
        }
        let found = self.cf_plain.find_traced(c)?;
        let length = found
            .value
            .ok_or_else(|| Error::CorruptInput(format!("center {c} has no stored length")))?;
        Ok(Access {
            length: length as usize,
            hops: found.hops,
            path: AccessPath::Plain,
        })
    }

    /// Last run of class `t` starting at or before `c`.
    fn run_for(&self, c: usize, t: usize) -> Result<&Ppd> {
        let corrupt = || Error::CorruptInput(format!("no class-{t} run before center {c}"));
        let (vector, table) = self
            .class_vectors
            .get(t)
            .zip(self.ppd_tables.get(t))
            .ok_or_else(corrupt)?;
        let block = c >> t;
        if block >= vector.len() {
            return Err(corrupt());
        }
        let mut idx = vector.rank(block + 1).checked_sub(1).ok_or_else(corrupt)?;
        if table.get(idx).ok_or_else(corrupt)?.start > c {
            idx = idx.checked_sub(1).ok_or_else(corrupt)?;
        }
        Ok(&table[idx])
    }

    /// The whole array, decoded center by center.
    pub fn to_lengths(&self) -> Result<Vec<usize>> {
        (0..self.centers()).map(|c| self.access(c)).collect()
    }

    pub fn stats(&self) -> Result<SpaceReport> {
        let sections = self.sections();
        let bits_of = |tag: u32| {
            sections
                .iter()
                .find(|(t, _)| *t == tag)
                .map_or(0, |(_, bytes)| bytes.len() * 8)
        };
        let total_bits = self.to_bytes().len() * 8;
        let mut hop_histogram = Vec::new();
        for c in 0..self.centers() {
            let hops = self.access_traced(c)?.hops;
            if hop_histogram.len() <= hops {
                hop_histogram.resize(hops + 1, 0);
            }
            hop_histogram[hops] += 1;
        }
        let max_hops = hop_histogram.len().saturating_sub(1);
        Ok(SpaceReport {
            n: self.n,
            centers: self.centers(),
            cf_plain_bits: bits_of(TAG_CF_PLAIN),
            cf_period_bits: bits_of(TAG_CF_PERIOD),
            centric_bits: bits_of(TAG_CENTRIC),
            class_vector_bits: bits_of(TAG_CLASS_VECTORS),
            ppd_table_bits: bits_of(TAG_PPD_TABLES),
            exception_bits: bits_of(TAG_EXCEPTIONS),
            total_bits,
            bits_per_char: if self.n == 0 {
                0.0
            } else {
                total_bits as f64 / self.n as f64
            },
            centric_centers: self.centric.count_ones(),
            ppds: self.ppd_tables.iter().map(Vec::len).sum(),
            exceptions: self.exceptions.len(),
            hop_histogram,
            max_hops,
        })
    }

    fn sections(&self) -> Vec<(u32, Vec<u8>)> {
        let mut centric = Vec::new();
        self.centric.write_to(&mut centric);

        let mut classes = Vec::new();
        classes.extend_from_slice(&(self.class_vectors.len() as u32).to_le_bytes());
        for v in &self.class_vectors {
            v.write_to(&mut classes);
        }

        let mut tables = Vec::new();
        tables.extend_from_slice(&(self.ppd_tables.len() as u32).to_le_bytes());
        for table in &self.ppd_tables {
            write_table(table, &mut tables);
        }

        let mut exceptions = Vec::new();
        exceptions.extend_from_slice(&(self.exceptions.len() as u64).to_le_bytes());
        for &(c, len) in &self.exceptions {
            exceptions.extend_from_slice(&(c as u64).to_le_bytes());
            exceptions.extend_from_slice(&(len as u64).to_le_bytes());
        }

        vec![
            (TAG_CF_PLAIN, self.cf_plain.to_bytes()),
            (TAG_CF_PERIOD, self.cf_period.to_bytes()),
            (TAG_CENTRIC, centric),
            (TAG_CLASS_VECTORS, classes),
            (TAG_PPD_TABLES, tables),
            (TAG_EXCEPTIONS, exceptions),
        ]
    }

    /// `PALZ` file: magic, version byte, n (u64), then tagged sections.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(INDEX_MAGIC);
        out.push(INDEX_VERSION);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        for (tag, body) in self.sections() {
            out.extend_from_slice(&tag.to_le_bytes());
            out.extend_from_slice(&(body.len() as u64).to_le_bytes());
            out.extend_from_slice(&body);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(bytes);
        if r.take(4).ok() != Some(INDEX_MAGIC.as_slice()) {
            return Err(Error::Format("missing PALZ magic".into()));
        }
        let version = r.u8()?;
        if version != INDEX_VERSION {
            return Err(Error::Format(format!("unsupported index version {version}")));
        }
        let n = r.usize()?;
        let m = centers_of(n);
        let mut bodies: [Option<&[u8]>; 6] = [None; 6];
        while !r.is_empty() {
            let tag = r.u32()?;
            let len = r.usize()?;
            let body = r.take(len)?;
            let slot = (tag as usize)
                .checked_sub(1)
                .and_then(|i| bodies.get_mut(i))
                .ok_or_else(|| Error::Format(format!("unknown section tag {tag}")))?;
            if slot.replace(body).is_some() {
                return Err(Error::Format(format!("duplicate section tag {tag}")));
            }
        }
        let section = |tag: u32| -> Result<ByteReader<'_>> {
            bodies[tag as usize - 1]
                .map(ByteReader::new)
                .ok_or_else(|| Error::Format(format!("missing section tag {tag}")))
        };
        let finish = |r: ByteReader<'_>, tag: u32| -> Result<()> {
            if r.is_empty() {
                Ok(())
            } else {
                Err(Error::Format(format!("trailing bytes in section {tag}")))
            }
        };

        let mut s = section(TAG_CF_PLAIN)?;
        let cf_plain = CfArray::read_from(&mut s)?;
        finish(s, TAG_CF_PLAIN)?;
        let mut s = section(TAG_CF_PERIOD)?;
        let cf_period = CfArray::read_from(&mut s)?;
        finish(s, TAG_CF_PERIOD)?;
        if cf_plain.len() != m || cf_period.len() != m {
            return Err(Error::Format("CF-Array domain does not match n".into()));
        }

        let mut s = section(TAG_CENTRIC)?;
        let centric = RsBitVector::read_from(&mut s)?;
        finish(s, TAG_CENTRIC)?;
        if centric.len() != m {
            return Err(Error::Format("centric vector length does not match n".into()));
        }

        let mut s = section(TAG_CLASS_VECTORS)?;
        let count = s.u32()? as usize;
        if count > usize::BITS as usize {
            return Err(Error::Format(format!("{count} period classes")));
        }
        let mut class_vectors = Vec::with_capacity(count);
        for t in 0..count {
            let v = RsBitVector::read_from(&mut s)?;
            if v.len() != m.div_ceil(1 << t) {
                return Err(Error::Format(format!("class {t} vector has the wrong length")));
            }
            class_vectors.push(v);
        }
        finish(s, TAG_CLASS_VECTORS)?;

        let mut s = section(TAG_PPD_TABLES)?;
        if s.u32()? as usize != count {
            return Err(Error::Format("class and table counts differ".into()));
        }
        let mut ppd_tables = Vec::with_capacity(count);
        for (t, vector) in class_vectors.iter().enumerate() {
            let table = read_table(&mut s)?;
            if table.len() != vector.count_ones() {
                return Err(Error::Format(format!("class {t} table size mismatch")));
            }
            for ppd in &table {
                let sane = ppd.q0_len >= 1
                    && class_of(ppd.period()) == t
                    && ppd.ext_right < ppd.period()
                    && ppd.ext_left <= n
                    && ppd
                        .reps
                        .checked_mul(ppd.period())
                        .and_then(|x| x.checked_add(ppd.q0_len + ppd.ext_right))
                        .and_then(|len| len.checked_mul(2))
                        .and_then(|x| x.checked_add(ppd.start))
                        .is_some_and(|end| end <= m + 1);
                if !sane {
                    return Err(Error::Format(format!("invalid class {t} descriptor")));
                }
            }
            ppd_tables.push(table);
        }
        finish(s, TAG_PPD_TABLES)?;

        let mut s = section(TAG_EXCEPTIONS)?;
        let count = s.usize()?;
        let mut exceptions = Vec::with_capacity(count.min(m));
        for _ in 0..count {
            exceptions.push((s.usize()?, s.usize()?));
        }
        finish(s, TAG_EXCEPTIONS)?;
        let sorted = exceptions.windows(2).all(|w| w[0].0 < w[1].0);
        if !sorted || exceptions.last().is_some_and(|&(c, _)| c >= m) {
            return Err(Error::Format("exceptions not sorted within range".into()));
        }

        Ok(Self {
            n,
            cf_plain,
            cf_period,
            centric,
            class_vectors,
            ppd_tables,
            exceptions,
        })
    }
}

/// Record count (u64), start width and field width (u8 each), then the
/// packed starts and the packed `(q0, q1, reps, ext_left, ext_right)` fields.
fn write_table(table: &[Ppd], out: &mut Vec<u8>) {
    let fields = |p: &Ppd| [p.q0_len, p.q1_len, p.reps, p.ext_left, p.ext_right];
    let start_width = table.iter().map(|p| bit_width(p.start as u64)).max().unwrap_or(0);
    let field_width = table
        .iter()
        .flat_map(&fields)
        .map(|f| bit_width(f as u64))
        .max()
        .unwrap_or(0);
    let mut starts = PackedInts::new(start_width, table.len());
    let mut packed = PackedInts::new(field_width, 5 * table.len());
    for (i, p) in table.iter().enumerate() {
        starts.set(i, p.start as u64);
        for (j, f) in fields(p).into_iter().enumerate() {
            packed.set(5 * i + j, f as u64);
        }
    }
    out.extend_from_slice(&(table.len() as u64).to_le_bytes());
    out.push(start_width as u8);
    out.push(field_width as u8);
    for w in starts.words().iter().chain(packed.words()) {
        out.extend_from_slice(&w.to_le_bytes());
    }
}

fn read_packed(r: &mut ByteReader<'_>, width: u32, len: usize) -> Result<PackedInts> {
    if width > 64 {
        return Err(Error::Format(format!("field width {width}")));
    }
    let words = (width as usize)
        .checked_mul(len)
        .map(|bits| bits.div_ceil(64))
        .ok_or_else(|| Error::Format("table size overflow".into()))?;
    let raw = r.take(words.checked_mul(8).ok_or_else(|| Error::Format("table size overflow".into()))?)?;
    let words = raw
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    PackedInts::from_words(width, len, words)
}

fn read_table(r: &mut ByteReader<'_>) -> Result<Vec<Ppd>> {
    let count = r.usize()?;
    let start_width = r.u8()? as u32;
    let field_width = r.u8()? as u32;
    let starts = read_packed(r, start_width, count)?;
    let fields = read_packed(
        r,
        field_width,
        count.checked_mul(5).ok_or_else(|| Error::Format("table size overflow".into()))?,
    )?;
    let to_usize = |v: u64| usize::try_from(v).map_err(|_| Error::Format(format!("{v} exceeds usize")));
    let mut table = Vec::with_capacity(count);
    for i in 0..count {
        let f = |j: usize| to_usize(fields.get(5 * i + j));
        table.push(Ppd {
            start: to_usize(starts.get(i))?,
            q0_len: f(0)?,
            q1_len: f(1)?,
            reps: f(2)?,
            ext_left: f(3)?,
            ext_right: f(4)?,
        });
    }
    if table.windows(2).any(|w| w[0].start >= w[1].start) {
        return Err(Error::Format("descriptor starts not increasing".into()));
    }
    Ok(table)
}
