//! Static leveled array for sparse integer sequences whose large values are
//! spread out.
//!
//! An entry set qualifies when any two entries with values `v <= w` sit at
//! least `floor(v / 8)` indices apart. Level `k` has `ceil(16 n / 2^k) + 1`
//! slots of `k + 3` bits: one valid bit and a `k + 2`-bit payload. Index `i`
//! maps to slot `floor(i * slots_k / n)` on every level. A value in
//! `[2^k, 2^(k+1))` lives on level `k` as `value - 2^k` (level 0 stores 0 and
//! 1 directly). Lookups start at level 0 and follow forward level pointers
//! stored in invalid slots; a `k + 2`-bit pointer can name any level below
//! `2^(k+2)`, so chains are `0 -> 3 -> 31 -> k` at worst.
//!
//! With 16 slots per `2^k` indices, two entries that both touch level `k`
//! have values of at least `2^k` and hence sit at least `2^(k-3)` apart, which
//! is two slots. Levels 0 through 4 have a private slot per index. Every
//! chain therefore owns its slots, which the build audits.

use std::collections::BTreeSet;

use crate::bits::{bit_width, ByteReader, PackedInts};
use crate::error::{Error, Result};

/// Minimum index separation is `min(value) / SPREAD`.
pub const SPREAD: u64 = 8;
/// Slots per `2^k` domain positions on level `k`.
pub const SLOT_DENSITY: u128 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CfEntry {
    pub index: usize,
    pub value: u64,
}

impl CfEntry {
    pub fn new(index: usize, value: u64) -> Self {
        Self { index, value }
    }
}

/// Level holding `value`.
pub fn value_level(value: u64) -> usize {
    if value <= 1 {
        0
    } else {
        63 - value.leading_zeros() as usize
    }
}

fn check_sorted(entries: &[CfEntry]) -> Result<()> {
    for pair in entries.windows(2) {
        if pair[0].index == pair[1].index {
            return Err(Error::InvalidArgument(format!(
                "duplicate index {}",
                pair[0].index
            )));
        }
        if pair[0].index > pair[1].index {
            return Err(Error::InvalidArgument("entries not sorted by index".into()));
        }
    }
    Ok(())
}

/// First pair of entries closer than the density constraint allows, if
/// any. For each entry only the nearest entry with a value at least as large
/// on either side matters, so one monotone-stack pass per direction
/// suffices.
pub fn find_violation(entries: &[CfEntry]) -> Result<Option<(CfEntry, CfEntry)>> {
    check_sorted(entries)?;
    let mut stack: Vec<usize> = Vec::new();
    let mut scan = |order: &mut dyn Iterator<Item = usize>| -> Option<(CfEntry, CfEntry)> {
        stack.clear();
        for j in order {
            let e = entries[j];
            while stack.last().is_some_and(|&t| entries[t].value < e.value) {
                stack.pop();
            }
            if let Some(&t) = stack.last() {
                let other = entries[t];
                if (other.index.abs_diff(e.index) as u64) < e.value / SPREAD {
                    let (a, b) = if other.index < e.index { (other, e) } else { (e, other) };
                    return Some((a, b));
                }
            }
            stack.push(j);
        }
        None
    };
    if let Some(pair) = scan(&mut (0..entries.len())) {
        return Ok(Some(pair));
    }
    Ok(scan(&mut (0..entries.len()).rev()))
}

/// Whether `entries` (sorted by index, distinct) satisfy the density
/// constraint.
pub fn cf_check_constraint(entries: &[CfEntry]) -> Result<bool> {
    Ok(find_violation(entries)?.is_none())
}

/// Splits `entries` (sorted by index, distinct) into a subset satisfying
/// the density constraint and the rest. Larger values are kept first; an
/// entry is dropped when a kept neighbor sits closer than `value / SPREAD`.
pub fn split_dense(entries: &[CfEntry]) -> Result<(Vec<CfEntry>, Vec<CfEntry>)> {
    check_sorted(entries)?;
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(entries[j].value));
    let mut kept_at: BTreeSet<usize> = BTreeSet::new();
    let mut keep = vec![false; entries.len()];
    for j in order {
        let e = entries[j];
        let need = e.value / SPREAD;
        let close = |other: usize| (other.abs_diff(e.index) as u64) < need;
        let left = kept_at.range(..e.index).next_back().is_some_and(|&o| close(o));
        let right = kept_at.range(e.index..).next().is_some_and(|&o| close(o));
        if !left && !right {
            kept_at.insert(e.index);
            keep[j] = true;
        }
    }
    let (kept, dropped): (Vec<_>, Vec<_>) = entries.iter().zip(keep).partition(|(_, k)| *k);
    Ok((
        kept.into_iter().map(|(e, _)| *e).collect(),
        dropped.into_iter().map(|(e, _)| *e).collect(),
    ))
}

/// Result of a traced lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CfLookup {
    pub value: Option<u64>,
    /// Slots read, including the final one.
    pub hops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfArray {
    n: usize,
    levels: Vec<PackedInts>,
}

/// `k + 3` bits, capped at 64; the top levels still fit a `k`-bit offset.
fn slot_width(level: usize) -> u32 {
    (level as u32 + 3).min(64)
}

fn slot_count(n: usize, level: usize) -> usize {
    let scaled = (SLOT_DENSITY * n as u128).div_ceil(1u128 << level.min(127));
    scaled as usize + 1
}

impl CfArray {
    /// Builds the array with just enough levels for the largest value.
    pub fn build(entries: &[CfEntry], n: usize) -> Result<Self> {
        let max = entries.iter().map(|e| e.value).max().unwrap_or(0);
        Self::with_value_bits(entries, n, bit_width(max).max(1))
    }

    /// Builds an array able to hold any value below `2^value_bits`;
    /// larger values are rejected.
    pub fn with_value_bits(entries: &[CfEntry], n: usize, value_bits: u32) -> Result<Self> {
        if value_bits == 0 || value_bits > 64 {
            return Err(Error::InvalidArgument(format!(
                "value width {value_bits} not in 1..=64"
            )));
        }
        check_sorted(entries)?;
        for e in entries {
            if e.index >= n {
                return Err(Error::OutOfBounds {
                    what: "entry index",
                    index: e.index,
                    limit: n,
                });
            }
            if bit_width(e.value) > value_bits {
                return Err(Error::ValueOverflow {
                    value: e.value,
                    bits: value_bits,
                });
            }
        }
        if let Some((a, b)) = find_violation(entries)? {
            return Err(Error::ConstraintViolation {
                first_index: a.index,
                first_value: a.value,
                second_index: b.index,
                second_value: b.value,
            });
        }
        let top = value_bits as usize - 1;
        let mut array = Self {
            n,
            levels: (0..=top)
                .map(|k| PackedInts::new(slot_width(k), slot_count(n, k)))
                .collect(),
        };
        array.fill(entries)?;
        Ok(array)
    }

    fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    fn slot(&self, level: usize, index: usize) -> usize {
        (index as u128 * self.levels[level].len() as u128 / self.n as u128) as usize
    }

    /// Furthest level a pointer written on `level` can name.
    pub fn max_pointer(&self, level: usize) -> usize {
        let payload_bits = level + 2;
        let limit = if payload_bits >= 64 {
            usize::MAX
        } else {
            (1usize << payload_bits) - 1
        };
        limit.min(self.top_level())
    }

    /// Inserts each entry along its chain. Chains of distinct entries never
    /// share a slot on any level they both touch, so meeting a written slot
    /// means the layout is broken.
    fn fill(&mut self, entries: &[CfEntry]) -> Result<()> {
        for e in entries {
            let target = value_level(e.value);
            let mut level = 0;
            loop {
                let slot = self.slot(level, e.index);
                if self.levels[level].get(slot) != 0 {
                    return Err(Error::SlotCollision {
                        level,
                        slot,
                        index: e.index,
                    });
                }
                if level == target {
                    let payload = if level == 0 { e.value } else { e.value - (1 << level) };
                    self.levels[level].set(slot, payload << 1 | 1);
                    break;
                }
                let next = target.min(self.max_pointer(level));
                self.levels[level].set(slot, (next as u64) << 1);
                level = next;
            }
        }
        Ok(())
    }

    /// Domain size.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn find(&self, index: usize) -> Result<Option<u64>> {
        self.find_traced(index).map(|l| l.value)
    }

    /// Follows the chain for `index`, counting slot reads.
    pub fn find_traced(&self, index: usize) -> Result<CfLookup> {
        if index >= self.n {
            return Err(Error::OutOfBounds {
                what: "CF-Array index",
                index,
                limit: self.n,
            });
        }
        let mut level = 0;
        let mut hops = 0;
        loop {
            hops += 1;
            let raw = self.levels[level].get(self.slot(level, index));
            if raw & 1 == 1 {
                let payload = raw >> 1;
                let value = if level == 0 { payload } else { payload + (1 << level) };
                return Ok(CfLookup {
                    value: Some(value),
                    hops,
                });
            }
            let next = (raw >> 1) as usize;
            if next == 0 {
                return Ok(CfLookup { value: None, hops });
            }
            if next <= level || next > self.top_level() {
                return Err(Error::CorruptInput(format!(
                    "pointer from level {level} to level {next}"
                )));
            }
            level = next;
        }
    }

    /// Bits over all slots of all levels.
    pub fn total_bits(&self) -> usize {
        self.levels.iter().map(PackedInts::bit_len).sum()
    }

    /// Domain size (u64), level count (u32), then per level the slot count
    /// (u64) and the packed slot words, all little-endian. Slot width on
    /// level `k` is `min(k + 3, 64)`.
    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&(self.levels.len() as u32).to_le_bytes());
        for level in &self.levels {
            out.extend_from_slice(&(level.len() as u64).to_le_bytes());
            for w in level.words() {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let n = r.usize()?;
        let count = r.u32()? as usize;
        if count == 0 || count > 64 {
            return Err(Error::Format(format!("bad CF-Array level count {count}")));
        }
        let mut levels = Vec::with_capacity(count);
        for k in 0..count {
            let slots = r.usize()?;
            if slots != slot_count(n, k) {
                return Err(Error::Format(format!(
                    "level {k} has {slots} slots, expected {}",
                    slot_count(n, k)
                )));
            }
            let width = slot_width(k);
            let words = (width as usize * slots).div_ceil(64);
            let raw = r.take(words * 8)?;
            let words = raw
                .chunks_exact(8)
                .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            levels.push(PackedInts::from_words(width, slots, words)?);
        }
        Ok(Self { n, levels })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(bytes);
        let a = Self::read_from(&mut r)?;
        if !r.is_empty() {
            return Err(Error::Format("trailing bytes after CF-Array".into()));
        }
        Ok(a)
    }
}

pub fn cf_build(entries: &[CfEntry], n: usize) -> Result<CfArray> {
    CfArray::build(entries, n)
}

pub fn cf_find(array: &CfArray, index: usize) -> Result<Option<u64>> {
    array.find(index)
}
