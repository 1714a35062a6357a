//! Static bit-vector with rank and select.
//!
//! Rank uses a two-level directory: absolute counts per 512-bit superblock
//! and 16-bit relative counts per 64-bit word. Select keeps the superblock of
//! every 512th set bit as a hint, binary-searches the superblocks between two
//! hints, then scans at most eight words.

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;
const SUPERBLOCK_BITS: usize = 512;
const WORDS_PER_SUPERBLOCK: usize = SUPERBLOCK_BITS / WORD_BITS;
const SELECT_SAMPLE: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsBitVector {
    len: usize,
    words: Vec<u64>,
    superblocks: Vec<u64>,
    blocks: Vec<u16>,
    select_hints: Vec<u64>,
    ones: usize,
}

impl Default for RsBitVector {
    fn default() -> Self {
        Self::from_words(Vec::new(), 0)
    }
}

impl RsBitVector {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                *words.last_mut().unwrap() |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    /// A vector of `len` bits with ones exactly at `positions`.
    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut words = vec![0u64; len.div_ceil(WORD_BITS)];
        for p in positions {
            assert!(p < len, "bit position {p} out of range {len}");
            words[p / WORD_BITS] |= 1 << (p % WORD_BITS);
        }
        Self::from_words(words, len)
    }

    /// Builds the directories over `len` bits stored LSB-first in `words`.
    /// Bits past `len` are cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(WORD_BITS), 0);
        if !len.is_multiple_of(WORD_BITS) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % WORD_BITS)) - 1;
        }
        let mut superblocks = Vec::with_capacity(words.len() / WORDS_PER_SUPERBLOCK + 2);
        let mut blocks = Vec::with_capacity(words.len() + 1);
        let mut select_hints = Vec::new();
        let mut total = 0usize;
        let mut in_super = 0usize;
        for (w, &word) in words.iter().enumerate() {
            if w % WORDS_PER_SUPERBLOCK == 0 {
                superblocks.push(total as u64);
                in_super = 0;
            }
            blocks.push(in_super as u16);
            let count = word.count_ones() as usize;
            // superblock holding the (k * SELECT_SAMPLE + 1)-th one
            while select_hints.len() * SELECT_SAMPLE < total + count {
                select_hints.push((w / WORDS_PER_SUPERBLOCK) as u64);
            }
            total += count;
            in_super += count;
        }
        superblocks.push(total as u64);
        blocks.push(if words.len().is_multiple_of(WORDS_PER_SUPERBLOCK) {
            0
        } else {
            in_super as u16
        });
        Self {
            len,
            words,
            superblocks,
            blocks,
            select_hints,
            ones: total,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        if i >= self.len {
            return Err(Error::OutOfBounds {
                what: "bit",
                index: i,
                limit: self.len,
            });
        }
        Ok(self.bit(i))
    }

    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    /// Number of set bits in positions `[0, i)`.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::OutOfBounds {
                what: "rank position",
                index: i,
                limit: self.len,
            });
        }
        Ok(self.rank(i))
    }

    #[inline]
    pub(crate) fn rank(&self, i: usize) -> usize {
        let word = i / WORD_BITS;
        let mut r = self.superblocks[word / WORDS_PER_SUPERBLOCK] as usize
            + self.blocks[word] as usize;
        if !i.is_multiple_of(WORD_BITS) {
            r += (self.words[word] & ((1u64 << (i % WORD_BITS)) - 1)).count_ones() as usize;
        }
        r
    }

    /// Position of the `k`-th set bit, `k` counted from 1.
    pub fn select1(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.ones {
            return Err(Error::OutOfBounds {
                what: "select rank",
                index: k,
                limit: self.ones,
            });
        }
        let sample = (k - 1) / SELECT_SAMPLE;
        let mut lo = self.select_hints[sample] as usize;
        let mut hi = self
            .select_hints
            .get(sample + 1)
            .map_or(self.superblocks.len() - 2, |&s| s as usize);
        // last superblock whose prefix count is < k
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if (self.superblocks[mid] as usize) < k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut remaining = k - self.superblocks[lo] as usize;
        let first = lo * WORDS_PER_SUPERBLOCK;
        let last = (first + WORDS_PER_SUPERBLOCK).min(self.words.len());
        let mut word = first;
        while word + 1 < last && (self.blocks[word + 1] as usize) < remaining {
            word += 1;
        }
        remaining -= self.blocks[word] as usize;
        Ok(word * WORD_BITS + select_in_word(self.words[word], remaining))
    }

    /// Bits used by the rank and select directories.
    pub fn directory_bits(&self) -> usize {
        self.superblocks.len() * 64 + self.blocks.len() * 16 + self.select_hints.len() * 64
    }

    /// Raw bits plus directories.
    pub fn total_bits(&self) -> usize {
        self.len + self.directory_bits()
    }

    /// 64-bit LE length followed by the raw words, LE.
    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.len as u64).to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }

    pub(crate) fn read_from(r: &mut crate::bits::ByteReader<'_>) -> Result<Self> {
        let len = r.usize()?;
        let count = len.div_ceil(WORD_BITS);
        let raw = r.take(count.checked_mul(8).ok_or_else(|| {
            Error::Format("bit-vector length overflow".into())
        })?)?;
        let words = raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self::from_words(words, len))
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = crate::bits::ByteReader::new(bytes);
        let v = Self::read_from(&mut r)?;
        if !r.is_empty() {
            return Err(Error::Format("trailing bytes after bit-vector".into()));
        }
        Ok(v)
    }
}

/// Offset of the `k`-th (1-based) set bit of `word`.
fn select_in_word(mut word: u64, k: usize) -> usize {
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}
