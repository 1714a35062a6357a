//! Bit-level plumbing: an MSB-first bit stream and a fixed-width packed
//! integer vector.

use crate::error::{Error, Result};

/// A sequence of bits stored MSB-first within bytes. Pad bits after
/// `bit_len` are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitStream {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a stream from raw bytes; fails if `bit_len` exceeds the
    /// byte capacity or if any pad bit is set.
    pub fn from_bytes(bytes: Vec<u8>, bit_len: usize) -> Result<Self> {
        if bytes.len() != bit_len.div_ceil(8) {
            return Err(Error::MalformedStream(format!(
                "{} bytes cannot hold exactly {bit_len} bits",
                bytes.len()
            )));
        }
        if !bit_len.is_multiple_of(8) {
            let pad_mask = 0xffu8 >> (bit_len % 8);
            if bytes[bytes.len() - 1] & pad_mask != 0 {
                return Err(Error::MalformedStream("non-zero pad bits".into()));
            }
        }
        Ok(Self { bytes, bit_len })
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn push(&mut self, bit: bool) {
        if self.bit_len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.bit_len % 8);
        }
        self.bit_len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        for shift in (0..width).rev() {
            self.push((value >> shift) & 1 == 1);
        }
    }

    pub fn get(&self, pos: usize) -> Option<bool> {
        (pos < self.bit_len).then(|| self.bytes[pos / 8] & (0x80 >> (pos % 8)) != 0)
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader {
            stream: self,
            pos: 0,
        }
    }

    /// Renders the bits as a `0`/`1` string.
    pub fn to_bit_string(&self) -> String {
        (0..self.bit_len)
            .map(|i| if self.get(i) == Some(true) { '1' } else { '0' })
            .collect()
    }
}

/// Cursor over a [`BitStream`].
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    stream: &'a BitStream,
    pos: usize,
}

impl BitReader<'_> {
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.stream.bit_len - self.pos
    }

    pub fn is_at_end(&self) -> bool {
        self.pos == self.stream.bit_len
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let bit = self
            .stream
            .get(self.pos)
            .ok_or_else(|| Error::MalformedStream(format!("truncated at bit {}", self.pos)))?;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, width: u32) -> Result<u64> {
        let mut value = 0u64;
        for _ in 0..width {
            value = (value << 1) | u64::from(self.read_bit()?);
        }
        Ok(value)
    }
}

/// Unsigned integers of a fixed bit width packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedInts {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl PackedInts {
    /// `len` zeroed slots of `width` bits each (`width` in `0..=64`).
    pub fn new(width: u32, len: usize) -> Self {
        assert!(width <= 64, "width {width} exceeds 64 bits");
        let words = (width as usize * len).div_ceil(64);
        Self {
            width,
            len,
            words: vec![0; words],
        }
    }

    pub fn from_words(width: u32, len: usize, words: Vec<u64>) -> Result<Self> {
        if width > 64 || words.len() != (width as usize * len).div_ceil(64) {
            return Err(Error::Format(format!(
                "{} words do not hold {len} slots of width {width}",
                words.len()
            )));
        }
        Ok(Self { width, len, words })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Payload bits, `width * len`.
    pub fn bit_len(&self) -> usize {
        self.width as usize * self.len
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    pub fn get(&self, index: usize) -> u64 {
        assert!(index < self.len, "packed index {index} out of range {}", self.len);
        if self.width == 0 {
            return 0;
        }
        let bit = index * self.width as usize;
        let (word, offset) = (bit / 64, bit % 64);
        let mut value = self.words[word] >> offset;
        if offset + self.width as usize > 64 {
            value |= self.words[word + 1] << (64 - offset);
        }
        value & self.mask()
    }

    pub fn set(&mut self, index: usize, value: u64) {
        assert!(index < self.len, "packed index {index} out of range {}", self.len);
        let mask = self.mask();
        assert!(value & !mask == 0, "value {value} wider than {} bits", self.width);
        if self.width == 0 {
            return;
        }
        let bit = index * self.width as usize;
        let (word, offset) = (bit / 64, bit % 64);
        self.words[word] = (self.words[word] & !(mask << offset)) | (value << offset);
        if offset + self.width as usize > 64 {
            let spill = 64 - offset;
            self.words[word + 1] = (self.words[word + 1] & !(mask >> spill)) | (value >> spill);
        }
    }
}

/// Number of bits needed to write `value` in binary (0 for 0).
pub fn bit_width(value: u64) -> u32 {
    64 - value.leading_zeros()
}

/// Little-endian byte cursor used by the binary file readers.
pub(crate) struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub(crate) fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&end| end <= self.bytes.len())
            .ok_or_else(|| {
                Error::Format(format!("unexpected end of data at byte {}", self.pos))
            })?;
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn usize(&mut self) -> Result<usize> {
        let value = self.u64()?;
        usize::try_from(value).map_err(|_| Error::Format(format!("{value} exceeds usize")))
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn stream_pads_with_zero() {
        let mut s = BitStream::new();
        s.push_bits(0b101, 3);
        assert_eq!(s.as_bytes(), &[0b1010_0000]);
        assert_eq!(s.to_bit_string(), "101");
        assert!(BitStream::from_bytes(vec![0b1010_0001], 3).is_err());
        assert!(BitStream::from_bytes(vec![0b1010_0000], 3).is_ok());
        assert!(BitStream::from_bytes(vec![0, 0], 3).is_err());
    }

    #[test]
    fn reader_reports_truncation() {
        let mut s = BitStream::new();
        s.push_bits(3, 2);
        let mut r = s.reader();
        assert_eq!(r.read_bits(2).unwrap(), 3);
        assert!(r.is_at_end());
        assert!(matches!(r.read_bit(), Err(Error::MalformedStream(_))));
    }

    proptest! {
        #[test]
        fn packed_ints_store_values(width in 1u32..=64, raw in proptest::collection::vec(any::<u64>(), 0..200)) {
            let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            let values: Vec<u64> = raw.iter().map(|v| v & mask).collect();
            let mut packed = PackedInts::new(width, values.len());
            for (i, &v) in values.iter().enumerate() {
                packed.set(i, v);
            }
            for (i, &v) in values.iter().enumerate() {
                prop_assert_eq!(packed.get(i), v);
            }
        }
    }
}
