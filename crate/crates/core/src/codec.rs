//! Compact `O(n)`-bit representation of a palindrome array.
//!
//! The encoding stores the change list of the longest palindromic suffix
//! (see [`crate::pals::suffix_changes`]) as a sparse stream of
//! `gamma(gap), gamma(delta)` pairs, where `gap` is the distance from the
//! previous change position and `delta` the advance of the center. Both are
//! measured from `-1` for the first record, so they are always positive.
//! Positions and centers are increasing and bounded by `2n - 1`, which keeps
//! the whole stream linear in `n`.
//!
//! Decoding walks consecutive records. When the center moves from `c_p` at
//! position `i`, the suffix palindrome around `c_p` ended at `i - 1`; every
//! center strictly between `c_p` and the next center is a mirror copy
//! clipped at that end.

use crate::bits::{bit_width, BitReader, BitStream, ByteReader};
use crate::error::{Error, Result};
use crate::pals::{self, PalArray, SuffixChange};
use crate::reconstruct::reconstruct_min;

pub const COMPACT_MAGIC: &[u8; 4] = b"PCPL";

/// Appends the Elias gamma code of `value` (which must be positive).
pub fn gamma_encode(stream: &mut BitStream, value: u64) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidArgument("gamma code needs a positive value".into()));
    }
    let width = bit_width(value);
    for _ in 1..width {
        stream.push(false);
    }
    stream.push_bits(value, width);
    Ok(())
}

/// Reads one Elias gamma code.
pub fn gamma_decode(reader: &mut BitReader<'_>) -> Result<u64> {
    let mut zeros = 0u32;
    while !reader.read_bit()? {
        zeros += 1;
        if zeros > 63 {
            return Err(Error::MalformedStream("gamma prefix longer than 63 bits".into()));
        }
    }
    let low = reader.read_bits(zeros)?;
    Ok((1u64 << zeros) | low)
}

/// Gamma-coded change list of a palindrome array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactPal {
    n: usize,
    payload: BitStream,
}

impl CompactPal {
    pub fn new(n: usize, payload: BitStream) -> Self {
        Self { n, payload }
    }

    pub fn text_len(&self) -> usize {
        self.n
    }

    pub fn payload(&self) -> &BitStream {
        &self.payload
    }

    pub fn bit_len(&self) -> usize {
        self.payload.bit_len()
    }

    /// `PCPL`, n (u64 LE), bit length (u64 LE), payload bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + self.payload.as_bytes().len());
        out.extend_from_slice(COMPACT_MAGIC);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&(self.payload.bit_len() as u64).to_le_bytes());
        out.extend_from_slice(self.payload.as_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(bytes);
        if r.take(4)? != COMPACT_MAGIC {
            return Err(Error::Format("missing PCPL magic".into()));
        }
        let n = r.usize()?;
        let bit_len = r.usize()?;
        let payload = r.take(bit_len.div_ceil(8))?.to_vec();
        if !r.is_empty() {
            return Err(Error::Format("trailing bytes after PCPL payload".into()));
        }
        Ok(Self {
            n,
            payload: BitStream::from_bytes(payload, bit_len)?,
        })
    }
}

/// Writes the change list of `changes` as gamma pairs.
pub fn encode_changes(n: usize, changes: &[SuffixChange]) -> Result<CompactPal> {
    let mut payload = BitStream::new();
    let (mut prev_pos, mut prev_center) = (-1i64, -1i64);
    for change in changes {
        let (pos, center) = (change.pos as i64, change.center as i64);
        if pos <= prev_pos || center <= prev_center {
            return Err(Error::InvalidArgument("change list is not increasing".into()));
        }
        gamma_encode(&mut payload, (pos - prev_pos) as u64)?;
        gamma_encode(&mut payload, (center - prev_center) as u64)?;
        prev_pos = pos;
        prev_center = center;
    }
    Ok(CompactPal { n, payload })
}

/// Encodes a palindrome array. The array is validated by reconstructing its
/// minimal preimage, whose change list is then written out.
pub fn encode_compact(pals: &PalArray) -> Result<CompactPal> {
    let preimage = reconstruct_min(pals).map_err(|e| match e {
        Error::NotAManacherArray(msg) | Error::InvalidPalArray(msg) => Error::InvalidPalArray(msg),
        other => other,
    })?;
    encode_changes(pals.text_len(), &pals::mps_change_list(&preimage.text))
}

/// Reads the change list back out of a compact stream.
pub fn decode_changes(compact: &CompactPal) -> Result<Vec<SuffixChange>> {
    let m = compact.n.saturating_mul(2).saturating_sub(1);
    let mut reader = compact.payload.reader();
    let mut changes = Vec::new();
    let (mut pos, mut center) = (-1i64, -1i64);
    while !reader.is_at_end() {
        let gap = gamma_decode(&mut reader)?;
        let delta = gamma_decode(&mut reader)?;
        pos = pos
            .checked_add(i64::try_from(gap).map_err(|_| corrupt("gap overflow"))?)
            .ok_or_else(|| corrupt("position overflow"))?;
        center = center
            .checked_add(i64::try_from(delta).map_err(|_| corrupt("delta overflow"))?)
            .ok_or_else(|| corrupt("center overflow"))?;
        if pos as u64 >= m as u64 || center > pos {
            return Err(corrupt(&format!(
                "record ({pos}, {center}) outside {m} centers"
            )));
        }
        changes.push(SuffixChange {
            pos: pos as usize,
            center: center as usize,
        });
    }
    Ok(changes)
}

fn corrupt(msg: &str) -> Error {
    Error::CorruptInput(msg.to_string())
}

/// Counters gathered while decoding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeStats {
    /// Number of center writes; equals the number of centers on success.
    pub writes: usize,
    pub records: usize,
}

pub fn decode_compact(compact: &CompactPal) -> Result<PalArray> {
    decode_compact_traced(compact).map(|(pals, _)| pals)
}

/// Rebuilds the palindrome array in linear time, reporting how many center
/// writes were performed.
pub fn decode_compact_traced(compact: &CompactPal) -> Result<(PalArray, DecodeStats)> {
    let changes = decode_changes(compact)?;
    let m = compact.n.saturating_mul(2).saturating_sub(1);
    let mut stats = DecodeStats {
        writes: 0,
        records: changes.len(),
    };
    if m == 0 {
        return if changes.is_empty() {
            Ok((PalArray::default(), stats))
        } else {
            Err(corrupt("records for an empty text"))
        };
    }
    match changes.first() {
        Some(first) if first.pos == 0 && first.center == 0 => {}
        _ => return Err(corrupt("stream must start with record (0, 0)")),
    }
    let last = changes[changes.len() - 1].center;
    if m - 1 - last > last {
        return Err(corrupt("final suffix palindrome leaves the text"));
    }

    const UNSET: usize = usize::MAX;
    let mut radius = vec![UNSET; m];
    for (k, current) in changes.iter().enumerate() {
        // A virtual terminal record just past the last position closes the
        // final suffix palindrome.
        let (next_pos, next_center) = changes
            .get(k + 1)
            .map_or((m, m), |next| (next.pos, next.center));
        let cp = current.center;
        let end = next_pos - 1;
        if end < cp || end - cp > cp {
            return Err(corrupt(&format!(
                "suffix palindrome at center {cp} ending at {end} leaves the text"
            )));
        }
        radius[cp] = end - cp;
        stats.writes += 1;
        for c in cp + 1..next_center {
            let mirror = (2 * cp)
                .checked_sub(c)
                .ok_or_else(|| corrupt("mirror center before the text"))?;
            let copied = radius[mirror];
            if copied == UNSET || c > end {
                return Err(corrupt("center gap not covered by the suffix palindrome"));
            }
            radius[c] = copied.min(end.saturating_sub(c));
            stats.writes += 1;
        }
    }

    let lengths = radius
        .iter()
        .enumerate()
        .map(|(c, &r)| pals::len_from_sep_radius(c, r))
        .collect();
    let pals = PalArray::from_lengths(lengths).map_err(|e| corrupt(&e.to_string()))?;
    Ok((pals, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pals::{manacher, mps_change_list};

    fn gamma_bits(v: u64) -> String {
        let mut s = BitStream::new();
        gamma_encode(&mut s, v).unwrap();
        s.to_bit_string()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_bits(1), "1");
        assert_eq!(gamma_bits(2), "010");
        assert_eq!(gamma_bits(5), "00101");
        assert!(gamma_encode(&mut BitStream::new(), 0).is_err());
    }

    #[test]
    fn gamma_round_trip_and_truncation() {
        let mut s = BitStream::new();
        for v in [1u64, 2, 3, 7, 8, 1000, u64::MAX] {
            gamma_encode(&mut s, v).unwrap();
        }
        let mut r = s.reader();
        for v in [1u64, 2, 3, 7, 8, 1000, u64::MAX] {
            assert_eq!(gamma_decode(&mut r).unwrap(), v);
        }
        let mut t = BitStream::new();
        t.push_bits(0b001, 3);
        assert!(matches!(
            gamma_decode(&mut t.reader()),
            Err(Error::MalformedStream(_))
        ));
    }

    #[test]
    fn single_character_payload() {
        let c = encode_compact(&manacher(b"a")).unwrap();
        assert_eq!(c.payload().to_bit_string(), "11");
        assert_eq!(decode_compact(&c).unwrap().as_slice(), &[1]);
    }

    #[test]
    fn double_character_change_list() {
        let c = encode_compact(&manacher(b"aa")).unwrap();
        let changes = decode_changes(&c).unwrap();
        assert_eq!(changes, mps_change_list(b"aa"));
        assert_eq!(decode_compact(&c).unwrap().as_slice(), &[1, 2, 1]);
    }

    #[test]
    fn examples_round_trip() {
        for text in [&b"abacaba"[..], b"abc", b"", b"aab", b"abbaabba", b"aaaaaaa"] {
            let pals = manacher(text);
            let (back, stats) = decode_compact_traced(&encode_compact(&pals).unwrap()).unwrap();
            assert_eq!(back, pals);
            assert_eq!(stats.writes, pals.len());
        }
    }

    #[test]
    fn rejects_invalid_arrays() {
        // s0 = s1 and s1 = s2 force a length-3 palindrome at center 2
        let bogus = PalArray::from_lengths(vec![1, 2, 1, 2, 1]).unwrap();
        assert!(matches!(encode_compact(&bogus), Err(Error::InvalidPalArray(_))));
    }

    #[test]
    fn rejects_corrupt_streams() {
        // first record must be (0, 0)
        let mut s = BitStream::new();
        gamma_encode(&mut s, 2).unwrap();
        gamma_encode(&mut s, 1).unwrap();
        assert!(matches!(
            decode_compact(&CompactPal::new(3, s)),
            Err(Error::CorruptInput(_))
        ));
        // dangling half record
        let mut s = BitStream::new();
        gamma_encode(&mut s, 1).unwrap();
        assert!(matches!(
            decode_compact(&CompactPal::new(1, s)),
            Err(Error::MalformedStream(_))
        ));
        // position past the end
        let mut s = BitStream::new();
        gamma_encode(&mut s, 1).unwrap();
        gamma_encode(&mut s, 1).unwrap();
        gamma_encode(&mut s, 9).unwrap();
        gamma_encode(&mut s, 1).unwrap();
        assert!(matches!(
            decode_compact(&CompactPal::new(2, s)),
            Err(Error::CorruptInput(_))
        ));
    }

    #[test]
    fn file_section_layout() {
        let c = encode_compact(&manacher(b"abacaba")).unwrap();
        let bytes = c.to_bytes();
        assert_eq!(&bytes[..4], b"PCPL");
        assert_eq!(u64::from_le_bytes(bytes[4..12].try_into().unwrap()), 7);
        assert_eq!(
            u64::from_le_bytes(bytes[12..20].try_into().unwrap()),
            c.bit_len() as u64
        );
        assert_eq!(CompactPal::from_bytes(&bytes).unwrap(), c);
        assert!(CompactPal::from_bytes(b"PCPX").is_err());
        assert!(CompactPal::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }
}
