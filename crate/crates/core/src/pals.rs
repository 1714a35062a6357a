//! Maximal palindromes of a text in augmented-center coordinates.
//!
//! A text of length `n` has `2n - 1` centers. Center `c` addresses the
//! character `c / 2` when `c` is even and the gap between characters
//! `(c - 1) / 2` and `(c + 1) / 2` when `c` is odd. No separator symbols are
//! ever materialized. The palindrome of length `L` centered at `c` covers the
//! characters `(c + 1 - L) / 2 ..= (c + L - 1) / 2`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// Lengths of the maximal palindromes at every augmented center.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PalArray {
    lengths: Vec<usize>,
}

impl PalArray {
    /// Wraps `lengths` after checking parity and in-text bounds for every
    /// center. The mirror property is not checked here; use
    /// [`crate::reconstruct::reconstruct_min`] for full validation.
    pub fn from_lengths(lengths: Vec<usize>) -> Result<Self> {
        validate_structure(&lengths)?;
        Ok(Self { lengths })
    }

    pub(crate) fn from_lengths_unchecked(lengths: Vec<usize>) -> Self {
        debug_assert!(validate_structure(&lengths).is_ok());
        Self { lengths }
    }

    /// Length of the source text.
    pub fn text_len(&self) -> usize {
        self.lengths.len().div_ceil(2)
    }

    /// Number of centers, `2n - 1` (or 0 for the empty text).
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn get(&self, center: usize) -> Option<usize> {
        self.lengths.get(center).copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.lengths
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.lengths
    }

    /// Character span of the maximal palindrome at `center`, `None` when the
    /// palindrome is empty.
    pub fn span(&self, center: usize) -> Option<RangeInclusive<usize>> {
        let len = self.lengths[center];
        if len == 0 {
            return None;
        }
        Some((center + 1 - len) / 2..=(center + len - 1) / 2)
    }

    /// Whether the characters `lo..=hi` form a palindrome.
    pub fn is_palindrome(&self, lo: usize, hi: usize) -> bool {
        hi < lo || self.lengths[lo + hi] > hi - lo
    }

    /// Radius of the maximal palindrome at `center` in the string with a
    /// separator between every two characters (and none at the ends).
    pub fn sep_radius(&self, center: usize) -> usize {
        sep_radius(center, self.lengths[center], self.lengths.len())
    }
}

impl std::ops::Index<usize> for PalArray {
    type Output = usize;

    fn index(&self, center: usize) -> &usize {
        &self.lengths[center]
    }
}

pub(crate) fn sep_radius(center: usize, len: usize, centers: usize) -> usize {
    if len <= center && center + len < centers {
        len
    } else {
        len - 1
    }
}

/// Character count of a separator-string palindrome with the given radius.
pub(crate) fn len_from_sep_radius(center: usize, radius: usize) -> usize {
    (center + radius) / 2 + 1 - (center - radius).div_ceil(2)
}

pub(crate) fn validate_structure(lengths: &[usize]) -> Result<()> {
    let m = lengths.len();
    if m == 0 {
        return Ok(());
    }
    if m.is_multiple_of(2) {
        return Err(Error::InvalidPalArray(format!(
            "array length {m} is not of the form 2n - 1"
        )));
    }
    for (c, &len) in lengths.iter().enumerate() {
        if len % 2 == c % 2 {
            return Err(Error::InvalidPalArray(format!(
                "length {len} at center {c} has the wrong parity"
            )));
        }
        if len > c.min(m - 1 - c) + 1 {
            return Err(Error::InvalidPalArray(format!(
                "length {len} at center {c} leaves the text"
            )));
        }
    }
    Ok(())
}

fn initial_len(center: usize) -> usize {
    if center.is_multiple_of(2) {
        1
    } else {
        0
    }
}

/// Grows the palindrome at `center` from length `len` while it stays
/// palindromic.
fn extend<T: PartialEq>(text: &[T], center: usize, mut len: usize) -> usize {
    loop {
        let start = (center + 1 - len) / 2;
        let end = (center + len).div_ceil(2);
        if start == 0 || end >= text.len() || text[start - 1] != text[end] {
            return len;
        }
        len += 2;
    }
}

/// Maximal palindrome lengths for every center in linear time.
pub fn manacher<T: PartialEq>(text: &[T]) -> PalArray {
    if text.is_empty() {
        return PalArray::default();
    }
    let m = 2 * text.len() - 1;
    let mut lengths = vec![0usize; m];
    // Rightmost-reaching palindrome so far: its center and exclusive end.
    let mut best = 0usize;
    let mut reach = 0usize;
    for c in 0..m {
        let start_len = if c < reach {
            lengths[2 * best - c].min(reach - c)
        } else {
            initial_len(c)
        };
        let len = extend(text, c, start_len);
        lengths[c] = len;
        if c + len > reach {
            best = c;
            reach = c + len;
        }
    }
    PalArray::from_lengths_unchecked(lengths)
}

/// Maximal palindrome lengths by direct expansion around every center.
/// Quadratic in the worst case; used as the reference oracle.
pub fn brute_force_pals<T: PartialEq>(text: &[T]) -> PalArray {
    if text.is_empty() {
        return PalArray::default();
    }
    let m = 2 * text.len() - 1;
    let lengths = (0..m).map(|c| extend(text, c, initial_len(c))).collect();
    PalArray::from_lengths_unchecked(lengths)
}

/// One entry of the longest-palindromic-suffix change list: from augmented
/// position `pos` on, the longest palindromic suffix is centered at `center`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SuffixChange {
    pub pos: usize,
    pub center: usize,
}

/// Positions where the center of the longest palindromic suffix of the
/// separator-augmented prefix changes.
pub fn mps_change_list<T: PartialEq>(text: &[T]) -> Vec<SuffixChange> {
    suffix_changes(&manacher(text))
}

/// The change list computed from the palindrome array alone: the longest
/// palindromic suffix ending at `p` is centered at the smallest `c` whose
/// separator radius reaches `p`.
pub fn suffix_changes(pals: &PalArray) -> Vec<SuffixChange> {
    let m = pals.len();
    let mut changes = Vec::new();
    let mut center = 0usize;
    for pos in 0..m {
        while center + pals.sep_radius(center) < pos {
            center += 1;
        }
        if changes.last().is_none_or(|last: &SuffixChange| last.center != center) {
            changes.push(SuffixChange { pos, center });
        }
    }
    changes
}
