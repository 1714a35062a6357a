//! Preimages of palindrome arrays, palindromic Zimin words and the
//! structural checks tied to them.

use crate::error::{Error, Result};
use crate::pals::{manacher, validate_structure, PalArray};

/// A string over symbols `0..sigma`, each symbol first appearing after all
/// smaller ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Preimage {
    pub text: Vec<u32>,
    pub sigma: usize,
}

impl Preimage {
    /// Renders symbols `0..26` as `a..z`; larger alphabets fall back to
    /// space-separated integers.
    pub fn render(&self) -> String {
        if self.sigma <= 26 {
            self.text.iter().map(|&s| (b'a' + s as u8) as char).collect()
        } else {
            let parts: Vec<String> = self.text.iter().map(u32::to_string).collect();
            parts.join(" ")
        }
    }
}

/// Lexicographically smallest string whose palindrome array is `pals`.
///
/// Position `i` copies its mirror under the rightmost-reaching palindrome
/// centered before it. Otherwise it takes the smallest symbol not excluded by
/// a palindrome ending at `i - 1`, which must not extend over `i`.
pub fn reconstruct_min(pals: &PalArray) -> Result<Preimage> {
    let lengths = pals.as_slice();
    validate_structure(lengths).map_err(|e| Error::NotAManacherArray(e.to_string()))?;
    let n = pals.text_len();
    // ending[e]: centers whose maximal palindrome stops just before
    // character e and has a character before its start
    let mut ending: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, &len) in lengths.iter().enumerate() {
        let start = (c + 1 - len) / 2;
        let end = (c + len).div_ceil(2);
        if start > 0 && end < n {
            ending[end].push(c);
        }
    }
    let mut text: Vec<u32> = Vec::with_capacity(n);
    let mut sigma = 0u32;
    // center and exclusive character end of the rightmost-reaching
    // palindrome among centers below 2i
    let mut best = (0usize, 0usize);
    let mut forbidden: Vec<bool> = Vec::new();
    for i in 0..n {
        if i > 0 {
            for c in [2 * i - 2, 2 * i - 1] {
                let end = (c + lengths[c]).div_ceil(2);
                if end > best.1 {
                    best = (c, end);
                }
            }
        }
        let symbol = if best.1 > i {
            text[best.0 - i]
        } else {
            forbidden.clear();
            forbidden.resize(sigma as usize + 1, false);
            for &c in &ending[i] {
                forbidden[text[c - i] as usize] = true;
            }
            let s = forbidden.iter().position(|&f| !f).unwrap() as u32;
            sigma = sigma.max(s + 1);
            s
        };
        text.push(symbol);
    }
    let preimage = Preimage {
        text,
        sigma: sigma as usize,
    };
    if manacher(&preimage.text).as_slice() != lengths {
        let got = manacher(&preimage.text);
        let c = (0..lengths.len()).find(|&c| got[c] != lengths[c]).unwrap_or(0);
        return Err(Error::NotAManacherArray(format!(
            "no string has length {} at center {c}",
            lengths[c]
        )));
    }
    Ok(preimage)
}

/// Whether `pals` is the palindrome array of `text`.
pub fn verify_pal_match<T: PartialEq>(text: &[T], pals: &PalArray) -> Result<bool> {
    let expected = if text.is_empty() { 0 } else { 2 * text.len() - 1 };
    if pals.len() != expected {
        return Err(Error::InvalidArgument(format!(
            "array of {} centers does not fit a text of length {}",
            pals.len(),
            text.len()
        )));
    }
    Ok(manacher(text) == *pals)
}

fn is_palindrome<T: PartialEq>(s: &[T]) -> bool {
    s.iter().eq(s.iter().rev())
}

/// `ZP_1 = P_1`, `ZP_k = ZP_(k-1) P_k ZP_(k-1)`.
pub fn zimin_pal<T: Clone + PartialEq>(k: usize, parts: &[Vec<T>]) -> Result<Vec<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if parts.len() != k {
        return Err(Error::InvalidArgument(format!(
            "degree {k} needs {k} parts, got {}",
            parts.len()
        )));
    }
    if let Some(i) = parts.iter().position(|p| !is_palindrome(p)) {
        return Err(Error::InvalidArgument(format!("part {} is not a palindrome", i + 1)));
    }
    let mut word: Vec<T> = Vec::new();
    for part in parts {
        let mut next = Vec::with_capacity(2 * word.len() + part.len());
        next.extend_from_slice(&word);
        next.extend_from_slice(part);
        next.extend_from_slice(&word);
        word = next;
    }
    Ok(word)
}

/// Palindromic Zimin word of degree `k` over the single-letter parts
/// `a, b, c, ...`.
pub fn zimin_letters(k: usize) -> Result<Vec<u8>> {
    if k > 26 {
        return Err(Error::InvalidArgument(format!("degree {k} exceeds 26 letters")));
    }
    let parts: Vec<Vec<u8>> = (0..k).map(|i| vec![b'a' + i as u8]).collect();
    zimin_pal(k, &parts)
}

/// Shortest text length whose palindrome structure forces `k` symbols.
pub fn ipf(k: u32) -> Result<u64> {
    match k {
        0 => Err(Error::InvalidArgument("alphabet size must be at least 1".into())),
        1 => Ok(1),
        _ => 1u64
            .checked_shl(k - 2)
            .filter(|_| k - 2 < 64)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::InvalidArgument(format!("ipf({k}) overflows u64"))),
    }
}

/// Largest `k` such that a palindromic Zimin word of degree `k` (nonempty
/// palindromic parts) ends at character `pos - 1`; 0 when `pos` is 0.
///
/// Such words are palindromes, so an instance of degree `k` ending there is
/// a palindromic suffix of `text[..pos]` with a degree `k - 1` palindromic
/// suffix shorter than half of it.
pub fn zp_prefix_degree<T: PartialEq>(text: &[T], pos: usize) -> Result<usize> {
    if pos > text.len() {
        return Err(Error::OutOfBounds {
            what: "prefix length",
            index: pos,
            limit: text.len(),
        });
    }
    let prefix = &text[..pos];
    if prefix.is_empty() {
        return Ok(0);
    }
    let pals = manacher(prefix);
    let end = pos - 1;
    // palindromic suffix lengths in increasing order
    let suffixes: Vec<usize> = (0..pos)
        .rev()
        .filter(|&s| pals[s + end] >= pos - s)
        .map(|s| pos - s)
        .collect();
    let mut degree = vec![0usize; suffixes.len()];
    // best degree among suffixes[..j], advanced as lengths grow
    let mut j = 0;
    let mut best_below = 0;
    for (i, &len) in suffixes.iter().enumerate() {
        while j < i && 2 * suffixes[j] < len {
            best_below = best_below.max(degree[j]);
            j += 1;
        }
        degree[i] = best_below + 1;
    }
    Ok(degree.into_iter().max().unwrap_or(0))
}

/// Whether no palindrome centered strictly left of `pos` covers it.
pub fn is_palindromically_independent<T: PartialEq>(text: &[T], pos: usize) -> Result<bool> {
    if pos >= text.len() {
        return Err(Error::OutOfBounds {
            what: "position",
            index: pos,
            limit: text.len(),
        });
    }
    let pals = manacher(&text[..=pos]);
    // a palindrome centered before pos covering pos also covers pos when
    // clipped to text[..=pos], where it ends exactly at pos
    Ok((0..2 * pos).all(|c| (c + pals[c]).div_ceil(2) <= pos))
}

/// For every symbol `a` occurring before `pos`, the length of the shortest
/// palindrome `p` with `a p text[pos]` a suffix of `text[..=pos]`, in
/// increasing length order.
pub fn shortest_bridging_pals<T: PartialEq + Clone>(
    text: &[T],
    pos: usize,
) -> Result<Vec<(T, usize)>> {
    if !is_palindromically_independent(text, pos)? {
        return Err(Error::Contract(format!(
            "position {pos} is covered by an earlier-centered palindrome"
        )));
    }
    let pals = manacher(&text[..pos.max(1)]);
    let mut found: Vec<(T, usize)> = Vec::new();
    for s in (1..=pos).rev() {
        let len = pos - s;
        let palindromic = len == 0 || pals[s + pos - 1] >= len;
        let symbol = &text[s - 1];
        if palindromic && !found.iter().any(|(a, _)| a == symbol) {
            found.push((symbol.clone(), len));
        }
    }
    Ok(found)
}
