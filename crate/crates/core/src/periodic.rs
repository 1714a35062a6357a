//! Periodic palindromes, their runs and the descriptors that determine every
//! centric palindrome length in constant time.
//!
//! A palindrome `P` of length `L` at center `c` whose longest proper
//! palindromic suffix sits at center `c' > c` has minimal period `c' - c`.
//! `P` is periodic when that period is at most `L / 2`. Extending `P` with
//! its period gives a run; the run is symmetric about every `p`-th augmented
//! center starting from one in `[start, start + p)`. Those are the centric
//! centers. The palindrome at a centric center reaches the nearer run end
//! and stops there, unless both ends are equally far.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::pals::PalArray;

/// Palindromic period descriptor of a run `(q0 q1)^reps q0 x`, where `x` is
/// the overhang of `ext_right < q0_len + q1_len` characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ppd {
    /// Augmented index of the run's first character (twice its position).
    pub start: usize,
    pub q0_len: usize,
    pub q1_len: usize,
    pub reps: usize,
    /// Characters by which the palindrome at the middle of the run extends
    /// past each run end; nonzero only when `ext_right` is 0.
    pub ext_left: usize,
    /// Characters of the run past `(q0 q1)^reps q0`.
    pub ext_right: usize,
}

impl Ppd {
    pub fn period(&self) -> usize {
        self.q0_len + self.q1_len
    }

    /// Length of `(q0 q1)^reps q0`.
    pub fn core_len(&self) -> usize {
        self.reps * self.period() + self.q0_len
    }

    pub fn run_len(&self) -> usize {
        self.core_len() + self.ext_right
    }

    /// First character of the run.
    pub fn run_start_char(&self) -> usize {
        self.start / 2
    }

    /// Augmented index of the last character of the run.
    pub fn run_end(&self) -> usize {
        self.start + 2 * (self.run_len() - 1)
    }

    fn core_end(&self) -> usize {
        self.start + 2 * (self.core_len() - 1)
    }

    /// Center of the first `q0`.
    pub fn first_center(&self) -> usize {
        self.start + self.q0_len - 1
    }

    pub fn is_centric(&self, c: usize) -> bool {
        let first = self.first_center();
        c >= first && c <= self.run_end() && (c - first).is_multiple_of(self.period())
    }
}

/// Smallest period of `text[lo..=hi]`, from its border array.
pub fn minimal_period<T: PartialEq>(text: &[T], lo: usize, hi: usize) -> Result<usize> {
    if lo > hi || hi >= text.len() {
        return Err(Error::OutOfBounds {
            what: "substring end",
            index: hi,
            limit: text.len(),
        });
    }
    let s = &text[lo..=hi];
    let mut border = vec![0usize; s.len()];
    for i in 1..s.len() {
        let mut k = border[i - 1];
        while k > 0 && s[i] != s[k] {
            k = border[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        border[i] = k;
    }
    Ok(s.len() - border[s.len() - 1])
}

fn is_palindrome<T: PartialEq>(s: &[T]) -> bool {
    s.iter().eq(s.iter().rev())
}

/// Splits the first `period` characters of `text[lo..=hi]` into the
/// shortest palindrome `q0` followed by a palindrome `q1` (possibly empty).
pub fn factor_palindromic_period<T: PartialEq>(
    text: &[T],
    lo: usize,
    hi: usize,
    period: usize,
) -> Result<(usize, usize)> {
    if lo > hi || hi >= text.len() {
        return Err(Error::OutOfBounds {
            what: "span end",
            index: hi,
            limit: text.len(),
        });
    }
    if period == 0 || period > hi - lo + 1 {
        return Err(Error::InvalidArgument(format!(
            "period {period} does not fit a span of {}",
            hi - lo + 1
        )));
    }
    let factor = &text[lo..lo + period];
    (1..=period)
        .find(|&q0| is_palindrome(&factor[..q0]) && is_palindrome(&factor[q0..]))
        .map(|q0| (q0, period - q0))
        .ok_or_else(|| {
            Error::Contract(format!(
                "period {period} of span {lo}..={hi} has no palindromic factorization"
            ))
        })
}

/// Maximum tree over `c + pals[c]` answering "first center in a range
/// reaching at least `x`".
struct ReachTree {
    size: usize,
    tree: Vec<usize>,
}

impl ReachTree {
    fn new(pals: &PalArray) -> Self {
        let size = pals.len().next_power_of_two().max(1);
        let mut tree = vec![0usize; 2 * size];
        for (c, &len) in pals.as_slice().iter().enumerate() {
            tree[size + c] = c + len;
        }
        for i in (1..size).rev() {
            tree[i] = tree[2 * i].max(tree[2 * i + 1]);
        }
        Self { size, tree }
    }

    /// Smallest index in `lo..=hi` whose value is at least `x`.
    fn first_at_least(&self, lo: usize, hi: usize, x: usize) -> Option<usize> {
        self.descend(1, 0, self.size - 1, lo, hi, x)
    }

    fn descend(&self, node: usize, nl: usize, nr: usize, lo: usize, hi: usize, x: usize) -> Option<usize> {
        if nr < lo || nl > hi || self.tree[node] < x {
            return None;
        }
        if nl == nr {
            return Some(nl);
        }
        let mid = (nl + nr) / 2;
        self.descend(2 * node, nl, mid, lo, hi, x)
            .or_else(|| self.descend(2 * node + 1, mid + 1, nr, lo, hi, x))
    }
}

/// Minimal period of the maximal palindrome at every center, when it is at
/// most half the palindrome's length.
pub fn palindrome_periods(pals: &PalArray) -> Vec<Option<usize>> {
    let tree = ReachTree::new(pals);
    pals.as_slice()
        .iter()
        .enumerate()
        .map(|(c, &len)| {
            if len < 2 {
                return None;
            }
            tree.first_at_least(c + 1, c + len / 2, c + len).map(|next| next - c)
        })
        .collect()
}

/// Descriptor of the run `text[rs..=re]` of period `period`, which is
/// symmetric about augmented center `c`.
fn describe_run(
    pals: &PalArray,
    rs: usize,
    re: usize,
    period: usize,
    c: usize,
) -> Ppd {
    let start = 2 * rs;
    let run_len = re - rs + 1;
    let q0_len = (c - start) % period + 1;
    let reps = (run_len - q0_len) / period;
    let core_len = reps * period + q0_len;
    let ext_right = run_len - core_len;
    let ext_left = if ext_right == 0 {
        let middle = start + run_len - 1;
        (pals[middle] - run_len) / 2
    } else {
        0
    };
    Ppd {
        start,
        q0_len,
        q1_len: period - q0_len,
        reps,
        ext_left,
        ext_right,
    }
}

/// One descriptor per run of every periodic maximal palindrome, ordered by
/// start and then period.
pub fn detect_ppds<T: PartialEq>(text: &[T], pals: &PalArray) -> Vec<Ppd> {
    let periods = palindrome_periods(pals);
    // per period, the last run found: its character bounds
    let mut last_run: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut out = Vec::new();
    for (c, period) in periods.into_iter().enumerate() {
        let Some(p) = period else { continue };
        let len = pals[c];
        let lo = (c + 1 - len) / 2;
        let hi = (c + len - 1) / 2;
        if let Some(&(rs, re)) = last_run.get(&p) {
            if rs <= lo && hi <= re {
                continue;
            }
        }
        let mut rs = lo;
        while rs > 0 && text[rs - 1] == text[rs - 1 + p] {
            rs -= 1;
        }
        let mut re = hi;
        while re + 1 < text.len() && text[re + 1] == text[re + 1 - p] {
            re += 1;
        }
        last_run.insert(p, (rs, re));
        if seen.insert((rs, p)) {
            out.push(describe_run(pals, rs, re, p, c));
        }
    }
    out.sort_unstable_by_key(|d| (d.start, d.period()));
    out
}

/// Every centric center of the run, increasing.
pub fn centric_centers(ppd: &Ppd) -> Vec<usize> {
    (ppd.first_center()..=ppd.run_end())
        .step_by(ppd.period())
        .collect()
}

/// Length of the maximal palindrome at the centric center `c`, from the
/// descriptor alone.
pub fn ppd_radius(ppd: &Ppd, c: usize) -> Result<usize> {
    if !ppd.is_centric(c) {
        return Err(Error::Contract(format!(
            "center {c} is not centric for the run starting at {}",
            ppd.start
        )));
    }
    Ok(radius_unchecked(ppd, c))
}

pub(crate) fn radius_unchecked(ppd: &Ppd, c: usize) -> usize {
    let a = c - ppd.start;
    let core_end = ppd.core_end();
    if c > core_end {
        // inside the overhang: the right run end is nearer
        return ppd.run_end() - c + 1;
    }
    let b = core_end - c;
    match a.cmp(&b) {
        std::cmp::Ordering::Greater => b + 2 * ppd.ext_right + 1,
        std::cmp::Ordering::Less => a + 1,
        std::cmp::Ordering::Equal => a + 1 + 2 * ppd.ext_left,
    }
}
