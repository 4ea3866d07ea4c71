//! Packed bit sequences.
//!
//! Acceptance data (stems, cycles, membership windows) is stored
//! little-endian by word length: bit `i` answers "is the word of length
//! `i` in?". The windows walked by the oracle and the comparison
//! procedures run into the tens of millions of bits, so the hot paths
//! (repeating a cycle pattern over a window, shifted disjunction for
//! concatenation, periodicity scans) operate on whole `u64` words.

/// A growable, packed sequence of bits.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSeq {
    len: usize,
    words: Vec<u64>,
}

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitSeq {
    /// An all-zero sequence of `len` bits.
    pub fn zeros(len: usize) -> Self {
        BitSeq {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// An all-one sequence of `len` bits.
    pub fn ones(len: usize) -> Self {
        let mut b = BitSeq {
            len,
            words: vec![!0u64; words_for(len)],
        };
        b.clear_tail();
        b
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut b = BitSeq::zeros(bits.len());
        for (i, &v) in bits.iter().enumerate() {
            if v {
                b.set(i, true);
            }
        }
        b
    }

    /// Parses a `0`/`1` string, index 0 first.
    pub fn from_str01(s: &str) -> Option<Self> {
        let mut b = BitSeq::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.set(i, true),
                _ => return None,
            }
        }
        Some(b)
    }

    pub fn to_string01(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if v {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, v: bool) {
        if self.len % WORD == 0 {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, v);
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << r) - 1;
            }
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn all_ones(&self) -> bool {
        self.first_zero().is_none()
    }

    pub fn all_zeros(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_zero(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != !0u64 {
                let i = k * WORD + (!w).trailing_zeros() as usize;
                if i < self.len {
                    return Some(i);
                }
                // zeros in the tail padding only
                return None;
            }
        }
        None
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                let i = k * WORD + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
        }
        None
    }

    pub fn last_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(k * WORD + (WORD - 1 - w.leading_zeros() as usize));
            }
        }
        None
    }

    /// Iterator over the indices of set bits.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(move |(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let i = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + i)
            })
        })
    }

    /// 64 bits starting at bit offset `off`; zero-padded past the end.
    #[inline]
    pub fn read_word(&self, off: usize) -> u64 {
        let k = off / WORD;
        let r = off % WORD;
        let lo = self.words.get(k).copied().unwrap_or(0);
        if r == 0 {
            lo
        } else {
            let hi = self.words.get(k + 1).copied().unwrap_or(0);
            lo >> r | hi << (WORD - r)
        }
    }

    /// `self |= other` (lengths must match).
    pub fn or_assign(&mut self, other: &BitSeq) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self &= other` (lengths must match).
    pub fn and_assign(&mut self, other: &BitSeq) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Flips every bit.
    pub fn not_in_place(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.clear_tail();
    }

    /// `self[i + shift] |= src[i]` for all in-range `i`.
    pub fn or_assign_shifted(&mut self, src: &BitSeq, shift: usize) {
        if shift >= self.len {
            return;
        }
        let k0 = shift / WORD;
        let r = shift % WORD;
        if r == 0 {
            for (k, &w) in src.words.iter().enumerate() {
                if k0 + k >= self.words.len() {
                    break;
                }
                self.words[k0 + k] |= w;
            }
        } else {
            let mut carry = 0u64;
            for (k, &w) in src.words.iter().enumerate() {
                if k0 + k >= self.words.len() {
                    break;
                }
                self.words[k0 + k] |= w << r | carry;
                carry = w >> (WORD - r);
            }
            if k0 + src.words.len() < self.words.len() {
                self.words[k0 + src.words.len()] |= carry;
            }
        }
        self.clear_tail();
    }

    /// `self[i] |= pattern[(i + phase) mod pattern.len()]` for all `i`.
    ///
    /// Stamps a circular tile of `lcm(pattern.len(), 64)` bits so the fill
    /// runs word-at-a-time over large windows.
    pub fn or_assign_repeat(&mut self, pattern: &BitSeq, phase: usize) {
        let p = pattern.len();
        assert!(p > 0);
        if pattern.all_zeros() {
            return;
        }
        // Tile of p words = 64*p bits holds every alignment of the pattern.
        let mut tile = vec![0u64; p];
        for j in pattern.iter_ones() {
            let mut i = j;
            while i < p * WORD {
                tile[i / WORD] |= 1u64 << (i % WORD);
                i += p;
            }
        }
        let tile_bits = p * WORD;
        let read_tile = |off: usize| -> u64 {
            let k = off / WORD;
            let r = off % WORD;
            if r == 0 {
                tile[k]
            } else {
                tile[k] >> r | tile[(k + 1) % p] << (WORD - r)
            }
        };
        let phase = phase % p;
        for k in 0..self.words.len() {
            let off = (k * WORD + phase) % tile_bits;
            self.words[k] |= read_tile(off);
        }
        self.clear_tail();
    }

    /// First position `>= from` where `self[i] != self[i + p]`
    /// (with `i + p < len`), or `None` when `p` is a period on the window.
    pub fn mismatch_at_shift(&self, p: usize, from: usize) -> Option<usize> {
        if from + p >= self.len {
            return None;
        }
        let end = self.len - p;
        let mut i = from;
        while i < end {
            let d = self.read_word(i) ^ self.read_word(i + p);
            let take = (end - i).min(WORD);
            let d = if take == WORD { d } else { d & ((1u64 << take) - 1) };
            if d != 0 {
                return Some(i + d.trailing_zeros() as usize);
            }
            i += take;
        }
        None
    }

    /// First index where `self` has a 1 and `other` a 0 (lengths equal).
    pub fn first_and_not(&self, other: &BitSeq) -> Option<usize> {
        assert_eq!(self.len, other.len);
        for (k, (&a, &b)) in self.words.iter().zip(&other.words).enumerate() {
            let d = a & !b;
            if d != 0 {
                let i = k * WORD + d.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
        }
        None
    }

    /// First index where the two sequences differ (lengths equal).
    pub fn first_diff(&self, other: &BitSeq) -> Option<usize> {
        assert_eq!(self.len, other.len);
        for (k, (&a, &b)) in self.words.iter().zip(&other.words).enumerate() {
            let d = a ^ b;
            if d != 0 {
                let i = k * WORD + d.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
        }
        None
    }

    /// Last position `>= from` where `self[i] != self[i + p]`
    /// (with `i + p < len`), or `None` when `p` is a period on the window.
    pub fn last_mismatch_at_shift(&self, p: usize, from: usize) -> Option<usize> {
        if from + p >= self.len {
            return None;
        }
        let end = self.len - p;
        let mut i = end;
        while i > from {
            let take = (i - from).min(WORD);
            let lo = i - take;
            let d = self.read_word(lo) ^ self.read_word(lo + p);
            let d = if take == WORD { d } else { d & ((1u64 << take) - 1) };
            if d != 0 {
                return Some(lo + (WORD - 1 - d.leading_zeros() as usize));
            }
            i = lo;
        }
        None
    }

    /// Bits `[start, start + n)` as a new sequence.
    pub fn slice(&self, start: usize, n: usize) -> BitSeq {
        assert!(start + n <= self.len);
        let mut out = BitSeq::zeros(n);
        let mut i = 0;
        while i < n {
            let w = self.read_word(start + i);
            let take = (n - i).min(WORD);
            out.words[i / WORD] = if take == WORD { w } else { w & ((1u64 << take) - 1) };
            i += take;
        }
        out
    }

    /// Left rotation by `k`: `out[i] = self[(i + k) mod len]`.
    pub fn rotate_left(&self, k: usize) -> BitSeq {
        let n = self.len;
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut out = BitSeq::zeros(n);
        for i in self.iter_ones() {
            out.set((i + n - k) % n, true);
        }
        out
    }
}

impl std::fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitSeq({})", self.to_string01())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_basic_ops() {
        let b = BitSeq::from_str01("10110").unwrap();
        assert_eq!(b.to_string01(), "10110");
        assert_eq!(b.count_ones(), 3);
        assert_eq!(b.first_zero(), Some(1));
        assert_eq!(b.first_one(), Some(0));
        assert_eq!(b.last_one(), Some(3));
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![0, 2, 3]);
    }

    #[test]
    fn ones_respects_tail() {
        let b = BitSeq::ones(70);
        assert!(b.all_ones());
        assert_eq!(b.count_ones(), 70);
    }

    #[test]
    fn repeat_stamp_matches_naive() {
        let pat = BitSeq::from_str01("10010").unwrap();
        for phase in 0..5 {
            let mut fast = BitSeq::zeros(333);
            fast.or_assign_repeat(&pat, phase);
            let mut slow = BitSeq::zeros(333);
            for i in 0..333 {
                if pat.get((i + phase) % 5) {
                    slow.set(i, true);
                }
            }
            assert_eq!(fast, slow, "phase {phase}");
        }
    }

    #[test]
    fn shifted_or_matches_naive() {
        let src = BitSeq::from_str01("1101").unwrap();
        let mut out = BitSeq::zeros(130);
        out.or_assign_shifted(&src, 65);
        for i in 0..130 {
            assert_eq!(out.get(i), (65..69).contains(&i) && src.get(i - 65));
        }
    }

    #[test]
    fn mismatch_scan() {
        let b = BitSeq::from_str01("1101101101").unwrap();
        assert_eq!(b.mismatch_at_shift(3, 0), None);
        assert_eq!(b.mismatch_at_shift(2, 0), Some(0));
        let c = BitSeq::from_str01("0110110").unwrap();
        assert_eq!(c.mismatch_at_shift(3, 1), None);
    }

    #[test]
    fn rotate_and_slice() {
        let b = BitSeq::from_str01("10010").unwrap();
        assert_eq!(b.rotate_left(2).to_string01(), "01010");
        assert_eq!(b.slice(1, 3).to_string01(), "001");
    }
}
