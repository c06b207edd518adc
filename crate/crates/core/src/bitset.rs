//! Small fixed-width sets.
//!
//! [`ElemSet`] is a 64-bit membership vector used for subsets of monoid
//! elements, M-set carriers and spectrum points. [`BitSet`] is a growable
//! word vector used for families indexed by the canonical ideal list.

use std::cmp::Ordering;
use std::fmt;

/// Largest universe an [`ElemSet`] can index.
pub const MAX_UNIVERSE: usize = 64;

/// A subset of `0..64`, stored as a membership vector.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The full set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_UNIVERSE);
        if n == MAX_UNIVERSE {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(x: usize) -> Self {
        ElemSet(1u64 << x)
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        x < MAX_UNIVERSE && self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1u64 << x);
    }

    #[inline]
    pub fn with(self, x: usize) -> Self {
        ElemSet(self.0 | 1u64 << x)
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ElemSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        ElemSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        ElemSet(self.0 & !other.0)
    }

    /// Complement inside `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        ElemSet(!self.0 & Self::full(n).0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> ElemIter {
        ElemIter(self.0)
    }

    /// Canonical order: cardinality first, then the membership vector
    /// `(b_0, b_1, ..)` compared lexicographically.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.reverse_bits().cmp(&other.0.reverse_bits()))
    }

    /// Every subset of `{0, .., n-1}`, in increasing bit-pattern order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = ElemSet> {
        assert!(n < MAX_UNIVERSE, "subset scan over {n} elements");
        (0..1u64 << n).map(ElemSet)
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct ElemIter(u64);

impl Iterator for ElemIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ElemIter {}

/// A set of indices of unbounded width.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Width of the universe, not the number of members.
    #[inline]
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        debug_assert_eq!(self.len, other.len);
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(), len: self.len }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        debug_assert_eq!(self.len, other.len);
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(), len: self.len }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| ElemIter(bits).map(move |b| w * 64 + b))
    }

    /// Same convention as [`ElemSet::canonical_cmp`].
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.count().cmp(&other.count()).then_with(|| {
            for i in 0..self.len.max(other.len) {
                match (self.contains(i), other.contains(i)) {
                    (true, false) => return Ordering::Greater,
                    (false, true) => return Ordering::Less,
                    _ => {}
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_cardinality_then_lex() {
        let a: ElemSet = [2].into_iter().collect();
        let b: ElemSet = [0].into_iter().collect();
        let c: ElemSet = [0, 1].into_iter().collect();
        // [0,0,1] < [1,0,0] lexicographically
        assert_eq!(a.canonical_cmp(&b), Ordering::Less);
        assert_eq!(b.canonical_cmp(&c), Ordering::Less);
        assert_eq!(ElemSet::EMPTY.canonical_cmp(&a), Ordering::Less);
    }

    #[test]
    fn bitset_matches_elemset_order() {
        for x in ElemSet::all_subsets(5) {
            for y in ElemSet::all_subsets(5) {
                let bx = BitSet::from_indices(5, x.iter());
                let by = BitSet::from_indices(5, y.iter());
                assert_eq!(x.canonical_cmp(&y), bx.canonical_cmp(&by));
                assert_eq!(x.is_subset(y), bx.is_subset(&by));
            }
        }
    }

    #[test]
    fn iteration_is_ascending() {
        let s: ElemSet = [5, 1, 63, 0].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 1, 5, 63]);
        let b = BitSet::from_indices(130, [129, 3, 64]);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![3, 64, 129]);
    }
}
