//! Fixed-width bit sets.
//!
//! Downsets and C-ideals of a generator semilattice are stored as bit
//! vectors indexed by semilattice position, so intersection, union and
//! subset tests are word operations. The width is owned by whatever
//! structure hands the sets out; mixing widths is a caller bug.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    words: Box<[u64]>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl Bits {
    pub fn empty(len: usize) -> Self {
        Bits {
            words: vec![0; word_count(len)].into_boxed_slice(),
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bits {
            words: vec![!0u64; word_count(len)].into_boxed_slice(),
        };
        let spare = word_count(len) * 64 - len;
        if spare > 0 {
            let last = b.words.len() - 1;
            b.words[last] &= !0u64 >> spare;
        }
        b
    }

    pub fn singleton(len: usize, i: usize) -> Self {
        let mut b = Bits::empty(len);
        b.insert(i);
        b
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, it: I) -> Self {
        let mut b = Bits::empty(len);
        for i in it {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (w, o) in self.words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        for (w, o) in self.words.iter_mut().zip(other.words.iter()) {
            *w &= o;
        }
    }

    pub fn union(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.intersect_with(other);
        r
    }

    #[inline]
    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(w, o)| w & !o == 0)
    }

    /// How many members of `self` are missing from `other`.
    #[inline]
    pub fn count_missing_from(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(w, o)| (w & !o).count_ones() as usize)
            .sum()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_masks_spare_bits() {
        let b = Bits::full(70);
        assert_eq!(b.count(), 70);
        assert!(b.contains(69));
        let e = Bits::empty(70);
        assert!(e.is_subset(&b));
        assert!(!b.is_subset(&e));
    }

    #[test]
    fn iter_roundtrip() {
        let b = Bits::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(b.count(), 4);
    }
}
