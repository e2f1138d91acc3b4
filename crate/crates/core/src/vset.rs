//! Dense bitset over vertex labels.
//!
//! A [`VertexSet`] is a growable bitset. Graphs of order at most 64 fit in a
//! single word, which the enumeration engines exploit via [`VertexSet::to_mask`].

use std::cmp::Ordering;
use std::fmt;

const WORD: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    // Trailing zero words are always trimmed so that `Eq` is structural.
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from a single-word mask (labels 0..64).
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self { words: vec![mask] };
        s.trim();
        s
    }

    /// All labels `0..n`.
    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n / WORD];
        if !n.is_multiple_of(WORD) {
            words.push((1u64 << (n % WORD)) - 1);
        }
        let mut s = Self { words };
        s.trim();
        s
    }

    /// Returns the single-word mask if every member is below 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        if w >= self.words.len() {
            return false;
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        self.trim();
        had
    }

    pub fn contains(&self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        w < self.words.len() && self.words[w] >> b & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<usize> {
        let last = self.words.len().checked_sub(1)?;
        Some(last * WORD + (WORD - 1 - self.words[last].leading_zeros() as usize))
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, o) in words.iter_mut().zip(&short.words) {
            *w |= o;
        }
        Self { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        };
        s.trim();
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut words = self.words.clone();
        for (w, o) in words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        let mut s = Self { words };
        s.trim();
        s
    }

    /// Complement relative to the universe `0..n`.
    pub fn complement(&self, n: usize) -> Self {
        Self::full(n).difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Canonical enumeration order: by size, then lexicographically on the
    /// ascending member sequence.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
