use std::cmp::Ordering;
use std::fmt;

use super::SetError;

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A subset of the ground set `[0, n)` stored as a multi-word bit vector.
///
/// Bits at positions `>= n` in the last word are always clear, so word-wise
/// equality, hashing and population counts never see padding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    n: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset { n, words: vec![0; words_for(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Subset { n, words: vec![u64::MAX; words_for(n)] };
        s.clear_padding();
        s
    }

    /// Builds a subset from element indices. Duplicates and out-of-range
    /// elements are rejected.
    pub fn from_elements<I>(n: usize, elements: I) -> Result<Self, SetError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Subset::empty(n);
        for x in elements {
            if x >= n {
                return Err(SetError::ElementOutOfRange { element: x, n });
            }
            if s.contains(x) {
                return Err(SetError::DuplicateElement(x));
            }
            s.insert(x);
        }
        Ok(s)
    }

    /// Builds a subset of a ground set with `n <= 64` from a bit mask.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= WORD, "from_mask needs n <= 64");
        let mut s = Subset::empty(n);
        if n > 0 {
            s.words[0] = mask;
            s.clear_padding();
        }
        s
    }

    fn clear_padding(&mut self) {
        let rem = self.n % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the ground set.
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.n && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        assert!(x < self.n, "element {x} outside ground set of size {}", self.n);
        self.words[x / WORD] |= 1 << (x % WORD);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        if x < self.n {
            self.words[x / WORD] &= !(1 << (x % WORD));
        }
    }

    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest element `>= from`, if any.
    pub fn next_element(&self, from: usize) -> Option<usize> {
        if from >= self.n {
            return None;
        }
        let mut wi = from / WORD;
        let mut w = self.words[wi] & (u64::MAX << (from % WORD));
        loop {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.next_element(0)
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> Elements<'_> {
        Elements { set: self, word: 0, bits: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_same_ground(&self, other: &Subset) {
        assert_eq!(self.n, other.n, "subsets over different ground sets");
    }

    pub fn complement(&self) -> Subset {
        let mut s = Subset { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        s.clear_padding();
        s
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.check_same_ground(other);
        Subset {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.check_same_ground(other);
        Subset {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.check_same_ground(other);
        Subset {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn union_with(&mut self, other: &Subset) {
        self.check_same_ground(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
    }

    pub fn intersect_with(&mut self, other: &Subset) {
        self.check_same_ground(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
    }

    pub fn subtract(&mut self, other: &Subset) {
        self.check_same_ground(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= !b);
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_len(&self, other: &Subset) -> usize {
        self.check_same_ground(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.check_same_ground(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.check_same_ground(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Re-embeds the subset in a ground set of size `n`, shifting every
    /// element by `offset`.
    pub fn shifted(&self, n: usize, offset: usize) -> Result<Subset, SetError> {
        Subset::from_elements(n, self.iter().map(|x| x + offset))
    }
}

/// Ascending iterator over the elements of a [`Subset`].
pub struct Elements<'a> {
    set: &'a Subset,
    word: usize,
    bits: u64,
}

impl Iterator for Elements<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.bits == 0 {
            self.word += 1;
            if self.word >= self.set.words.len() {
                return None;
            }
            self.bits = self.set.words[self.word];
        }
        let tz = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(self.word * WORD + tz)
    }
}

impl<'a> IntoIterator for &'a Subset {
    type Item = usize;
    type IntoIter = Elements<'a>;

    fn into_iter(self) -> Elements<'a> {
        self.iter()
    }
}

// Lexicographic on the ascending element lists, then by ground size.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}/{}", self.n)
    }
}

/// Space-separated element list, the set-line form of the collection format.
impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}
